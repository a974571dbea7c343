// Copyright 2026 The qsteal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsteal/attack.hpp"

#include <cctype>

#include "qsteal/metrics.hpp"

namespace qsteal {

namespace {

std::string lower(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != '-' && c != '_') s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return s;
}

}  // namespace

std::string_view name(ResponseMode m) { return m == ResponseMode::Top1 ? "top1" : "topk"; }

ResponseMode parse_response_mode(std::string_view text) {
  const std::string s = lower(text);
  if (s == "top1") return ResponseMode::Top1;
  if (s == "topk") return ResponseMode::TopK;
  throw Error("unknown response mode '" + std::string(text) + "'");
}

LossKind loss_for(ResponseMode m) { return m == ResponseMode::Top1 ? LossKind::NllTop1 : LossKind::KlTopK; }

std::string_view name(QueryKind k) { return k == QueryKind::MixedNPD ? "mixed" : "random"; }

QueryKind parse_query_kind(std::string_view text) {
  const std::string s = lower(text);
  if (s == "mixed" || s == "mixednpd") return QueryKind::MixedNPD;
  if (s == "random" || s == "randomuniform") return QueryKind::RandomUniform;
  throw Error("unknown query kind '" + std::string(text) + "'");
}

QueryError::QueryError(std::size_t index, std::size_t attempts, const std::string& cause)
    : Error("query " + std::to_string(index) + " failed after " + std::to_string(attempts) + " attempt(s): " + cause),
      index_(index),
      attempts_(attempts) {}

void AdversarialDataset::validate() const {
  if (size() == 0) throw Error("adversarial dataset is empty");
  if (query_log.size() != size()) throw Error("adversarial dataset: query log length differs from row count");
  if (mode == ResponseMode::Top1) {
    if (labels.size() != size()) throw Error("adversarial dataset: one label per query required");
    for (auto l : labels)
      if (l >= classes) throw Error("adversarial dataset: label out of range");
  } else {
    if (probs.rows() != features.rows() || static_cast<std::size_t>(probs.cols()) != classes)
      throw Error("adversarial dataset: response matrix has the wrong shape");
    for (Eigen::Index r = 0; r < probs.rows(); ++r)
      if (!is_distribution(probs.row(r).transpose()))
        throw Error("adversarial dataset: response " + std::to_string(r) + " is not a distribution");
  }
}

TrainingData AdversarialDataset::training_data() const {
  validate();
  TrainingData d;
  d.features = features;
  d.classes = classes;
  if (mode == ResponseMode::Top1)
    d.labels = labels;
  else
    d.targets = probs;
  return d;
}

AdversarialDataset query_victim(VictimService& service, const QuerySet& qs, ResponseMode mode,
                                std::size_t max_retries) {
  if (qs.size() == 0) throw Error("query_victim: empty query set");
  AdversarialDataset da;
  da.mode = mode;
  da.features = qs.features;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const Vector x = qs.row(i);
    std::optional<VictimResponse> resp;
    std::string cause;
    std::size_t attempts = 0;
    while (!resp && attempts <= max_retries) {
      ++attempts;
      try {
        resp = service.predict(x);
      } catch (const std::exception& e) {
        cause = e.what();
      }
    }
    if (!resp) throw QueryError(i, attempts, cause);
    const auto k = static_cast<std::size_t>(resp->probs.size());
    if (i == 0) {
      da.classes = k;
      if (mode == ResponseMode::TopK) da.probs.resize(static_cast<Eigen::Index>(qs.size()), resp->probs.size());
    } else if (k != da.classes) {
      throw QueryError(i, attempts, "response width changed");
    }
    if (!is_distribution(resp->probs)) throw QueryError(i, attempts, "response is not a probability vector");
    if (mode == ResponseMode::Top1)
      da.labels.push_back(argmax(resp->probs));
    else
      da.probs.row(static_cast<Eigen::Index>(i)) = resp->probs.transpose();
    da.query_log.push_back({i, std::move(resp->log_id)});
  }
  return da;
}

std::string CloneArch::label() const {
  std::string s(name(id));
  s += "-" + std::to_string(n_qubits) + "q";
  if (layers != 1) s += "-L" + std::to_string(layers);
  return s;
}

TrainResult train_clone(const AdversarialDataset& da, const CloneArch& arch, const TrainConfig& cfg,
                        const ProfileSchedule& schedule, std::uint64_t seed, const LabeledDataset* test) {
  if (da.size() == 0) throw Error("train_clone: adversarial dataset is empty");
  if (cfg.loss != loss_for(da.mode))
    throw ValidationError("train.loss", std::string(name(cfg.loss)) + " does not fit " + std::string(name(da.mode)) +
                                            " responses");
  const TrainingData data = da.training_data();
  const HybridModel init = HybridModel::init(arch.pqc(), da.classes, mix_seed(seed, {tag("clone-init")}));
  return train(init, data, test, cfg, schedule, mix_seed(seed, {tag("clone-train")}));
}

void AttackSpec::validate(const std::string& path) const {
  if (queries == 0) throw ValidationError(path + ".queries", "must be positive");
  try {
    clone.pqc().validate();
  } catch (const std::exception& e) {
    throw ValidationError(path + ".clone", e.what());
  }
  train.validate(path + ".train");
  if (train.loss != loss_for(mode))
    throw ValidationError(path + ".train.loss",
                          std::string(name(train.loss)) + " does not fit " + std::string(name(mode)) + " responses");
}

nlohmann::json to_json(const AttackReport& r) {
  nlohmann::json j;
  j["cell"] = r.cell;
  j["mode"] = std::string(name(r.mode));
  j["query_kind"] = std::string(name(r.query_kind));
  j["da_size"] = r.da_size;
  j["clone_arch"] = r.clone_arch;
  j["clone_device"] = r.clone_device;
  j["seeds"] = r.seeds;
  if (r.error) {
    j["error"] = *r.error;
  } else {
    j["victim_accuracy"] = r.victim_accuracy;
    j["clone_accuracy"] = r.clone_accuracy;
    j["ratio"] = r.ratio;
  }
  return j;
}

AttackReport attack_report_from_json(const nlohmann::json& j) {
  AttackReport r;
  r.cell = j.value("cell", "");
  r.mode = parse_response_mode(j.at("mode").get<std::string>());
  r.query_kind = parse_query_kind(j.at("query_kind").get<std::string>());
  r.da_size = j.at("da_size").get<std::size_t>();
  r.clone_arch = j.value("clone_arch", "");
  r.clone_device = j.value("clone_device", "");
  r.seeds = j.value("seeds", std::vector<std::uint64_t>{});
  if (j.contains("error")) {
    r.error = j.at("error").get<std::string>();
  } else {
    r.victim_accuracy = j.at("victim_accuracy").get<double>();
    r.clone_accuracy = j.at("clone_accuracy").get<double>();
    r.ratio = j.at("ratio").get<double>();
  }
  return r;
}

QuerySet build_query_set(const AttackSpec& spec, const AttackContext& ctx, std::uint64_t seed) {
  const std::size_t d = ctx.test.dim();
  if (spec.query_kind == QueryKind::RandomUniform) return random_uniform(spec.queries, d, mix_seed(seed, {tag("random")}));
  if (ctx.npd_sources.empty()) throw Error("mixed query set needs at least one out-of-domain source");
  for (const auto& s : ctx.npd_sources)
    if (s.dim() != d) throw Error("query source '" + s.name + "' does not match the victim input dimension");
  return mixed_npd(ctx.npd_sources, spec.queries, mix_seed(seed, {tag("mixed")}));
}

double service_accuracy(VictimService& service, const LabeledDataset& ds) {
  if (ds.size() == 0) throw Error("service_accuracy: empty dataset");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (argmax(service.predict(ds.row(i)).probs) == ds.labels[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

AttackOutcome run_attack(VictimService& service, double victim_accuracy, const AttackSpec& spec,
                         const AttackContext& ctx, std::uint64_t seed) {
  spec.validate();
  if (ctx.registry == nullptr) throw Error("run_attack: no device registry");
  const DeviceProfile& device = ctx.registry->get(spec.clone_device);
  const QuerySet qs = build_query_set(spec, ctx, seed);
  const AdversarialDataset da = query_victim(service, qs, spec.mode);
  const TrainResult fit =
      train_clone(da, spec.clone, spec.train, ProfileSchedule::single(device, spec.train.epochs), seed);

  AttackReport r;
  r.victim_accuracy = victim_accuracy;
  r.clone_accuracy = accuracy(fit.model, ctx.test, device, spec.train.mode, mix_seed(seed, {tag("clone-eval")}));
  r.ratio = clone_ratio(r.clone_accuracy, victim_accuracy);
  r.mode = spec.mode;
  r.query_kind = spec.query_kind;
  r.da_size = da.size();
  r.clone_arch = spec.clone.label();
  r.clone_device = spec.clone_device;
  r.seeds = {seed};
  return {r, fit.model, fit.history};
}

std::vector<AttackCell> AttackSweep::cells() const {
  auto or_base = [](auto list, auto value) {
    if (list.empty()) list.push_back(value);
    return list;
  };
  const auto qs = or_base(queries, base.queries);
  const auto ts = or_base(templates, base.clone.id);
  const auto ws = or_base(widths, base.clone.n_qubits);
  const auto ks = or_base(query_kinds, base.query_kind);
  const auto ms = or_base(modes, base.mode);
  std::vector<AttackCell> out;
  for (auto m : ms)
    for (auto k : ks)
      for (auto t : ts)
        for (auto w : ws)
          for (auto q : qs) {
            AttackCell c;
            c.spec = base;
            c.spec.mode = m;
            c.spec.train.loss = loss_for(m);
            c.spec.query_kind = k;
            c.spec.clone.id = t;
            c.spec.clone.n_qubits = w;
            c.spec.queries = q;
            c.id = std::string(name(m)) + "_" + std::string(name(k)) + "_" + c.spec.clone.label() + "_M" +
                   std::to_string(q);
            out.push_back(std::move(c));
          }
  return out;
}

std::vector<AttackReport> run_attack_suite(const AttackSweep& sweep, const VictimFactory& victim,
                                           const AttackContext& ctx, std::uint64_t seed) {
  std::vector<AttackReport> reports;
  for (const auto& cell : sweep.cells()) {
    const std::uint64_t cell_seed = mix_seed(seed, {tag(cell.id)});
    try {
      auto [service, victim_acc] = victim(cell_seed);
      AttackReport r = run_attack(*service, victim_acc, cell.spec, ctx, cell_seed).report;
      r.cell = cell.id;
      r.seeds = {seed};
      reports.push_back(std::move(r));
    } catch (const std::exception& e) {
      AttackReport r;
      r.cell = cell.id;
      r.mode = cell.spec.mode;
      r.query_kind = cell.spec.query_kind;
      r.da_size = cell.spec.queries;
      r.clone_arch = cell.spec.clone.label();
      r.clone_device = cell.spec.clone_device;
      r.seeds = {seed};
      r.error = e.what();
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

}  // namespace qsteal
