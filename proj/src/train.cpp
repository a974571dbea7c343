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

#include "qsteal/train.hpp"

#include <cctype>
#include <cmath>

#include "qsteal/losses.hpp"
#include "qsteal/metrics.hpp"

namespace qsteal {

std::string_view name(LossKind k) { return k == LossKind::NllTop1 ? "nll" : "kl"; }

LossKind parse_loss(std::string_view text) {
  std::string s;
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "nll" || s == "nll_top1") return LossKind::NllTop1;
  if (s == "kl" || s == "kl_topk") return LossKind::KlTopK;
  throw Error("unknown loss '" + std::string(text) + "'");
}

void TrainConfig::validate(const std::string& path) const {
  if (epochs < 1) throw ValidationError(path + ".epochs", "must be at least 1");
  if (!(learning_rate > 0) || !std::isfinite(learning_rate))
    throw ValidationError(path + ".learning_rate", "must be positive");
  if (batch_size < 1) throw ValidationError(path + ".batch_size", "must be at least 1");
  if (!(spsa_c > 0) || !std::isfinite(spsa_c)) throw ValidationError(path + ".spsa_c", "must be positive");
  if (!(beta1 >= 0 && beta1 < 1)) throw ValidationError(path + ".beta1", "must lie in [0, 1)");
  if (!(beta2 >= 0 && beta2 < 1)) throw ValidationError(path + ".beta2", "must lie in [0, 1)");
  if (!(epsilon > 0)) throw ValidationError(path + ".epsilon", "must be positive");
}

nlohmann::json to_json(const TrainConfig& c) {
  nlohmann::json j;
  j["epochs"] = c.epochs;
  j["learning_rate"] = c.learning_rate;
  j["batch_size"] = c.batch_size;
  j["beta1"] = c.beta1;
  j["beta2"] = c.beta2;
  j["epsilon"] = c.epsilon;
  j["loss"] = std::string(name(c.loss));
  j["spsa_c"] = c.spsa_c;
  if (c.mode.analytic())
    j["shots"] = "analytic";
  else
    j["shots"] = c.mode.shots;
  return j;
}

MeasurementMode parse_shots(const nlohmann::json& v, const std::string& path) {
  if (v.is_string() && v.get<std::string>() == "analytic") return MeasurementMode::exact();
  if (v.is_number_integer() && v.get<std::int64_t>() > 0) return MeasurementMode::sampled(v.get<std::size_t>());
  throw ValidationError(path, "expected \"analytic\" or a positive shot count");
}

TrainConfig train_config_from_json(const nlohmann::json& j, const std::string& path) {
  TrainConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  auto get_count = [&](const char* key, std::size_t& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer() || j.at(key).get<std::int64_t>() < 0) throw ValidationError(path + "." + key, "must be a non-negative integer");
    out = j.at(key).get<std::size_t>();
  };
  auto get_real = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw ValidationError(path + "." + key, "must be a number");
    out = j.at(key).get<double>();
  };
  get_count("epochs", c.epochs);
  get_real("learning_rate", c.learning_rate);
  get_count("batch_size", c.batch_size);
  get_real("beta1", c.beta1);
  get_real("beta2", c.beta2);
  get_real("epsilon", c.epsilon);
  get_real("spsa_c", c.spsa_c);
  if (j.contains("loss")) {
    try {
      c.loss = parse_loss(j.at("loss").get<std::string>());
    } catch (const std::exception& e) {
      throw ValidationError(path + ".loss", e.what());
    }
  }
  if (j.contains("shots")) c.mode = parse_shots(j.at("shots"), path + ".shots");
  c.validate(path);
  return c;
}

TrainingData TrainingData::hard(const LabeledDataset& ds) {
  TrainingData d;
  d.features = ds.features;
  d.labels = ds.labels;
  d.classes = ds.classes;
  return d;
}

nlohmann::json to_json(const EpochRecord& r) {
  return {{"train_loss", r.train_loss}, {"test_accuracy", r.test_accuracy}, {"test_loss", r.test_loss}};
}

ProfileSchedule::ProfileSchedule(std::vector<std::pair<DeviceProfile, std::size_t>> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw Error("profile schedule is empty");
  for (const auto& [p, n] : segments_) {
    p.validate();
    if (n == 0) throw Error("profile schedule segment has zero epochs");
  }
}

ProfileSchedule ProfileSchedule::single(const DeviceProfile& p, std::size_t epochs) {
  return ProfileSchedule({{p, epochs}});
}

ProfileSchedule ProfileSchedule::mostly(const DeviceProfile& primary, const DeviceProfile& secondary,
                                        std::size_t epochs) {
  if (epochs < 2) throw Error("a two-device schedule needs at least two epochs");
  const std::size_t tail = std::max<std::size_t>(1, epochs / 5);
  return ProfileSchedule({{primary, epochs - tail}, {secondary, tail}});
}

std::size_t ProfileSchedule::total_epochs() const {
  std::size_t n = 0;
  for (const auto& s : segments_) n += s.second;
  return n;
}

const DeviceProfile& ProfileSchedule::at(std::size_t epoch) const {
  if (segments_.empty()) throw Error("profile schedule is empty");
  std::size_t acc = 0;
  for (const auto& [p, n] : segments_) {
    acc += n;
    if (epoch < acc) return p;
  }
  throw Error("profile schedule covers " + std::to_string(acc) + " epochs, epoch " + std::to_string(epoch) +
              " requested");
}

double batch_loss(const HybridModel& m, const TrainingData& data, const std::vector<std::size_t>& idx,
                  LossKind loss, const DeviceProfile& profile, MeasurementMode mode, Rng* rng) {
  double total = 0;
  for (std::size_t i : idx) {
    const auto r = static_cast<Eigen::Index>(i);
    Rng sample_rng = rng ? rng->fork({i}) : Rng(0);
    const Vector probs = forward(m, data.features.row(r).transpose(), profile, mode, rng ? &sample_rng : nullptr);
    total += loss == LossKind::NllTop1 ? loss_nll(probs, data.labels[i]) : loss_kl(probs, data.targets.row(r).transpose());
  }
  return total / static_cast<double>(idx.size());
}

Evaluation evaluate(const HybridModel& m, const LabeledDataset& ds, const DeviceProfile& profile,
                    MeasurementMode mode, std::uint64_t seed) {
  if (ds.size() == 0) throw Error("evaluate: empty dataset");
  Rng base(seed);
  Evaluation e;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    Rng rng = base.fork({i});
    const Vector probs = forward(m, ds.row(i), profile, mode, &rng);
    if (argmax(probs) == ds.labels[i]) ++correct;
    e.loss += loss_nll(probs, ds.labels[i]);
  }
  e.accuracy = static_cast<double>(correct) / static_cast<double>(ds.size());
  e.loss /= static_cast<double>(ds.size());
  return e;
}

TrainResult train(const HybridModel& initial, const TrainingData& data, const LabeledDataset* test,
                  const TrainConfig& cfg, const ProfileSchedule& schedule, std::uint64_t seed,
                  TrainCounters* counters) {
  cfg.validate();
  initial.validate();
  if (data.size() == 0) throw Error("train: empty dataset");
  if (data.features.rows() != static_cast<Eigen::Index>(data.size()) ||
      (!data.soft() && data.labels.size() != data.size()))
    throw Error("train: features and targets disagree in length");
  if (data.soft() && static_cast<std::size_t>(data.targets.cols()) != initial.classes())
    throw Error("train: target width does not match the model's class count");
  if (cfg.loss == LossKind::KlTopK && !data.soft()) throw Error("train: KL loss needs probability targets");
  if (cfg.loss == LossKind::NllTop1 && data.labels.size() != data.size())
    throw Error("train: NLL loss needs hard labels");
  for (auto l : data.labels)
    if (l >= initial.classes()) throw Error("train: label exceeds the model's class count");

  const Rng root(seed);
  const bool shots = !cfg.mode.analytic();
  HybridModel model = initial;
  Vector params = model.flatten();
  AdamState adam = AdamState::zeros(params.size());
  TrainHistory history;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const DeviceProfile& profile = schedule.at(epoch);
    const auto order = shuffled_indices(data.size(), mix_seed(seed, {tag("shuffle"), epoch}));
    double loss_sum = 0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                         order.begin() + static_cast<std::ptrdiff_t>(stop));
      const std::size_t batch = start / cfg.batch_size;
      Rng spsa_rng = root.fork({tag("spsa"), epoch, batch});
      double plus = 0, minus = 0;
      int side = 0;
      auto loss_at = [&](const Vector& p) {
        HybridModel probe = model;
        probe.assign(p);
        Rng shot_rng = root.fork({tag("shots"), epoch, batch, static_cast<std::uint64_t>(side)});
        const double l = batch_loss(probe, data, idx, cfg.loss, profile, cfg.mode, shots ? &shot_rng : nullptr);
        (side++ == 0 ? plus : minus) = l;
        if (counters) counters->training_forwards += idx.size();
        return l;
      };
      const Vector grad = spsa_gradient(loss_at, params, cfg.spsa_c, spsa_rng);
      adam_step(params, grad, adam, cfg.adam());
      model.assign(params);
      loss_sum += 0.5 * (plus + minus);
      ++batches;
    }
    EpochRecord rec;
    rec.train_loss = loss_sum / static_cast<double>(batches);
    if (test != nullptr && test->size() > 0) {
      const Evaluation ev = evaluate(model, *test, profile, cfg.mode, mix_seed(seed, {tag("eval"), epoch}));
      rec.test_accuracy = ev.accuracy;
      rec.test_loss = ev.loss;
      if (counters) counters->evaluation_forwards += test->size();
    }
    if (!std::isfinite(rec.train_loss)) throw Error("train: non-finite loss at epoch " + std::to_string(epoch));
    history.epochs.push_back(rec);
  }
  return {model, history};
}

}  // namespace qsteal
