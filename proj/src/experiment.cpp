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

#include "qsteal/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "qsteal/io.hpp"
#include "qsteal/metrics.hpp"

namespace qsteal {

namespace fs = std::filesystem;

namespace {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(path + "." + key, "has the wrong type");
  }
}

/// A scalar or a list of scalars, as a list.
template <typename T, typename F>
std::vector<T> one_or_many(const nlohmann::json& j, const std::string& path, F&& convert) {
  std::vector<T> out;
  auto one = [&](const nlohmann::json& v, const std::string& at) {
    try {
      out.push_back(convert(v));
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      throw ValidationError(at, e.what());
    }
  };
  if (j.is_array()) {
    if (j.empty()) throw ValidationError(path, "list is empty");
    for (std::size_t i = 0; i < j.size(); ++i) one(j[i], path + "[" + std::to_string(i) + "]");
  } else {
    one(j, path);
  }
  return out;
}

std::string as_string(const nlohmann::json& v) {
  if (!v.is_string()) throw Error("expected a string");
  return v.get<std::string>();
}

std::size_t as_count(const nlohmann::json& v) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw Error("expected a non-negative integer");
  return v.get<std::size_t>();
}

void check_keys(const nlohmann::json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(path + "." + key, "unknown field");
  }
}

std::string seed_dir(std::uint64_t seed) { return "seed-" + std::to_string(seed); }

std::string substitute_seed(std::string pattern, std::uint64_t seed) {
  const std::string key = "{seed}";
  for (auto pos = pattern.find(key); pos != std::string::npos; pos = pattern.find(key))
    pattern.replace(pos, key.size(), std::to_string(seed));
  return pattern;
}

PqcTemplate pqc_from_json(const nlohmann::json& j, const std::string& path, PqcTemplate fallback) {
  PqcTemplate t = fallback;
  if (j.contains("template")) {
    try {
      t.id = parse_template(as_string(j.at("template")));
    } catch (const std::exception& e) {
      throw ValidationError(path + ".template", e.what());
    }
  }
  t.n_qubits = get_or<std::size_t>(j, "qubits", t.n_qubits, path);
  t.layers = get_or<std::size_t>(j, "layers", t.layers, path);
  try {
    t.validate();
  } catch (const std::exception& e) {
    throw ValidationError(path, e.what());
  }
  return t;
}

VictimSpec victim_from_json(const nlohmann::json& j, const std::string& path) {
  VictimSpec v;
  if (j.is_null()) return v;
  check_keys(j, path, {"template", "qubits", "layers", "device", "schedule", "train"});
  v.pqc = pqc_from_json(j, path, v.pqc);
  v.device = get_or<std::string>(j, "device", v.device, path);
  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    if (!s.is_array()) throw ValidationError(path + ".schedule", "expected a list");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string at = path + ".schedule[" + std::to_string(i) + "]";
      check_keys(s[i], at, {"device", "epochs"});
      v.schedule.push_back({get_or<std::string>(s[i], "device", "", at), get_or<std::size_t>(s[i], "epochs", 0, at)});
    }
  }
  if (j.contains("train")) v.train = train_config_from_json(j.at("train"), path + ".train");
  return v;
}

void write_doc(RunContext& run, const std::string& rel, const nlohmann::json& doc) {
  const std::string path = (fs::path(run.out_dir) / rel).string();
  write_json(path, doc);
  run.written.push_back(path);
}

void write_lines(RunContext& run, const std::string& rel, const std::vector<nlohmann::json>& records) {
  std::string text;
  for (const auto& r : records) text += r.dump() + "\n";
  const std::string path = (fs::path(run.out_dir) / rel).string();
  write_atomic(path, text);
  run.written.push_back(path);
}

std::vector<nlohmann::json> read_lines(const std::string& path) {
  std::vector<nlohmann::json> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

AttackContext attack_context(const Task& task, const DeviceRegistry& registry) {
  return AttackContext{task.data.test, task.npd, &registry};
}

}  // namespace

void TaskSpec::validate(const std::string& path) const {
  if (kind != "blobs" && kind != "csv") throw ValidationError(path + ".kind", "expected \"blobs\" or \"csv\"");
  if (dim == 0) throw ValidationError(path + ".dim", "must be positive");
  if (kind == "blobs") {
    if (classes < 2) throw ValidationError(path + ".classes", "need at least two classes");
    if (classes > (dim < 3 ? 3u : 9u))
      throw ValidationError(path + ".classes", "the grid layout holds at most " + std::string(dim < 3 ? "3" : "9") +
                                                   " classes for this dim");
    if (per_class == 0) throw ValidationError(path + ".per_class", "must be positive");
    if (!(separation >= 0)) throw ValidationError(path + ".separation", "must be non-negative");
    if (train >= classes * per_class) throw ValidationError(path + ".train", "leaves no test rows");
  } else if (csv.empty()) {
    throw ValidationError(path + ".csv", "a csv task needs a file");
  }
  if (npd_separations.empty() && npd_csv.empty())
    throw ValidationError(path + ".npd_separations", "mixed queries need at least one source");
  if (npd_per_class == 0) throw ValidationError(path + ".npd_per_class", "must be positive");
}

Task build_task(const TaskSpec& spec, std::uint64_t seed) {
  spec.validate();
  LabeledDataset all;
  if (spec.kind == "blobs") {
    all = make_blobs(spec.classes, spec.dim, spec.per_class, spec.separation, mix_seed(seed, {tag("task")}));
  } else {
    all = scale_features(load_csv(spec.csv, spec.dim));
  }
  Task t;
  const std::uint64_t split_seed = mix_seed(seed, {tag("split")});
  t.data = spec.train == 0 ? split(all, split_seed) : split(all, spec.train, split_seed);
  t.npd = make_npd_sources(all.classes, spec.dim, spec.npd_per_class, spec.npd_separations,
                           mix_seed(seed, {tag("npd-pool")}));
  for (const auto& path : spec.npd_csv) t.npd.push_back(scale_features(load_csv(path, spec.dim)));
  return t;
}

void VictimSpec::validate(const DeviceRegistry& registry, const std::string& path) const {
  pqc.validate();
  train.validate(path + ".train");
  if (train.loss != LossKind::NllTop1) throw ValidationError(path + ".train.loss", "victims train on hard labels");
  if (!registry.contains(device)) throw ValidationError(path + ".device", "unknown device '" + device + "'");
  std::size_t total = 0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const std::string at = path + ".schedule[" + std::to_string(i) + "]";
    if (!registry.contains(schedule[i].device))
      throw ValidationError(at + ".device", "unknown device '" + schedule[i].device + "'");
    if (schedule[i].epochs == 0) throw ValidationError(at + ".epochs", "must be positive");
    total += schedule[i].epochs;
  }
  if (!schedule.empty() && total != train.epochs)
    throw ValidationError(path + ".schedule", "epochs add up to " + std::to_string(total) + ", expected " +
                                                  std::to_string(train.epochs));
}

ProfileSchedule VictimSpec::profile_schedule(const DeviceRegistry& registry) const {
  if (schedule.empty()) return ProfileSchedule::single(registry.get(device), train.epochs);
  std::vector<std::pair<DeviceProfile, std::size_t>> segs;
  for (const auto& s : schedule) segs.emplace_back(registry.get(s.device), s.epochs);
  return ProfileSchedule(std::move(segs));
}

void DefenseSpec::validate(const DeviceRegistry& registry, const std::string& path) const {
  if (queries == 0) throw ValidationError(path + ".queries", "must be positive");
  std::size_t branches = 1;
  if (kind == DefenseKind::HVIP) {
    if (devices.size() < 2) throw ValidationError(path + ".devices", "HVIP needs at least two devices");
    for (std::size_t i = 0; i < devices.size(); ++i)
      if (!registry.contains(devices[i]))
        throw ValidationError(path + ".devices[" + std::to_string(i) + "]", "unknown device '" + devices[i] + "'");
    branches = devices.size();
  } else if (kind == DefenseKind::HAVIP) {
    if (pairs.size() < 2) throw ValidationError(path + ".pairs", "HAVIP needs at least two pairs");
    for (std::size_t i = 0; i < pairs.size(); ++i)
      pairs[i].validate(registry, path + ".pairs[" + std::to_string(i) + "]");
    branches = pairs.size();
  }
  if (!weights.empty()) {
    if (weights.size() != branches) throw ValidationError(path + ".weights", "one weight per branch required");
    validate_weights(weights, path + ".weights");
  }
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ValidationError("seeds", "at least one seed is required");
  task.validate();
  victim.validate(registry, "victim");
  attack.base.validate("attack");
  for (const auto& cell : attack.cells()) {
    cell.spec.validate("attack");
    if (!registry.contains(cell.spec.clone_device))
      throw ValidationError("attack.clone.device", "unknown device '" + cell.spec.clone_device + "'");
  }
  defense.validate(registry);
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  check_keys(j, "config",
             {"name", "seeds", "shots", "devices", "task", "victim", "victim_checkpoint", "attack", "defense"});
  ExperimentConfig c;
  c.name = get_or<std::string>(j, "name", c.name, "config");
  if (j.contains("seeds")) {
    c.seeds.clear();
    for (auto s : one_or_many<std::size_t>(j.at("seeds"), "seeds", as_count)) c.seeds.push_back(s);
  }
  if (j.contains("shots")) c.mode = parse_shots(j.at("shots"), "shots");
  if (j.contains("devices")) {
    const auto& list = j.at("devices");
    if (!list.is_array()) throw ValidationError("devices", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = "devices[" + std::to_string(i) + "]";
      DeviceProfile p = profile_from_json(list[i], at);
      if (c.registry.contains(p.name)) throw ValidationError(at + ".name", "duplicate device '" + p.name + "'");
      c.registry.add(std::move(p));
    }
  }

  if (j.contains("task")) {
    const auto& t = j.at("task");
    check_keys(t, "task",
               {"kind", "classes", "dim", "per_class", "separation", "train", "csv", "npd_separations",
                "npd_per_class", "npd_csv"});
    c.task.kind = get_or<std::string>(t, "kind", c.task.kind, "task");
    c.task.classes = get_or<std::size_t>(t, "classes", c.task.classes, "task");
    c.task.dim = get_or<std::size_t>(t, "dim", c.task.dim, "task");
    c.task.per_class = get_or<std::size_t>(t, "per_class", c.task.per_class, "task");
    c.task.separation = get_or<double>(t, "separation", c.task.separation, "task");
    c.task.train = get_or<std::size_t>(t, "train", c.task.train, "task");
    c.task.csv = get_or<std::string>(t, "csv", c.task.csv, "task");
    c.task.npd_separations = get_or<std::vector<double>>(t, "npd_separations", c.task.npd_separations, "task");
    c.task.npd_per_class = get_or<std::size_t>(t, "npd_per_class", c.task.npd_per_class, "task");
    c.task.npd_csv = get_or<std::vector<std::string>>(t, "npd_csv", c.task.npd_csv, "task");
  }

  if (j.contains("victim")) c.victim = victim_from_json(j.at("victim"), "victim");
  c.victim_checkpoint = get_or<std::string>(j, "victim_checkpoint", "", "config");

  if (j.contains("attack")) {
    const auto& a = j.at("attack");
    check_keys(a, "attack", {"queries", "mode", "query_kind", "clone", "train"});
    auto& s = c.attack;
    if (a.contains("train")) s.base.train = train_config_from_json(a.at("train"), "attack.train");
    if (a.contains("queries")) s.queries = one_or_many<std::size_t>(a.at("queries"), "attack.queries", as_count);
    if (a.contains("mode"))
      s.modes = one_or_many<ResponseMode>(a.at("mode"), "attack.mode",
                                          [](const nlohmann::json& v) { return parse_response_mode(as_string(v)); });
    if (a.contains("query_kind"))
      s.query_kinds = one_or_many<QueryKind>(a.at("query_kind"), "attack.query_kind",
                                             [](const nlohmann::json& v) { return parse_query_kind(as_string(v)); });
    if (a.contains("clone")) {
      const auto& cl = a.at("clone");
      check_keys(cl, "attack.clone", {"template", "qubits", "layers", "device"});
      if (cl.contains("template"))
        s.templates = one_or_many<PqcTemplateId>(cl.at("template"), "attack.clone.template",
                                                 [](const nlohmann::json& v) { return parse_template(as_string(v)); });
      if (cl.contains("qubits")) s.widths = one_or_many<std::size_t>(cl.at("qubits"), "attack.clone.qubits", as_count);
      s.base.clone.layers = get_or<std::size_t>(cl, "layers", s.base.clone.layers, "attack.clone");
      s.base.clone_device = get_or<std::string>(cl, "device", s.base.clone_device, "attack.clone");
    }
    if (!s.queries.empty()) s.base.queries = s.queries.front();
    if (!s.modes.empty()) s.base.mode = s.modes.front();
    if (!s.query_kinds.empty()) s.base.query_kind = s.query_kinds.front();
    if (!s.templates.empty()) s.base.clone.id = s.templates.front();
    if (!s.widths.empty()) s.base.clone.n_qubits = s.widths.front();
    const bool explicit_loss = a.contains("train") && a.at("train").contains("loss");
    if (!explicit_loss) s.base.train.loss = loss_for(s.base.mode);
  } else {
    c.attack.base.train.loss = loss_for(c.attack.base.mode);
  }

  if (j.contains("defense")) {
    const auto& d = j.at("defense");
    check_keys(d, "defense", {"policy", "devices", "pairs", "weights", "queries"});
    try {
      c.defense.kind = parse_defense(get_or<std::string>(d, "policy", "none", "defense"));
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      throw ValidationError("defense.policy", e.what());
    }
    c.defense.devices = get_or<std::vector<std::string>>(d, "devices", c.defense.devices, "defense");
    c.defense.weights = get_or<std::vector<double>>(d, "weights", {}, "defense");
    c.defense.queries = get_or<std::size_t>(d, "queries", c.defense.queries, "defense");
    if (d.contains("pairs")) {
      const auto& list = d.at("pairs");
      if (!list.is_array()) throw ValidationError("defense.pairs", "expected a list");
      for (std::size_t i = 0; i < list.size(); ++i) {
        VictimSpec v = victim_from_json(list[i], "defense.pairs[" + std::to_string(i) + "]");
        if (!list[i].contains("train")) v.train = c.victim.train;
        c.defense.pairs.push_back(std::move(v));
      }
    }
  }

  // One measurement mode for the whole experiment.
  c.victim.train.mode = c.mode;
  c.attack.base.train.mode = c.mode;
  for (auto& p : c.defense.pairs) p.train.mode = c.mode;
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

void RunContext::note(const std::string& line) const {
  if (log != nullptr) *log << "[qsteal] " << line << '\n';
}

TrainResult train_victim(const VictimSpec& spec, const Task& task, const DeviceRegistry& registry,
                         std::uint64_t seed) {
  const HybridModel init =
      HybridModel::init(spec.pqc, task.data.train.classes, mix_seed(seed, {tag("victim-init")}));
  return train(init, TrainingData::hard(task.data.train), &task.data.test, spec.train,
               spec.profile_schedule(registry), mix_seed(seed, {tag("victim-train")}));
}

DefensePolicy build_policy(const DefenseSpec& spec, const VictimSpec& victim, const Task& task,
                           const DeviceRegistry& registry, std::uint64_t seed) {
  switch (spec.kind) {
    case DefenseKind::None:
      return DefensePolicy::none(train_victim(victim, task, registry, seed).model, registry.get(victim.device));
    case DefenseKind::HVIP: {
      VictimSpec v = victim;
      if (v.schedule.empty()) {
        const auto s = ProfileSchedule::mostly(registry.get(spec.devices[0]), registry.get(spec.devices[1]),
                                               v.train.epochs);
        for (const auto& [p, n] : s.segments()) v.schedule.push_back({p.name, n});
      }
      const HybridModel m = train_victim(v, task, registry, seed).model;
      std::vector<DeviceProfile> devices;
      for (const auto& d : spec.devices) devices.push_back(registry.get(d));
      return DefensePolicy::hvip(m, devices, spec.weights);
    }
    case DefenseKind::HAVIP: {
      std::vector<ServedModel> pairs;
      for (std::size_t i = 0; i < spec.pairs.size(); ++i)
        pairs.push_back({train_victim(spec.pairs[i], task, registry, mix_seed(seed, {tag("havip"), i})).model,
                         registry.get(spec.pairs[i].device)});
      return DefensePolicy::havip(pairs, spec.weights);
    }
  }
  throw Error("unknown defense policy");
}

void cmd_train_victim(const ExperimentConfig& cfg, RunContext& run) {
  for (auto seed : cfg.seeds) {
    run.note("train-victim seed " + std::to_string(seed));
    const Task task = build_task(cfg.task, seed);
    const TrainResult r = train_victim(cfg.victim, task, cfg.registry, seed);
    const std::string ckpt = (fs::path(run.out_dir) / "victim" / (seed_dir(seed) + ".json")).string();
    save_checkpoint(r.model, ckpt);
    run.written.push_back(ckpt);
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& e : r.history.epochs) hist.push_back(to_json(e));
    const double acc =
        accuracy(r.model, task.data.test, cfg.registry.get(cfg.victim.device), cfg.mode, mix_seed(seed, {tag("score")}));
    write_doc(run, "victim/" + seed_dir(seed) + ".history.json",
              {{"seed", seed}, {"device", cfg.victim.device}, {"test_accuracy", acc}, {"epochs", hist}});
    run.note("  test accuracy " + std::to_string(acc));
  }
}

void cmd_attack(const ExperimentConfig& cfg, RunContext& run) {
  std::vector<nlohmann::json> records;
  for (auto seed : cfg.seeds) {
    const Task task = build_task(cfg.task, seed);
    const std::string ckpt =
        cfg.victim_checkpoint.empty()
            ? (fs::path(run.out_dir) / "victim" / (seed_dir(seed) + ".json")).string()
            : substitute_seed(cfg.victim_checkpoint, seed);
    if (!fs::exists(ckpt)) throw Error("victim checkpoint '" + ckpt + "' not found; run train-victim first");
    const HybridModel victim = load_checkpoint(ckpt);
    if (victim.classes() != task.data.train.classes)
      throw Error("victim checkpoint '" + ckpt + "' has " + std::to_string(victim.classes()) +
                  " classes but the task has " + std::to_string(task.data.train.classes));
    const DefensePolicy policy = DefensePolicy::none(victim, cfg.registry.get(cfg.victim.device));
    const AttackContext ctx = attack_context(task, cfg.registry);
    const MeasurementMode mode = cfg.mode;
    VictimFactory factory = [&](std::uint64_t cell_seed) {
      DefendedService scorer(policy, mode, mix_seed(cell_seed, {tag("score")}));
      const double acc = service_accuracy(scorer, task.data.test);
      std::unique_ptr<VictimService> svc =
          std::make_unique<DefendedService>(policy, mode, mix_seed(cell_seed, {tag("serve")}));
      return std::make_pair(std::move(svc), acc);
    };
    run.note("attack seed " + std::to_string(seed) + ": " + std::to_string(cfg.attack.cells().size()) + " cell(s)");
    for (const auto& r : run_attack_suite(cfg.attack, factory, ctx, seed)) {
      nlohmann::json doc = to_json(r);
      write_doc(run, "attack/" + r.cell + "/" + seed_dir(seed) + ".json", doc);
      records.push_back(doc);
      run.note("  " + r.cell + (r.ok() ? " clone " + std::to_string(r.clone_accuracy) : " failed: " + *r.error));
    }
  }
  write_lines(run, "attack/reports.jsonl", records);
}

void cmd_defend_eval(const ExperimentConfig& cfg, RunContext& run) {
  std::vector<nlohmann::json> records;
  for (auto seed : cfg.seeds) {
    run.note("defend-eval seed " + std::to_string(seed) + " policy " + std::string(name(cfg.defense.kind)));
    const Task task = build_task(cfg.task, seed);
    const DefensePolicy policy = build_policy(cfg.defense, cfg.victim, task, cfg.registry, seed);
    const AttackContext ctx = attack_context(task, cfg.registry);
    AttackSpec probe = cfg.attack.base;
    probe.queries = cfg.defense.queries;
    const QuerySet qs = build_query_set(probe, ctx, mix_seed(seed, {tag("obfuscation")}));
    const ObfuscationReport ob = measure_obfuscation(policy, qs, cfg.mode, seed);
    const DefendedAttackResult pair = evaluate_defended_attack(policy, cfg.attack.base, ctx, cfg.mode, seed);
    nlohmann::json doc = {{"seed", seed},
                          {"policy", std::string(name(cfg.defense.kind))},
                          {"obfuscation", to_json(ob)},
                          {"attack", to_json(pair)}};
    write_doc(run, "defense/" + seed_dir(seed) + ".json", doc);
    doc["obfuscation"].erase("per_query_tvd");
    records.push_back(doc);
    run.note("  mean tvd " + std::to_string(ob.mean_tvd) + ", clone gap " + std::to_string(pair.gap));
  }
  write_lines(run, "defense/reports.jsonl", records);
}

void cmd_report(const ExperimentConfig& cfg, RunContext& run) {
  const fs::path out(run.out_dir);
  nlohmann::json report = {{"name", cfg.name}};

  nlohmann::json victims = nlohmann::json::array();
  for (auto seed : cfg.seeds) {
    const auto p = out / "victim" / (seed_dir(seed) + ".history.json");
    if (!fs::exists(p)) continue;
    const auto h = read_json(p.string());
    victims.push_back({{"seed", seed}, {"test_accuracy", h.at("test_accuracy")}});
  }
  if (!victims.empty()) report["victims"] = victims;

  const auto attack_path = out / "attack" / "reports.jsonl";
  if (fs::exists(attack_path)) {
    struct Acc {
      double victim = 0, clone = 0, ratio = 0;
      std::size_t n = 0, failed = 0;
    };
    std::map<std::string, Acc> cells;
    for (const auto& j : read_lines(attack_path.string())) {
      const AttackReport r = attack_report_from_json(j);
      auto& a = cells[r.cell];
      if (!r.ok()) {
        ++a.failed;
        continue;
      }
      a.victim += r.victim_accuracy;
      a.clone += r.clone_accuracy;
      a.ratio += r.ratio;
      ++a.n;
    }
    nlohmann::json list = nlohmann::json::array();
    for (const auto& [cell, a] : cells) {
      nlohmann::json e = {{"cell", cell}, {"runs", a.n}, {"failed", a.failed}};
      if (a.n > 0) {
        const double n = static_cast<double>(a.n);
        e["victim_accuracy"] = a.victim / n;
        e["clone_accuracy"] = a.clone / n;
        e["ratio"] = a.ratio / n;
      }
      run.note(cell + ": " + (a.n > 0 ? "clone " + std::to_string(a.clone / static_cast<double>(a.n)) : "no runs"));
      list.push_back(e);
    }
    report["attack"] = list;
  }

  const auto defense_path = out / "defense" / "reports.jsonl";
  if (fs::exists(defense_path)) {
    double tvd = 0, mismatch = 0, gap = 0;
    std::size_t n = 0;
    std::string policy;
    for (const auto& j : read_lines(defense_path.string())) {
      policy = j.at("policy").get<std::string>();
      tvd += j.at("obfuscation").at("mean_tvd").get<double>();
      mismatch += j.at("obfuscation").at("top1_mismatch_rate").get<double>();
      gap += j.at("attack").at("gap").get<double>();
      ++n;
    }
    if (n > 0) {
      const double d = static_cast<double>(n);
      report["defense"] = {{"policy", policy},
                           {"runs", n},
                           {"mean_tvd", tvd / d},
                           {"top1_mismatch_rate", mismatch / d},
                           {"clone_gap", gap / d}};
      run.note(policy + ": mean tvd " + std::to_string(tvd / d) + ", clone gap " + std::to_string(gap / d));
    }
  }
  write_doc(run, "report.json", report);
}

}  // namespace qsteal
