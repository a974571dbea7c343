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

// Acceptance run on the reference task. Prints one PASS/FAIL line per
// criterion; exits non-zero when a criterion fails that is not listed with
// --known-red.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "qsteal/experiment.hpp"
#include "qsteal/metrics.hpp"
#include "qsteal/optim.hpp"
#include "qsteal/quantum/channels.hpp"
#include "support.hpp"

using namespace qsteal;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

ExperimentConfig config(const std::string& file) {
  return load_config(testing::source_dir() + "/configs/" + file);
}

// --- 1 ---------------------------------------------------------------------

Outcome simulator_properties() {
  Rng rng(2024);
  double worst_trace = 0, worst_herm = 0, min_eig = 1;
  for (int i = 0; i < 200; ++i) {
    const auto check = simulate(testing::random_noisy_circuit(4, 40, rng)).check(1e-10, -1e-9);
    worst_trace = std::max(worst_trace, check.trace_error);
    worst_herm = std::max(worst_herm, check.hermiticity_error);
    min_eig = std::min(min_eig, check.min_eigenvalue);
  }
  double worst_kraus = 0;
  for (int i = 0; i < 50; ++i) {
    const double r = i / 49.0;
    for (const auto& ch : {KrausChannel<double>::bit_flip(r), KrausChannel<double>::phase_flip(r),
                           KrausChannel<double>::amplitude_damping(r), KrausChannel<double>::depolarizing(r, 1),
                           KrausChannel<double>::depolarizing(r, 2)})
      worst_kraus = std::max(worst_kraus, ch.completeness_error());
  }
  const bool ok = worst_trace <= 1e-10 && worst_herm <= 1e-10 && min_eig >= -1e-9 && worst_kraus <= 1e-10;
  return {ok, fmt("trace %.1e, hermiticity %.1e, min eigenvalue %.1e, kraus %.1e", worst_trace, worst_herm, min_eig,
                  worst_kraus)};
}

// --- 2 ---------------------------------------------------------------------

double two_qubit_loss(const Vector& t) {
  CircuitIR c;
  c.n_qubits = 2;
  c.measured_qubits = {0, 1};
  c.steps = {GateOp{GateKind::RY, {0}, t(0)}, GateOp{GateKind::RX, {1}, t(1)},
             GateOp{GateKind::CNOT, {0, 1}, std::nullopt}, GateOp{GateKind::RY, {1}, t(2)},
             GateOp{GateKind::RX, {0}, t(3)}};
  const Vector z = measure_z(c, MeasurementMode::exact(), nullptr);
  return z(0) + 0.5 * z(1);
}

Outcome gradient_oracle() {
  Vector theta(4);
  theta << 0.4, 1.3, -0.8, 2.1;
  Vector shift(4);
  for (int i = 0; i < 4; ++i) {
    Vector up = theta, down = theta;
    up(i) += kPi / 2;
    down(i) -= kPi / 2;
    shift(i) = (two_qubit_loss(up) - two_qubit_loss(down)) / 2;
  }
  Rng rng(2);
  const int n = 10000;
  Vector sum = Vector::Zero(4), sum2 = Vector::Zero(4);
  for (int i = 0; i < n; ++i) {
    const Vector g = spsa_gradient(two_qubit_loss, theta, 0.1, rng);
    sum += g;
    sum2 += g.cwiseProduct(g);
  }
  const Vector mean = sum / n;
  double worst = 0;
  for (int i = 0; i < 4; ++i) {
    const double se = std::sqrt((sum2(i) / n - mean(i) * mean(i)) / n);
    worst = std::max(worst, std::abs(mean(i) - shift(i)) / se);
  }
  return {worst <= 3.0, fmt("largest deviation %.2f standard errors", worst)};
}

// --- reference task runs -----------------------------------------------------

struct SeedRun {
  Task task;
  HybridModel victim;
  double victim_accuracy = 0;
};

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

class Reference {
 public:
  Reference() : cfg_(config("reference.json")) {
    for (auto seed : cfg_.seeds) {
      SeedRun r{build_task(cfg_.task, seed), {}, 0};
      r.victim = train_victim(cfg_.victim, r.task, cfg_.registry, seed).model;
      const auto policy = DefensePolicy::none(r.victim, cfg_.registry.get(cfg_.victim.device));
      DefendedService scorer(policy, cfg_.mode, mix_seed(seed, {tag("score")}));
      r.victim_accuracy = service_accuracy(scorer, r.task.data.test);
      runs_.emplace(seed, std::move(r));
    }
  }

  const ExperimentConfig& cfg() const { return cfg_; }

  /// Clone accuracy and ratio per seed for one attack variant, seeds matched.
  std::pair<double, double> attack(const std::function<void(AttackSpec&)>& edit) {
    std::vector<double> acc, ratio;
    for (const auto& [seed, r] : runs_) {
      AttackSpec spec = cfg_.attack.base;
      edit(spec);
      spec.train.loss = loss_for(spec.mode);
      const AttackContext ctx{r.task.data.test, r.task.npd, &cfg_.registry};
      DefendedService svc(DefensePolicy::none(r.victim, cfg_.registry.get(cfg_.victim.device)), cfg_.mode,
                          mix_seed(seed, {tag("serve")}));
      const auto out = run_attack(svc, r.victim_accuracy, spec, ctx, seed);
      acc.push_back(out.report.clone_accuracy);
      ratio.push_back(out.report.ratio);
    }
    return {mean(acc), mean(ratio)};
  }

 private:
  ExperimentConfig cfg_;
  std::map<std::uint64_t, SeedRun> runs_;
};

Outcome victim_trainability() {
  const auto cfg = config("reference.json");
  std::vector<double> acc;
  for (auto seed : cfg.seeds) {
    const Task task = build_task(cfg.task, seed);
    VictimSpec spec = cfg.victim;
    spec.device = "ideal";
    const auto m = train_victim(spec, task, cfg.registry, seed).model;
    acc.push_back(accuracy(m, task.data.test, DeviceProfile::ideal(), MeasurementMode::exact()));
  }
  return {mean(acc) >= 0.85, fmt("mean test accuracy %.3f (%.3f, %.3f, %.3f)", mean(acc), acc[0], acc[1], acc[2])};
}

struct DefenseNumbers {
  double tvd = 0;
  double gap = 0;
  double defended = 0;
  double undefended = 0;
};

DefenseNumbers defense(const std::string& file) {
  const auto cfg = config(file);
  std::vector<double> tvd, gap, def, undef;
  for (auto seed : cfg.seeds) {
    const Task task = build_task(cfg.task, seed);
    const DefensePolicy policy = build_policy(cfg.defense, cfg.victim, task, cfg.registry, seed);
    const AttackContext ctx{task.data.test, task.npd, &cfg.registry};
    AttackSpec probe = cfg.attack.base;
    probe.queries = cfg.defense.queries;
    const QuerySet qs = build_query_set(probe, ctx, mix_seed(seed, {tag("obfuscation")}));
    tvd.push_back(measure_obfuscation(policy, qs, cfg.mode, seed).mean_tvd);
    const auto pair = evaluate_defended_attack(policy, cfg.attack.base, ctx, cfg.mode, seed);
    gap.push_back(pair.gap);
    def.push_back(pair.defended.clone_accuracy);
    undef.push_back(pair.undefended.clone_accuracy);
  }
  return {mean(tvd), mean(gap), mean(def), mean(undef)};
}

// --- 10 --------------------------------------------------------------------

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[fs::relative(e.path(), root).string()] = s.str();
  }
  return out;
}

Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "qsteal_acceptance";
  std::vector<std::map<std::string, std::string>> trees;
  for (const char* run_name : {"a", "b"}) {
    const fs::path out = base / run_name;
    fs::remove_all(out);
    for (const char* file : {"reference.json", "hvip.json"}) {
      const auto cfg = config(file);
      RunContext run{(out / cfg.name).string(), nullptr, {}};
      cmd_train_victim(cfg, run);
      cmd_attack(cfg, run);
      cmd_defend_eval(cfg, run);
      cmd_report(cfg, run);
    }
    trees.push_back(tree(out));
  }
  fs::remove_all(base);
  std::size_t differing = 0;
  for (const auto& [path, bytes] : trees[0]) {
    const auto it = trees[1].find(path);
    if (it == trees[1].end() || it->second != bytes) ++differing;
  }
  const bool ok = trees[0].size() == trees[1].size() && differing == 0 && !trees[0].empty();
  return {ok, std::to_string(trees[0].size()) + " files compared, " + std::to_string(differing) + " differ"};
}

// --- 11 --------------------------------------------------------------------

Outcome metric_checks() {
  Rng rng(11);
  std::size_t violations = 0;
  auto dist = [&](std::size_t k) {
    Vector p(static_cast<Eigen::Index>(k));
    for (auto& v : p) v = rng.uniform();
    return Vector(p / p.sum());
  };
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + rng.index(9);
    const Vector p = dist(k), q = dist(k), r = dist(k);
    const double pq = tvd(p, q);
    if (tvd(p, p) != 0 || pq != tvd(q, p) || pq < 0 || pq > 1 || tvd(p, r) > pq + tvd(q, r) + 1e-15) ++violations;
  }
  const double mnist = clone_ratio(0.880, 0.896);
  const double kuzushiji = clone_ratio(0.680, 0.796);
  auto r3 = [](double x) { return std::round(x * 1000) / 1000; };
  const bool ok = violations == 0 && r3(mnist) == 0.982 && r3(kuzushiji) == 0.854;
  return {ok, fmt("%.0f axiom violations, ratios %.3f and %.3f", static_cast<double>(violations), mnist, kuzushiji)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_red;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--known-red" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      std::string item;
      while (std::getline(list, item, ',')) known_red.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--known-red N[,N...]]\n";
      return 2;
    }
  }

  std::map<int, Outcome> results;
  auto timed = [](double limit_s, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = f();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.detail += fmt("; %.1f s", s);
    if (limit_s > 0 && s > limit_s) {
      o.pass = false;
      o.detail += fmt(" exceeds %.0f s", limit_s);
    }
    return o;
  };
  auto report = [&](int id, Outcome o) {
    const bool expected = known_red.count(id) != 0;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail;
    if (!o.pass && expected) std::cout << " [known red]";
    std::cout << std::endl;
    results[id] = std::move(o);
  };

  report(1, timed(30, simulator_properties));
  report(2, timed(120, gradient_oracle));
  report(3, timed(180, victim_trainability));

  Reference ref;
  report(4, timed(600, [&] {
           const auto topk = ref.attack([](AttackSpec&) {});
           const auto top1 = ref.attack([](AttackSpec& s) { s.mode = ResponseMode::Top1; });
           return Outcome{topk.second >= top1.second && topk.second >= 0.90,
                          fmt("ratio Top-k %.3f, Top-1 %.3f", topk.second, top1.second)};
         }));
  report(5, timed(0, [&] {
           std::vector<double> acc;
           for (std::size_t m : {175, 350, 700}) acc.push_back(ref.attack([&](AttackSpec& s) { s.queries = m; }).first);
           const double band = *std::max_element(acc.begin(), acc.end()) - *std::min_element(acc.begin(), acc.end());
           return Outcome{band <= 0.10, fmt("clone accuracy 175/350/700: %.3f %.3f %.3f, band %.3f", acc[0], acc[1],
                                            acc[2], band)};
         }));
  report(6, timed(0, [&] {
           const double mixed = ref.attack([](AttackSpec&) {}).first;
           const double uniform = ref.attack([](AttackSpec& s) { s.query_kind = QueryKind::RandomUniform; }).first;
           return Outcome{mixed >= uniform, fmt("clone accuracy mixed %.3f, random %.3f", mixed, uniform)};
         }));
  report(7, timed(0, [&] {
           const double two = ref.attack([](AttackSpec& s) { s.clone.n_qubits = 2; }).first;
           const double eight = ref.attack([](AttackSpec& s) { s.clone.n_qubits = 8; }).first;
           return Outcome{eight >= two, fmt("clone accuracy 2Q %.3f, 8Q %.3f", two, eight)};
         }));

  DefenseNumbers hvip, havip;
  report(8, timed(300, [&] {
           hvip = defense("hvip.json");
           havip = defense("havip.json");
           return Outcome{havip.tvd >= hvip.tvd && hvip.tvd > 0 && havip.tvd > 0,
                          fmt("mean TVD HAVIP %.4f, HVIP %.4f", havip.tvd, hvip.tvd)};
         }));
  report(9, timed(0, [&] {
           return Outcome{std::abs(hvip.gap) <= 0.05 && std::abs(havip.gap) <= 0.15,
                          fmt("clone accuracy gap HVIP %+.3f, HAVIP %+.3f", hvip.gap, havip.gap)};
         }));
  report(10, timed(0, determinism));
  report(11, timed(0, metric_checks));

  int unexpected = 0;
  for (const auto& [id, o] : results)
    if (!o.pass && known_red.count(id) == 0) ++unexpected;
  for (int id : known_red)
    if (results.count(id) && results[id].pass) std::cout << "note: criterion " << id << " is listed as known red but passed\n";
  return unexpected == 0 ? 0 : 1;
}
