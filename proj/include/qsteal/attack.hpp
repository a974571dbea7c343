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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsteal/dataset.hpp"
#include "qsteal/device.hpp"
#include "qsteal/model.hpp"
#include "qsteal/train.hpp"

namespace qsteal {

enum class ResponseMode { Top1, TopK };

std::string_view name(ResponseMode m);
ResponseMode parse_response_mode(std::string_view text);
/// The loss a clone must use for a given response mode.
LossKind loss_for(ResponseMode m);

/// What the victim hands back for one query. `log_id` is an opaque token;
/// it identifies the victim-side log entry and nothing else.
struct VictimResponse {
  Vector probs;
  std::string log_id;
};

/// Black-box prediction endpoint. The only thing an attacker may call.
class VictimService {
 public:
  virtual ~VictimService() = default;
  virtual VictimResponse predict(const Vector& x) = 0;
};

/// Failure of one query after all retries.
class QueryError : public Error {
 public:
  QueryError(std::size_t index, std::size_t attempts, const std::string& cause);
  std::size_t index() const noexcept { return index_; }
  std::size_t attempts() const noexcept { return attempts_; }

 private:
  std::size_t index_;
  std::size_t attempts_;
};

struct QueryLogEntry {
  std::size_t index = 0;
  std::string log_id;
};

/// D_A: queries with the victim's answers.
struct AdversarialDataset {
  Matrix features;                  // M x d
  std::vector<std::size_t> labels;  // Top1
  Matrix probs;                     // TopK, M x k
  ResponseMode mode = ResponseMode::TopK;
  std::size_t classes = 0;
  std::vector<QueryLogEntry> query_log;

  std::size_t size() const noexcept { return static_cast<std::size_t>(features.rows()); }
  void validate() const;
  TrainingData training_data() const;
};

/// Queries `service` once per row of `qs`, in order. A failing query is
/// retried up to `max_retries` times before a QueryError is raised.
AdversarialDataset query_victim(VictimService& service, const QuerySet& qs, ResponseMode mode,
                                std::size_t max_retries = 2);

struct CloneArch {
  PqcTemplateId id = PqcTemplateId::PQC19;
  std::size_t n_qubits = 4;
  std::size_t layers = 1;

  PqcTemplate pqc() const { return {id, n_qubits, layers}; }
  /// "PQC19-4q" style label.
  std::string label() const;
};

/// Fits a fresh clone to `da`. `cfg.loss` must match the response mode.
TrainResult train_clone(const AdversarialDataset& da, const CloneArch& arch, const TrainConfig& cfg,
                        const ProfileSchedule& schedule, std::uint64_t seed, const LabeledDataset* test = nullptr);

/// Everything about one attack cell except the victim.
struct AttackSpec {
  QueryKind query_kind = QueryKind::MixedNPD;
  std::size_t queries = 700;
  ResponseMode mode = ResponseMode::TopK;
  CloneArch clone;
  std::string clone_device = "devB";
  TrainConfig train;  // loss is forced to match `mode`

  void validate(const std::string& path = "attack") const;
};

std::string_view name(QueryKind k);
QueryKind parse_query_kind(std::string_view text);

/// Data the attacker and the experimenter share for a task.
struct AttackContext {
  LabeledDataset test;                     // scores victim and clone
  std::vector<LabeledDataset> npd_sources; // mixed query pool
  const DeviceRegistry* registry = nullptr;
};

struct AttackReport {
  double victim_accuracy = 0;
  double clone_accuracy = 0;
  double ratio = 0;
  ResponseMode mode = ResponseMode::TopK;
  QueryKind query_kind = QueryKind::MixedNPD;
  std::size_t da_size = 0;
  std::string clone_arch;
  std::string clone_device;
  std::vector<std::uint64_t> seeds;
  std::string cell;
  std::optional<std::string> error;

  bool ok() const noexcept { return !error.has_value(); }
};

nlohmann::json to_json(const AttackReport& r);
AttackReport attack_report_from_json(const nlohmann::json& j);

QuerySet build_query_set(const AttackSpec& spec, const AttackContext& ctx, std::uint64_t seed);

/// Argmax accuracy of a service's answers on `ds`.
double service_accuracy(VictimService& service, const LabeledDataset& ds);

struct AttackOutcome {
  AttackReport report;
  HybridModel clone;
  TrainHistory history;
};

/// Query, fit, score. `victim_accuracy` is the served victim's test accuracy.
AttackOutcome run_attack(VictimService& service, double victim_accuracy, const AttackSpec& spec,
                         const AttackContext& ctx, std::uint64_t seed);

/// One sweep cell: spec plus a label.
struct AttackCell {
  std::string id;
  AttackSpec spec;
};

/// Every combination of the listed sizes, archs, widths, query kinds and modes.
struct AttackSweep {
  AttackSpec base;
  std::vector<std::size_t> queries;
  std::vector<PqcTemplateId> templates;
  std::vector<std::size_t> widths;
  std::vector<QueryKind> query_kinds;
  std::vector<ResponseMode> modes;

  std::vector<AttackCell> cells() const;
};

/// Builds a fresh victim for a cell; returns the service and its accuracy.
using VictimFactory = std::function<std::pair<std::unique_ptr<VictimService>, double>(std::uint64_t cell_seed)>;

/// Runs every cell with its own derived seed. A failing cell yields a report
/// carrying the error; the remaining cells still run.
std::vector<AttackReport> run_attack_suite(const AttackSweep& sweep, const VictimFactory& victim,
                                           const AttackContext& ctx, std::uint64_t seed);

}  // namespace qsteal
