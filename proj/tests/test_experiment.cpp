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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qsteal/experiment.hpp"
#include "qsteal/io.hpp"
#include "support.hpp"

using namespace qsteal;
namespace fs = std::filesystem;

namespace {

nlohmann::json tiny() {
  std::ifstream in(testing::source_dir() + "/tests/data/tiny.json");
  return nlohmann::json::parse(in);
}

std::string field_of(const nlohmann::json& doc) {
  try {
    config_from_json(doc);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<no error>";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) { fs::remove_all(path); }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config errors carry the field path") {
  CHECK(field_of(tiny()) == "<no error>");
  auto doc = tiny();
  doc["victim"]["template"] = "PQC7";
  CHECK(field_of(doc) == "victim.template");

  doc = tiny();
  doc["defense"] = {{"policy", "havip"}, {"pairs", {{{"template", "PQC1"}, {"device", "devQ"}}, {{"device", "devB"}}}}};
  CHECK(field_of(doc) == "defense.pairs[0].device");

  doc = tiny();
  doc["attack"]["train"]["loss"] = "nll";
  CHECK(field_of(doc) == "attack.train.loss");

  doc = tiny();
  doc["colour"] = "red";
  CHECK(field_of(doc) == "config.colour");

  doc = tiny();
  doc["shots"] = 0;
  CHECK(field_of(doc) == "shots");

  doc = tiny();
  doc["task"]["classes"] = 10;
  CHECK(field_of(doc) == "task.classes");

  doc = tiny();
  doc["victim"]["schedule"] = {{{"device", "devA"}, {"epochs", 1}}};
  CHECK(field_of(doc).rfind("victim.schedule", 0) == 0);
}

TEST_CASE("config lists expand into sweep cells") {
  const auto c = config_from_json(tiny());
  CHECK(c.seeds == std::vector<std::uint64_t>{5});
  CHECK(c.attack.cells().size() == 2);
  CHECK(c.attack.base.train.loss == LossKind::KlTopK);
  CHECK(c.defense.kind == DefenseKind::HVIP);
  CHECK(c.victim.train.epochs == 2);
}

TEST_CASE("tasks are deterministic in the seed") {
  const auto c = config_from_json(tiny());
  const auto a = build_task(c.task, 3), b = build_task(c.task, 3);
  CHECK(a.data.train.features == b.data.train.features);
  CHECK(a.data.train.size() == 60);
  CHECK(a.data.test.size() == 30);
  CHECK(a.npd.size() == 2);
  CHECK_FALSE(build_task(c.task, 4).data.train.features == a.data.train.features);
}

TEST_CASE("commands write deterministic artifacts") {
  const auto cfg = config_from_json(tiny());
  TempDir one("qsteal_cmd_one"), two("qsteal_cmd_two");
  for (const auto* dir : {&one, &two}) {
    RunContext run{dir->path.string(), nullptr, {}};
    cmd_train_victim(cfg, run);
    cmd_attack(cfg, run);
    cmd_defend_eval(cfg, run);
    cmd_report(cfg, run);
    CHECK_FALSE(run.written.empty());
  }
  for (const char* rel : {"victim/seed-5.json", "victim/seed-5.history.json", "attack/reports.jsonl",
                          "defense/seed-5.json", "report.json"}) {
    INFO(rel);
    REQUIRE(fs::exists(one.path / rel));
    CHECK(slurp(one.path / rel) == slurp(two.path / rel));
  }
  const auto history = nlohmann::json::parse(slurp(one.path / "victim/seed-5.history.json"));
  CHECK(history.at("epochs").size() == 2);

  std::istringstream lines(slurp(one.path / "attack/reports.jsonl"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line))
    if (!line.empty()) ++n;
  CHECK(n == 2);

  // running a command again rewrites rather than appends
  RunContext again{one.path.string(), nullptr, {}};
  cmd_attack(cfg, again);
  CHECK(slurp(one.path / "attack/reports.jsonl") == slurp(two.path / "attack/reports.jsonl"));
}

TEST_CASE("no defense reports zero obfuscation") {
  auto doc = tiny();
  doc["defense"] = {{"policy", "none"}, {"queries", 15}};
  doc["attack"]["queries"] = 20;
  const auto cfg = config_from_json(doc);
  TempDir dir("qsteal_cmd_none");
  RunContext run{dir.path.string(), nullptr, {}};
  cmd_train_victim(cfg, run);
  cmd_defend_eval(cfg, run);
  const auto rep = nlohmann::json::parse(slurp(dir.path / "defense/seed-5.json"));
  CHECK(rep.at("obfuscation").at("mean_tvd") == 0.0);
}

TEST_CASE("attack without a trained victim fails cleanly") {
  const auto cfg = config_from_json(tiny());
  TempDir dir("qsteal_cmd_missing");
  RunContext run{dir.path.string(), nullptr, {}};
  CHECK_THROWS_AS(cmd_attack(cfg, run), Error);
}
