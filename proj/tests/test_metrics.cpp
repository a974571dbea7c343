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

#include "qsteal/metrics.hpp"
#include "qsteal/rng.hpp"

using namespace qsteal;

namespace {

Vector random_distribution(std::size_t k, Rng& rng) {
  Vector p(static_cast<Eigen::Index>(k));
  for (auto& v : p) v = rng.uniform();
  return p / p.sum();
}

}  // namespace

TEST_CASE("TVD worked example") {
  Vector p(3), q(3);
  p << 0.5, 0.3, 0.2;
  q << 0.3, 0.3, 0.4;
  CHECK(tvd(p, q) == doctest::Approx(0.2));
  CHECK_THROWS_AS(tvd(p, Vector(2)), Error);
}

TEST_CASE("TVD is a bounded metric on distributions") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 2 + rng.index(6);
    const Vector p = random_distribution(k, rng), q = random_distribution(k, rng), r = random_distribution(k, rng);
    CHECK(tvd(p, p) == 0.0);
    CHECK(tvd(p, q) == tvd(q, p));
    CHECK(tvd(p, q) >= 0.0);
    CHECK(tvd(p, q) <= 1.0);
    CHECK(tvd(p, r) <= tvd(p, q) + tvd(q, r) + 1e-15);
  }
  Vector a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  CHECK(tvd(a, b) == 1.0);
}

TEST_CASE("argmax and distribution checks") {
  Vector v(4);
  v << 0.1, 0.4, 0.4, 0.1;
  CHECK(argmax(v) == 1);
  CHECK(is_distribution(v));
  v(0) = -0.1;
  CHECK_FALSE(is_distribution(v));
  CHECK_THROWS_AS(argmax(Vector()), Error);
}

TEST_CASE("clone ratio and mismatch rate") {
  CHECK(clone_ratio(0.880, 0.896) == doctest::Approx(0.982).epsilon(1e-3));
  CHECK(clone_ratio(0.680, 0.796) == doctest::Approx(0.854).epsilon(1e-3));
  CHECK_THROWS_AS(clone_ratio(0.5, 0.0), Error);
  CHECK(mismatch_rate({0, 1, 2, 3}, {0, 1, 3, 3}) == 0.25);
  CHECK_THROWS_AS(mismatch_rate({0}, {0, 1}), Error);
}

TEST_CASE("metric records serialize") {
  const MetricRecord r{"clone_ratio", 0.9, "exp", {1, 2}, 0};
  const auto j = to_json(r);
  CHECK(j.at("name") == "clone_ratio");
  CHECK(j.at("seeds").size() == 2);
}

TEST_CASE("expectations file: check, record and round-trip") {
  Expectations e;
  CHECK(e.check_or_record("x", 0.5, 0.01));
  CHECK(e.contains("x"));
  CHECK(e.check_or_record("x", 0.505, 0.5));
  CHECK_FALSE(e.check_or_record("x", 0.52, 0.5));
  CHECK(e.at("x").tolerance == 0.01);
  CHECK_THROWS_AS(e.at("y"), Error);

  const auto path = std::filesystem::temp_directory_path() / "qsteal_expectations_test.json";
  e.save(path.string());
  const auto back = Expectations::load(path.string());
  std::filesystem::remove(path);
  CHECK(back.matches("x", 0.5));
  auto doc = e.to_json();
  doc["version"] = 2;
  CHECK_THROWS_AS(Expectations::from_json(doc), Error);
}
