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
#include <istream>
#include <string>
#include <vector>

#include "qsteal/common.hpp"

namespace qsteal {

struct LabeledDataset {
  std::string name;
  Matrix features;                  // N x d
  std::vector<std::size_t> labels;  // N, each < classes
  std::size_t classes = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(features.cols()); }
  Vector row(std::size_t i) const { return features.row(static_cast<Eigen::Index>(i)).transpose(); }

  void validate() const;
  /// Every feature in [0, 2pi].
  bool scaled() const;
};

/// d numeric fields then one integer label per line; a non-numeric first line
/// is treated as a header. Labels are remapped to 0..k-1 in order of first
/// appearance.
LabeledDataset parse_csv(std::istream& in, std::size_t d, const std::string& name = "csv");
LabeledDataset load_csv(const std::string& path, std::size_t d);
std::string to_csv(const LabeledDataset& ds);
void write_csv(const std::string& path, const LabeledDataset& ds);

/// Per-column min-max onto [0, 2pi]; constant columns map to pi.
LabeledDataset scale_features(const LabeledDataset& ds);
Matrix scale_columns(const Matrix& features);

enum class BlobLayout {
  /// Classes on the points of a {-1, 0, 1}^2 grid: (0,0), (0,-1), (-1,0),
  /// (1,1), ... The first grid coordinate is carried by columns 0, 4, 8, ...,
  /// the second by columns 2, 6, 10, ... Grid neighbours sit `separation`
  /// apart. Up to 9 classes (3 when d < 3).
  Grid,
  /// Class c centred at c * separation * u, u the unit vector spread evenly
  /// over the even-indexed columns. Consecutive classes sit `separation` apart.
  Line,
  /// Class c centred on coordinate axis floor(c * d / k); needs k <= d.
  /// Every pair of means sits `separation` apart.
  Axes,
  /// Seeded random directions, orthogonalized while k <= d.
  RandomDirections,
};

/// Gaussian clusters (unit variance) with means `separation` apart as
/// described by `layout`, then scaled. Rows are ordered class by class.
LabeledDataset make_blobs(std::size_t classes, std::size_t d, std::size_t n_per_class, double separation,
                          std::uint64_t seed, BlobLayout layout = BlobLayout::Grid);

/// Out-of-domain query pools: one blob set per entry of `separations`, each
/// with its own seed and spacing.
std::vector<LabeledDataset> make_npd_sources(std::size_t classes, std::size_t d, std::size_t n_per_class,
                                             const std::vector<double>& separations, std::uint64_t seed,
                                             BlobLayout layout = BlobLayout::Grid);

struct TrainTestSplit {
  LabeledDataset train;
  LabeledDataset test;
};

/// Seeded shuffle, then the first `n_train` rows train and the rest test.
TrainTestSplit split(const LabeledDataset& ds, std::size_t n_train, std::uint64_t seed);
/// 70 / 30 split.
TrainTestSplit split(const LabeledDataset& ds, std::uint64_t seed);

enum class QueryKind { MixedNPD, RandomUniform };

struct QuerySet {
  Matrix features;  // M x d
  QueryKind kind = QueryKind::RandomUniform;
  std::vector<std::string> sources;
  std::vector<std::size_t> source_counts;

  std::size_t size() const noexcept { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(features.cols()); }
  Vector row(std::size_t i) const { return features.row(static_cast<Eigen::Index>(i)).transpose(); }
};

/// Equal shares of `m` rows from each source (earlier sources take the
/// remainder), drawn without replacement where possible, then shuffled.
QuerySet mixed_npd(const std::vector<LabeledDataset>& sources, std::size_t m, std::uint64_t seed);

/// i.i.d. Uniform[0, 2pi]^d.
QuerySet random_uniform(std::size_t m, std::size_t d, std::uint64_t seed);

std::string to_csv(const QuerySet& qs);
QuerySet parse_query_csv(std::istream& in, std::size_t d);

/// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

}  // namespace qsteal
