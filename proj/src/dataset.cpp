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

#include "qsteal/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "qsteal/io.hpp"
#include "qsteal/rng.hpp"

namespace qsteal {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_long(const std::string& s, long long& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string trim_line(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
  return line;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Parses rows of `width` numeric fields; labels are handled by the caller.
template <typename RowFn>
void read_rows(std::istream& in, std::size_t width, RowFn&& on_row) {
  std::string line;
  std::size_t line_no = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_line(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    double probe = 0;
    if (!any && !fields.empty() && !parse_double(fields[0], probe)) {
      any = true;  // header
      continue;
    }
    any = true;
    if (fields.size() != width)
      throw Error("line " + std::to_string(line_no) + ": expected " + std::to_string(width) + " fields, got " +
                  std::to_string(fields.size()));
    on_row(fields, line_no);
  }
}

}  // namespace

void LabeledDataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size())
    throw Error("dataset '" + name + "': feature and label counts differ");
  if (!features.allFinite()) throw Error("dataset '" + name + "': non-finite feature");
  for (auto l : labels)
    if (l >= classes) throw Error("dataset '" + name + "': label out of range");
}

bool LabeledDataset::scaled() const {
  return features.size() == 0 || (features.minCoeff() >= 0.0 && features.maxCoeff() <= kTwoPi);
}

LabeledDataset parse_csv(std::istream& in, std::size_t d, const std::string& name) {
  if (d == 0) throw Error("feature dimension must be positive");
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> labels;
  std::map<long long, std::size_t> remap;
  read_rows(in, d + 1, [&](const std::vector<std::string>& f, std::size_t line_no) {
    std::vector<double> row(d);
    for (std::size_t i = 0; i < d; ++i)
      if (!parse_double(f[i], row[i]))
        throw Error("line " + std::to_string(line_no) + ": field " + std::to_string(i + 1) + " is not a number");
    long long raw = 0;
    if (!parse_long(f[d], raw)) throw Error("line " + std::to_string(line_no) + ": label is not an integer");
    auto it = remap.find(raw);
    if (it == remap.end()) it = remap.emplace(raw, remap.size()).first;
    rows.push_back(std::move(row));
    labels.push_back(it->second);
  });
  if (rows.empty()) throw Error("dataset '" + name + "' is empty");
  LabeledDataset ds;
  ds.name = name;
  ds.classes = remap.size();
  ds.labels = std::move(labels);
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < d; ++c)
      ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return ds;
}

LabeledDataset load_csv(const std::string& path, std::size_t d) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_csv(in, d, path);
}

std::string to_csv(const LabeledDataset& ds) {
  std::string out;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t c = 0; c < ds.dim(); ++c) {
      out += format_double(ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
      out += ',';
    }
    out += std::to_string(ds.labels[r]);
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const LabeledDataset& ds) { write_atomic(path, to_csv(ds)); }

Matrix scale_columns(const Matrix& features) {
  Matrix out(features.rows(), features.cols());
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    const double lo = features.col(c).minCoeff();
    const double hi = features.col(c).maxCoeff();
    if (hi == lo) {
      out.col(c).setConstant(kPi);
      continue;
    }
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
      const double v = (features(r, c) - lo) / (hi - lo) * kTwoPi;
      out(r, c) = std::clamp(v, 0.0, kTwoPi);
    }
  }
  return out;
}

LabeledDataset scale_features(const LabeledDataset& ds) {
  if (ds.size() < 2) throw Error("scale_features needs at least two rows");
  LabeledDataset out = ds;
  out.features = scale_columns(ds.features);
  return out;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
  return idx;
}

LabeledDataset make_blobs(std::size_t classes, std::size_t d, std::size_t n_per_class, double separation,
                          std::uint64_t seed, BlobLayout layout) {
  if (classes == 0 || d == 0 || n_per_class == 0) throw Error("make_blobs: sizes must be positive");
  Rng rng(seed);
  Matrix means = Matrix::Zero(static_cast<Eigen::Index>(classes), static_cast<Eigen::Index>(d));
  if (layout == BlobLayout::Grid) {
    static constexpr int grid[9][2] = {{0, 0}, {0, -1}, {-1, 0}, {1, 1}, {-1, -1}, {1, 0}, {0, 1}, {1, -1}, {-1, 1}};
    std::size_t n_a = 0, n_b = 0;
    for (std::size_t j = 0; j < d; j += 2) ++(j % 4 == 0 ? n_a : n_b);
    if (classes > (n_b == 0 ? 3u : 9u)) throw Error("make_blobs: too many classes for the grid layout");
    // a 1-D grid only uses the first coordinate
    static constexpr int line[3] = {0, -1, 1};
    const double unit = std::sqrt(2.0 / static_cast<double>(n_b == 0 ? n_a : std::min(n_a, n_b)));
    for (std::size_t k = 0; k < classes; ++k)
      for (std::size_t j = 0; j < d; j += 2) {
        const int g = n_b == 0 ? line[k] : grid[k][j % 4 == 0 ? 0 : 1];
        means(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = unit * g;
      }
  } else if (layout == BlobLayout::Line) {
    const auto even = static_cast<double>((d + 1) / 2);
    for (Eigen::Index k = 0; k < means.rows(); ++k)
      for (Eigen::Index j = 0; j < means.cols(); j += 2) means(k, j) = static_cast<double>(k) * std::sqrt(2.0 / even);
  } else if (layout == BlobLayout::Axes) {
    if (classes > d) throw Error("make_blobs: axis layout needs classes <= d");
    for (std::size_t k = 0; k < classes; ++k)
      means(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k * d / classes)) = 1.0;
  } else {
    for (Eigen::Index k = 0; k < means.rows(); ++k) {
      Vector v(static_cast<Eigen::Index>(d));
      for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = rng.normal();
      if (static_cast<std::size_t>(k) < d)
        for (Eigen::Index p = 0; p < k; ++p) v -= v.dot(means.row(p).transpose()) * means.row(p).transpose();
      means.row(k) = v.normalized().transpose();
    }
  }
  // neighbouring means are sqrt(2) apart in every layout
  means *= separation / std::sqrt(2.0);

  LabeledDataset ds;
  ds.name = "blobs";
  ds.classes = classes;
  ds.features.resize(static_cast<Eigen::Index>(classes * n_per_class), static_cast<Eigen::Index>(d));
  Eigen::Index r = 0;
  for (std::size_t k = 0; k < classes; ++k) {
    for (std::size_t i = 0; i < n_per_class; ++i, ++r) {
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j)
        ds.features(r, j) = means(static_cast<Eigen::Index>(k), j) + rng.normal();
      ds.labels.push_back(k);
    }
  }
  if (ds.size() >= 2) ds.features = scale_columns(ds.features);
  return ds;
}

std::vector<LabeledDataset> make_npd_sources(std::size_t classes, std::size_t d, std::size_t n_per_class,
                                             const std::vector<double>& separations, std::uint64_t seed,
                                             BlobLayout layout) {
  std::vector<LabeledDataset> out;
  for (std::size_t i = 0; i < separations.size(); ++i) {
    out.push_back(make_blobs(classes, d, n_per_class, separations[i], mix_seed(seed, {tag("npd"), i}), layout));
    out.back().name = "npd-" + std::to_string(i);
  }
  return out;
}

namespace {
LabeledDataset take_rows(const LabeledDataset& ds, const std::vector<std::size_t>& idx, std::size_t from,
                         std::size_t to, const std::string& suffix) {
  LabeledDataset out;
  out.name = ds.name + suffix;
  out.classes = ds.classes;
  out.features.resize(static_cast<Eigen::Index>(to - from), ds.features.cols());
  for (std::size_t i = from; i < to; ++i) {
    out.features.row(static_cast<Eigen::Index>(i - from)) = ds.features.row(static_cast<Eigen::Index>(idx[i]));
    out.labels.push_back(ds.labels[idx[i]]);
  }
  return out;
}
}  // namespace

TrainTestSplit split(const LabeledDataset& ds, std::size_t n_train, std::uint64_t seed) {
  if (n_train == 0 || n_train >= ds.size()) throw Error("split: train size must leave a non-empty test set");
  const auto idx = shuffled_indices(ds.size(), seed);
  return {take_rows(ds, idx, 0, n_train, "/train"), take_rows(ds, idx, n_train, ds.size(), "/test")};
}

TrainTestSplit split(const LabeledDataset& ds, std::uint64_t seed) {
  return split(ds, (ds.size() * 7) / 10, seed);
}

QuerySet mixed_npd(const std::vector<LabeledDataset>& sources, std::size_t m, std::uint64_t seed) {
  if (sources.empty()) throw Error("mixed_npd: no sources");
  if (m == 0) throw Error("mixed_npd: query count must be positive");
  const auto d = sources.front().features.cols();
  for (const auto& s : sources) {
    if (s.features.cols() != d) throw Error("mixed_npd: sources disagree on feature dimension");
    if (s.size() == 0) throw Error("mixed_npd: empty source '" + s.name + "'");
  }
  QuerySet qs;
  qs.kind = QueryKind::MixedNPD;
  qs.features.resize(static_cast<Eigen::Index>(m), d);
  const std::size_t share = m / sources.size();
  const std::size_t extra = m % sources.size();
  Eigen::Index r = 0;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const std::size_t count = share + (s < extra ? 1 : 0);
    const auto order = shuffled_indices(sources[s].size(), mix_seed(seed, {tag("source"), s}));
    for (std::size_t i = 0; i < count; ++i)
      qs.features.row(r++) = sources[s].features.row(static_cast<Eigen::Index>(order[i % order.size()]));
    qs.sources.push_back(sources[s].name);
    qs.source_counts.push_back(count);
  }
  const auto perm = shuffled_indices(m, mix_seed(seed, {tag("mix")}));
  Matrix shuffled(qs.features.rows(), d);
  for (std::size_t i = 0; i < m; ++i) shuffled.row(static_cast<Eigen::Index>(i)) = qs.features.row(static_cast<Eigen::Index>(perm[i]));
  qs.features = std::move(shuffled);
  return qs;
}

QuerySet random_uniform(std::size_t m, std::size_t d, std::uint64_t seed) {
  if (m == 0 || d == 0) throw Error("random_uniform: sizes must be positive");
  Rng rng(seed);
  QuerySet qs;
  qs.kind = QueryKind::RandomUniform;
  qs.features.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < qs.features.rows(); ++r)
    for (Eigen::Index c = 0; c < qs.features.cols(); ++c) qs.features(r, c) = rng.uniform(0.0, kTwoPi);
  return qs;
}

std::string to_csv(const QuerySet& qs) {
  std::string out;
  for (Eigen::Index r = 0; r < qs.features.rows(); ++r) {
    for (Eigen::Index c = 0; c < qs.features.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(qs.features(r, c));
    }
    out += '\n';
  }
  return out;
}

QuerySet parse_query_csv(std::istream& in, std::size_t d) {
  std::vector<std::vector<double>> rows;
  read_rows(in, d, [&](const std::vector<std::string>& f, std::size_t line_no) {
    std::vector<double> row(d);
    for (std::size_t i = 0; i < d; ++i)
      if (!parse_double(f[i], row[i]))
        throw Error("line " + std::to_string(line_no) + ": field " + std::to_string(i + 1) + " is not a number");
    rows.push_back(std::move(row));
  });
  if (rows.empty()) throw Error("query set is empty");
  QuerySet qs;
  qs.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < d; ++c) qs.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return qs;
}

}  // namespace qsteal
