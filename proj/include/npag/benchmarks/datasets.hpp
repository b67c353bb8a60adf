#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Sparse>

#include "npag/core/random.hpp"
#include "npag/core/types.hpp"

namespace npag {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Labeled sparse examples: row i of `features` is a_i, labels are +1 or -1.
struct SparseDataset {
  SparseRows features;
  std::vector<double> labels;

  Index size() const { return labels.size(); }
  Index dimension() const { return static_cast<Index>(features.cols()); }
};

/// N periods by d assets of per-unit payoffs.
struct PayoffMatrix {
  Matrix payoffs;

  Index periods() const { return static_cast<Index>(payoffs.rows()); }
  Index assets() const { return static_cast<Index>(payoffs.cols()); }
};

// Maps raw labels onto {-1, +1}. Without one, only +1/1 and -1 are accepted.
struct LabelMap {
  double positive = 1.0;
  double negative = -1.0;
  // Skip examples whose label is neither value instead of failing.
  bool drop_others = false;
};

struct SparseFormatOptions {
  std::optional<LabelMap> relabel;
  // Feature dimension; 0 infers it from the largest index seen.
  Index dimension = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

inline bool parse_index(std::string_view s, Index& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

}  // namespace detail

/// Parses "label idx:value idx:value ..." lines with 1-based ascending indices.
/// Blank lines are skipped. Errors carry the 1-based line number.
inline SparseDataset parse_sparse_dataset(std::istream& in, const SparseFormatOptions& opt = {}) {
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> labels;
  Index max_index = 0;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest = detail::trim(line);
    if (rest.empty()) continue;
    const auto fail = [&](const std::string& why) -> ParseError {
      return ParseError("line " + std::to_string(lineno) + ": " + why, lineno);
    };

    auto next_token = [&rest]() {
      rest = detail::trim(rest);
      std::size_t end = rest.find_first_of(" \t");
      std::string_view tok = rest.substr(0, end);
      rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
      return tok;
    };

    double raw = 0.0;
    const std::string_view label_tok = next_token();
    if (!detail::parse_double(label_tok, raw)) throw fail("bad label '" + std::string(label_tok) + "'");
    double label = 0.0;
    if (opt.relabel) {
      if (raw == opt.relabel->positive) {
        label = 1.0;
      } else if (raw == opt.relabel->negative) {
        label = -1.0;
      } else if (opt.relabel->drop_others) {
        continue;
      } else {
        throw fail("label " + std::string(label_tok) + " is not in the relabel map");
      }
    } else if (raw == 1.0 || raw == -1.0) {
      label = raw;
    } else {
      throw fail("non-binary label " + std::string(label_tok) + " without a relabel map");
    }

    const Index row = labels.size();
    Index prev = 0;
    for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos) throw fail("expected index:value, got '" + std::string(tok) + "'");
      Index idx = 0;
      double val = 0.0;
      if (!detail::parse_index(tok.substr(0, colon), idx) || idx == 0) {
        throw fail("bad feature index in '" + std::string(tok) + "'");
      }
      if (!detail::parse_double(tok.substr(colon + 1), val)) {
        throw fail("bad feature value in '" + std::string(tok) + "'");
      }
      if (idx <= prev) throw fail("feature indices must be strictly ascending");
      if (opt.dimension > 0 && idx > opt.dimension) throw fail("feature index exceeds the dimension");
      prev = idx;
      max_index = std::max(max_index, idx);
      entries.emplace_back(static_cast<int>(row), static_cast<int>(idx - 1), val);
    }
    labels.push_back(label);
  }
  SparseDataset ds;
  const Index dim = opt.dimension > 0 ? opt.dimension : max_index;
  ds.features.resize(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(dim));
  ds.features.setFromTriplets(entries.begin(), entries.end());
  ds.features.makeCompressed();
  ds.labels = std::move(labels);
  return ds;
}

inline SparseDataset parse_sparse_dataset(const std::string& path, const SparseFormatOptions& opt = {}) {
  std::ifstream in = detail::open_input(path);
  return parse_sparse_dataset(in, opt);
}

// Writes the format read by parse_sparse_dataset; values use shortest round-trip text.
inline void write_sparse_dataset(std::ostream& out, const SparseDataset& ds) {
  for (Eigen::Index i = 0; i < ds.features.outerSize(); ++i) {
    out << (ds.labels[static_cast<std::size_t>(i)] > 0 ? "+1" : "-1");
    for (SparseRows::InnerIterator it(ds.features, i); it; ++it) {
      out << ' ' << (it.col() + 1) << ':' << detail::format_double(it.value());
    }
    out << '\n';
  }
}

/// Comma-separated numeric rows; the first line is skipped when `header` is set.
inline PayoffMatrix parse_payoff_csv(std::istream& in, bool header = false) {
  std::vector<std::vector<double>> rows;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    std::string_view rest = detail::trim(line);
    if (rest.empty()) continue;
    std::vector<double> row;
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view cell = detail::trim(rest.substr(0, comma));
      double v = 0.0;
      if (!detail::parse_double(cell, v)) {
        throw ParseError("line " + std::to_string(lineno) + ": non-numeric cell '" + std::string(cell) + "'",
                         lineno);
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " +
                           std::to_string(rows.front().size()) + " columns, found " +
                           std::to_string(row.size()),
                       lineno);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("payoff table has no rows");
  PayoffMatrix pm;
  pm.payoffs.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      pm.payoffs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return pm;
}

inline PayoffMatrix parse_payoff_csv(const std::string& path, bool header = false) {
  std::ifstream in = detail::open_input(path);
  return parse_payoff_csv(in, header);
}

inline void write_payoff_csv(std::ostream& out, const PayoffMatrix& pm,
                             const std::vector<std::string>& header = {}) {
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
  }
  for (Eigen::Index i = 0; i < pm.payoffs.rows(); ++i) {
    for (Eigen::Index j = 0; j < pm.payoffs.cols(); ++j) {
      out << (j ? "," : "") << detail::format_double(pm.payoffs(i, j));
    }
    out << '\n';
  }
}

/// Random sparse classification data: each row keeps a feature with probability
/// `density`, values are N(0,1) scaled by 1/sqrt(expected nonzeros), and labels are the
/// sign of a planted linear model with a fraction `flip` of labels flipped.
inline SparseDataset make_sparse_dataset(Index n, Index d, double density, std::uint64_t seed,
                                         double flip = 0.1) {
  require(n >= 1 && d >= 1, "make_sparse_dataset: sizes must be >= 1");
  require(density > 0.0 && density <= 1.0, "make_sparse_dataset: density must lie in (0, 1]");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector w(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = normal(rng);
  const double scale = 1.0 / std::sqrt(std::max(1.0, density * static_cast<double>(d)));
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> labels;
  for (Index i = 0; i < n; ++i) {
    double score = 0.0;
    for (Index j = 0; j < d; ++j) {
      if (unit(rng) < density) {
        const double v = scale * normal(rng);
        entries.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
        score += v * w[static_cast<Eigen::Index>(j)];
      }
    }
    double label = score >= 0.0 ? 1.0 : -1.0;
    if (unit(rng) < flip) label = -label;
    labels.push_back(label);
  }
  SparseDataset ds;
  ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  ds.features.setFromTriplets(entries.begin(), entries.end());
  ds.features.makeCompressed();
  ds.labels = std::move(labels);
  return ds;
}

/// Synthetic payoffs r_{i,j} = mu_j + s_j * N(0,1) with mu_j uniform in
/// [mean_lo, mean_hi] and s_j uniform in [std_lo, std_hi].
inline PayoffMatrix make_payoffs(Index n, Index d, std::uint64_t seed, double mean_lo = 0.01,
                                 double mean_hi = 0.05, double std_lo = 0.5, double std_hi = 1.0) {
  require(n >= 1 && d >= 1, "make_payoffs: sizes must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> mean(mean_lo, mean_hi);
  std::uniform_real_distribution<double> spread(std_lo, std_hi);
  Vector mu(static_cast<Eigen::Index>(d)), sd(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    mu[j] = mean(rng);
    sd[j] = spread(rng);
  }
  PayoffMatrix pm;
  pm.payoffs.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < pm.payoffs.rows(); ++i) {
    for (Eigen::Index j = 0; j < pm.payoffs.cols(); ++j) pm.payoffs(i, j) = mu[j] + sd[j] * normal(rng);
  }
  return pm;
}

}  // namespace npag
