#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cq/error.hpp"
#include "cq/graph.hpp"

// Clustering comparison indices over a contingency table. The first labeling
// is the reference (ground truth C), the second the prediction (C').
// Entropies are in nats.

namespace cq {

/// n_ij = |C_i ∩ C'_j| with row sums a_i and column sums b_j.
class ContingencyTable {
public:
  ContingencyTable(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), counts_(rows * cols, 0), row_sums_(rows, 0), col_sums_(cols, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t operator()(std::size_t i, std::size_t j) const { return counts_[i * cols_ + j]; }
  std::span<const std::uint64_t> row_sums() const noexcept { return row_sums_; }
  std::span<const std::uint64_t> col_sums() const noexcept { return col_sums_; }

  void add(std::size_t i, std::size_t j, std::uint64_t count = 1) {
    counts_[i * cols_ + j] += count;
    row_sums_[i] += count;
    col_sums_[j] += count;
    total_ += count;
  }

  ContingencyTable transposed() const {
    ContingencyTable t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (auto c = (*this)(i, j)) t.add(j, i, c);
    return t;
  }

  /// True when both partitions are the same up to renaming clusters: every
  /// non-empty row and column holds exactly one non-zero cell.
  bool is_bijective() const {
    std::vector<int> row_nz(rows_, 0), col_nz(cols_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j)) {
          ++row_nz[i];
          ++col_nz[j];
        }
    return std::all_of(row_nz.begin(), row_nz.end(), [](int c) { return c <= 1; }) &&
           std::all_of(col_nz.begin(), col_nz.end(), [](int c) { return c <= 1; });
  }

  friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;

private:
  std::size_t rows_, cols_;
  std::vector<std::uint64_t> counts_, row_sums_, col_sums_;
  std::uint64_t total_ = 0;
};

inline ContingencyTable contingency(const ClusterLabeling& truth, const ClusterLabeling& predicted) {
  if (truth.size() != predicted.size())
    throw InvalidArgument("labelings differ in length: " + std::to_string(truth.size()) + " vs " +
                          std::to_string(predicted.size()));
  ContingencyTable t(truth.cluster_count(), predicted.cluster_count());
  for (std::size_t v = 0; v < truth.size(); ++v) t.add(truth[v], predicted[v]);
  return t;
}

/// C(x, 2) in 64 bits; throws past the overflow-safe range.
inline std::uint64_t pairs_of(std::uint64_t x) {
  if (x > 4'000'000'000ULL) throw InvalidArgument("count too large for 64-bit pair counting");
  return x < 2 ? 0 : x * (x - 1) / 2;
}

struct PairCounts {
  std::uint64_t together_both = 0;  // sum_ij C(n_ij, 2)
  std::uint64_t together_rows = 0;  // S_a
  std::uint64_t together_cols = 0;  // S_b
  std::uint64_t all = 0;            // C(n, 2)
};

inline PairCounts pair_counts(const ContingencyTable& t) {
  PairCounts p;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) p.together_both += pairs_of(t(i, j));
  for (auto a : t.row_sums()) p.together_rows += pairs_of(a);
  for (auto b : t.col_sums()) p.together_cols += pairs_of(b);
  p.all = pairs_of(t.total());
  return p;
}

/// A score plus whether a degenerate-denominator convention decided it.
struct Scored {
  double value = 0.0;
  bool degenerate = false;
};

inline double rand_index(const ContingencyTable& t) {
  if (t.total() < 2) throw InvalidArgument("rand index needs n >= 2");
  const PairCounts p = pair_counts(t);
  const std::uint64_t apart_both = p.all - p.together_rows - p.together_cols + p.together_both;
  return static_cast<double>(p.together_both + apart_both) / static_cast<double>(p.all);
}

inline Scored adjusted_rand_index_scored(const ContingencyTable& t) {
  if (t.total() < 2) throw InvalidArgument("adjusted rand index needs n >= 2");
  const PairCounts p = pair_counts(t);
  const double sa = static_cast<double>(p.together_rows), sb = static_cast<double>(p.together_cols);
  const double expected = sa * sb / static_cast<double>(p.all);
  const double denom = 0.5 * (sa + sb) - expected;
  // Vanishes only when both sides are all-singletons or both single-cluster.
  if (denom == 0.0) return {t.is_bijective() ? 1.0 : 0.0, true};
  return {(static_cast<double>(p.together_both) - expected) / denom, false};
}

inline double adjusted_rand_index(const ContingencyTable& t) { return adjusted_rand_index_scored(t).value; }

inline Scored fowlkes_mallows_scored(const ContingencyTable& t) {
  if (t.total() < 2) throw InvalidArgument("fowlkes-mallows needs n >= 2");
  const PairCounts p = pair_counts(t);
  if (p.together_rows == 0 || p.together_cols == 0) return {0.0, true};
  return {static_cast<double>(p.together_both) /
              std::sqrt(static_cast<double>(p.together_rows) * static_cast<double>(p.together_cols)),
          false};
}

inline double fowlkes_mallows(const ContingencyTable& t) { return fowlkes_mallows_scored(t).value; }

/// -sum (s/n) ln(s/n), with 0 ln 0 = 0.
inline double entropy(std::span<const std::uint64_t> sums, std::uint64_t n) {
  if (n == 0) return 0.0;
  const double nn = static_cast<double>(n);
  double h = 0.0;
  for (auto s : sums)
    if (s > 0) {
      const double p = static_cast<double>(s) / nn;
      h -= p * std::log(p);
    }
  return std::max(h, 0.0);
}

inline double mutual_information(const ContingencyTable& t) {
  const double n = static_cast<double>(t.total());
  double mi = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j)
      if (auto nij = t(i, j)) {
        const double c = static_cast<double>(nij);
        mi += c / n *
              std::log(n * c / (static_cast<double>(t.row_sums()[i]) * static_cast<double>(t.col_sums()[j])));
      }
  return std::max(mi, 0.0);
}

/// Expected mutual information under the permutation model: the row and
/// column sums are fixed and n_ij is hypergeometric.
inline double expected_mutual_information(const ContingencyTable& t) {
  const std::uint64_t n = t.total();
  if (n == 0) return 0.0;
  std::vector<double> log_fact(n + 1);
  for (std::uint64_t i = 0; i <= n; ++i) log_fact[i] = std::lgamma(static_cast<double>(i) + 1.0);
  const double nn = static_cast<double>(n);
  double emi = 0.0;
  for (auto a : t.row_sums()) {
    if (a == 0) continue;
    for (auto b : t.col_sums()) {
      if (b == 0) continue;
      const double fixed = log_fact[a] + log_fact[b] + log_fact[n - a] + log_fact[n - b] - log_fact[n];
      const std::uint64_t lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(a + b) - static_cast<std::int64_t>(n));
      const std::uint64_t hi = std::min(a, b);
      const double ab = static_cast<double>(a) * static_cast<double>(b);
      for (std::uint64_t m = lo; m <= hi; ++m) {
        const double md = static_cast<double>(m);
        const double log_p =
            fixed - log_fact[m] - log_fact[a - m] - log_fact[b - m] - log_fact[n - a - b + m];
        emi += md / nn * std::log(nn * md / ab) * std::exp(log_p);
      }
    }
  }
  return emi;
}

/// (MI - EMI) / (mean(H_rows, H_cols) - EMI).
inline Scored adjusted_mutual_information_scored(const ContingencyTable& t) {
  const double h_rows = entropy(t.row_sums(), t.total());
  const double h_cols = entropy(t.col_sums(), t.total());
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double denom = 0.5 * (h_rows + h_cols) - emi;
  if (std::abs(denom) <= 1e-12 * std::max(1.0, 0.5 * (h_rows + h_cols)))
    return {t.is_bijective() ? 1.0 : 0.0, true};
  return {(mi - emi) / denom, false};
}

inline double adjusted_mutual_information(const ContingencyTable& t) {
  return adjusted_mutual_information_scored(t).value;
}

/// Arithmetic-mean NMI; exported alongside the CQ scores, not one of them.
inline double normalized_mutual_information(const ContingencyTable& t) {
  const double h = 0.5 * (entropy(t.row_sums(), t.total()) + entropy(t.col_sums(), t.total()));
  return h == 0.0 ? 1.0 : std::min(1.0, mutual_information(t) / h);
}

/// 1 - H(rows | cols) / H(rows); 1 when H(rows) = 0. Each predicted cluster
/// (column) should contain one true cluster (row).
inline double homogeneity(const ContingencyTable& t) {
  const double h = entropy(t.row_sums(), t.total());
  if (h == 0.0) return 1.0;
  const double n = static_cast<double>(t.total());
  double cond = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j)
      if (auto nij = t(i, j)) {
        const double c = static_cast<double>(nij);
        cond -= c / n * std::log(c / static_cast<double>(t.col_sums()[j]));
      }
  return std::clamp(1.0 - cond / h, 0.0, 1.0);
}

/// Homogeneity with the roles swapped, so completeness(C, C') is
/// bit-identical to homogeneity(C', C).
inline double completeness(const ContingencyTable& t) { return homogeneity(t.transposed()); }

struct HomogeneityCompleteness {
  double homogeneity = 1.0;
  double completeness = 1.0;
};

inline HomogeneityCompleteness homogeneity_completeness(const ContingencyTable& t) {
  return {homogeneity(t), completeness(t)};
}

/// The five clustering-quality scores for one (ground truth, geometric
/// clustering) pair, plus provenance.
struct CQReport {
  double cq_ari = 0.0;
  double cq_ami = 0.0;
  double cq_fmi = 0.0;
  double cq_hom = 0.0;
  double cq_cmp = 0.0;

  std::size_t n = 0;
  std::size_t k = 0;            // ground-truth clusters
  std::size_t k_predicted = 0;  // geometric clusters
  std::uint64_t seed = 0;
  std::string layout;
  /// Degenerate-denominator conventions that fired, e.g. "ari_degenerate".
  std::vector<std::string> flags;

  static constexpr const char* ami_normalizer = "arithmetic";
};

inline constexpr const char* kMetricNames[] = {"cq_ari", "cq_ami", "cq_fmi", "cq_hom", "cq_cmp"};

inline double metric_value(const CQReport& r, std::size_t metric) {
  switch (metric) {
    case 0: return r.cq_ari;
    case 1: return r.cq_ami;
    case 2: return r.cq_fmi;
    case 3: return r.cq_hom;
    case 4: return r.cq_cmp;
  }
  throw InvalidArgument("metric index out of range");
}

inline CQReport cq_scores(const ClusterLabeling& ground_truth, const ClusterLabeling& geometric) {
  const ContingencyTable t = contingency(ground_truth, geometric);
  CQReport r;
  r.n = ground_truth.size();
  r.k = ground_truth.cluster_count();
  r.k_predicted = geometric.cluster_count();
  const Scored ari = adjusted_rand_index_scored(t);
  const Scored ami = adjusted_mutual_information_scored(t);
  const Scored fmi = fowlkes_mallows_scored(t);
  r.cq_ari = ari.value;
  r.cq_ami = ami.value;
  r.cq_fmi = fmi.value;
  r.cq_hom = homogeneity(t);
  r.cq_cmp = completeness(t);
  if (ari.degenerate) r.flags.emplace_back("ari_degenerate");
  if (ami.degenerate) r.flags.emplace_back("ami_degenerate");
  if (fmi.degenerate) r.flags.emplace_back("fmi_degenerate");
  return r;
}

}  // namespace cq
