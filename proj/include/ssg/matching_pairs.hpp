#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace ssg {

/// Resistance factors (r, rho) for the small triangles and the joining lines of
/// one refinement step. They satisfy 5r/3 + rho = 1, which makes the refined
/// network electrically equivalent to the unrefined triangle.
struct MatchingPair {
  double r = 0.0;
  double rho = 0.0;

  friend bool operator==(const MatchingPair&, const MatchingPair&) = default;
};

/// Builds (r, 1 - 5r/3). Throws NonPositive for r <= 0 and RhoNegative for r > 3/5.
MatchingPair make_matching_pair(double r);

enum class SequenceKind { constant, periodic, general };

/// Ordered matching pairs (r_i, rho_i), i >= 1. Constant and periodic sequences
/// extend indefinitely; general sequences hold a finite prefix.
class CompatibleSequence {
 public:
  static CompatibleSequence constant(double r);
  static CompatibleSequence periodic(const std::vector<double>& rs);
  static CompatibleSequence general(const std::vector<double>& rs, double limit_r);

  SequenceKind kind() const noexcept { return kind_; }
  /// Period for periodic sequences, 1 for constant ones, prefix length for general ones.
  std::size_t period() const noexcept { return pairs_.size(); }
  double limit_r() const noexcept { return limit_r_; }

  /// Pair number i (1-based). Throws InsufficientSequence past the end of a general prefix.
  const MatchingPair& pair(std::size_t i) const;
  /// Whether the first m pairs exist.
  bool covers(std::size_t m) const noexcept;
  /// Explicitly stored pairs (one period for constant/periodic).
  const std::vector<MatchingPair>& stored_pairs() const noexcept { return pairs_; }

  /// Geometric-mean scale delta_p^{1/p} over one period; equals r for constant sequences.
  double effective_r() const;

  friend bool operator==(const CompatibleSequence&, const CompatibleSequence&) = default;

 private:
  CompatibleSequence(SequenceKind kind, std::vector<MatchingPair> pairs, double limit_r)
      : kind_(kind), pairs_(std::move(pairs)), limit_r_(limit_r) {}

  SequenceKind kind_;
  std::vector<MatchingPair> pairs_;
  double limit_r_;
};

/// delta_k = r_1...r_k and gamma_k = r_1...r_{k-1} rho_k for k = 1..m.
struct ScalingTable {
  std::vector<double> delta;
  std::vector<double> gamma;

  /// delta_k for k in 0..m, with delta_0 = 1.
  double delta_at(std::size_t k) const { return k == 0 ? 1.0 : delta.at(k - 1); }
  double gamma_at(std::size_t k) const { return gamma.at(k - 1); }
};

ScalingTable scalings(const CompatibleSequence& seq, std::size_t m);

/// Drops the first n pairs. Constant sequences are their own shift; periodic
/// sequences rotate their period. Throws InsufficientSequence when a general
/// prefix is shorter than n.
CompatibleSequence shift(const CompatibleSequence& seq, std::size_t n);

enum class ConditionVerdict { satisfied_at_truncation, diverging_trend };

/// Finite-truncation view of the summability condition sum |r - r_i| < inf and of
/// the resulting bounds kappa_1 r^m <= delta_m^{(n)} <= kappa_2 r^m.
struct ConditionReport {
  std::size_t truncation = 0;
  double partial_sum = 0.0;
  /// Extrema of a_m = prod_{i<=m} r_i / r over m = 0..M (a_0 = 1 included).
  double kappa_tilde_1 = 1.0;
  double kappa_tilde_2 = 1.0;
  double kappa_1 = 1.0;
  double kappa_2 = 1.0;
  /// Observed range of rho_{n+k}/rho_k over the prefix; empty when some rho is zero.
  std::optional<double> rho_ratio_min;
  std::optional<double> rho_ratio_max;
  ConditionVerdict verdict = ConditionVerdict::satisfied_at_truncation;
};

/// Throws LimitOutOfRange if the declared limit is outside [1/3, 3/5].
ConditionReport check_conditions(const CompatibleSequence& seq, std::size_t truncation);

}  // namespace ssg
