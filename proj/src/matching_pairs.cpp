#include "ssg/matching_pairs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssg/error.hpp"

namespace ssg {

namespace {

constexpr double kMaxR = 3.0 / 5.0;

std::vector<MatchingPair> pairs_from(const std::vector<double>& rs) {
  std::vector<MatchingPair> out;
  out.reserve(rs.size());
  for (double r : rs) out.push_back(make_matching_pair(r));
  return out;
}

}  // namespace

MatchingPair make_matching_pair(double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::non_positive, "r must be > 0, got " + std::to_string(r));
  if (r > kMaxR + 1e-15) {
    throw Error(ErrorCode::rho_negative, "r must be <= 3/5 so that rho >= 0, got " + std::to_string(r));
  }
  return {r, std::max(0.0, 1.0 - 5.0 * r / 3.0)};
}

CompatibleSequence CompatibleSequence::constant(double r) {
  return CompatibleSequence(SequenceKind::constant, {make_matching_pair(r)}, r);
}

CompatibleSequence CompatibleSequence::periodic(const std::vector<double>& rs) {
  if (rs.empty()) throw Error(ErrorCode::invalid_argument, "periodic sequence needs at least one r");
  CompatibleSequence seq(SequenceKind::periodic, pairs_from(rs), 0.0);
  seq.limit_r_ = seq.effective_r();
  return seq;
}

CompatibleSequence CompatibleSequence::general(const std::vector<double>& rs, double limit_r) {
  return CompatibleSequence(SequenceKind::general, pairs_from(rs), limit_r);
}

const MatchingPair& CompatibleSequence::pair(std::size_t i) const {
  if (i == 0) throw Error(ErrorCode::invalid_argument, "pair index is 1-based");
  if (kind_ == SequenceKind::general) {
    if (i > pairs_.size()) {
      throw Error(ErrorCode::insufficient_sequence,
                  "pair " + std::to_string(i) + " requested but only " + std::to_string(pairs_.size()) +
                      " given");
    }
    return pairs_[i - 1];
  }
  return pairs_[(i - 1) % pairs_.size()];
}

bool CompatibleSequence::covers(std::size_t m) const noexcept {
  return kind_ != SequenceKind::general || m <= pairs_.size();
}

double CompatibleSequence::effective_r() const {
  if (kind_ == SequenceKind::general) return limit_r_;
  double log_sum = 0.0;
  for (const auto& p : pairs_) log_sum += std::log(p.r);
  return std::exp(log_sum / static_cast<double>(pairs_.size()));
}

ScalingTable scalings(const CompatibleSequence& seq, std::size_t m) {
  if (!seq.covers(m)) {
    throw Error(ErrorCode::insufficient_sequence,
                "level " + std::to_string(m) + " needs " + std::to_string(m) + " matching pairs");
  }
  ScalingTable table;
  table.delta.reserve(m);
  table.gamma.reserve(m);
  double delta = 1.0;
  for (std::size_t k = 1; k <= m; ++k) {
    const auto& p = seq.pair(k);
    table.gamma.push_back(delta * p.rho);
    delta *= p.r;
    table.delta.push_back(delta);
  }
  return table;
}

CompatibleSequence shift(const CompatibleSequence& seq, std::size_t n) {
  switch (seq.kind()) {
    case SequenceKind::constant:
      return seq;
    case SequenceKind::periodic: {
      std::vector<double> rs;
      const auto& pairs = seq.stored_pairs();
      for (std::size_t k = 0; k < pairs.size(); ++k) rs.push_back(pairs[(n + k) % pairs.size()].r);
      return CompatibleSequence::periodic(rs);
    }
    case SequenceKind::general: {
      const auto& pairs = seq.stored_pairs();
      if (n > pairs.size()) {
        throw Error(ErrorCode::insufficient_sequence,
                    "cannot shift by " + std::to_string(n) + " a prefix of length " + std::to_string(pairs.size()));
      }
      std::vector<double> rs;
      for (std::size_t k = n; k < pairs.size(); ++k) rs.push_back(pairs[k].r);
      return CompatibleSequence::general(rs, seq.limit_r());
    }
  }
  return seq;
}

ConditionReport check_conditions(const CompatibleSequence& seq, std::size_t truncation) {
  const double r = seq.limit_r();
  if (!(r >= 1.0 / 3.0 - 1e-15 && r <= kMaxR + 1e-15)) {
    throw Error(ErrorCode::limit_out_of_range, "limit_r must lie in [1/3, 3/5], got " + std::to_string(r));
  }
  if (truncation == 0) throw Error(ErrorCode::invalid_argument, "truncation must be >= 1");
  if (!seq.covers(truncation)) {
    throw Error(ErrorCode::insufficient_sequence, "truncation exceeds the stored prefix");
  }

  ConditionReport report;
  report.truncation = truncation;
  std::vector<double> partial(truncation + 1, 0.0);
  double a = 1.0;
  double lo = 1.0;
  double hi = 1.0;
  for (std::size_t i = 1; i <= truncation; ++i) {
    const double ri = seq.pair(i).r;
    partial[i] = partial[i - 1] + std::abs(r - ri);
    a *= ri / r;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  report.partial_sum = partial[truncation];
  report.kappa_tilde_1 = lo;
  report.kappa_tilde_2 = hi;
  report.kappa_1 = lo / hi;
  report.kappa_2 = hi / lo;

  bool rho_positive = true;
  for (std::size_t i = 1; i <= truncation; ++i) rho_positive = rho_positive && seq.pair(i).rho > 0.0;
  if (rho_positive && truncation >= 2) {
    double rmin = INFINITY;
    double rmax = -INFINITY;
    for (std::size_t k = 1; k <= truncation; ++k) {
      for (std::size_t n = 1; n + k <= truncation; ++n) {
        const double q = seq.pair(n + k).rho / seq.pair(k).rho;
        rmin = std::min(rmin, q);
        rmax = std::max(rmax, q);
      }
    }
    report.rho_ratio_min = rmin;
    report.rho_ratio_max = rmax;
  }

  // A summable series puts almost none of its mass in the second half of the
  // prefix; a series with non-decaying terms puts about half there.
  const double tail = partial[truncation] - partial[(truncation + 1) / 2];
  if (truncation >= 2 && report.partial_sum > 1e-12 && tail > 0.1 * report.partial_sum) {
    report.verdict = ConditionVerdict::diverging_trend;
  }
  return report;
}

}  // namespace ssg
