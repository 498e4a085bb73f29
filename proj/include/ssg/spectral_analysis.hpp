#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "ssg/eigensolve.hpp"
#include "ssg/matching_pairs.hpp"
#include "ssg/measures.hpp"

namespace ssg {

enum class MeasureRegime { mixed, line };

struct SpectralDimension {
  double value = 0.0;
  MeasureRegime regime = MeasureRegime::mixed;
};

/// ln 9 / (ln 3 - ln r) for eta < 1, ln 9 / (-ln(beta r)) for eta = 1.
/// Throws OutOfRegime when eta = 1 and beta <= 1/(9r).
SpectralDimension spectral_dimension(double eta, double beta, double r);
/// Same, with r replaced by the sequence's effective scale (its limit for general sequences).
SpectralDimension spectral_dimension(const MeasureSpec& spec, const CompatibleSequence& seq);

/// N(x) = #{k : lambda_k <= x}.
class CountingFunction {
 public:
  CountingFunction() = default;
  explicit CountingFunction(std::vector<double> eigenvalues,
                            double resolved_max = std::numeric_limits<double>::infinity());

  std::size_t operator()(double x) const;
  /// Left limit N(x-) = #{k : lambda_k < x}.
  std::size_t below(double x) const;

  const std::vector<double>& eigenvalues() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double resolved_max() const noexcept { return resolved_max_; }
  void set_resolved_max(double x) noexcept { resolved_max_ = x; }

 private:
  std::vector<double> values_;
  double resolved_max_ = std::numeric_limits<double>::infinity();
};

CountingFunction counting(const Spectrum& spectrum);

/// Compares the spectrum at s subdivisions with the one at 2s. Up to the returned
/// coarse eigenvalue, each counting function stays within a factor 1 + rel_shift
/// of the other evaluated at (1 + rel_shift) x, so clusters may drift by rel_shift
/// and counts may differ by rel_shift. Zero when the check fails at lambda_1.
double resolved_max(const Spectrum& coarse, const Spectrum& fine, double rel_shift = 0.01);

struct InterlacingReport {
  bool holds = false;
  /// max over x of N_D(x) - N_N(x (1 + rel_tie)).
  long excess_dirichlet = 0;
  /// max over x of N_N(x) - N_D(x (1 + rel_tie)) - boundary_size.
  long excess_neumann = 0;
};

/// N_D(x) <= N_N(x) <= N_D(x) + boundary_size at every eigenvalue of either list.
/// Eigenvalues shared by both problems (Dirichlet-Neumann pairs) come out of two
/// different solves, so the comparison side is evaluated at x (1 + rel_tie).
InterlacingReport check_interlacing(const CountingFunction& dirichlet, const CountingFunction& neumann,
                                    std::size_t boundary_size = 3, double rel_tie = 1e-10);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

/// [resolved_max / 10, resolved_max].
Window last_decade(const CountingFunction& n);

/// Points lo * 10^{j / per_decade} up to and including hi.
std::vector<double> geometric_grid(Window window, std::size_t per_decade);

struct WeylSample {
  double x = 0.0;
  std::size_t count = 0;
  double w = 0.0;
};

struct WeylJump {
  double x = 0.0;
  std::size_t multiplicity = 0;
  /// W(x) - W(x-), taken over the whole cluster.
  double jump = 0.0;
};

struct AsymptoticsReport {
  double d_s = 0.0;
  std::optional<double> fit_slope;
  Window window;
  std::vector<WeylSample> samples;
  std::vector<WeylJump> jumps;
  /// Exact extrema of W over the window, left limits included.
  double osc_min = 0.0;
  double osc_max = 0.0;
  double osc_ratio = 1.0;
};

/// W(x) = N(x) x^{-d_S/2}. The window is clipped to resolved_max; throws
/// EmptyWindow if nothing is left or N vanishes on it.
AsymptoticsReport weyl_oscillation(const CountingFunction& n, double d_s, Window window,
                                   std::size_t per_decade = 64, ClusterOptions clusters = {});

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t eigenvalues_in_window = 0;
  std::size_t grid_points = 0;
};

/// Least-squares line through (ln x, ln N(x)) on a geometric grid. Throws
/// TooFewPoints with fewer than 10 eigenvalues in the window.
ExponentFit fit_exponent(const CountingFunction& n, Window window, std::size_t per_decade = 64);

struct RenewalOptions {
  std::size_t points_per_window = 64;
  /// Number of samples of R(x) over [lambda_1, resolved_max].
  std::size_t r_samples = 256;
};

struct RenewalSample {
  double t = 0.0;
  std::size_t window = 0;
  double f = 0.0;
};

struct RenewalReport {
  double period = 0.0;
  double d_s = 0.0;
  /// Effective contraction beta * r_eff; f(t - T) is evaluated through N(scale * e^{2t}).
  double scale = 0.0;
  std::vector<RenewalSample> samples;
  /// sup_t |f_{n+1}(t) - f_n(t)| for consecutive resolved windows n, n+1.
  std::vector<double> window_gaps;
  /// Last resolved window.
  std::vector<double> g_estimate;
  std::vector<std::pair<double, double>> r_samples;
  /// max over the grid of |f(t) - f(t - T) - e^{-t d_S} R(e^{2t})|.
  double identity_error = 0.0;
  bool gaps_decreasing_last3 = false;
};

/// f(t) = e^{-t d_S} N(e^{2t}) cut into windows of length T = -ln sqrt(beta r).
/// Throws WrongRegime unless eta = 1 and the sequence is constant or periodic.
RenewalReport renewal_analysis(const CountingFunction& n, const MeasureSpec& spec,
                               const CompatibleSequence& seq, RenewalOptions options = {});

}  // namespace ssg
