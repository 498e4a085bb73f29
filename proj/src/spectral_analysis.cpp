#include "ssg/spectral_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssg/error.hpp"

namespace ssg {

namespace {

const double kLn9 = std::log(9.0);

double weyl(std::size_t count, double x, double d_s) {
  return static_cast<double>(count) * std::pow(x, -0.5 * d_s);
}

}  // namespace

SpectralDimension spectral_dimension(double eta, double beta, double r) {
  if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorCode::invalid_argument, "eta must lie in (0, 1]");
  if (!(beta > 0.0 && beta < 1.0 / 3.0)) throw Error(ErrorCode::invalid_argument, "beta must lie in (0, 1/3)");
  if (!(r > 0.0)) throw Error(ErrorCode::non_positive, "r must be > 0");
  if (eta < 1.0) return {kLn9 / (std::log(3.0) - std::log(r)), MeasureRegime::mixed};
  if (!(beta > 1.0 / (9.0 * r))) {
    throw Error(ErrorCode::out_of_regime,
                "line measure needs beta > 1/(9r) = " + std::to_string(1.0 / (9.0 * r)) + ", got " + std::to_string(beta));
  }
  return {kLn9 / -std::log(beta * r), MeasureRegime::line};
}

SpectralDimension spectral_dimension(const MeasureSpec& spec, const CompatibleSequence& seq) {
  return spectral_dimension(spec.eta(), spec.beta(), seq.effective_r());
}

CountingFunction::CountingFunction(std::vector<double> eigenvalues, double resolved_max)
    : values_(std::move(eigenvalues)), resolved_max_(resolved_max) {
  if (!std::is_sorted(values_.begin(), values_.end())) {
    throw Error(ErrorCode::invalid_argument, "eigenvalues must be sorted ascending");
  }
}

std::size_t CountingFunction::operator()(double x) const {
  return static_cast<std::size_t>(std::upper_bound(values_.begin(), values_.end(), x) - values_.begin());
}

std::size_t CountingFunction::below(double x) const {
  return static_cast<std::size_t>(std::lower_bound(values_.begin(), values_.end(), x) - values_.begin());
}

CountingFunction counting(const Spectrum& spectrum) {
  return CountingFunction(std::vector<double>(spectrum.values.data(), spectrum.values.data() + spectrum.values.size()));
}

double resolved_max(const Spectrum& coarse, const Spectrum& fine, double rel_shift) {
  const CountingFunction nc = counting(coarse);
  const CountingFunction nf = counting(fine);
  const double grow = 1.0 + rel_shift;
  // Each count may exceed the other, evaluated (1 + eps) further right, by at
  // most a factor 1 + eps. Violations can only start where the left side jumps.
  double first_bad = std::numeric_limits<double>::infinity();
  auto scan = [&](const CountingFunction& a, const CountingFunction& b) {
    for (double x : a.eigenvalues()) {
      if (x >= first_bad) break;
      if (static_cast<double>(a(x)) > grow * static_cast<double>(b(grow * x))) {
        first_bad = x;
        break;
      }
    }
  };
  scan(nc, nf);
  scan(nf, nc);
  const auto& values = nc.eigenvalues();
  const auto it = std::lower_bound(values.begin(), values.end(), first_bad);
  return it == values.begin() ? 0.0 : *(it - 1);
}

Window last_decade(const CountingFunction& n) {
  double top = n.resolved_max();
  if (!std::isfinite(top)) top = n.eigenvalues().empty() ? 0.0 : n.eigenvalues().back();
  return {top / 10.0, top};
}

std::vector<double> geometric_grid(Window window, std::size_t per_decade) {
  if (!(window.lo > 0.0) || !(window.hi >= window.lo)) {
    throw Error(ErrorCode::empty_window, "window must satisfy 0 < lo <= hi");
  }
  if (per_decade == 0) throw Error(ErrorCode::invalid_argument, "grid density must be >= 1");
  const double decades = std::log10(window.hi / window.lo);
  const auto steps = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade) - 1e-9));
  std::vector<double> grid;
  grid.reserve(steps + 1);
  grid.push_back(window.lo);
  for (std::size_t j = 1; j < steps; ++j) {
    grid.push_back(window.lo * std::pow(window.hi / window.lo, static_cast<double>(j) / static_cast<double>(steps)));
  }
  if (steps > 0) grid.push_back(window.hi);
  return grid;
}

InterlacingReport check_interlacing(const CountingFunction& dirichlet, const CountingFunction& neumann,
                                    std::size_t boundary_size, double rel_tie) {
  InterlacingReport report;
  const auto extra = static_cast<long>(boundary_size);
  auto probe = [&](double x) {
    const double wide = x + rel_tie * std::abs(x);
    const auto d = static_cast<long>(dirichlet(x));
    const auto n = static_cast<long>(neumann(x));
    report.excess_dirichlet = std::max(report.excess_dirichlet, d - static_cast<long>(neumann(wide)));
    report.excess_neumann = std::max(report.excess_neumann, n - static_cast<long>(dirichlet(wide)) - extra);
  };
  for (double x : dirichlet.eigenvalues()) probe(x);
  for (double x : neumann.eigenvalues()) probe(x);
  report.holds = report.excess_dirichlet <= 0 && report.excess_neumann <= 0;
  return report;
}

AsymptoticsReport weyl_oscillation(const CountingFunction& n, double d_s, Window window, std::size_t per_decade,
                                   ClusterOptions clusters) {
  window.hi = std::min(window.hi, n.resolved_max());
  if (!(window.lo > 0.0) || !(window.hi > window.lo)) {
    throw Error(ErrorCode::empty_window, "window is empty after clipping to the resolved range");
  }
  if (n(window.hi) == 0) throw Error(ErrorCode::empty_window, "no eigenvalue at or below the window's upper end");

  AsymptoticsReport report;
  report.d_s = d_s;
  report.window = window;
  for (double x : geometric_grid(window, per_decade)) report.samples.push_back({x, n(x), weyl(n(x), x, d_s)});

  // W decreases between eigenvalues, so its extrema sit at the window ends and
  // on either side of each jump.
  double lo = std::min(weyl(n(window.lo), window.lo, d_s), weyl(n(window.hi), window.hi, d_s));
  double hi = std::max(weyl(n(window.lo), window.lo, d_s), weyl(n(window.hi), window.hi, d_s));
  const auto& values = n.eigenvalues();
  const auto first = std::upper_bound(values.begin(), values.end(), window.lo);
  const auto last = std::upper_bound(values.begin(), values.end(), window.hi);
  const Eigen::VectorXd inside = Eigen::Map<const Eigen::VectorXd>(&*first, last - first);
  const auto offset = static_cast<std::size_t>(first - values.begin());
  for (const auto& cluster : cluster_multiplicities(inside, clusters)) {
    const double bottom = values[offset + cluster.members.front()];
    const double top = values[offset + cluster.members.back()];
    const double before = weyl(n.below(bottom), bottom, d_s);
    const double after = weyl(n(top), top, d_s);
    lo = std::min(lo, before);
    hi = std::max(hi, after);
    report.jumps.push_back({cluster.representative, cluster.count, after - before});
  }
  report.osc_min = lo;
  report.osc_max = hi;
  report.osc_ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return report;
}

ExponentFit fit_exponent(const CountingFunction& n, Window window, std::size_t per_decade) {
  if (!(window.lo > 0.0) || !(window.hi > window.lo)) throw Error(ErrorCode::empty_window, "window must satisfy 0 < lo < hi");
  ExponentFit fit;
  fit.eigenvalues_in_window = n(window.hi) - n.below(window.lo);
  if (fit.eigenvalues_in_window < 10) {
    throw Error(ErrorCode::too_few_points,
                "window holds " + std::to_string(fit.eigenvalues_in_window) + " eigenvalues, need at least 10");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double count = 0.0;
  for (double x : geometric_grid(window, per_decade)) {
    const std::size_t k = n(x);
    if (k == 0) continue;
    const double lx = std::log(x);
    const double ly = std::log(static_cast<double>(k));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    count += 1.0;
  }
  fit.grid_points = static_cast<std::size_t>(count);
  const double denom = count * sxx - sx * sx;
  if (fit.grid_points < 2 || !(denom > 0.0)) throw Error(ErrorCode::too_few_points, "degenerate grid");
  fit.slope = (count * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / count;
  return fit;
}

RenewalReport renewal_analysis(const CountingFunction& n, const MeasureSpec& spec, const CompatibleSequence& seq,
                               RenewalOptions options) {
  if (spec.eta() != 1.0) throw Error(ErrorCode::wrong_regime, "renewal analysis needs the line measure (eta = 1)");
  if (seq.kind() == SequenceKind::general) {
    throw Error(ErrorCode::wrong_regime, "renewal analysis needs a constant or periodic sequence");
  }
  if (options.points_per_window == 0) throw Error(ErrorCode::invalid_argument, "points_per_window must be >= 1");

  RenewalReport report;
  report.scale = spec.beta() * seq.effective_r();
  report.d_s = spectral_dimension(spec, seq).value;
  report.period = -std::log(std::sqrt(report.scale));
  const double d = report.d_s;
  const double period = report.period;

  double top = n.resolved_max();
  if (!std::isfinite(top)) top = n.eigenvalues().empty() ? 1.0 : n.eigenvalues().back();
  const double t_max = top > 1.0 ? 0.5 * std::log(top) : 0.0;
  const auto windows = static_cast<std::size_t>(std::floor(t_max / period));

  const std::size_t p = options.points_per_window;
  std::vector<std::vector<double>> values(windows, std::vector<double>(p));
  for (std::size_t w = 0; w < windows; ++w) {
    for (std::size_t j = 0; j < p; ++j) {
      const double t = (static_cast<double>(w) + static_cast<double>(j) / static_cast<double>(p)) * period;
      const double x = std::exp(2.0 * t);
      const double ft = std::exp(-t * d) * static_cast<double>(n(x));
      values[w][j] = ft;
      report.samples.push_back({t, w, ft});

      // f(t - T) through N(scale x): e^{T d} = scale^{-d/2} = 3 for the line regime.
      const double previous = std::exp(-(t - period) * d) * static_cast<double>(n(report.scale * x));
      const double remainder = static_cast<double>(n(x)) - 3.0 * static_cast<double>(n(report.scale * x));
      const double err = std::abs(ft - previous - std::exp(-t * d) * remainder);
      report.identity_error = std::max(report.identity_error, err);
    }
  }
  for (std::size_t w = 0; w + 1 < windows; ++w) {
    double gap = 0.0;
    for (std::size_t j = 0; j < p; ++j) gap = std::max(gap, std::abs(values[w + 1][j] - values[w][j]));
    report.window_gaps.push_back(gap);
  }
  if (windows > 0) report.g_estimate = values.back();
  const auto& g = report.window_gaps;
  report.gaps_decreasing_last3 = g.size() >= 2 && g[g.size() - 1] < g[g.size() - 2];

  if (!n.eigenvalues().empty() && top > n.eigenvalues().front() && options.r_samples >= 2) {
    const double lo = n.eigenvalues().front();
    for (std::size_t j = 0; j < options.r_samples; ++j) {
      const double x = lo * std::pow(top / lo, static_cast<double>(j) / static_cast<double>(options.r_samples - 1));
      report.r_samples.emplace_back(x, static_cast<double>(n(x)) - 3.0 * static_cast<double>(n(report.scale * x)));
    }
  }
  return report;
}

}  // namespace ssg
