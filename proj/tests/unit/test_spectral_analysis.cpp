#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ssg/error.hpp"
#include "ssg/spectral_analysis.hpp"

using namespace ssg;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::invalid_argument;
}

Spectrum make_spectrum(std::vector<double> v) {
  Spectrum s;
  s.values = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  return s;
}

}  // namespace

TEST_CASE("spectral dimension") {
  CHECK(spectral_dimension(0.5, 0.2, 0.6).value == doctest::Approx(std::log(9.0) / std::log(5.0)).epsilon(1e-14));
  const auto line = spectral_dimension(1.0, 0.25, 0.5);
  CHECK(line.value == doctest::Approx(std::log(9.0) / std::log(8.0)).epsilon(1e-14));
  CHECK(line.regime == MeasureRegime::line);
  CHECK(code_of([] { spectral_dimension(1.0, 0.2, 0.5); }) == ErrorCode::out_of_regime);
  CHECK(spectral_dimension(MeasureSpec(0.5, 0.2), CompatibleSequence::periodic({0.4, 0.6})).value ==
        doctest::Approx(std::log(9.0) / (std::log(3.0) - 0.5 * std::log(0.24))));
}

TEST_CASE("counting function") {
  const CountingFunction n({1.0, 2.0, 2.0, 5.0});
  CHECK(n(0.5) == 0);
  CHECK(n(2.0) == 3);
  CHECK(n.below(2.0) == 1);
  CHECK(n(1e300) == 4);
  CHECK(code_of([] { CountingFunction({2.0, 1.0}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("resolved max") {
  std::vector<double> coarse;
  std::vector<double> fine;
  for (int k = 1; k <= 100; ++k) {
    coarse.push_back(k);
    fine.push_back(k <= 50 ? k * 1.001 : k * 1.2);
  }
  const double r = resolved_max(make_spectrum(coarse), make_spectrum(fine), 0.01);
  CHECK(r >= 40.0);
  CHECK(r < 55.0);
  CHECK(resolved_max(make_spectrum(coarse), make_spectrum(coarse), 0.01) == 100.0);
  std::vector<double> shifted(coarse);
  for (auto& x : shifted) x *= 2.0;
  CHECK(resolved_max(make_spectrum(coarse), make_spectrum(shifted), 0.01) == 0.0);
}

TEST_CASE("grid") {
  const auto g = geometric_grid({1.0, 100.0}, 4);
  CHECK(g.size() == 9);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == doctest::Approx(100.0));
  CHECK(code_of([] { geometric_grid({2.0, 1.0}, 4); }) == ErrorCode::empty_window);
  CountingFunction n({1.0, 2.0}, 50.0);
  CHECK(last_decade(n).lo == doctest::Approx(5.0));
  CHECK(last_decade(n).hi == 50.0);
}

TEST_CASE("weyl oscillation") {
  std::vector<double> v{10.0, 20.0, 20.0, 20.0, 35.0, 60.0, 60.0, 90.0};
  const CountingFunction n(v);
  const double d = 1.3;
  const auto rep = weyl_oscillation(n, d, {12.0, 80.0}, 32);
  CHECK(rep.window.hi == 80.0);
  CHECK(rep.osc_ratio > 1.0);
  REQUIRE(rep.jumps.size() == 3);
  for (const auto& j : rep.jumps) {
    const auto mult = std::count(v.begin(), v.end(), j.x);
    CHECK(j.multiplicity == static_cast<std::size_t>(mult));
    CHECK(j.jump == doctest::Approx(mult * std::pow(j.x, -d / 2)).epsilon(1e-12));
  }
  // Direct recomputation of W on the samples and of its extrema at the jump points.
  double lo = INFINITY;
  double hi = 0.0;
  for (const auto& s : rep.samples) {
    const auto count = std::upper_bound(v.begin(), v.end(), s.x) - v.begin();
    CHECK(s.count == static_cast<std::size_t>(count));
    CHECK(s.w == doctest::Approx(count * std::pow(s.x, -d / 2)).epsilon(1e-14));
  }
  for (double x : {12.0, 20.0, 35.0, 60.0, 80.0}) {
    const auto up = std::upper_bound(v.begin(), v.end(), x) - v.begin();
    const auto down = std::lower_bound(v.begin(), v.end(), x) - v.begin();
    hi = std::max(hi, up * std::pow(x, -d / 2));
    if (down > 0) lo = std::min(lo, down * std::pow(x, -d / 2));
    if (up > 0) lo = std::min(lo, up * std::pow(x, -d / 2));
  }
  CHECK(rep.osc_max == doctest::Approx(hi).epsilon(1e-14));
  CHECK(rep.osc_min == doctest::Approx(lo).epsilon(1e-14));

  CHECK(code_of([&] { weyl_oscillation(CountingFunction(v, 5.0), d, {8.0, 80.0}); }) == ErrorCode::empty_window);
}

TEST_CASE("exponent fit") {
  std::vector<double> v;
  for (int k = 1; k <= 20000; ++k) v.push_back(std::pow(double(k), 1.0 / 0.6));
  const CountingFunction n(v);
  const auto fit = fit_exponent(n, {10.0, 1e7}, 64);
  CHECK(fit.slope == doctest::Approx(0.6).epsilon(0.01 / 0.6));
  CHECK(code_of([&] { fit_exponent(n, {1.0, 30.0}); }) == ErrorCode::too_few_points);
}

TEST_CASE("renewal") {
  // Exactly self-similar counting function: 3 copies at scale 8 plus one new eigenvalue per level.
  std::vector<double> v;
  for (int level = 0; level < 10; ++level) {
    const double x = 5.0 * std::pow(8.0, level);
    const auto copies = static_cast<int>(std::pow(3.0, level));
    for (int c = 0; c < copies; ++c) v.push_back(x);
  }
  const CountingFunction n(v, 1e8);
  const MeasureSpec spec(1.0, 0.25);
  const auto seq = CompatibleSequence::constant(0.5);
  const auto rep = renewal_analysis(n, spec, seq, {32, 64});
  CHECK(rep.period == doctest::Approx(std::log(8.0) / 2.0).epsilon(1e-14));
  CHECK(rep.identity_error < 1e-12);
  CHECK(rep.scale == doctest::Approx(0.125));
  for (const auto& [x, r] : rep.r_samples) {
    const double direct = static_cast<double>(n(x)) - 3.0 * static_cast<double>(n(0.125 * x));
    CHECK(r == doctest::Approx(direct));
    if (x < v.front()) CHECK(r == 0.0);
  }
  for (const auto& s : rep.samples) {
    CHECK(s.f == doctest::Approx(std::exp(-s.t * rep.d_s) * static_cast<double>(n(std::exp(2 * s.t)))).epsilon(1e-14));
  }
  CHECK(code_of([&] { renewal_analysis(n, MeasureSpec(0.5, 0.25), seq); }) == ErrorCode::wrong_regime);
  CHECK(code_of([&] { renewal_analysis(n, spec, CompatibleSequence::general({0.5}, 0.5)); }) ==
        ErrorCode::wrong_regime);
}

TEST_CASE("interlacing") {
  const CountingFunction d({2.0, 5.0, 5.0});
  CHECK(check_interlacing(d, CountingFunction({0.0, 1.0, 2.0, 4.0, 5.0, 5.0})).holds);
  // A shared eigenvalue that comes out a hair lower in the Neumann solve still counts as shared.
  CHECK(check_interlacing(d, CountingFunction({0.0, 1.0, 2.0 * (1 - 1e-13), 4.0, 5.0, 5.0})).holds);
  const auto low = check_interlacing(d, CountingFunction({0.0, 3.0, 6.0}));
  CHECK_FALSE(low.holds);
  CHECK(low.excess_dirichlet == 1);
  const auto high = check_interlacing(d, CountingFunction({0.0, 0.5, 1.0, 1.5, 1.8, 6.0}));
  CHECK(high.excess_neumann == 2);
}
