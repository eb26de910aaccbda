#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "schrscale/errors.hpp"
#include "schrscale/kernels.hpp"
#include "schrscale/parallel.hpp"
#include "schrscale/reference.hpp"

using namespace schrscale;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> linspace(double lo, double hi, long points) {
    std::vector<double> xs(std::size_t(points), 0.0);
    for (long i = 0; i < points; ++i)
        xs[std::size_t(i)] = lo + (hi - lo) * double(i) / double(points - 1);
    return xs;
}

ModeTerms ramp_terms(long first, long count) {
    ModeTerms terms;
    for (long k = 0; k < count; ++k)
        terms.emplace_back(first + k,
                           std::polar(1.0 / double(k + 1), 0.31 * double(k)));
    return terms;
}

double worst_gap(const std::vector<std::complex<double>>& a,
                 const std::vector<std::complex<double>>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("box synthesis matches the direct eigenfunction sum") {
    const SpectrumModel m = SpectrumModel::box();
    const ModeTerms terms = ramp_terms(1, 64);
    const std::vector<double> xs = linspace(0.0, kPi, 501);
    const auto fast = kernels::synth_values(m, terms, xs);
    const auto slow = reference::synth_values(m, terms, xs);
    REQUIRE(fast.size() == xs.size());
    CHECK(worst_gap(fast, slow) < 1e-11);
}

TEST_CASE("sparse high-mode expansions take the direct path and still agree") {
    const SpectrumModel m = SpectrumModel::box();
    const ModeTerms terms = ramp_terms(4001, 16);
    const std::vector<double> xs = linspace(0.0, kPi, 301);
    CHECK(worst_gap(kernels::synth_values(m, terms, xs),
                    reference::synth_values(m, terms, xs)) < 1e-9);
}

TEST_CASE("oscillator synthesis matches the direct Hermite sum") {
    const SpectrumModel m = SpectrumModel::oscillator();
    const ModeTerms terms = ramp_terms(0, 48);
    const std::vector<double> xs = linspace(-9.0, 9.0, 401);
    CHECK(worst_gap(kernels::synth_values(m, terms, xs),
                    reference::synth_values(m, terms, xs)) < 1e-11);
}

TEST_CASE("single-mode synthesis is the eigenfunction itself") {
    const SpectrumModel m = SpectrumModel::box();
    const ModeTerms one = {{3, {1.0, 0.0}}};
    const double x = 0.91;
    CHECK(kernels::synth_point_value(m, one, x).real() ==
          doctest::Approx(m.eigenfunction(3, x)).epsilon(1e-13));

    const kernels::WavePoint w = kernels::synth_point(m, one, x);
    CHECK(w.derivative.real() ==
          doctest::Approx(m.eigenfunction_derivative(3, x)).epsilon(1e-12));
}

TEST_CASE("derivatives agree with the reference across models") {
    const std::vector<double> bxs = linspace(0.1, kPi - 0.1, 97);
    const SpectrumModel box = SpectrumModel::box();
    const auto fast = kernels::synth_with_derivative(box, ramp_terms(1, 32), bxs);
    const auto slow = reference::synth_with_derivative(box, ramp_terms(1, 32), bxs);
    for (std::size_t i = 0; i < bxs.size(); ++i) {
        CHECK(std::abs(fast[i].value - slow[i].value) < 1e-11);
        CHECK(std::abs(fast[i].derivative - slow[i].derivative) < 1e-9);
    }

    const std::vector<double> oxs = linspace(-6.0, 6.0, 97);
    const SpectrumModel osc = SpectrumModel::oscillator();
    const auto ofast = kernels::synth_with_derivative(osc, ramp_terms(0, 24), oxs);
    const auto oslow = reference::synth_with_derivative(osc, ramp_terms(0, 24), oxs);
    for (std::size_t i = 0; i < oxs.size(); ++i) {
        CHECK(std::abs(ofast[i].value - oslow[i].value) < 1e-11);
        CHECK(std::abs(ofast[i].derivative - oslow[i].derivative) < 1e-10);
    }
}

TEST_CASE("derivative matches a central difference of the value") {
    const SpectrumModel m = SpectrumModel::box();
    const ModeTerms terms = ramp_terms(1, 12);
    const double x = 1.234, h = 1e-6;
    const std::complex<double> up = kernels::synth_point_value(m, terms, x + h);
    const std::complex<double> dn = kernels::synth_point_value(m, terms, x - h);
    const kernels::WavePoint w = kernels::synth_point(m, terms, x);
    CHECK(std::abs((up - dn) / (2.0 * h) - w.derivative) < 1e-6);
}

TEST_CASE("results are identical for any worker count") {
    const SpectrumModel m = SpectrumModel::oscillator();
    const ModeTerms terms = ramp_terms(0, 40);
    const std::vector<double> xs = linspace(-8.0, 8.0, 357);

    const int saved = max_workers();
    set_max_workers(1);
    const auto serial = kernels::synth_values(m, terms, xs);
    set_max_workers(4);
    const auto wide = kernels::synth_values(m, terms, xs);
    set_max_workers(saved);

    REQUIRE(serial.size() == wide.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].real() == wide[i].real());
        CHECK(serial[i].imag() == wide[i].imag());
    }
}

TEST_CASE("kernels validate terms and positions") {
    const SpectrumModel box = SpectrumModel::box();
    CHECK_THROWS_AS(kernels::synth_point_value(box, {{0, {1.0, 0.0}}}, 0.5),
                    IndexError);
    CHECK_THROWS_AS(
        kernels::synth_point_value(box, {{2, {1.0, 0.0}}, {1, {1.0, 0.0}}}, 0.5),
        std::invalid_argument);
    CHECK_THROWS_AS(kernels::synth_point_value(box, {{1, {1.0, 0.0}}}, -0.2),
                    DomainError);
    CHECK_THROWS_AS(kernels::synth_values(box, {{1, {1.0, 0.0}}}, {0.5, 99.0}),
                    DomainError);

    const SpectrumModel tab = SpectrumModel::table({{1, 2.0}});
    CHECK_THROWS_AS(kernels::synth_point_value(tab, {{1, {1.0, 0.0}}}, 0.5),
                    UnsupportedOperation);

    // Empty expansions synthesize the zero function.
    CHECK(std::abs(kernels::synth_point_value(box, {}, 0.5)) == 0.0);
}

} // TEST_SUITE
