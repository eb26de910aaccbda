#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "schrscale/diagnostics.hpp"
#include "schrscale/errors.hpp"

using namespace schrscale;

namespace {

StateVector single_mode(long n = 1) {
    CoefficientSpec spec;
    spec.head = {{n, {1.0, 0.0}}};
    return normalize(spec, SpectrumModel::box());
}

StateVector power_tail(double s) {
    CoefficientSpec spec;
    spec.tail = PowerLawTail{s, 1, 1.0, PhaseRule::Zero};
    return normalize(spec, SpectrumModel::box());
}

WaveSamples graph_of(const std::vector<double>& ys) {
    WaveSamples ws;
    ws.grid.resize(ys.size());
    ws.values.resize(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        ws.grid[i] = double(i) / double(ys.size() - 1);
        ws.values[i] = {ys[i], 0.0};
    }
    return ws;
}

} // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("per-mode residual decays like the cubic-energy h^2 law") {
    // For one mode, i d/dt c = E c holds exactly; the central difference
    // leaves |E| |sin(E h)/(E h) - 1| ~ E^3 h^2 / 6.
    const double h = 1e-3;
    const double r1 = weak_residual(single_mode(1), 1, 0.0, h);
    CHECK(r1 == doctest::Approx(h * h / 6.0).epsilon(1e-3));

    const double r2 = weak_residual(single_mode(2), 2, 0.4, 1e-4);
    CHECK(r2 == doctest::Approx(64.0 * 1e-8 / 6.0).epsilon(1e-4));
}

TEST_CASE("per-mode residual shrinks with the coefficient") {
    // Mode amplitudes scale the residual linearly; an absent mode gives 0.
    CoefficientSpec spec;
    spec.head = {{1, {0.6, 0.0}}, {2, {0.8, 0.0}}};
    const StateVector st = normalize(spec, SpectrumModel::box());
    const double whole = weak_residual(single_mode(1), 1, 0.0, 1e-3);
    const double part = weak_residual(st, 1, 0.0, 1e-3);
    CHECK(part == doctest::Approx(0.6 * whole).epsilon(1e-9));
    CHECK(weak_residual(st, 5, 0.0, 1e-3) == doctest::Approx(0.0));
}

TEST_CASE("per-mode residual validates input") {
    CHECK_THROWS_AS(weak_residual(single_mode(), 1, 0.0, 0.0), BadStep);
    CHECK_THROWS_AS(weak_residual(single_mode(), 1, 0.0, -1e-3), BadStep);
    CHECK_THROWS_AS(weak_residual(single_mode(), 0, 0.0, 1e-3), IndexError);
}

TEST_CASE("quotient residual of one mode follows the quartic phi expansion") {
    // phi(theta) ~ theta^4/4 for small theta, so the residual is E^2 h / 2.
    const double h = 1e-3;
    const NormResult r = quotient_residual(single_mode(1), 0.0, h);
    REQUIRE(r.finite);
    CHECK(r.value.mid() == doctest::Approx(h / 2.0).epsilon(1e-5));

    const NormResult r3 = quotient_residual(single_mode(3), 0.0, h);
    REQUIRE(r3.finite);
    CHECK(r3.value.mid() == doctest::Approx(81.0 * h / 2.0).epsilon(1e-4));
}

TEST_CASE("quotient residual is independent of the evaluation time") {
    const StateVector st = power_tail(3.0);
    const NormResult a = quotient_residual(st, 0.0, 1e-2);
    const NormResult b = quotient_residual(st, 2.9, 1e-2);
    REQUIRE(a.finite);
    REQUIRE(b.finite);
    CHECK(a.value.lo == b.value.lo);
    CHECK(a.value.hi == b.value.hi);
}

TEST_CASE("quotient residual brackets a brute-force mode sum") {
    const StateVector st = power_tail(3.0);
    const double h = 0.05;
    const NormResult r = quotient_residual(st, 0.0, h, 1e-8);
    REQUIRE(r.finite);
    KahanSum acc;
    for (long n = 1; n <= 400000; ++n) {
        const double theta = double(n) * double(n) * h;
        const double phi = theta * theta + 2.0 - 2.0 * std::cos(theta) -
                           2.0 * theta * std::sin(theta);
        acc.add(std::norm(st.coefficient(n)) * phi / (h * h));
    }
    const double partial = std::sqrt(acc.value());
    CHECK(r.value.hi >= partial);
    // The brute-force sum stops at 4e5 and misses a few 1e-6 of residual,
    // so the lower endpoint only has to come that close.
    CHECK(r.value.lo <= partial + 1e-5);
}

TEST_CASE("quotient residual certifies divergence outside the domain") {
    const NormResult r = quotient_residual(power_tail(2.0), 0.0, 1e-2);
    CHECK_FALSE(r.finite);
    CHECK(r.witness == doctest::Approx(0.0));

    const NormResult edge = quotient_residual(power_tail(2.5), 0.0, 1e-2);
    CHECK_FALSE(edge.finite);
    CHECK(edge.witness == doctest::Approx(-1.0));
}

TEST_CASE("quotient residual validates steps") {
    CHECK_THROWS_AS(quotient_residual(single_mode(), 0.0, 0.0), BadStep);
    CHECK_THROWS_AS(quotient_residual(single_mode(), 0.0, 1e-3, -1.0),
                    std::invalid_argument);
}

TEST_CASE("default step ladder is log-spaced over three decades") {
    const std::vector<double> steps = default_step_sequence();
    REQUIRE(steps.size() == 7);
    CHECK(steps.front() == doctest::Approx(1e-1));
    CHECK(steps.back() == doctest::Approx(1e-4));
    for (std::size_t i = 1; i < steps.size(); ++i)
        CHECK(steps[i] / steps[i - 1] ==
              doctest::Approx(std::pow(10.0, -0.5)).epsilon(1e-12));
}

TEST_CASE("finite expansions converge strongly with unit slope") {
    CoefficientSpec spec;
    const double r = 1.0 / std::sqrt(2.0);
    spec.head = {{1, {r, 0.0}}, {2, {r, 0.0}}};
    const StateVector st = normalize(spec, SpectrumModel::box());
    const StrongVerdict v = strong_diff_verdict(st, 0.0, default_step_sequence());
    CHECK(v.outcome == StrongVerdict::Outcome::Converges);
    REQUIRE(v.slope.has_value());
    CHECK(*v.slope == doctest::Approx(1.0).epsilon(0.1));
    REQUIRE(v.residuals.size() == 7);
    for (const auto& [h, res] : v.residuals) REQUIRE(res.finite);
}

TEST_CASE("states outside the domain are flagged divergent") {
    const StrongVerdict v =
        strong_diff_verdict(power_tail(2.0), 0.0, default_step_sequence());
    CHECK(v.outcome == StrongVerdict::Outcome::Diverges);
    CHECK_FALSE(v.slope.has_value());
    CHECK_FALSE(v.residuals.front().second.finite);
}

TEST_CASE("verdict and classification agree across the scale family") {
    // Converges exactly for the H_2 members.  The s = 2.6 tail sits just
    // inside the domain; its residual series has term exponent 1.2, where
    // the default bracket width would pin the certified walk against its
    // term cap for seconds per step, so that member runs at a loose width.
    const std::vector<double> ladder = {1e-1, 1e-2, 1e-3, 1e-4};

    CHECK(strong_diff_verdict(single_mode(3), 0.0, ladder).outcome ==
          StrongVerdict::Outcome::Converges);
    CHECK(strong_diff_verdict(power_tail(1.0), 0.0, ladder).outcome ==
          StrongVerdict::Outcome::Diverges);
    CHECK(strong_diff_verdict(power_tail(2.0), 0.0, ladder).outcome ==
          StrongVerdict::Outcome::Diverges);
    CHECK(strong_diff_verdict(power_tail(3.0), 0.0, ladder).outcome ==
          StrongVerdict::Outcome::Converges);

    const StateVector edge = power_tail(2.6);
    CHECK(classify(edge, 1e-6).k_star == 2);
    const StrongVerdict v = strong_diff_verdict(edge, 0.0, ladder, 1e-6);
    CHECK(v.outcome == StrongVerdict::Outcome::Converges);
    REQUIRE(v.slope.has_value());
    // Exact decay rate for a tail exponent s is h^{(2s-5)/4}.
    CHECK(*v.slope == doctest::Approx(0.05).epsilon(0.5));
    for (const auto& [h, r] : v.residuals) {
        REQUIRE(r.finite);
        CHECK(r.value.width() < 1e-5);
    }
}

TEST_CASE("verdict validates the step ladder") {
    const StateVector st = single_mode();
    CHECK_THROWS_AS(strong_diff_verdict(st, 0.0, {0.1, 0.01, 0.001}),
                    std::invalid_argument);
    CHECK_THROWS_AS(strong_diff_verdict(st, 0.0, {0.1, 0.2, 0.01, 0.001}),
                    std::invalid_argument);
    CHECK_THROWS_AS(strong_diff_verdict(st, 0.0, {0.1, 0.01, -0.001, 0.0001}),
                    std::invalid_argument);
}

TEST_CASE("box counting sees lines as one-dimensional") {
    std::vector<double> ys(4097);
    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = double(i) / 4096.0;
    const WaveSamples ws = graph_of(ys);
    const BoxCountResult r = box_count_dimension(
        ws, {1.0 / 8.0, 1.0 / 32.0, 1.0 / 128.0, 1.0 / 1024.0});
    CHECK(r.dimension == doctest::Approx(1.0).epsilon(0.12));
    REQUIRE(r.counts.size() == 4);
    CHECK(r.counts.front().first == doctest::Approx(1.0 / 8.0));
    CHECK(r.fit_residual < 0.2);
}

TEST_CASE("box counting sees rough sums as more than one-dimensional") {
    // Lacunary cosine sum with Hoelder exponent 1/2; its graph fills boxes
    // like a 1.5-dimensional set.
    std::vector<double> ys(32769);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double x = double(i) / 32768.0;
        double y = 0.0;
        for (int k = 0; k <= 12; ++k)
            y += std::pow(2.0, -0.5 * k) * std::cos(std::pow(2.0, k) * 6.2831853071795865 * x);
        ys[i] = y;
    }
    const WaveSamples ws = graph_of(ys);
    std::vector<double> scales;
    for (int k = 3; k <= 10; ++k) scales.push_back(std::pow(2.0, -k));
    const BoxCountResult r = box_count_dimension(ws, scales);
    CHECK(r.dimension > 1.3);
    CHECK(r.dimension < 1.7);
}

TEST_CASE("box counting validates scales and resolution") {
    std::vector<double> ys(101);
    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = double(i);
    const WaveSamples ws = graph_of(ys);
    CHECK_THROWS_AS(box_count_dimension(ws, {0.1, 0.05}), std::invalid_argument);
    CHECK_THROWS_AS(box_count_dimension(ws, {0.1, 0.05, 0.02}),
                    std::invalid_argument);
    CHECK_THROWS_AS(box_count_dimension(ws, {0.25, 0.025, 0.002}), ResolutionError);
}

} // TEST_SUITE
