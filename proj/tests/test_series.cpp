#include <doctest.h>

#include <cmath>

#include "schrscale/series.hpp"

using namespace schrscale;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Plain partial-sum oracle, independent of the bracket machinery.
double explicit_weighted_tail(const EnergyLaw& law, int k, double q, long n_begin,
                              long n_end) {
    KahanSum acc;
    for (long n = n_begin; n <= n_end; ++n)
        acc.add(std::pow(double(n), -q) * ipow(law.at(n), k));
    return acc.value();
}

} // namespace

TEST_SUITE("series") {

TEST_CASE("ipow matches pow on integer exponents") {
    CHECK(ipow(3.0, 4) == doctest::Approx(81.0));
    CHECK(ipow(2.0, 0) == 1.0);
    CHECK(ipow(2.0, -2) == doctest::Approx(0.25));
    CHECK(ipow(1.7, 5) == doctest::Approx(std::pow(1.7, 5.0)).epsilon(1e-14));
}

TEST_CASE("tail bracket endpoints are the closed-form integrals") {
    const Interval t = pseries_tail(2.0, 10);
    CHECK(t.lo == doctest::Approx(1.0 / 11.0).epsilon(1e-15));
    CHECK(t.hi == doctest::Approx(1.0 / 10.0).epsilon(1e-15));

    const Interval u = pseries_tail(3.0, 7);
    CHECK(u.lo == doctest::Approx(0.5 / 64.0).epsilon(1e-14));
    CHECK(u.hi == doctest::Approx(0.5 / 49.0).epsilon(1e-14));
}

TEST_CASE("tail brackets contain classic series values") {
    // zeta(2) = pi^2/6, zeta(4) = pi^4/90, zeta(6) = pi^6/945.
    const double zeta[] = {kPi * kPi / 6.0, kPi * kPi * kPi * kPi / 90.0,
                           std::pow(kPi, 6.0) / 945.0};
    const double p[] = {2.0, 4.0, 6.0};
    for (int i = 0; i < 3; ++i) {
        for (long N : {1L, 10L, 1000L}) {
            KahanSum head;
            for (long n = 1; n <= N; ++n) head.add(std::pow(double(n), -p[i]));
            const Interval tail = pseries_tail(p[i], N);
            // At N = 1000 the bracket width drops below one ulp of the
            // sum, so the comparison needs room for double rounding.
            CHECK(head.value() + tail.lo <= zeta[i] + 1e-12);
            CHECK(zeta[i] <= head.value() + tail.hi + 1e-12);
        }
    }
}

TEST_CASE("tail bracket width shrinks like one term") {
    const Interval wide = pseries_tail(2.0, 100);
    const Interval narrow = pseries_tail(2.0, 10000);
    CHECK(wide.width() < 2.0 * std::pow(100.0, -2.0));
    CHECK(narrow.width() < 2.0 * std::pow(10000.0, -2.0));
}

TEST_CASE("tail bracket rejects divergent exponents and bad start") {
    CHECK_THROWS_AS(pseries_tail(1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(pseries_tail(0.5, 10), std::invalid_argument);
    CHECK_THROWS_AS(pseries_tail(2.0, 0), std::invalid_argument);
}

TEST_CASE("weighted brackets contain explicit partial sums, positive powers") {
    const EnergyLaw law{1.0, 2, 5.0};
    for (int k : {0, 1, 2}) {
        const double q = 6.0 + 2.0;  // keeps every combination convergent
        const Interval bracket = power_tail_bracket(law, k, q, 20);
        const double oracle = explicit_weighted_tail(law, k, q, 21, 2000000);
        CHECK(bracket.lo <= oracle);
        CHECK(oracle <= bracket.hi);
    }
}

TEST_CASE("weighted brackets contain explicit partial sums, negative powers") {
    const EnergyLaw law{1.0, 2, 5.0};
    for (int k : {-1, -2}) {
        const Interval bracket = power_tail_bracket(law, k, 2.0, 15);
        const double oracle = explicit_weighted_tail(law, k, 2.0, 16, 2000000);
        CHECK(bracket.lo <= oracle);
        CHECK(oracle <= bracket.hi);
    }
}

TEST_CASE("weighted bracket with zero shift reduces to a pure p-series") {
    const EnergyLaw law{1.0, 2, 0.0};
    // sum n^2 n^-6 = zeta(4)
    const Interval bracket = power_tail_bracket(law, 1, 6.0, 1);
    const double zeta4 = kPi * kPi * kPi * kPi / 90.0;
    CHECK(bracket.lo <= zeta4 - 1.0);
    CHECK(zeta4 - 1.0 <= bracket.hi);
}

TEST_CASE("tolerance-driven tail walks meet the requested width") {
    const EnergyLaw law{1.0, 2, 3.0};
    for (double tol : {1e-6, 1e-9, 1e-12}) {
        const Interval got = power_weighted_tail(law, 1, 6.0, 3, tol);
        CHECK(got.width() <= tol);
        const double oracle = explicit_weighted_tail(law, 1, 6.0, 3, 3000000);
        CHECK(got.lo <= oracle + 1e-15);
        CHECK(oracle <= got.hi + 1e-15);
    }
}

TEST_CASE("divergence witness is the term exponent against the harmonic line") {
    const EnergyLaw box{1.0, 2, 0.0};
    // E_n^k n^-2s has term exponent 2k - 2s for this law.
    CHECK(divergence_witness(box, 2, 2.0) == doctest::Approx(0.0));
    CHECK(power_tail_diverges(box, 2, 2.0));
    CHECK(divergence_witness(box, 2, 3.0) == doctest::Approx(-2.0));
    CHECK_FALSE(power_tail_diverges(box, 2, 3.0));
    // Exactly on the harmonic boundary counts as divergent.
    CHECK(divergence_witness(box, 1, 1.5) == doctest::Approx(-1.0));
    CHECK(power_tail_diverges(box, 1, 1.5));

    const EnergyLaw osc{1.0, 1, 0.5};
    CHECK(divergence_witness(osc, 2, 1.0) == doctest::Approx(0.0));
    CHECK(power_tail_diverges(osc, 2, 1.0));
    CHECK_FALSE(power_tail_diverges(osc, 2, 2.0));
}

TEST_CASE("energy law evaluates scale times power plus shift") {
    const EnergyLaw law{0.25, 2, 1.5};
    CHECK(law.at(4) == doctest::Approx(0.25 * 16.0 + 1.5));
    CHECK(law.at(1) == doctest::Approx(1.75));
}

} // TEST_SUITE
