#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "schrscale/errors.hpp"
#include "schrscale/kernels.hpp"
#include "schrscale/parallel.hpp"
#include "schrscale/rng.hpp"
#include "schrscale/trajectories.hpp"

using namespace schrscale;

namespace {

constexpr double kPi = 3.14159265358979323846;

StateVector ground_state() {
    CoefficientSpec spec;
    spec.head = {{1, {1.0, 0.0}}};
    return normalize(spec, SpectrumModel::box());
}

StateVector beating_pair() {
    CoefficientSpec spec;
    const double r = 1.0 / std::sqrt(2.0);
    spec.head = {{1, {r, 0.0}}, {2, {r, 0.0}}};
    return normalize(spec, SpectrumModel::box());
}

} // namespace

TEST_SUITE("trajectories") {

TEST_CASE("stationary states carry no current") {
    const StateVector st = ground_state();
    for (double x : {0.4, 1.1, 2.8})
        CHECK(std::abs(velocity(st, 0.7, x)) < 1e-13);
}

TEST_CASE("velocity matches the independent two-mode formula") {
    const StateVector st = beating_pair();
    const double t = 0.37, x = 1.9;
    // psi and psi' assembled by hand from the sine modes.
    const double amp = std::sqrt(2.0 / kPi);
    const std::complex<double> c1 = st.coefficient(1) * std::polar(1.0, -1.0 * t);
    const std::complex<double> c2 = st.coefficient(2) * std::polar(1.0, -4.0 * t);
    const std::complex<double> psi =
        c1 * amp * std::sin(x) + c2 * amp * std::sin(2.0 * x);
    const std::complex<double> dpsi =
        c1 * amp * std::cos(x) + c2 * amp * 2.0 * std::cos(2.0 * x);
    const double expected =
        2.0 * (dpsi * std::conj(psi)).imag() / std::norm(psi);
    CHECK(velocity(st, t, x) == doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("velocity refuses nodes, tails, and tables") {
    CoefficientSpec spec;
    spec.head = {{2, {1.0, 0.0}}};
    const StateVector excited = normalize(spec, SpectrumModel::box());
    // phi_2 vanishes at the box midpoint.
    CHECK_THROWS_AS(velocity(excited, 0.0, kPi / 2.0), NodeProximity);

    CoefficientSpec tail;
    tail.tail = PowerLawTail{3.0, 1, 1.0, PhaseRule::Zero};
    const StateVector heavy = normalize(tail, SpectrumModel::box());
    CHECK_THROWS_AS(velocity(heavy, 0.0, 1.0), DomainRequired);

    CoefficientSpec mode;
    mode.head = {{1, {1.0, 0.0}}};
    const StateVector tab = normalize(mode, SpectrumModel::table({{1, 2.0}}));
    CHECK_THROWS_AS(velocity(tab, 0.0, 1.0), UnsupportedOperation);
}

TEST_CASE("deterministic paths of a stationary state stand still") {
    const StateVector st = ground_state();
    const std::vector<double> x0s = {0.5, 1.0, 1.8, 2.6};
    const TrajectoryEnsemble ens = integrate_bohmian(st, x0s, 0.2, 1e-3);
    CHECK(ens.kind == TrajectoryEnsemble::Kind::Bohmian);
    CHECK(ens.path_count == 4);
    CHECK(ens.breach_count == 0);
    CHECK(ens.ordering_ok);
    REQUIRE(ens.times.front() == 0.0);
    CHECK(ens.times.back() == doctest::Approx(0.2));
    for (long p = 0; p < 4; ++p)
        for (std::size_t k = 0; k < ens.times.size(); ++k)
            CHECK(ens.position(p, k) == doctest::Approx(x0s[std::size_t(p)]).epsilon(1e-12));
}

TEST_CASE("snapshot schedule is thinned, ordered, and bounded") {
    const StateVector st = ground_state();
    const TrajectoryEnsemble ens = integrate_bohmian(st, {1.0}, 0.3, 1e-3);
    CHECK(ens.times.size() <= 33);
    CHECK(ens.times.front() == 0.0);
    CHECK(ens.times.back() == doctest::Approx(0.3));
    for (std::size_t k = 1; k < ens.times.size(); ++k)
        CHECK(ens.times[k] > ens.times[k - 1]);
}

TEST_CASE("deterministic transport keeps the density in step") {
    const StateVector st = beating_pair();
    const long paths = 800;
    const std::vector<double> x0s = sample_initial_positions(st, paths, 11);
    const TrajectoryEnsemble ens = integrate_bohmian(st, x0s, 0.25, 1e-3);
    CHECK(ens.breach_count == 0);
    CHECK(ens.ordering_ok);
    const double ks0 = equivariance_statistic(ens, st, 0.0);
    const double ks1 = equivariance_statistic(ens, st, ens.times.back());
    CHECK(ks0 < 0.08);
    CHECK(ks1 < 0.1);
}

TEST_CASE("deterministic integration validates input") {
    const StateVector st = ground_state();
    CHECK_THROWS_AS(integrate_bohmian(st, {}, 0.1, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate_bohmian(st, {-0.5}, 0.1, 1e-3), DomainError);
    CHECK_THROWS_AS(integrate_bohmian(st, {4.0}, 0.1, 1e-3), DomainError);
    CHECK_THROWS_AS(integrate_bohmian(st, {1.0}, 0.1, 0.0), BadStep);
    CHECK_THROWS_AS(integrate_bohmian(st, {1.0}, 0.35, 0.1), BadStep);
}

TEST_CASE("initial positions are deterministic and distributed like the state") {
    const StateVector st = ground_state();
    const std::vector<double> a = sample_initial_positions(st, 2000, 42);
    const std::vector<double> b = sample_initial_positions(st, 2000, 42);
    CHECK(a == b);
    const std::vector<double> c = sample_initial_positions(st, 2000, 43);
    CHECK(a != c);

    // Ground-state density is symmetric about the box midpoint.
    double mean = 0.0;
    for (double x : a) {
        CHECK(x >= 0.0);
        CHECK(x <= kPi);
        mean += x;
    }
    mean /= double(a.size());
    CHECK(mean == doctest::Approx(kPi / 2.0).epsilon(0.03));
}

TEST_CASE("diffusive ensembles of a stationary state stay equivariant") {
    const StateVector st = ground_state();
    const TrajectoryEnsemble ens = sample_nelson(st, 2000, 0.1, 1e-3, 7);
    CHECK(ens.kind == TrajectoryEnsemble::Kind::Nelson);
    CHECK(ens.breach_count == 0);
    for (long p = 0; p < ens.path_count; ++p)
        for (std::size_t k = 0; k < ens.times.size(); ++k) {
            const double x = ens.position(p, k);
            REQUIRE(x >= 0.0);
            REQUIRE(x <= kPi);
        }
    CHECK(equivariance_statistic(ens, st, 0.1) < 0.05);
}

TEST_CASE("diffusive ensembles are bit-identical across worker counts") {
    const StateVector st = beating_pair();
    const int saved = max_workers();
    set_max_workers(1);
    const TrajectoryEnsemble one = sample_nelson(st, 64, 0.05, 1e-3, 99);
    set_max_workers(4);
    const TrajectoryEnsemble four = sample_nelson(st, 64, 0.05, 1e-3, 99);
    set_max_workers(saved);
    CHECK(one.positions == four.positions);
    CHECK(one.breached == four.breached);
}

TEST_CASE("first diffusive snapshot equals the seeded initial draw") {
    const StateVector st = beating_pair();
    const std::vector<double> x0s = sample_initial_positions(st, 32, 5);
    const TrajectoryEnsemble ens = sample_nelson(st, 32, 0.02, 1e-3, 5);
    for (long p = 0; p < 32; ++p)
        CHECK(ens.position(p, 0) == x0s[std::size_t(p)]);
}

TEST_CASE("equivariance statistic wants a recorded snapshot time") {
    const StateVector st = ground_state();
    const TrajectoryEnsemble ens = integrate_bohmian(st, {1.0, 2.0}, 0.1, 1e-3);
    CHECK_THROWS_AS(equivariance_statistic(ens, st, 0.0503), std::invalid_argument);
    CHECK_NOTHROW(equivariance_statistic(ens, st, ens.times[1]));
}

TEST_CASE("normal stream is reproducible and roughly standard") {
    NormalStream g(12345);
    double mean = 0.0, var = 0.0;
    const int n = 20000;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) {
        draws[i] = g.next();
        mean += draws[i];
    }
    mean /= n;
    for (int i = 0; i < n; ++i) var += (draws[i] - mean) * (draws[i] - mean);
    var /= n - 1;
    CHECK(std::abs(mean) < 0.03);
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));

    NormalStream again(12345);
    CHECK(again.next() == draws[0]);
    CHECK(again.next() == draws[1]);
}

} // TEST_SUITE
