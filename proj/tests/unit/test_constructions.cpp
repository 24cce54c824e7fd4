#include "doctest.h"

#include "oracles.hpp"
#include "specdim/constructions.hpp"
#include "specdim/frame.hpp"
#include "specdim/rng.hpp"

#include <cmath>

using namespace specdim;

TEST_CASE("digit measure builder") {
    const auto leb = build_digit_measure(2, LevelSet::all());
    for (int n : {1, 4, 9}) {
        const auto cells = occupied_cells(leb, 2, n);
        CHECK(cells.size() == (std::size_t{1} << n));
        for (const auto& c : cells) {
            CHECK(c.mass == std::ldexp(1.0, -n));
        }
    }
    const auto empty = build_digit_measure(3, LevelSet::explicit_set({}));
    CHECK(point_mass(empty, Point{0.0}) == 1.0);
    CHECK(std::abs(fourier(empty, 12.34) - 1.0) < 1e-15);

    const auto three = truncate_digit(*build_digit_measure(3, LevelSet::explicit_set({1})).as<Digit>(), 1);
    const auto& atoms = three.as<Atomic>()->atoms;
    REQUIRE(atoms.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(atoms[k].point[0] == doctest::Approx(k / 3.0).epsilon(1e-15));
        CHECK(atoms[k].weight == doctest::Approx(1.0 / 3.0));
    }
    CHECK_THROWS_AS(build_digit_measure(1, LevelSet::all()), DomainError);
}

TEST_CASE("spectrum enumeration") {
    CHECK(enumerate_spectrum(2, LevelSet::explicit_set({1, 2}), 2).line() == std::vector<double>{0, 1, 2, 3});
    CHECK(enumerate_spectrum(3, LevelSet::explicit_set({1}), 1).line() == std::vector<double>{0, 1, 2});
    CHECK(enumerate_spectrum(2, LevelSet::explicit_set({5}), 3).line() == std::vector<double>{0});
    CHECK(enumerate_spectrum(2, LevelSet::explicit_set({1}), 1, 0).line() == std::vector<double>{0, 2});

    const auto ev = enumerate_spectrum(2, LevelSet::evens(), 10);
    const auto oracle_f = oracle::digit_frequencies(2, {2, 4, 6, 8, 10});
    auto sorted = oracle_f;
    std::sort(sorted.begin(), sorted.end());
    CHECK(ev.line() == sorted);

    Limits small;
    small.max_spectrum = 100;
    CHECK_THROWS_AS(enumerate_spectrum(2, LevelSet::all(), 7, -1, small), ResourceLimit);
}

TEST_CASE("spectral pairs are orthonormal") {
    const std::vector<LevelSet> sets{LevelSet::all(), LevelSet::evens(), LevelSet::odds(),
                                     LevelSet::explicit_set({1, 4, 5, 9}),
                                     oscillating_levelset(1.0 / 3.0, 2.0 / 3.0, 2.0, 200).levels};
    for (int p : {2, 3}) {
        for (const auto& ls : sets) {
            for (int n = 0; n <= 20; ++n) {
                if (std::pow(static_cast<double>(p), static_cast<double>(ls.count_upto(n))) > 256.0) {
                    break;
                }
                const auto nu = build_digit_measure(p, ls);
                const auto g = gram_matrix(truncate_digit(*nu.as<Digit>(), n), enumerate_spectrum(p, ls, n));
                CHECK(identity_deviation(g) < 1e-9);
            }
        }
    }
}

TEST_CASE("oscillating level sets") {
    const auto osc = oscillating_levelset(1.0 / 3.0, 2.0 / 3.0, 2.0, 200);
    CHECK(osc.partial_density.size() == 200);
    CHECK(osc.low_met);
    CHECK(osc.high_met);
    CHECK(std::fabs(osc.tail_min - 1.0 / 3.0) <= 0.05);
    CHECK(std::fabs(osc.tail_max - 2.0 / 3.0) <= 0.05);
    for (std::int64_t n = osc.burn_in; n <= 200; ++n) {
        const double v = osc.partial_density[static_cast<std::size_t>(n - 1)];
        CHECK(v >= osc.tail_min);
        CHECK(v <= osc.tail_max);
        CHECK(v == static_cast<double>(osc.levels.count_upto(n)) / static_cast<double>(n));
    }
    CHECK(osc.levels.liminf_density() == doctest::Approx(1.0 / 3.0));
    CHECK(osc.levels.limsup_density() == doctest::Approx(2.0 / 3.0));

    const auto half = oscillating_levelset(0.5, 0.5, 2.0, 200);
    for (std::int64_t i = 1; i <= 200; ++i) {
        CHECK(half.levels.contains(i) == (i % 2 == 0));
    }
    CHECK(half.low_met);
    CHECK(half.high_met);

    const auto extreme = oscillating_levelset(0.0, 1.0, 2.0, 200);
    CHECK(extreme.switch_points.size() >= 3);
    CHECK(extreme.levels.liminf_density() == 0.0);
    CHECK(extreme.levels.limsup_density() == 1.0);

    CHECK_THROWS_AS(oscillating_levelset(1.0 / 3.0, 2.0 / 3.0, 2.0, 5), DomainError);
    CHECK_THROWS_AS(oscillating_levelset(0.7, 0.2, 2.0, 200), MalformedSpec);
    CHECK_THROWS_AS(oscillating_levelset(0.2, 0.7, 1.0, 200), MalformedSpec);
}

TEST_CASE("mixed measures") {
    const auto two = mixed_measure(dirac({0.0}), dirac({0.0}));
    CHECK(two.dim() == 2);
    CHECK(total_mass(two) == 2.0);
    CHECK(point_mass(two, Point{0.0, 0.0}) == 2.0);
    const double zero[2] = {0.0, 0.0};
    CHECK(std::abs(fourier(two, zero) - 2.0) < 1e-15);

    const auto mu = build_digit_measure(2, LevelSet::evens());
    const auto nu = build_digit_measure(3, LevelSet::odds());
    const auto rho = mixed_measure(mu, nu);
    Rng rng(21);
    const double tol = 1e-10;
    for (int i = 0; i < 200; ++i) {
        const double xi[2] = {rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)};
        const Complex lhs = fourier(rho, xi, tol);
        const Complex rhs = fourier(mu, xi[0], tol) + fourier(nu, xi[1], tol);
        CHECK(std::abs(lhs - rhs) <= 2.0 * tol);
        const double axis[2] = {xi[0], 0.0};
        CHECK(std::abs(fourier(rho, axis, tol) - (fourier(mu, xi[0], tol) + 1.0)) <= 2.0 * tol);
    }
    // support on the coordinate cross: no mass off the axes
    const double lo[2] = {0.1, 0.1};
    const double hi[2] = {1.0, 1.0};
    CHECK(box_mass(rho, lo, hi).upper == 0.0);

    CHECK_THROWS_AS(mixed_measure(scaled(mu, 2.0), nu), DomainError);
}

TEST_CASE("cross spectrum is a frame for truncated mixed measures") {
    // rho_n = mu_n x delta_0 + delta_0 x nu_n built atom by atom
    const auto e = oracle::digit_atoms(2, {2, 4});
    const auto o = oracle::digit_atoms(2, {1, 3});
    std::vector<Atom> atoms;
    for (const auto& a : e) {
        atoms.push_back(Atom{{a.x, 0.0}, a.w, {}});
    }
    for (const auto& a : o) {
        atoms.push_back(Atom{{0.0, a.x}, a.w, {}});
    }
    const auto rho = make_atomic(atoms, 2);
    std::vector<Point> cross;
    const auto le = enumerate_spectrum(2, LevelSet::evens(), 4);
    const auto lo = enumerate_spectrum(2, LevelSet::odds(), 4);
    for (double a : le.line()) {
        cross.push_back({a, 0.0});
    }
    for (double b : lo.line()) {
        if (b != 0.0) {
            cross.push_back({0.0, b});
        }
    }
    const auto rep = frame_bounds_atomic(rho, SpectrumSet::explicit_points(cross, 2));
    CHECK(rep.function_dim == 7);  // the two origin atoms merge
    // an independent dense solve of the same 7x7 system gives 3 -+ sqrt(7)
    CHECK(rep.lower == doctest::Approx(3.0 - std::sqrt(7.0)).epsilon(1e-10));
    CHECK(rep.upper == doctest::Approx(3.0 + std::sqrt(7.0)).epsilon(1e-10));
}

TEST_CASE("counterexample reports") {
    const auto ev = counterexample_report(2, LevelSet::evens(), 40);
    CHECK_FALSE(ev.verdict);
    CHECK(ev.entropy.value == doctest::Approx(0.5).epsilon(0.05));
    CHECK(ev.liminf_density == 0.5);
    CHECK(std::fabs(ev.beurling.value - 0.5) < 0.1);
    CHECK(ev.orthonormal);
    CHECK(ev.gram_size == 1024);

    CounterexampleOptions small;
    small.spectrum_cap = 4096;
    const auto all = counterexample_report(2, LevelSet::all(), 40, small);
    CHECK_FALSE(all.verdict);
    CHECK(all.entropy.value == doctest::Approx(1.0));
    CHECK(all.beurling.value == doctest::Approx(1.0).epsilon(0.05));
    CHECK(all.liminf_density == 1.0);

    CHECK(largest_level_within(2, LevelSet::evens(), 100, 1024) == 21);
    CHECK(largest_level_within(3, LevelSet::all(), 100, 729) == 6);
}

TEST_CASE("support disjointness") {
    const auto leb = lebesgue_unit();
    const auto shifted = affine_image(leb, {1.0}, 1.0);
    CHECK(support_disjoint(shifted, dirac({0.0})).disjoint);
    CHECK(support_disjoint(dirac({0.0}), shifted).disjoint);
    CHECK(support_disjoint(leb, dirac({0.5})).disjoint);  // a point is Lebesgue-null
    CHECK_FALSE(support_disjoint(dirac({0.5}), leb).disjoint);

    // nu_evens against Lebesgue on [3, 4]
    const auto ev = build_digit_measure(2, LevelSet::evens());
    CHECK(support_disjoint(ev, affine_image(leb, {3.0}, 1.0)).disjoint);
    CHECK(support_disjoint(affine_image(leb, {3.0}, 1.0), ev).disjoint);
    // both supports contain 0, so no closed cover can certify
    CHECK_FALSE(support_disjoint(ev, build_digit_measure(2, LevelSet::odds())).disjoint);
    CHECK_FALSE(support_disjoint(ev, ev).disjoint);
    CHECK(support_disjoint(ev, zero_measure(1)).disjoint);
}

TEST_CASE("non-spectral certificates") {
    const auto mu = affine_image(lebesgue_unit(), {1.0}, 1.0);
    const auto nu = dirac({0.0});
    const auto cert = non_spectral_certificate(mu, nu, zero_measure(1));
    CHECK(cert.fourier.value > 0.9);
    CHECK(cert.entropy.value == 0.0);
    CHECK(cert.inequality_holds);
    CHECK(cert.mu_null_on_others);
    CHECK(cert.nu_null_on_others);
    CHECK(cert.conclusion);
    CHECK_FALSE(cert.caveat.empty());

    const auto same = non_spectral_certificate(mu, mu, zero_measure(1));
    CHECK_FALSE(same.conclusion);
    CHECK_FALSE(same.mu_null_on_others);

    const auto atomic = non_spectral_certificate(make_atomic({Atom{{2.0}, 1.0, {}}}), nu, zero_measure(1));
    CHECK_FALSE(atomic.inequality_holds);
    CHECK_FALSE(atomic.conclusion);
}
