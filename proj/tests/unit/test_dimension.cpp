#include "doctest.h"

#include "oracles.hpp"
#include "specdim/dimension.hpp"

#include <cmath>
#include <numbers>
#include <functional>
#include <random>

using namespace specdim;

namespace {

SpectrumSet integer_window(int a, int b) {
    std::vector<double> v;
    for (int k = a; k <= b; ++k) {
        v.push_back(k);
    }
    return SpectrumSet::explicit_1d(v);
}

// Brute-force sup over centers on a fine grid of candidate centers (points
// and midpoints suffice for integer data and integer/half-integer radii).
std::int64_t brute_sup(const std::vector<double>& pts, double h) {
    std::int64_t best = 0;
    for (double c0 : pts) {
        for (double c : {c0 - h, c0, c0 + h, c0 - h + 0.5, c0 + 0.5}) {
            std::int64_t n = 0;
            for (double p : pts) {
                n += std::abs(p - c) <= h ? 1 : 0;
            }
            best = std::max(best, n);
        }
    }
    return best;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("partition entropy") {
    CHECK(partition_entropy(make_tree(2, 3, std::vector<double>(8, 0.125)), 3) == doctest::Approx(3.0));
    CHECK(partition_entropy(dirac({0.0}), 17) == 0.0);
    std::vector<double> cells(8, 0.0);
    for (const auto& a : oracle::digit_atoms(2, {1, 3})) {
        cells[static_cast<std::size_t>(a.x * 8)] += a.w;
    }
    CHECK(partition_entropy(make_digit(2, LevelSet::explicit_set({1, 3})), 3, 2) ==
          doctest::Approx(oracle::entropy_bits(cells)));
    CHECK(oracle::entropy_bits(cells) == doctest::Approx(2.0));
    CHECK_THROWS_AS(partition_entropy(make_mixed(dirac({0.0}), dirac({0.0})), 3), DomainError);

    auto osc = make_digit(3, LevelSet::oscillating(0.25, 0.75, 2.0, 60));
    double prev = 0.0;
    for (int n = 1; n <= 30; ++n) {
        const double h = partition_entropy(osc, n);
        CHECK(h >= prev);
        prev = h;
    }
}

TEST_CASE("digit entropy: counting formula matches the partition entropy") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 40; ++trial) {
        const int p = std::vector<int>{2, 3, 5}[gen() % 3];
        std::vector<std::int64_t> lv;
        for (int i = 1; i <= 30; ++i) {
            if (gen() % 2) {
                lv.push_back(i);
            }
        }
        auto levels = LevelSet::explicit_set(lv);
        auto spec = make_digit(p, levels);
        for (int n = 1; n <= 30; ++n) {
            CHECK(std::abs(digit_entropy_exact(levels, p, n) - partition_entropy(spec, n)) <= 1e-12);
        }
    }
    CHECK(digit_entropy_exact(LevelSet::explicit_set({1, 2, 3}), 2, 3) == 3.0);
    CHECK(digit_entropy_exact(LevelSet::evens(), 2, 10) == 5.0);
    // oscillating blocks: count the levels by hand
    auto osc = LevelSet::oscillating(1.0 / 3, 2.0 / 3, 2.0, 100);
    // excluded 1, included 2-3, excluded 4-6, included 7-12, excluded 13-24, included 25-30
    const int count30 = 2 + 6 + 6;
    CHECK(digit_entropy_exact(osc, 3, 30) == doctest::Approx(count30 * std::log2(3.0)));
}

TEST_CASE("entropy dimension estimates") {
    auto leb = entropy_dim_estimate(lebesgue_unit(), 20, EntropyMode::upper);
    CHECK(leb.value == doctest::Approx(1.0).epsilon(0.01));
    CHECK(leb.curve.size() == 20);
    CHECK(entropy_dim_estimate(dirac({0.0}), 20, EntropyMode::upper).value == 0.0);
    auto ev = entropy_dim_estimate(make_digit(2, LevelSet::evens()), 40, EntropyMode::upper);
    CHECK(ev.value >= 0.48);
    CHECK(ev.value <= 0.52);
    for (const auto& s : {make_digit(2, LevelSet::oscillating(0.2, 0.8, 2.0, 64)), make_digit(3, LevelSet::evens()),
                          make_tree(2, 2, {0.1, 0.2, 0.3, 0.4})}) {
        const auto up = entropy_dim_estimate(s, 32, EntropyMode::upper);
        const auto low = entropy_dim_estimate(s, 32, EntropyMode::lower);
        CHECK(up.value >= low.value);
        CHECK(low.value >= 0.0);
        CHECK(up.value <= 1.0);
    }
    CHECK_THROWS_AS(entropy_dim_estimate(lebesgue_unit(), 7, EntropyMode::upper), DomainError);
}

TEST_CASE("hausdorff formula") {
    CHECK(digit_hausdorff_formula(LevelSet::all()) == 1.0);
    CHECK(digit_hausdorff_formula(LevelSet::evens()) == 0.5);
    CHECK(digit_hausdorff_formula(LevelSet::oscillating(1.0 / 3, 2.0 / 3, 2.0, 200)) == 1.0 / 3);
}

TEST_CASE("ball counts") {
    CHECK(ball_count(integer_window(0, 100), {50.0}, 10.0) == 21);
    CHECK(ball_count(SpectrumSet::explicit_1d({}), {0.0}, 10.0) == 0);
    auto lam = SpectrumSet::digit(DigitSpectrumSpec{2, LevelSet::explicit_set({1, 2}), 2, -1});
    CHECK(lam.size() == 4);
    CHECK(ball_count(lam, {0.0}, 3.0) == 4);
    CHECK(ball_count(lam, {0.0}, 2.999) == 3);
    CHECK_THROWS_AS(SpectrumSet::explicit_1d({1.0, 1.0}), MalformedSpec);
    auto plane = SpectrumSet::explicit_points({{0.0, 0.0}, {3.0, 4.0}, {1.0, 1.0}}, 2);
    CHECK(ball_count(plane, {0.0, 0.0}, 5.0) == 3);
    CHECK(ball_count(plane, {0.0, 0.0}, 4.999) == 2);
}

TEST_CASE("exact count scale equivariance") {
    std::mt19937_64 gen(9);
    auto lam = SpectrumSet::digit(DigitSpectrumSpec{3, LevelSet::evens(), 8, -1});
    for (double s : {2.0, -3.0, 0.25, 0.375, -7.5, 5.0}) {
        auto scaled = lam.transformed(s);
        for (int i = 0; i < 50; ++i) {
            const double t = static_cast<double>(gen() % 6000) - 200.0;
            const double h = static_cast<double>(1 + gen() % 400);
            CHECK(ball_count(scaled, {s * t}, std::abs(s) * h) == ball_count(lam, {t}, h));
        }
    }
}

TEST_CASE("sup-center sweep matches brute force") {
    std::mt19937_64 gen(2);
    std::vector<double> pts;
    for (int i = 0; i < 60; ++i) {
        pts.push_back(static_cast<double>(gen() % 200));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto lam = SpectrumSet::explicit_1d(pts);
    for (double h : {0.5, 1.0, 2.5, 7.0, 30.0, 120.0}) {
        CHECK(max_ball_count(lam, h).count == brute_sup(pts, h));
    }
}

TEST_CASE("Beurling density") {
    auto z = integer_window(0, 1000000);
    auto d1 = beurling_density(z, 1.0, {1000.0, 4000.0, 16000.0});
    CHECK(d1.value == doctest::Approx(2.0 + 1.0 / 1000.0));
    CHECK(d1.exact_centers);
    auto d2 = beurling_density(z, 2.0, {10.0, 100.0, 1000.0, 10000.0});
    for (std::size_t k = 1; k < d2.curve.size(); ++k) {
        CHECK(d2.curve[k].statistic < d2.curve[k - 1].statistic);
    }
    auto pt = beurling_density(SpectrumSet::explicit_1d({0.0}), 0.5, {1.0, 2.0, 4.0});
    CHECK(pt.curve[1].statistic < pt.curve[0].statistic);
    // small window against brute force
    std::vector<double> small;
    for (int k = 0; k <= 40; ++k) {
        small.push_back(k);
    }
    auto ds = beurling_density(SpectrumSet::explicit_1d(small), 1.0, {2.0, 5.0});
    CHECK(ds.value == doctest::Approx(static_cast<double>(brute_sup(small, 2.0)) / 2.0));
    CHECK_THROWS_AS(beurling_density(z, 1.0, {}), DomainError);
}

TEST_CASE("Beurling dimension estimates") {
    auto z = beurling_dim_estimate(integer_window(0, 1000000));
    CHECK(z.value == doctest::Approx(1.0).epsilon(0.05));
    CHECK(beurling_dim_estimate(SpectrumSet::explicit_1d({3.0})).value == 0.0);
    auto ev = beurling_dim_estimate(SpectrumSet::digit(DigitSpectrumSpec{2, LevelSet::evens(), 24, -1}));
    CHECK(ev.value >= 0.4);
    CHECK(ev.value <= 0.6);
    // invariant under scaling when the schedule scales along
    auto lam = SpectrumSet::digit(DigitSpectrumSpec{3, LevelSet::odds(), 9, -1});
    const auto hs = default_h_schedule(lam);
    const auto base = beurling_dim_estimate(lam, hs);
    for (double s : {4.0, -0.5, 0.125}) {
        std::vector<double> shs;
        for (double h : hs) {
            shs.push_back(std::abs(s) * h);
        }
        CHECK(beurling_dim_estimate(lam.transformed(s), shs).value == base.value);
    }
    // a two-dimensional set uses the grid heuristic
    std::vector<Point> grid;
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 40; ++j) {
            grid.push_back({static_cast<double>(i), static_cast<double>(j)});
        }
    }
    auto g = beurling_dim_estimate(SpectrumSet::explicit_points(grid, 2));
    CHECK(g.value > 1.5);
    CHECK(std::get<std::string>(*g.parameters.find("center_sup")) == "grid h/4 (heuristic)");
}

TEST_CASE("Fourier dimension estimates") {
    auto atoms = make_atomic({Atom{{0.0}, 0.3, {}}, Atom{{0.37}, 0.7, {}}});
    auto a = fourier_dim_estimate(atoms);
    CHECK(a.parameters.number("envelope_slope") >= -0.01);
    CHECK(a.value <= 0.02);
    auto leb = fourier_dim_estimate(lebesgue_unit());
    CHECK(leb.value >= 0.9);
    CHECK(leb.value <= 1.0);
    CHECK(fourier_dim_estimate(dirac({0.0})).value == 0.0);
    // middle-type digit measures do not decay along p-adic frequencies
    CHECK(fourier_dim_estimate(make_digit(2, LevelSet::evens())).value < 0.2);
}

TEST_CASE("Lev integral") {
    CHECK(lev_integral(dirac({0.0}), 5.0, 1e-8) == doctest::Approx(10.0).epsilon(1e-10));
    auto two = make_atomic({Atom{{0.0}, 0.5, {}}, Atom{{0.5}, 0.5, {}}});
    for (double r : {0.3, 2.0, 7.25}) {
        const double expect = r + std::sin(std::numbers::pi * r) / std::numbers::pi;
        CHECK(std::abs(lev_integral(two, r, 1e-8) - expect) <= 1e-8);
    }
    auto sinc2 = [](double t) {
        if (t == 0.0) {
            return 1.0;
        }
        const double a = std::numbers::pi * t;
        return std::sin(a) * std::sin(a) / (a * a);
    };
    for (double r : {0.5, 3.0, 6.5}) {
        CHECK(std::abs(lev_integral(lebesgue_unit(), r, 1e-8) - simpson(sinc2, -r, r, 200000)) <= 1e-8);
    }
    CHECK(lev_integral(lebesgue_unit(), 2000.0, 1e-8) == doctest::Approx(1.0).epsilon(1e-3));
    double prev = 0.0;
    auto ev = make_digit(2, LevelSet::evens());
    for (double r : {0.5, 1.0, 3.0, 10.0, 40.0}) {
        const double v = lev_integral(ev, r, 1e-8);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(lev_integral(make_product(lebesgue_unit(), lebesgue_unit()), 1.0), DomainError);
}

TEST_CASE("Lev exponents") {
    CHECK(std::abs(lev_exponent_estimate(dirac({0.0})).value) <= 0.05);
    const auto leb = lev_exponent_estimate(lebesgue_unit());
    CHECK(leb.value >= 0.95);
    CHECK(leb.value <= 1.05);
    const auto quarter = lev_exponent_estimate(make_digit(2, LevelSet::evens()));
    CHECK(quarter.value > 0.0);
    CHECK(quarter.value < 1.0);
}
