#include "doctest.h"

#include "specdim/levelset.hpp"

#include <cstdint>
#include <vector>

using namespace specdim;

namespace {

// Level-by-level simulation of the oscillating rule, written independently of
// the run table in the library.
std::vector<bool> simulate_oscillating(double low, double high, std::int64_t upto) {
    std::vector<bool> in(static_cast<std::size_t>(upto + 1), false);
    bool including = false;
    std::int64_t c = 0;
    for (std::int64_t n = 1; n <= upto; ++n) {
        if (including) {
            ++c;
            in[static_cast<std::size_t>(n)] = true;
            if (c >= high * n - 1e-9) {
                including = false;
            }
        } else if (c <= low * n + 1e-9) {
            including = true;
        }
    }
    return in;
}

}  // namespace

TEST_CASE("explicit and periodic counts") {
    auto e = LevelSet::explicit_set({5, 1, 3, 3});
    CHECK(e.count_upto(0) == 0);
    CHECK(e.count_upto(3) == 2);
    CHECK(e.count_upto(100) == 3);
    CHECK(e.contains(5));
    CHECK_FALSE(e.contains(4));
    CHECK(e.is_finite());
    CHECK(e.max_element() == 5);

    auto ev = LevelSet::evens();
    CHECK(ev.count_upto(10) == 5);
    CHECK(ev.count_upto(11) == 5);
    CHECK(ev.contains(2));
    CHECK_FALSE(ev.contains(1));
    CHECK_FALSE(ev.is_finite());
    CHECK(ev.limsup_density() == doctest::Approx(0.5));

    auto all = LevelSet::all();
    CHECK(all.count_upto(37) == 37);

    auto p = LevelSet::periodic(3, {1, 2}, 7);
    CHECK(p.elements_upto(20) == std::vector<std::int64_t>{1, 2, 4, 5, 7});
    CHECK(p.is_finite());
    CHECK(p.max_element() == 7);
    CHECK(p.liminf_density() == 0.0);

    CHECK_THROWS_AS(LevelSet::explicit_set({0, 2}), std::exception);
    CHECK_THROWS_AS(LevelSet::periodic(2, {2}), std::exception);
}

TEST_CASE("oscillating runs match a level-by-level simulation") {
    for (auto [low, high] : std::vector<std::pair<double, double>>{{1.0 / 3, 2.0 / 3}, {0.2, 0.9}, {0.5, 0.5}, {0.1, 0.3}}) {
        auto osc = LevelSet::oscillating(low, high, 2.0, 500);
        const auto sim = simulate_oscillating(low, high, 2000);
        std::int64_t c = 0;
        for (std::int64_t n = 1; n <= 2000; ++n) {
            CHECK(osc.contains(n) == sim[static_cast<std::size_t>(n)]);
            c += sim[static_cast<std::size_t>(n)] ? 1 : 0;
            REQUIRE(osc.count_upto(n) == c);
        }
    }
}

TEST_CASE("one third / two thirds switch points") {
    auto runs = oscillating_runs(OscillatingLevels{1.0 / 3, 2.0 / 3, 2.0, 200}, 200);
    std::vector<std::int64_t> ends;
    for (const auto& r : runs) {
        ends.push_back(r.last);
    }
    std::vector<std::int64_t> expect{1, 3, 6, 12, 24, 48, 96, 192};
    REQUIRE(ends.size() >= expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(ends[i] == expect[i]);
    }
    CHECK_FALSE(runs[0].included);
    CHECK(runs[1].included);
}

TEST_CASE("degenerate oscillation gives the evens") {
    auto half = LevelSet::oscillating(0.5, 0.5, 2.0, 100);
    for (std::int64_t n = 1; n <= 300; ++n) {
        CHECK(half.contains(n) == (n % 2 == 0));
    }
}

TEST_CASE("extreme oscillation uses geometric runs") {
    auto runs = oscillating_runs(OscillatingLevels{0.0, 1.0, 2.0, 64}, 64);
    REQUIRE(runs.size() >= 4);
    // run j ends at ceil(start * 2^j)
    CHECK(runs[0].last == 1);
    CHECK(runs[1].last == 2);
    CHECK(runs[2].last == 8);
    CHECK(runs[3].last == 64);
}

TEST_CASE("shifted sets re-base levels") {
    for (const auto& base : {LevelSet::evens(), LevelSet::oscillating(1.0 / 3, 2.0 / 3, 2.0, 100),
                             LevelSet::explicit_set({2, 3, 9, 10}), LevelSet::periodic(5, {0, 3})}) {
        for (std::int64_t k : {0, 1, 4, 7}) {
            auto s = base.shifted(k);
            for (std::int64_t n = 0; n <= 60; ++n) {
                CHECK(s.count_upto(n) == base.count_between(k, k + n));
                if (n >= 1) {
                    CHECK(s.contains(n) == base.contains(n + k));
                }
            }
            CHECK(s.shifted(2) == base.shifted(k + 2));
        }
    }
}
