// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria (0 when everything passes).

#include "specdim/cli.hpp"
#include "specdim/constructions.hpp"
#include "specdim/dimension.hpp"
#include "specdim/frame.hpp"
#include "specdim/rng.hpp"
#include "specdim/serialize.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace specdim;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

class Timer {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Collects the first few failures of a criterion.
struct Tally {
    int failures = 0;
    std::string first;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (failures < 3) {
                first += (first.empty() ? "" : "; ") + what;
            }
            ++failures;
        }
    }
};

// 1 ------------------------------------------------------------------------------------

Verdict spectral_pairs() {
    struct Family {
        int p;
        LevelSet levels;
        const char* name;
    };
    const std::vector<Family> families = {
        {2, LevelSet::all(), "p=2 all"},
        {2, LevelSet::evens(), "p=2 evens"},
        {2, oscillating_levelset(1.0 / 3.0, 2.0 / 3.0, 2.0, 200).levels, "p=2 osc"},
        {3, LevelSet::all(), "p=3 all"},
        {3, LevelSet::periodic(3, {1, 2}), "p=3 {1,2 mod 3}"},
    };
    Tally t;
    int cases = 0;
    double worst_dev = 0.0;
    double worst_bound = 0.0;
    double slowest = 0.0;
    for (const auto& f : families) {
        const MeasureSpec nu = build_digit_measure(f.p, f.levels);
        const int top = largest_level_within(f.p, f.levels, 64, 1024);
        for (int n = 0; n <= top; ++n) {
            Timer timer;
            const auto trunc = truncate_digit(*nu.as<Digit>(), n);
            const auto lam = enumerate_spectrum(f.p, f.levels, n);
            const double dev = identity_deviation(gram_matrix(trunc, lam));
            const auto rep = frame_bounds_atomic(trunc, lam);
            const double secs = timer.seconds();
            const double bound_err = std::max(std::fabs(rep.lower - 1.0), std::fabs(rep.upper - 1.0));
            worst_dev = std::max(worst_dev, dev);
            worst_bound = std::max(worst_bound, bound_err);
            slowest = std::max(slowest, secs);
            const std::string id = std::string(f.name) + " n=" + std::to_string(n);
            t.require(dev <= 1e-9, id + " gram deviation " + fmt("%.3g", dev));
            t.require(bound_err <= 1e-7, id + " bounds off by " + fmt("%.3g", bound_err));
            t.require(secs < 10.0, id + " took " + fmt("%.2f s", secs));
            ++cases;
        }
    }
    return {t.failures == 0, std::to_string(cases) + " cases, max |G-I| " + fmt("%.2e", worst_dev) +
                                 ", max |A-1|,|B-1| " + fmt("%.2e", worst_bound) + ", slowest " +
                                 fmt("%.2f s", slowest) + (t.first.empty() ? "" : " | " + t.first)};
}

// 2 ------------------------------------------------------------------------------------

Verdict entropy_formula() {
    Rng rng(20240601);
    Tally t;
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
        const int p = static_cast<int>(rng.integer(2, 5));
        LevelSet levels;
        if (rng.below(2) == 0) {
            std::vector<std::int64_t> el;
            for (std::int64_t i = 1; i <= 30; ++i) {
                if (rng.below(2) == 0) {
                    el.push_back(i);
                }
            }
            levels = LevelSet::explicit_set(el);
        } else {
            const auto q = rng.integer(1, 5);
            std::vector<std::int64_t> res;
            for (std::int64_t r = 0; r < q; ++r) {
                if (rng.below(2) == 0) {
                    res.push_back(r);
                }
            }
            levels = LevelSet::periodic(q, res);
        }
        const auto n = rng.integer(1, 30);
        const double exact = digit_entropy_exact(levels, p, n);
        const double part = partition_entropy(build_digit_measure(p, levels), static_cast<int>(n));
        worst = std::max(worst, std::fabs(exact - part));
        t.require(std::fabs(exact - part) <= 1e-12,
                  "p=" + std::to_string(p) + " n=" + std::to_string(n) + " diff " + fmt("%.3g", exact - part));
    }
    const auto est = entropy_dim_estimate(build_digit_measure(2, LevelSet::evens()), 40, EntropyMode::upper);
    t.require(est.value >= 0.48 && est.value <= 0.52, "evens estimate " + fmt("%.6f", est.value));
    return {t.failures == 0, "50 cases, max diff " + fmt("%.2e", worst) + " bits; evens estimate " +
                                 fmt("%.6f", est.value) + (t.first.empty() ? "" : " | " + t.first)};
}

// 3 ------------------------------------------------------------------------------------

Verdict counterexample() {
    Timer timer;
    const auto osc = oscillating_levelset(1.0 / 3.0, 2.0 / 3.0, 2.0, 200);
    const auto rep = counterexample_report(2, osc.levels, 200);
    const double secs = timer.seconds();
    const double hausdorff = digit_hausdorff_formula(osc.levels);
    Tally t;
    t.require(rep.entropy.value >= 0.60 && rep.entropy.value <= 0.70, "entropy out of [0.60, 0.70]");
    t.require(hausdorff == 1.0 / 3.0, "Hausdorff value is not exactly 1/3");
    t.require(rep.beurling.value <= rep.entropy.value + 0.1, "Beurling exceeds entropy + 0.1");
    t.require(rep.verdict, "verdict false");
    t.require(secs < 60.0, "runtime " + fmt("%.1f s", secs));
    return {t.failures == 0, "entropy " + fmt("%.4f", rep.entropy.value) + ", Hausdorff " + fmt("%.17g", hausdorff) +
                                 ", Beurling " + fmt("%.4f", rep.beurling.value) + " (|Lambda|=" +
                                 std::to_string(rep.spectrum_size) + "), Gram residual " +
                                 fmt("%.1e", rep.orthonormality_residual) + ", verdict " +
                                 (rep.verdict ? "true" : "false") + ", " + fmt("%.1f s", secs) +
                                 (t.first.empty() ? "" : " | " + t.first)};
}

// 4 ------------------------------------------------------------------------------------

Verdict inequality_harness() {
    Tally t;
    std::string summary;
    for (const auto& f : bundled_families()) {
        const auto beurling = beurling_dim_estimate(f.spectrum);
        const auto entropy = entropy_dim_estimate(normalized(f.measure), f.entropy_n_max, EntropyMode::upper);
        summary += (summary.empty() ? "" : ", ") + f.name + " " + fmt("%.3f", beurling.value) + "<=" +
                   fmt("%.3f", entropy.value) + "+0.1";
        t.require(beurling.value <= entropy.value + 0.1, f.name + " violates");
    }
    return {t.failures == 0, summary + (t.first.empty() ? "" : " | " + t.first)};
}

// 5 ------------------------------------------------------------------------------------

Verdict counting_bound() {
    Tally t;
    Rng rng(5);
    int checks = 0;
    const std::vector<std::pair<const char*, LevelSet>> sets = {
        {"evens", LevelSet::evens()}, {"odds", LevelSet::odds()}, {"all", LevelSet::all()}};
    for (const auto& [name, levels] : sets) {
        const auto nu = build_digit_measure(2, levels);
        for (int n = 1; n <= 8; ++n) {
            const auto trunc = truncate_digit(*nu.as<Digit>(), n);
            const auto lam = enumerate_spectrum(2, levels, n);
            const double b = frame_bounds_atomic(trunc, lam).upper;
            const auto queries = sample_ball_queries(rng, lam, 100, 1.0 / 16.0, 1024.0);
            const auto rec = check_counting_bound(trunc, lam, b, 0.5, queries);
            t.require(rec.pass, std::string(name) + " n=" + std::to_string(n) + " violation " +
                                    fmt("%.3g", rec.max_violation));
            ++checks;
        }
    }
    // prod mu(D)^-mu(D) = 2^H on digit, tree and atomic measures
    double worst = 0.0;
    std::vector<MeasureSpec> measures = {build_digit_measure(2, LevelSet::evens()),
                                         build_digit_measure(3, LevelSet::odds()), lebesgue_unit(),
                                         make_tree(2, 3, {0.1, 0.2, 0.05, 0.15, 0.0, 0.3, 0.1, 0.1})};
    measures.push_back(truncate_digit(*measures[0].as<Digit>(), 8));
    for (const auto& m : measures) {
        const int base = natural_base(m) == 0 ? 2 : natural_base(m);
        for (int depth = 0; depth <= 10; ++depth) {
            const double prod = cell_entropy_product(m, base, depth);
            const double h = partition_entropy(m, depth, base);
            const double rel = std::fabs(prod - std::exp2(h)) / std::exp2(h);
            worst = std::max(worst, rel);
            t.require(rel <= 1e-10, "entropy product off by " + fmt("%.3g", rel));
        }
    }
    return {t.failures == 0, std::to_string(checks) + " pairs x 100 queries pass; product identity max rel err " +
                                 fmt("%.2e", worst) + (t.first.empty() ? "" : " | " + t.first)};
}

// 6 ------------------------------------------------------------------------------------

Verdict small_frequency() {
    Tally t;
    std::string summary;
    std::vector<std::pair<std::string, MeasureSpec>> measures;
    for (const auto& f : bundled_families()) {
        if (f.measure.dim() == 1) {
            measures.emplace_back(f.name, normalized(f.measure));
        }
    }
    const double delta = delta_for_epsilon(0.5, 1);
    for (const auto& [name, m] : measures) {
        Rng rng(6);
        const auto xi = sample_small_frequencies(rng, 10000, delta, 1);
        const auto rec = check_small_freq_lowerbound(m, 0.5, 6, xi);
        const auto failures = static_cast<std::int64_t>(rec.details.number("failures"));
        summary += (summary.empty() ? "" : ", ") + name + " " +
                   std::to_string(static_cast<std::int64_t>(rec.details.number("cells"))) + " cells min|F| " +
                   fmt("%.3f", rec.details.number("min_modulus"));
        t.require(rec.pass && failures == 0, name + " has " + std::to_string(failures) + " violations");
    }
    int eps_checked = 0;
    for (int k = 1; k <= 100; ++k) {
        const double eps = k / 101.0;
        for (int d = 1; d <= 3; ++d) {
            const double dl = delta_for_epsilon(eps, d);
            t.require(dl > 0.0 && dl < 1.0 / (4.0 * d) && std::cos(2.0 * std::numbers::pi * d * dl) > eps,
                      "delta postcondition at eps=" + fmt("%.3f", eps));
            ++eps_checked;
        }
    }
    return {t.failures == 0, summary + "; delta postconditions " + std::to_string(eps_checked) + "/300" +
                                 (t.first.empty() ? "" : " | " + t.first)};
}

// 7 ------------------------------------------------------------------------------------

Verdict change_of_measure() {
    Tally t;
    Rng atoms_rng(71);
    std::vector<Atom> atoms;
    for (int k = 0; k < 12; ++k) {
        atoms.push_back(Atom{{atoms_rng.uniform()}, atoms_rng.uniform(0.1, 1.0), {}});
    }
    const std::vector<std::pair<std::string, MeasureSpec>> specs = {
        {"digit evens", build_digit_measure(2, LevelSet::evens())},
        {"digit p=3 osc", build_digit_measure(3, oscillating_levelset(1.0 / 3.0, 2.0 / 3.0, 2.0, 200).levels)},
        {"atomic lattice", truncate_digit(*build_digit_measure(2, LevelSet::all()).as<Digit>(), 6)},
        {"atomic random", make_atomic(atoms)},
    };
    std::string summary;
    for (const auto& [name, m] : specs) {
        Rng rng(7);
        const auto rec = check_change_of_measure_sampled(m, 3, 1000, rng);
        summary += (summary.empty() ? "" : ", ") + name + " " + fmt("%.1e", rec.max_violation);
        t.require(rec.pass && rec.max_violation < 1e-9, name + " violation " + fmt("%.3g", rec.max_violation));
    }
    return {t.failures == 0, "1000 triples each: " + summary + (t.first.empty() ? "" : " | " + t.first)};
}

// 8 ------------------------------------------------------------------------------------

Verdict lev_exponents() {
    Timer timer;
    const auto sched = default_r_schedule();
    const auto dirac0 = lev_exponent_estimate(dirac({0.0}), sched, 1e-8);
    const auto leb = lev_exponent_estimate(lebesgue_unit(), sched, 1e-8);
    const double secs = timer.seconds();
    Tally t;
    t.require(sched.back() == 4096.0, "schedule does not reach 2^12");
    t.require(std::fabs(dirac0.value) <= 0.05, "delta_0 exponent " + fmt("%.4f", dirac0.value));
    t.require(leb.value >= 0.95 && leb.value <= 1.05, "Lebesgue exponent " + fmt("%.4f", leb.value));
    t.require(secs < 30.0, "runtime " + fmt("%.1f s", secs));
    return {t.failures == 0, "delta_0 " + fmt("%.4f", dirac0.value) + ", Lebesgue " + fmt("%.4f", leb.value) +
                                 ", r_max " + fmt("%g", sched.back()) + ", " + fmt("%.1f s", secs) +
                                 (t.first.empty() ? "" : " | " + t.first)};
}

// 9 ------------------------------------------------------------------------------------

Verdict fourier_dimension() {
    Tally t;
    std::string summary;
    const std::vector<std::pair<std::string, MeasureSpec>> atomic = {
        {"delta_0", dirac({0.0})},
        {"C(I_6) evens", truncate_digit(*build_digit_measure(2, LevelSet::evens()).as<Digit>(), 6)},
        {"two atoms", make_atomic({Atom{{0.0}, 0.5, {}}, Atom{{0.5}, 0.5, {}}})},
    };
    for (const auto& [name, m] : atomic) {
        const auto est = fourier_dim_estimate(m);
        const double slope = est.parameters.number("envelope_slope");
        summary += (summary.empty() ? "" : ", ") + name + " " + fmt("%g", est.value) + " (slope " +
                   fmt("%.3g", slope) + ")";
        t.require(est.value == 0.0, name + " value " + fmt("%g", est.value));
        t.require(slope >= -0.01, name + " slope " + fmt("%g", slope));
    }
    const auto leb = fourier_dim_estimate(lebesgue_unit());
    summary += ", Lebesgue " + fmt("%.4f", leb.value);
    t.require(leb.value >= 0.9 && leb.value <= 1.0, "Lebesgue " + fmt("%.4f", leb.value));
    return {t.failures == 0, summary + (t.first.empty() ? "" : " | " + t.first)};
}

// 10 -----------------------------------------------------------------------------------

Verdict equivariance() {
    Rng rng(10);
    Tally t;
    double worst = 0.0;
    int count_checks = 0;
    for (int c = 0; c < 100; ++c) {
        std::vector<Atom> atoms;
        const auto na = rng.integer(2, 8);
        for (std::int64_t k = 0; k < na; ++k) {
            atoms.push_back(Atom{{rng.uniform()}, rng.uniform(0.1, 1.0), {}});
        }
        const auto mu = make_atomic(atoms);
        std::vector<double> freqs;
        const auto nf = rng.integer(1, 8);
        for (std::int64_t k = 0; k < nf; ++k) {
            freqs.push_back(rng.uniform(-10.0, 10.0));
        }
        const auto lam = SpectrumSet::explicit_1d(freqs);
        const auto base = frame_bounds_atomic(mu, lam);

        const double v = rng.uniform(-5.0, 5.0);
        const double shift = rng.uniform(-5.0, 5.0);
        const auto moved = frame_bounds_atomic(affine_image(mu, {v}, 1.0), lam.transformed(1.0, {shift}));
        const double s = rng.uniform(0.2, 5.0);
        const auto scaled_rep = frame_bounds_atomic(affine_image(mu, {0.0}, s), lam.transformed(s));
        for (const auto* r : {&moved, &scaled_rep}) {
            const double d = std::max(std::fabs(r->lower - base.lower), std::fabs(r->upper - base.upper));
            worst = std::max(worst, d);
            t.require(d <= 1e-9, "case " + std::to_string(c) + " bounds moved by " + fmt("%.3g", d));
        }

        // counts: scale by +-2^k so that every distance scales exactly
        const double pow2 = std::ldexp(rng.below(2) ? 1.0 : -1.0, static_cast<int>(rng.integer(-6, 6)));
        const auto lam_s = lam.transformed(pow2);
        for (int q = 0; q < 5; ++q) {
            const double center = rng.uniform(-12.0, 12.0);
            const double h = rng.uniform(0.0, 10.0);
            const auto a = ball_count(lam, {center}, h);
            const auto b = ball_count(lam_s, {pow2 * center}, std::fabs(pow2) * h);
            t.require(a == b, "count " + std::to_string(a) + " != " + std::to_string(b));
            ++count_checks;
        }
        // ties on the boundary: radius exactly the distance to a point
        const double center = rng.uniform(-12.0, 12.0);
        const double h = std::fabs(freqs.front() - center);
        t.require(ball_count(lam, {center}, h) == ball_count(lam_s, {pow2 * center}, std::fabs(pow2) * h),
                  "boundary tie count differs");
        ++count_checks;
    }
    return {t.failures == 0, "100 cases, max bound change " + fmt("%.2e", worst) + ", " +
                                 std::to_string(count_checks) + " exact count comparisons" +
                                 (t.first.empty() ? "" : " | " + t.first)};
}

// 11 -----------------------------------------------------------------------------------

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult cli_run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    CliResult r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    os << text;
}

Verdict determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::current_path() / "acceptance_work";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto f = [&](const char* name) { return (dir / name).string(); };

    Tally t;
    write_file(f("leb.json"), R"({"schema_version": 1, "kind": "measure", "measure": {"type": "lebesgue"}})");
    write_file(f("quad.json"), R"({"schema_version": 1, "kind": "measure", "measure": {"type": "atomic", "dim": 1,
        "atoms": [{"point": ["0.125"], "weight": "0.25"}, {"point": ["0.375"], "weight": "0.25"},
                  {"point": ["0.625"], "weight": "0.25"}, {"point": ["0.875"], "weight": "0.25"}]}})");
    write_file(f("quad_spec.json"),
               R"({"schema_version": 1, "kind": "spectrum", "spectrum": {"type": "explicit", "dim": 1,
        "points": ["0", "1", "2", "3"]}})");
    // inputs produced by the CLI itself
    const std::vector<std::pair<const char*, std::vector<std::string>>> producers = {
        {"nu.json", {"build-nu", "--p", "2", "--levels", "evens"}},
        {"nu8.json", {"build-nu", "--p", "2", "--levels", "evens", "--truncate", "8"}},
        {"lam8.json", {"enumerate-spectrum", "--p", "2", "--levels", "evens", "--n", "8"}},
    };
    for (const auto& [file, args] : producers) {
        const auto r = cli_run(args);
        t.require(r.code == 0, std::string(file) + " not produced: " + r.err);
        write_file(f(file), r.out);
    }

    const std::vector<std::vector<std::string>> runs = {
        {"entropy-dim", "--measure", f("leb.json"), "--depth", "40", "--emit-plot-data", f("plots")},
        {"beurling-dim", "--spectrum", f("lam8.json")},
        {"fourier-dim", "--measure", f("leb.json")},
        {"lev-exponent", "--measure", f("leb.json")},
        {"frame-bounds", "--measure", f("nu8.json"), "--spectrum", f("lam8.json")},
        {"frame-bounds", "--measure", f("leb.json"), "--spectrum", f("lam8.json"), "--seed", "11"},
        {"gram", "--measure", f("nu8.json"), "--spectrum", f("lam8.json")},
        {"check-lemma41", "--measure", f("nu.json"), "--seed", "41"},
        {"check-lemma42", "--measure", f("nu.json"), "--epsilon", "0.5", "--samples", "10000"},
        {"check-counting-bound", "--measure", f("nu8.json"), "--spectrum", f("lam8.json"), "--seed", "9"},
        {"check-restriction", "--measure", f("quad.json"), "--spectrum", f("quad_spec.json"), "--cell-depth", "1",
         "--cell-index", "0"},
        {"build-nu", "--p", "3", "--levels", "osc:1/3,2/3,2", "--nmax", "60"},
        {"enumerate-spectrum", "--p", "2", "--levels", "odds", "--n", "10"},
        {"counterexample-report", "--p", "2", "--levels", "osc:0.333,0.667,2", "--nmax", "200"},
        {"non-spectral-certificate", "--mu", f("leb.json"), "--nu", f("nu.json")},
        {"mixed", "--mu", f("nu.json"), "--nu", f("leb.json"), "--seed", "3"},
    };
    std::vector<std::string> covered;
    for (const auto& args : runs) {
        const auto a = cli_run(args);
        const std::string plots_a = args[0] == "entropy-dim" ? slurp(dir / "plots" / "entropy.csv") : "";
        const auto b = cli_run(args);
        const std::string plots_b = args[0] == "entropy-dim" ? slurp(dir / "plots" / "entropy.csv") : "";
        t.require(a.code == 0 && b.code == 0, args[0] + " exit " + std::to_string(a.code) + " " + a.err);
        t.require(!a.out.empty() && a.out == b.out, args[0] + " output differs between runs");
        t.require(plots_a == plots_b, args[0] + " plot data differs between runs");
        if (covered.empty() || covered.back() != args[0]) {
            covered.push_back(args[0]);
        }
    }
    t.require(covered.size() == cli::subcommands().size(), "not every subcommand was exercised");

    // parallelism degree is not part of the output and must not change it
    const std::vector<std::vector<std::string>> threaded = {
        {"gram", "--measure", f("nu8.json"), "--spectrum", f("lam8.json")},
        {"check-lemma42", "--measure", f("nu.json"), "--samples", "2000"},
        {"counterexample-report", "--p", "2", "--levels", "evens", "--nmax", "40"},
    };
    for (auto args : threaded) {
        const auto one = cli_run(args);
        args.insert(args.end(), {"--threads", "3"});
        const auto three = cli_run(args);
        t.require(one.code == 0 && one.out == three.out, args[0] + " depends on --threads");
    }
    fs::remove_all(dir);
    return {t.failures == 0, std::to_string(runs.size()) + " runs over " + std::to_string(covered.size()) +
                                 " subcommands byte-identical; thread count invariant" +
                                 (t.first.empty() ? "" : " | " + t.first)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"spectral-pair orthonormality", spectral_pairs},
        {"entropy formula equivalence", entropy_formula},
        {"entropy/Hausdorff counterexample", counterexample},
        {"Beurling <= entropy harness", inequality_harness},
        {"counting bound", counting_bound},
        {"small-frequency lower bound", small_frequency},
        {"change-of-measure identity", change_of_measure},
        {"Lev exponents", lev_exponents},
        {"Fourier dimension", fourier_dimension},
        {"equivariance", equivariance},
        {"CLI determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        Timer timer;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::cout << (v.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << " ["
                  << fmt("%.1f s", timer.seconds()) << "]: " << v.detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failed;
}
