#include "specdim/cli.hpp"

#include "specdim/constructions.hpp"
#include "specdim/dimension.hpp"
#include "specdim/frame.hpp"
#include "specdim/rng.hpp"
#include "specdim/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace specdim::cli {

namespace {

struct PlotFile {
    std::string name;
    std::string header;
    std::vector<std::pair<double, double>> rows;
};

struct Outcome {
    Json body;  // written to stdout as is
    std::vector<PlotFile> plots;
    std::optional<std::vector<CurvePoint>> curve;  // --format csv
    bool failed = false;
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ---- config echo --------------------------------------------------------------------

Json full_config(const RunConfig& c) {
    Json j;
    j["measure"] = c.measure;
    j["spectrum"] = c.spectrum;
    j["mu"] = c.mu;
    j["nu"] = c.nu;
    j["rho"] = c.rho;
    j["depth"] = c.depth;
    j["base"] = c.base;
    j["mode"] = c.mode;
    j["window"] = c.window;
    j["tol"] = c.tol;
    j["check_tol"] = c.check_tol;
    j["quad_tol"] = c.quad_tol;
    j["points"] = c.points;
    Json sched = Json::array();
    for (double h : c.schedule) {
        sched.push_back(h);
    }
    j["schedule"] = std::move(sched);
    j["xi0"] = c.xi0;
    j["epsilon"] = c.epsilon;
    j["samples"] = c.samples;
    j["cell_depth"] = c.cell_depth;
    Json idx = Json::array();
    for (auto k : c.cell_index) {
        idx.push_back(k);
    }
    j["cell_index"] = std::move(idx);
    j["freq_range"] = c.freq_range;
    j["bessel"] = c.bessel;
    j["h_min"] = c.h_min;
    j["h_max"] = c.h_max;
    j["p"] = c.p;
    j["levels"] = c.levels;
    j["n_max"] = c.n_max;
    j["n"] = c.n;
    j["exponent_offset"] = c.exponent_offset;
    j["truncate"] = c.truncate;
    j["margin"] = c.margin;
    j["spectrum_cap"] = c.spectrum_cap;
    j["gram_cap"] = c.gram_cap;
    j["entropy_n_max"] = c.entropy_n_max;
    j["normalize"] = c.normalize;
    j["include_matrix"] = c.include_matrix;
    return j;
}

Json config_json(const RunConfig& c, std::initializer_list<const char*> keys) {
    const Json all = full_config(c);
    Json j;
    j["seed"] = c.seed;
    for (const char* k : keys) {
        j[k] = all.at(k);
    }
    j["limits"] = to_json(c.limits);
    return j;
}

Json envelope(const RunConfig& c, Json config, Json result) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "report";
    j["subcommand"] = c.subcommand;
    j["config"] = std::move(config);
    j["result"] = std::move(result);
    return j;
}

// ---- inputs -------------------------------------------------------------------------

MeasureSpec load_measure(const std::string& source, const char* flag) {
    if (source.empty()) {
        throw UsageError(std::string("--") + flag + " is required");
    }
    return measure_from_json(read_json_source(source), flag);
}

SpectrumSet load_spectrum(const RunConfig& c) {
    if (c.spectrum.empty()) {
        throw UsageError("--spectrum is required");
    }
    return spectrum_from_json(read_json_source(c.spectrum), c.limits);
}

int checked_depth(const RunConfig& c) {
    if (c.depth < 0) {
        throw UsageError("--depth must be >= 0");
    }
    check_limit("max_depth", static_cast<std::uint64_t>(c.limits.max_depth), static_cast<std::uint64_t>(c.depth));
    return c.depth;
}

std::size_t sample_count(const RunConfig& c) {
    if (c.samples < 0) {
        throw UsageError("--samples must be >= 0");
    }
    return static_cast<std::size_t>(c.samples);
}

/// Fills subcommand defaults so the echoed config shows the values actually used.
void resolve_defaults(RunConfig& c) {
    static const std::map<std::string, int> depth = {{"entropy-dim", 40}, {"check-lemma42", 6}};
    static const std::map<std::string, long long> samples = {{"frame-bounds", 16},   {"check-lemma41", 1000},
                                                             {"check-lemma42", 10000}, {"check-counting-bound", 100},
                                                             {"mixed", 100}};
    if (c.depth < 0 && depth.count(c.subcommand)) {
        c.depth = depth.at(c.subcommand);
    }
    if (c.samples < 0 && samples.count(c.subcommand)) {
        c.samples = samples.at(c.subcommand);
    }
}

LevelSet levels_of(const RunConfig& c) { return parse_level_shorthand(c.levels, c.n_max); }

// ---- plot data ------------------------------------------------------------------------

PlotFile entropy_plot(const DimensionEstimate& e) {
    PlotFile f{"entropy.csv", "n,H_n_over_n", {}};
    for (const auto& p : e.curve) {
        f.rows.emplace_back(p.index, p.statistic);
    }
    return f;
}

PlotFile beurling_plot(const DimensionEstimate& e) {
    PlotFile f{"beurling.csv", "log_h,log_count", {}};
    for (const auto& p : e.curve) {
        f.rows.emplace_back(std::log(p.scale), std::log(p.statistic));
    }
    return f;
}

PlotFile fourier_plot(const DimensionEstimate& e) {
    PlotFile f{"fourier.csv", "log_xi,log_abs_fourier", {}};
    for (const auto& p : e.curve) {
        f.rows.emplace_back(std::log(p.scale), p.statistic);
    }
    return f;
}

PlotFile lev_plot(const DimensionEstimate& e) {
    PlotFile f{"lev.csv", "log_r,log_integral", {}};
    for (const auto& p : e.curve) {
        f.rows.emplace_back(std::log(p.scale), p.statistic);
    }
    return f;
}

void write_plots(const std::string& dir, const std::vector<PlotFile>& plots) {
    std::filesystem::create_directories(dir);
    for (const auto& pf : plots) {
        const auto path = std::filesystem::path(dir) / pf.name;
        std::ofstream os(path, std::ios::binary);
        if (!os) {
            throw std::ios_base::failure("cannot write '" + path.string() + "'");
        }
        os << pf.header << "\n";
        char buf[96];
        for (const auto& [x, y] : pf.rows) {
            std::snprintf(buf, sizeof buf, "%s,%s\n", format_real(x).c_str(), format_real(y).c_str());
            os << buf;
        }
    }
}

// ---- subcommands -----------------------------------------------------------------------

Outcome cmd_entropy(const RunConfig& c) {
    const auto m = load_measure(c.measure, "measure");
    const int n_max = checked_depth(c);
    if (c.mode != "both" && c.mode != "upper" && c.mode != "lower") {
        throw UsageError("--mode must be upper, lower or both");
    }
    Outcome o;
    Json result;
    result["dim"] = m.dim();
    result["total_mass"] = total_mass(m);
    DimensionEstimate est;
    if (c.mode != "lower") {
        est = entropy_dim_estimate(m, n_max, EntropyMode::upper, c.base, c.window);
        result["upper"] = to_json(est);
    }
    if (c.mode != "upper") {
        auto lower = entropy_dim_estimate(m, n_max, EntropyMode::lower, c.base, c.window);
        result["lower"] = to_json(lower);
        if (c.mode == "lower") {
            est = std::move(lower);
        }
    }
    o.plots.push_back(entropy_plot(est));
    o.curve = est.curve;
    o.body = envelope(c, config_json(c, {"measure", "depth", "base", "mode", "window"}), std::move(result));
    return o;
}

Outcome cmd_beurling(const RunConfig& c) {
    const auto lambda = load_spectrum(c);
    DimensionEstimate est = beurling_dim_estimate(lambda, c.schedule.empty() ? default_h_schedule(lambda, c.points) : c.schedule);
    Outcome o;
    o.plots.push_back(beurling_plot(est));
    o.curve = est.curve;
    o.body = envelope(c, config_json(c, {"spectrum", "points", "schedule"}), to_json(est));
    return o;
}

Outcome cmd_fourier(const RunConfig& c) {
    const auto m = load_measure(c.measure, "measure");
    FourierDimOptions opt;
    opt.xi0 = c.xi0;
    opt.points = c.points;
    opt.tol = c.tol;
    DimensionEstimate est = fourier_dim_estimate(m, opt);
    Outcome o;
    o.plots.push_back(fourier_plot(est));
    o.curve = est.curve;
    o.body = envelope(c, config_json(c, {"measure", "xi0", "points", "tol"}), to_json(est));
    return o;
}

Outcome cmd_lev(const RunConfig& c) {
    const auto m = load_measure(c.measure, "measure");
    DimensionEstimate est = lev_exponent_estimate(m, c.schedule, c.quad_tol);
    Outcome o;
    o.plots.push_back(lev_plot(est));
    o.curve = est.curve;
    o.body = envelope(c, config_json(c, {"measure", "schedule", "quad_tol"}), to_json(est));
    return o;
}

std::vector<TrialFunction> random_trials(const SpectrumSet& lambda, std::size_t count, Rng& rng) {
    std::vector<TrialFunction> trials;
    const std::size_t dim = lambda.dim();
    const std::size_t pure = std::min(count / 2, lambda.size());
    for (std::size_t k = 0; k < pure; ++k) {
        trials.push_back(TrialFunction::exponential(lambda.points()[k * lambda.size() / pure]));
    }
    Point lo(dim, 0.0);
    Point hi(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
        lo[j] = hi[j] = lambda.points().front()[j];
    }
    for (const auto& p : lambda.points()) {
        for (std::size_t j = 0; j < dim; ++j) {
            lo[j] = std::min(lo[j], p[j]);
            hi[j] = std::max(hi[j], p[j]);
        }
    }
    while (trials.size() < count) {
        TrialFunction f;
        const auto terms = 1 + rng.below(3);
        for (std::uint64_t t = 0; t < terms; ++t) {
            Point x(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                x[j] = rng.uniform(lo[j] - 1.0, hi[j] + 1.0);
            }
            f.frequencies.push_back(std::move(x));
            const double re = rng.uniform(-1.0, 1.0);
            const double im = rng.uniform(-1.0, 1.0);
            f.coefficients.emplace_back(re, im);
        }
        trials.push_back(std::move(f));
    }
    return trials;
}

Outcome cmd_frame_bounds(const RunConfig& c) {
    const auto m = load_measure(c.measure, "measure");
    const auto lambda = load_spectrum(c);
    Json result;
    if (m.as<Atomic>()) {
        result["bound_kind"] = "exact";
        result["report"] = to_json(frame_bounds_atomic(m, lambda, c.limits));
    } else {
        Rng rng(c.seed);
        const auto trials = random_trials(lambda, sample_count(c), rng);
        result["bound_kind"] = "bracket";
        result["note"] = "upper is a lower bound for B and lower an upper bound for A";
        result["report"] = to_json(frame_bounds_bracket(m, lambda, trials, c.tol));
    }
    Outcome o;
    o.body = envelope(c, config_json(c, {"measure", "spectrum", "samples", "tol"}), std::move(result));
    return o;
}

Outcome cmd_gram(const RunConfig& c) {
    const auto m = load_measure(c.measure, "measure");
    const auto lambda = load_spectrum(c);
    const ComplexMatrix g = gram_matrix(m, lambda, c.tol, c.limits, c.threads);
    Json result;
    result["size"] = lambda.size();
    result["identity_deviation"] = identity_deviation(g);
    result["hermitian_error"] = (g - g.adjoint()).cwiseAbs().maxCoeff();
    if (c.include_matrix || lambda.size() <= 16) {
        Json rows = Json::array();
        for (Eigen::Index a = 0; a < g.rows(); ++a) {
            Json row = Json::array();
            for (Eigen::Index b = 0; b < g.cols(); ++b) {
                row.push_back(Json::array({g(a, b).real(), g(a, b).imag()}));
            }
            rows.push_back(std::move(row));
        }
        result["matrix"] = std::move(rows);
    }
    Outcome o;
    o.body = envelope(c, config_json(c, {"measure", "spectrum", "tol", "include_matrix"}), std::move(result));
    return o;
}

Outcome check_outcome(const RunConfig& c, Json config, const LemmaCheckRecord& rec) {
    Outcome o;
    o.failed = !rec.pass;
    o.body = envelope(c, std::move(config), to_json(rec));
    return o;
}

Outcome cmd_lemma41(const RunConfig& c) {
    const auto m = load_measure(c.measure, "measure");
    Rng rng(c.seed);
    const auto rec = check_change_of_measure_sampled(m, c.cell_depth, sample_count(c), rng, c.freq_range, c.base,
                                                     c.check_tol, c.limits);
    return check_outcome(c, config_json(c, {"measure", "cell_depth", "base", "samples", "freq_range", "check_tol"}),
                         rec);
}

Outcome cmd_lemma42(const RunConfig& c) {
    const auto m = load_measure(c.measure, "measure");
    Rng rng(c.seed);
    const double delta = delta_for_epsilon(c.epsilon, static_cast<int>(m.dim()));
    const auto xi = sample_small_frequencies(rng, sample_count(c), delta, m.dim());
    const auto rec = check_small_freq_lowerbound(m, c.epsilon, checked_depth(c), xi, c.base, c.threads);
    return check_outcome(c, config_json(c, {"measure", "epsilon", "depth", "base", "samples"}), rec);
}

Outcome cmd_counting(const RunConfig& c) {
    const auto m = load_measure(c.measure, "measure");
    const auto lambda = load_spectrum(c);
    double bessel = c.bessel;
    if (bessel == 0.0) {
        if (!m.as<Atomic>()) {
            throw UsageError("--bessel is required unless the measure is atomic");
        }
        bessel = frame_bounds_atomic(m, lambda, c.limits).upper;
    }
    Rng rng(c.seed);
    const auto queries = sample_ball_queries(rng, lambda, sample_count(c), c.h_min, c.h_max);
    auto rec = check_counting_bound(m, lambda, bessel, c.epsilon, queries, c.base, c.limits);
    rec.details.set("bessel_source", std::string(c.bessel == 0.0 ? "exact atomic frame bound" : "given"));
    return check_outcome(c,
                         config_json(c, {"measure", "spectrum", "bessel", "epsilon", "samples", "h_min", "h_max", "base"}),
                         rec);
}

Outcome cmd_restriction(const RunConfig& c) {
    const auto m = load_measure(c.measure, "measure");
    const auto lambda = load_spectrum(c);
    std::vector<std::int64_t> idx(c.cell_index.begin(), c.cell_index.end());
    if (idx.empty()) {
        idx.assign(m.dim(), 0);
    }
    const int base = c.base != 0 ? c.base : (natural_base(m) != 0 ? natural_base(m) : 2);
    const Cell k = Cell::make(base, c.cell_depth, idx);
    const auto rec = check_restriction_lemma(m, lambda, k, c.check_tol, c.limits);
    return check_outcome(c, config_json(c, {"measure", "spectrum", "cell_depth", "cell_index", "base", "check_tol"}),
                         rec);
}

Outcome cmd_build_nu(const RunConfig& c) {
    const LevelSet levels = levels_of(c);
    MeasureSpec nu = build_digit_measure(c.p, levels);
    if (c.truncate >= 0) {
        nu = truncate_digit(*nu.as<Digit>(), c.truncate, c.limits);
    }
    Json doc = measure_document(nu);
    doc["hausdorff"] = levels.liminf_density();
    doc["limsup_density"] = levels.limsup_density();
    Outcome o;
    o.body = std::move(doc);
    return o;
}

Outcome cmd_enumerate(const RunConfig& c) {
    if (c.n < 0) {
        throw UsageError("--n is required");
    }
    const auto lambda = enumerate_spectrum(c.p, levels_of(c), c.n, c.exponent_offset, c.limits);
    Outcome o;
    o.body = spectrum_document(lambda, true);
    return o;
}

Outcome cmd_counterexample(const RunConfig& c) {
    LevelSet levels = levels_of(c);
    Json construction;
    if (const auto* osc = std::get_if<OscillatingLevels>(&levels.kind()); osc && levels.shift() == 0) {
        const auto built = oscillating_levelset(osc->low, osc->high, osc->growth, c.n_max);
        levels = built.levels;
        construction = to_json(built);
    }
    CounterexampleOptions opt;
    opt.exponent_offset = c.exponent_offset;
    opt.spectrum_cap = c.spectrum_cap;
    opt.gram_cap = c.gram_cap;
    opt.margin = c.margin;
    opt.threads = c.threads;
    CounterexampleReport est = counterexample_report(c.p, levels, c.n_max, opt);
    Json result = to_json(est);
    if (!construction.is_null()) {
        result["construction"] = std::move(construction);
    }
    Outcome o;
    o.plots.push_back(entropy_plot(est.entropy));
    o.plots.push_back(beurling_plot(est.beurling));
    o.curve = est.beurling.curve;
    o.body = envelope(c,
                      config_json(c, {"p", "levels", "n_max", "exponent_offset", "margin", "spectrum_cap", "gram_cap"}),
                      std::move(result));
    return o;
}

Outcome cmd_certificate(const RunConfig& c) {
    const auto mu = load_measure(c.mu, "mu");
    const auto nu = load_measure(c.nu, "nu");
    const auto rho = c.rho.empty() ? zero_measure(mu.dim()) : load_measure(c.rho, "rho");
    CertificateOptions opt;
    opt.entropy_n_max = c.entropy_n_max;
    opt.fourier.xi0 = c.xi0;
    opt.fourier.points = c.points;
    opt.fourier.tol = c.tol;
    Certificate est = non_spectral_certificate(mu, nu, rho, opt);
    Outcome o;
    o.plots.push_back(fourier_plot(est.fourier));
    o.plots.push_back(entropy_plot(est.entropy));
    o.body = envelope(c, config_json(c, {"mu", "nu", "rho", "entropy_n_max", "xi0", "points", "tol"}), to_json(est));
    return o;
}

Outcome cmd_mixed(const RunConfig& c) {
    const auto mu = load_measure(c.mu, "mu");
    const auto nu = load_measure(c.nu, "nu");
    const MeasureSpec rho = mixed_measure(mu, nu);

    // rho^(xi, eta) = mu^(xi) + nu^(eta) on seeded samples
    Rng rng(c.seed);
    const std::size_t count = sample_count(c);
    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        Point xi(mu.dim());
        Point eta(nu.dim());
        for (auto& x : xi) {
            x = rng.uniform(-c.freq_range, c.freq_range);
        }
        for (auto& x : eta) {
            x = rng.uniform(-c.freq_range, c.freq_range);
        }
        Point joint = xi;
        joint.insert(joint.end(), eta.begin(), eta.end());
        const Complex lhs = fourier(rho, joint, c.tol);
        const Complex rhs = fourier(mu, xi, c.tol) + fourier(nu, eta, c.tol);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    LemmaCheckRecord rec;
    rec.lemma = "mixed_fourier_identity";
    rec.samples = count;
    rec.max_violation = worst;
    rec.tolerance = 2.0 * c.tol + 1e-14;  // plus rounding of the three sums
    rec.pass = worst <= rec.tolerance;
    rec.details.set("frequency_range", c.freq_range);

    const MeasureSpec out = c.normalize ? normalized(rho) : rho;
    Json doc = measure_document(out);
    doc["normalized"] = c.normalize;
    doc["fourier_identity"] = to_json(rec);
    Outcome o;
    o.failed = !rec.pass;
    o.body = std::move(doc);
    return o;
}

using Handler = std::function<Outcome(const RunConfig&)>;

struct Entry {
    const char* name;
    const char* help;
    Handler fn;
};

const std::vector<Entry>& entries() {
    static const std::vector<Entry> list = {
        {"entropy-dim", "upper/lower entropy dimension of a measure", cmd_entropy},
        {"beurling-dim", "Beurling dimension of a finite frequency set", cmd_beurling},
        {"fourier-dim", "Fourier decay exponent of a measure", cmd_fourier},
        {"lev-exponent", "growth exponent of the integral of |mu^|^2 over [-r, r]", cmd_lev},
        {"frame-bounds", "frame bounds (exact for atomic measures, bracketed otherwise)", cmd_frame_bounds},
        {"gram", "Gram matrix of exponentials over a spectrum", cmd_gram},
        {"check-lemma41", "change-of-measure identity on random (t, lambda, D)", cmd_lemma41},
        {"check-lemma42", "small-frequency lower bound on all positive-mass cells", cmd_lemma42},
        {"check-counting-bound", "ball counts against the entropy bound", cmd_counting},
        {"check-restriction", "frame ratios of a restriction stay within [A, B]", cmd_restriction},
        {"build-nu", "digit measure nu_I as a measure document", cmd_build_nu},
        {"enumerate-spectrum", "spectrum Lambda_{I_n} as a spectrum document", cmd_enumerate},
        {"counterexample-report", "entropy vs Hausdorff vs Beurling for nu_I", cmd_counterexample},
        {"non-spectral-certificate", "Fourier/entropy gap plus support disjointness", cmd_certificate},
        {"mixed", "mu x delta_0 + delta_0 x nu with a Fourier identity check", cmd_mixed},
    };
    return list;
}

void add_options(CLI::App& sub, RunConfig& c) {
    sub.add_option("--measure", c.measure, "measure spec file (or inline JSON)");
    sub.add_option("--spectrum", c.spectrum, "spectrum spec file (or inline JSON)");
    sub.add_option("--mu", c.mu, "first measure");
    sub.add_option("--nu", c.nu, "second measure");
    sub.add_option("--rho", c.rho, "third measure (default: zero)");
    sub.add_option("--depth", c.depth, "partition depth / n_max for entropy");
    sub.add_option("--base", c.base, "partition base (0: natural)")->capture_default_str();
    sub.add_option("--mode", c.mode, "upper | lower | both")->capture_default_str();
    sub.add_option("--window", c.window, "tail window (0: ceil(n_max/4))");
    sub.add_option("--tol", c.tol, "Fourier evaluation tolerance")->capture_default_str();
    sub.add_option("--check-tol", c.check_tol, "tolerance of lemma checks")->capture_default_str();
    sub.add_option("--quad-tol", c.quad_tol, "quadrature tolerance")->capture_default_str();
    sub.add_option("--points", c.points, "schedule length")->capture_default_str();
    sub.add_option("--schedule", c.schedule, "explicit h or r schedule")->delimiter(',');
    sub.add_option("--xi0", c.xi0, "first frequency of the decay schedule")->capture_default_str();
    sub.add_option("--epsilon", c.epsilon, "epsilon of the small-frequency bound")->capture_default_str();
    sub.add_option("--samples", c.samples, "number of random samples / trials");
    sub.add_option("--cell-depth", c.cell_depth, "cell depth")->capture_default_str();
    sub.add_option("--cell-index", c.cell_index, "cell index per coordinate")->delimiter(',');
    sub.add_option("--freq-range", c.freq_range, "random frequencies lie in [-R, R]")->capture_default_str();
    sub.add_option("--bessel", c.bessel, "known Bessel bound (0: exact for atomic)");
    sub.add_option("--h-min", c.h_min, "smallest ball radius")->capture_default_str();
    sub.add_option("--h-max", c.h_max, "largest ball radius")->capture_default_str();
    sub.add_option("--p", c.p, "digit base")->capture_default_str();
    sub.add_option("--levels", c.levels, "evens|odds|all|none|explicit:..|periodic:q:r,..|osc:low,high,growth")
        ->capture_default_str();
    sub.add_option("--nmax", c.n_max, "largest level")->capture_default_str();
    sub.add_option("--n", c.n, "spectrum level");
    sub.add_option("--offset", c.exponent_offset, "spectrum exponent offset")->capture_default_str();
    sub.add_option("--truncate", c.truncate, "truncate nu_I to C(I_n)");
    sub.add_option("--margin", c.margin, "verdict margin")->capture_default_str();
    sub.add_option("--spectrum-cap", c.spectrum_cap, "largest |Lambda| for the Beurling estimate")
        ->capture_default_str();
    sub.add_option("--gram-cap", c.gram_cap, "largest |Lambda| for the Gram residual")->capture_default_str();
    sub.add_option("--entropy-nmax", c.entropy_n_max, "n_max of the entropy estimate")->capture_default_str();
    sub.add_flag("--normalize", c.normalize, "divide by total mass");
    sub.add_flag("--include-matrix", c.include_matrix, "always print the Gram matrix");
    sub.add_option("--seed", c.seed, "random seed")->capture_default_str();
    sub.add_option("--threads", c.threads, "worker threads (never changes results)")->capture_default_str();
    sub.add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub.add_option("--emit-plot-data", c.plot_dir, "directory for plot-ready CSV files");
    sub.add_option("--output", c.output, "also write the output to this file");
    sub.add_option("--max-atoms", c.limits.max_atoms, "resource limit")->capture_default_str();
    sub.add_option("--max-gram", c.limits.max_gram, "resource limit")->capture_default_str();
    sub.add_option("--max-depth", c.limits.max_depth, "resource limit")->capture_default_str();
    sub.add_option("--max-spectrum", c.limits.max_spectrum, "resource limit")->capture_default_str();
    sub.add_option("--max-cells", c.limits.max_cells, "resource limit")->capture_default_str();
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : entries()) {
            v.emplace_back(e.name);
        }
        return v;
    }();
    return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"spectral dimension toolkit"};
    app.name("specdim");
    app.require_subcommand(1, 1);
    std::map<const CLI::App*, const Entry*> by_app;
    for (const auto& e : entries()) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_options(*sub, cfg);
        by_app[sub] = &e;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream help_out;
        std::ostringstream err_out;
        const int code = app.exit(e, help_out, err_out);
        out << help_out.str();
        err << err_out.str();
        return code == 0 ? 0 : 1;
    }

    const Entry* entry = nullptr;
    for (const auto* sub : app.get_subcommands()) {
        entry = by_app.at(sub);
    }
    cfg.subcommand = entry->name;
    resolve_defaults(cfg);

    try {
        Outcome o = entry->fn(cfg);
        std::string text;
        if (cfg.format == "csv") {
            if (!o.curve) {
                throw UsageError("--format csv needs a subcommand that produces a curve");
            }
            std::ostringstream os;
            write_curve_csv(os, *o.curve);
            text = os.str();
        } else {
            text = dump_json(o.body);
        }
        if (!cfg.plot_dir.empty()) {
            write_plots(cfg.plot_dir, o.plots);
        }
        if (!cfg.output.empty()) {
            std::ofstream os(cfg.output, std::ios::binary);
            if (!os) {
                throw std::ios_base::failure("cannot write '" + cfg.output + "'");
            }
            os << text;
        }
        out << text;
        return o.failed ? 2 : 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const MalformedSpec& e) {
        err << "malformed spec: " << e.what() << "\n";
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << "\n";
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
    } catch (const ConvergenceError& e) {
        err << "convergence error: " << e.what() << "\n";
    } catch (const std::ios_base::failure& e) {
        err << "io error: " << e.what() << "\n";
    } catch (const std::filesystem::filesystem_error& e) {
        err << "io error: " << e.what() << "\n";
    }
    return 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

}  // namespace specdim::cli
