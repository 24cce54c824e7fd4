#include "specdim/dimension.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace specdim {

const char* method_name(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::tail_max:
            return "tail-max";
        case EstimateMethod::tail_min:
            return "tail-min";
        case EstimateMethod::slope_fit:
            return "slope-fit";
    }
    return "unknown";
}

void ParamList::set(std::string key, ParamValue v) {
    for (auto& [k, old] : items) {
        if (k == key) {
            old = std::move(v);
            return;
        }
    }
    items.emplace_back(std::move(key), std::move(v));
}

const ParamValue* ParamList::find(const std::string& key) const {
    for (const auto& [k, v] : items) {
        if (k == key) {
            return &v;
        }
    }
    return nullptr;
}

double ParamList::number(const std::string& key) const {
    const auto* v = find(key);
    if (!v) {
        throw DomainError("no parameter '" + key + "'");
    }
    if (const auto* d = std::get_if<double>(v)) {
        return *d;
    }
    if (const auto* i = std::get_if<std::int64_t>(v)) {
        return static_cast<double>(*i);
    }
    throw DomainError("parameter '" + key + "' is not numeric");
}

void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve) {
    char buf[128];
    os << "index,scale,statistic\n";
    for (const auto& c : curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", c.index, c.scale, c.statistic);
        os << buf;
    }
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y, double* residual) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) {
        throw DomainError("slope fit needs at least two points");
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw DomainError("slope fit needs distinct abscissae");
    }
    const double slope = sxy / sxx;
    if (residual) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = y[i] - (my + slope * (x[i] - mx));
            ss += e * e;
        }
        *residual = std::sqrt(ss / static_cast<double>(n));
    }
    return slope;
}

namespace {

/// Index range [first, n) of the last half of n points, but at least `min_points`.
std::size_t tail_start(std::size_t n, std::size_t min_points) {
    const std::size_t len = std::max<std::size_t>(min_points, (n + 1) / 2);
    return n > len ? n - len : 0;
}

}  // namespace

// Entropy -------------------------------------------------------------------------

double partition_entropy(const MeasureSpec& spec, int n, int base, const Limits& limits) {
    if (n < 0) {
        throw DomainError("partition depth must be >= 0");
    }
    if (!is_probability(spec, 1e-10)) {
        throw DomainError("entropy needs a probability measure (total mass " + std::to_string(total_mass(spec)) + ")");
    }
    if (base == 0) {
        base = natural_base(spec) == 0 ? 2 : natural_base(spec);
    }
    double h = 0.0;
    for (const auto& b : mass_histogram(spec, base, n, limits)) {
        h += b.count * b.mass * -std::log2(b.mass);
    }
    return std::max(h, 0.0);
}

DimensionEstimate entropy_dim_estimate(const MeasureSpec& spec, int n_max, EntropyMode mode, int base,
                                       int tail_window) {
    if (n_max < 8) {
        throw DomainError("entropy dimension estimate needs n_max >= 8");
    }
    const auto [lo, hi] = support_box(spec);
    for (std::size_t j = 0; j < lo.size(); ++j) {
        if (!std::isfinite(lo[j]) || !std::isfinite(hi[j])) {
            if (lo[j] > hi[j]) {
                continue;  // zero measure along this axis
            }
            throw DomainError("entropy dimension needs a compactly supported measure");
        }
    }
    if (base == 0) {
        base = natural_base(spec) == 0 ? 2 : natural_base(spec);
    }
    if (tail_window <= 0) {
        tail_window = (n_max + 3) / 4;
    }
    tail_window = std::min(tail_window, n_max);
    const double lb = std::log2(static_cast<double>(base));
    DimensionEstimate est;
    est.quantity = "entropy_dimension";
    est.method = mode == EntropyMode::upper ? EstimateMethod::tail_max : EstimateMethod::tail_min;
    std::vector<double> hs;
    for (int n = 1; n <= n_max; ++n) {
        const double h = partition_entropy(spec, n, base);
        hs.push_back(h);
        est.curve.push_back(CurvePoint{static_cast<double>(n), static_cast<double>(n), h / (n * lb)});
    }
    double mx = -1.0;
    double mn = 1e300;
    std::vector<double> xs;
    std::vector<double> ys;
    for (int n = n_max - tail_window + 1; n <= n_max; ++n) {
        const double v = est.curve[static_cast<std::size_t>(n - 1)].statistic;
        mx = std::max(mx, v);
        mn = std::min(mn, v);
        xs.push_back(n);
        ys.push_back(hs[static_cast<std::size_t>(n - 1)] / lb);
    }
    est.value = mode == EntropyMode::upper ? mx : mn;
    est.residual = mx - mn;
    est.parameters.set("mode", std::string(mode == EntropyMode::upper ? "upper" : "lower"));
    est.parameters.set("base", static_cast<std::int64_t>(base));
    est.parameters.set("n_max", static_cast<std::int64_t>(n_max));
    est.parameters.set("tail_window", static_cast<std::int64_t>(tail_window));
    est.parameters.set("normalization", std::string("H_n / (n log2 b)"));
    est.parameters.set("partition", std::string(natural_base(spec) == base ? "natural base" : "requested base"));
    est.parameters.set("tail_max", mx);
    est.parameters.set("tail_min", mn);
    est.parameters.set("slope_fit", xs.size() >= 2 ? ls_slope(xs, ys) : est.value);
    return est;
}

double digit_entropy_exact(const LevelSet& levels, int p, std::int64_t n) {
    return static_cast<double>(levels.count_upto(n)) * std::log2(static_cast<double>(p));
}

double digit_hausdorff_formula(const LevelSet& levels) { return levels.liminf_density(); }

// Beurling ------------------------------------------------------------------------

std::vector<double> default_h_schedule(const SpectrumSet& lambda, int points) {
    const double top = std::max(lambda.diameter() / 2.0, 1.0);
    std::vector<double> hs(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        hs[static_cast<std::size_t>(k)] = std::ldexp(top, k - (points - 1));
    }
    return hs;
}

BeurlingDensity beurling_density(const SpectrumSet& lambda, double r, const std::vector<double>& h_schedule) {
    if (!(r > 0.0)) {
        throw DomainError("Beurling density needs r > 0");
    }
    if (h_schedule.empty()) {
        throw DomainError("empty h schedule");
    }
    BeurlingDensity out;
    for (std::size_t k = 0; k < h_schedule.size(); ++k) {
        const double h = h_schedule[k];
        if (k > 0 && !(h > h_schedule[k - 1])) {
            throw DomainError("h schedule must be increasing");
        }
        const auto sup = max_ball_count(lambda, h);
        out.exact_centers = out.exact_centers && sup.exact;
        const double ratio = static_cast<double>(sup.count) / std::pow(h, r);
        out.curve.push_back(CurvePoint{static_cast<double>(k), h, ratio});
        out.value = std::max(out.value, ratio);
    }
    return out;
}

DimensionEstimate beurling_dim_estimate(const SpectrumSet& lambda, std::vector<double> h_schedule) {
    if (lambda.empty()) {
        throw DomainError("Beurling dimension of an empty set");
    }
    if (h_schedule.empty()) {
        h_schedule = default_h_schedule(lambda);
    }
    DimensionEstimate est;
    est.quantity = "beurling_dimension";
    est.method = EstimateMethod::slope_fit;
    bool exact = true;
    std::size_t usable = h_schedule.size();
    for (std::size_t k = 0; k < h_schedule.size(); ++k) {
        if (!(h_schedule[k] > 0.0) || (k > 0 && !(h_schedule[k] > h_schedule[k - 1]))) {
            throw DomainError("h schedule must be positive and increasing");
        }
        const auto sup = max_ball_count(lambda, h_schedule[k]);
        exact = exact && sup.exact;
        est.curve.push_back(CurvePoint{static_cast<double>(k), h_schedule[k], static_cast<double>(sup.count)});
        if (usable == h_schedule.size() && static_cast<std::size_t>(sup.count) == lambda.size()) {
            usable = k + 1;  // larger radii only repeat the saturated count
        }
    }
    est.parameters.set("points", static_cast<std::int64_t>(lambda.size()));
    est.parameters.set("dimension", static_cast<std::int64_t>(lambda.dim()));
    est.parameters.set("ball", std::string("closed"));
    est.parameters.set("center_sup", std::string(exact ? "exact sweep" : "grid h/4 (heuristic)"));
    est.parameters.set("usable_scales", static_cast<std::int64_t>(usable));
    if (lambda.size() == 1) {
        est.value = 0.0;
        est.residual = 0.0;
        est.parameters.set("fit", std::string("single point"));
        return est;
    }
    if (usable < 4) {
        throw DomainError("fewer than 4 usable scales before saturation (" + std::to_string(usable) + ")");
    }
    // below the point spacing every ball holds one point; those radii carry no
    // information, so the fit window starts at the last such radius
    std::size_t floor_k = 0;
    for (std::size_t k = 0; k < usable; ++k) {
        if (est.curve[k].statistic <= 1.0) {
            floor_k = k;
        }
    }
    if (usable - floor_k < 4) {
        throw DomainError("fewer than 4 usable scales between point spacing and saturation");
    }
    const std::size_t first = floor_k + tail_start(usable - floor_k, 4);
    // Chord statistic log N(h) / log(h / h1), h1 = half the minimum separation (the
    // largest radius at which every ball holds one point). Its tail maximum is the
    // finite-data limsup; the regression slope is kept alongside.
    const double h1 = 0.5 * min_separation(lambda);
    std::vector<double> xs;
    std::vector<double> ys;
    const double h0 = h_schedule[0];
    double chord_max = -1.0;
    double chord_min = 1e300;
    for (std::size_t k = first; k < usable; ++k) {
        xs.push_back(std::log(h_schedule[k] / h0));
        ys.push_back(std::log(est.curve[k].statistic));
        if (h_schedule[k] >= 2.0 * h1) {
            const double chord = std::log(est.curve[k].statistic) / std::log(h_schedule[k] / h1);
            chord_max = std::max(chord_max, chord);
            chord_min = std::min(chord_min, chord);
        }
    }
    if (chord_max < 0.0) {
        throw DomainError("no usable scale lies an octave above the point separation");
    }
    double res = 0.0;
    const double slope = ls_slope(xs, ys, &res);
    est.method = EstimateMethod::tail_max;
    est.value = std::clamp(chord_max, 0.0, static_cast<double>(lambda.dim()));
    est.residual = chord_max - chord_min;
    est.parameters.set("statistic", std::string("log N(h) / log(h / h1)"));
    est.parameters.set("separation", 2.0 * h1);
    est.parameters.set("tail_max", chord_max);
    est.parameters.set("tail_min", chord_min);
    est.parameters.set("slope_fit", slope);
    est.parameters.set("slope_fit_rms", res);
    est.parameters.set("fit_first_index", static_cast<std::int64_t>(first));
    est.parameters.set("fit_last_index", static_cast<std::int64_t>(usable - 1));
    return est;
}

// Fourier decay ---------------------------------------------------------------------

DimensionEstimate fourier_dim_estimate(const MeasureSpec& spec, const FourierDimOptions& opt) {
    const std::size_t d = spec.dim();
    const auto [lo, hi] = support_box(spec);
    for (std::size_t j = 0; j < d; ++j) {
        if (lo[j] <= hi[j] && !(std::isfinite(lo[j]) && std::isfinite(hi[j]))) {
            throw DomainError("Fourier dimension needs a compactly supported measure");
        }
    }
    if (opt.points < 4 || opt.samples_per_octave < 1 || opt.block < 1 || !(opt.xi0 > 0.0)) {
        throw DomainError("invalid Fourier schedule");
    }
    Point dir = opt.direction;
    if (dir.empty()) {
        dir.assign(d, 1.0 / std::sqrt(static_cast<double>(d)));
    }
    if (dir.size() != d) {
        throw DomainError("direction dimension mismatch");
    }
    double norm = 0.0;
    for (double c : dir) {
        norm += c * c;
    }
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) {
        throw DomainError("direction must be nonzero");
    }
    const auto K = static_cast<std::size_t>(opt.points);
    // maximum of |mu^| over each octave [xi_k, xi_{k+1})
    std::vector<double> octave(K, 0.0);
    Point xi(d);
    for (std::size_t k = 0; k < K; ++k) {
        const double base = std::ldexp(opt.xi0, static_cast<int>(k));
        for (int j = 0; j < opt.samples_per_octave; ++j) {
            const double mag = base * std::exp2(static_cast<double>(j) / opt.samples_per_octave);
            for (std::size_t c = 0; c < d; ++c) {
                xi[c] = mag * dir[c] / norm;
            }
            octave[k] = std::max(octave[k], std::abs(fourier(spec, xi, opt.tol)));
        }
    }
    // block maxima, then the running maximum from the right (an upper envelope)
    std::vector<double> env(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t j = k; j < std::min(K, k + static_cast<std::size_t>(opt.block)); ++j) {
            env[k] = std::max(env[k], octave[j]);
        }
    }
    for (std::size_t k = K - 1; k-- > 0;) {
        env[k] = std::max(env[k], env[k + 1]);
    }
    DimensionEstimate est;
    est.quantity = "fourier_dimension";
    est.method = EstimateMethod::slope_fit;
    for (std::size_t k = 0; k < K; ++k) {
        const double x = std::ldexp(opt.xi0, static_cast<int>(k));
        est.curve.push_back(CurvePoint{static_cast<double>(k), x, env[k] > 0.0 ? std::log(env[k]) : -745.0});
    }
    std::vector<double> xs;
    std::vector<double> ys;
    // only complete blocks enter the fit; the last block-1 points see fewer samples
    const std::size_t complete = K - static_cast<std::size_t>(std::min(opt.block - 1, opt.points - 4));
    for (std::size_t k = tail_start(complete, 4); k < complete; ++k) {
        if (env[k] >= opt.floor) {
            xs.push_back(std::log(est.curve[k].scale));
            ys.push_back(est.curve[k].statistic);
        }
    }
    if (xs.empty()) {
        throw DomainError("all sampled Fourier moduli are below the numeric floor");
    }
    double slope = 0.0;
    double res = 0.0;
    if (xs.size() >= 2) {
        slope = ls_slope(xs, ys, &res);
    }
    est.value = std::clamp(-2.0 * slope, 0.0, static_cast<double>(d)) + 0.0;  // no -0 in reports
    est.residual = res;
    est.parameters.set("xi0", opt.xi0);
    est.parameters.set("points", static_cast<std::int64_t>(opt.points));
    est.parameters.set("samples_per_octave", static_cast<std::int64_t>(opt.samples_per_octave));
    est.parameters.set("block", static_cast<std::int64_t>(opt.block));
    est.parameters.set("tol", opt.tol);
    est.parameters.set("floor", opt.floor);
    est.parameters.set("fit_points", static_cast<std::int64_t>(xs.size()));
    est.parameters.set("envelope_slope", slope);
    return est;
}

// Lev -----------------------------------------------------------------------------

namespace {

struct LevAccumulator {
    const MeasureSpec& spec;
    double fourier_tol;
    double panel;
    double panel_budget;  // absolute quadrature error allowed per panel
    double error = 0.0;
    double value = 0.0;  // integral over [0, position]
    double position = 0.0;

    void advance(double to) {
        using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
        auto f = [this](double t) { return std::norm(fourier(spec, t, fourier_tol)); };
        while (position < to) {
            const double next = std::min(to, (std::floor(position / panel + 1e-9) + 1.0) * panel);
            double err = 0.0;
            double l1 = 0.0;
            double v = GK::integrate(f, position, next, 0, 0.0, &err, &l1);
            if (err > panel_budget && l1 > 0.0) {
                // the library tolerance is relative to the L1 norm
                v = GK::integrate(f, position, next, 15, std::max(panel_budget / l1, 1e-15), &err, &l1);
            }
            value += v;
            error += err;
            position = next;
        }
    }
};

LevAccumulator make_lev(const MeasureSpec& spec, double r_max, double quad_tol) {
    if (spec.dim() != 1) {
        throw DomainError("the Lev integral is only defined here for d = 1");
    }
    if (!(quad_tol > 0.0)) {
        throw DomainError("quadrature tolerance must be > 0");
    }
    const auto [lo, hi] = support_box(spec);
    const double diam = lo[0] <= hi[0] ? hi[0] - lo[0] : 0.0;
    const double m = total_mass(spec);
    // ||a|^2 - |b|^2| <= (2M + e) e, integrated over [-r, r]
    const double ftol = quad_tol / (64.0 * r_max * (m + 1.0));
    const double panel = 1.0 / std::max(1.0, diam);
    const double panels = std::ceil(r_max / panel) + 1.0;
    return LevAccumulator{spec, ftol, panel, quad_tol / (8.0 * panels)};
}

}  // namespace

double lev_integral(const MeasureSpec& spec, double r, double quad_tol) {
    if (!(r > 0.0)) {
        throw DomainError("Lev integral needs r > 0");
    }
    auto acc = make_lev(spec, r, quad_tol);
    acc.advance(r);
    if (2.0 * acc.error > quad_tol / 2.0) {
        throw ConvergenceError("Lev quadrature error estimate " + std::to_string(2.0 * acc.error) +
                               " exceeds the tolerance");
    }
    return 2.0 * acc.value;  // |mu^|^2 is even
}

std::vector<double> default_r_schedule() {
    std::vector<double> rs;
    for (int k = 0; k < 24; ++k) {
        rs.push_back(std::ldexp(1.0, k - 11));
    }
    return rs;
}

DimensionEstimate lev_exponent_estimate(const MeasureSpec& spec, std::vector<double> r_schedule, double quad_tol) {
    if (r_schedule.empty()) {
        r_schedule = default_r_schedule();
    }
    for (std::size_t k = 0; k < r_schedule.size(); ++k) {
        if (!(r_schedule[k] > 0.0) || (k > 0 && !(r_schedule[k] > r_schedule[k - 1]))) {
            throw DomainError("r schedule must be positive and increasing");
        }
    }
    if (r_schedule.size() < 4) {
        throw DomainError("Lev exponent needs at least 4 radii");
    }
    auto acc = make_lev(spec, r_schedule.back(), quad_tol);
    DimensionEstimate est;
    est.quantity = "lev_exponent";
    est.method = EstimateMethod::slope_fit;
    for (std::size_t k = 0; k < r_schedule.size(); ++k) {
        acc.advance(r_schedule[k]);
        const double v = 2.0 * acc.value;
        if (!(v > 0.0)) {
            throw DomainError("Lev integral underflow at r=" + std::to_string(r_schedule[k]));
        }
        est.curve.push_back(CurvePoint{static_cast<double>(k), r_schedule[k], std::log(v)});
    }
    if (2.0 * acc.error > quad_tol / 2.0) {
        throw ConvergenceError("Lev quadrature error estimate exceeds the tolerance");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = tail_start(r_schedule.size(), 4); k < r_schedule.size(); ++k) {
        xs.push_back(std::log(r_schedule[k] / r_schedule[0]));
        ys.push_back(est.curve[k].statistic);
    }
    double res = 0.0;
    const double slope = ls_slope(xs, ys, &res);
    est.value = 1.0 - slope;
    est.residual = res;
    est.parameters.set("quad_tol", quad_tol);
    est.parameters.set("quadrature_error", 2.0 * acc.error);
    est.parameters.set("panel", acc.panel);
    est.parameters.set("r_max", r_schedule.back());
    est.parameters.set("slope", slope);
    return est;
}

}  // namespace specdim
