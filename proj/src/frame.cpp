#include "specdim/frame.hpp"

#include "specdim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace specdim {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

Complex unit_phase(long double theta) {
    theta -= std::nearbyint(theta);
    const long double a = kTwoPi * theta;
    return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

bool integral(double v) { return std::isfinite(v) && v == std::nearbyint(v) && std::fabs(v) < 4.0e18; }

/// exp(2 pi i lambda.x) for an atom, exact on the lattice when lambda is integral.
Complex atom_phase(const Atomic& a, const Atom& atom, const Point& lambda) {
    bool exact = a.has_lattice();
    for (double l : lambda) {
        exact = exact && integral(l);
    }
    if (exact) {
        const std::int64_t q = checked_pow(a.lattice_base, a.lattice_depth).value_or(0);
        if (q > 0) {
            __int128 r = 0;
            for (std::size_t j = 0; j < lambda.size(); ++j) {
                __int128 t = (static_cast<__int128>(static_cast<std::int64_t>(lambda[j])) * atom.numerators[j]) % q;
                r = (r + t) % q;
            }
            if (r < 0) {
                r += q;
            }
            return unit_phase(static_cast<long double>(static_cast<std::int64_t>(r)) / static_cast<long double>(q));
        }
    }
    long double theta = 0.0L;
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        const long double t = static_cast<long double>(lambda[j]) * static_cast<long double>(atom.point[j]);
        theta += t - std::nearbyint(t);
    }
    return unit_phase(theta);
}

Point difference(const Point& a, const Point& b) {
    Point d(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        d[j] = a[j] - b[j];
    }
    return d;
}

void require_dim(const MeasureSpec& spec, const SpectrumSet& lambda) {
    if (!lambda.empty() && lambda.dim() != spec.dim()) {
        throw DomainError("spectrum dimension " + std::to_string(lambda.dim()) + " does not match measure dimension " +
                          std::to_string(spec.dim()));
    }
}

/// Atoms with equal positions merged; throws on non-positive weights.
Atomic merged_atoms(const Atomic& a) {
    Atomic out = a;
    out.atoms.clear();
    std::map<std::vector<std::int64_t>, std::size_t> by_lattice;
    std::map<Point, std::size_t> by_point;
    for (const auto& atom : a.atoms) {
        if (!(atom.weight > 0.0)) {
            throw DomainError("frame bounds need strictly positive atom weights");
        }
        std::size_t* slot = nullptr;
        std::size_t fresh = out.atoms.size();
        if (a.has_lattice()) {
            auto [it, inserted] = by_lattice.emplace(atom.numerators, fresh);
            slot = inserted ? nullptr : &it->second;
        } else {
            auto [it, inserted] = by_point.emplace(atom.point, fresh);
            slot = inserted ? nullptr : &it->second;
        }
        if (slot) {
            out.atoms[*slot].weight += atom.weight;
        } else {
            out.atoms.push_back(atom);
        }
    }
    return out;
}

/// Rows sqrt(w_j) exp(2 pi i lambda_a x_j).
ComplexMatrix synthesis_rows(const Atomic& a, const SpectrumSet& lambda) {
    ComplexMatrix f(static_cast<Eigen::Index>(lambda.size()), static_cast<Eigen::Index>(a.atoms.size()));
    for (std::size_t j = 0; j < a.atoms.size(); ++j) {
        const double sw = std::sqrt(a.atoms[j].weight);
        for (std::size_t r = 0; r < lambda.size(); ++r) {
            f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
                sw * atom_phase(a, a.atoms[j], lambda.points()[r]);
        }
    }
    return f;
}

/// f f* with only the lower triangle computed; the upper triangle is filled by
/// conjugation so the result is exactly Hermitian.
ComplexMatrix outer_gram(const ComplexMatrix& f) {
    const Eigen::Index n = f.rows();
    ComplexMatrix g = ComplexMatrix::Zero(n, n);
    g.selfadjointView<Eigen::Lower>().rankUpdate(f);
    for (Eigen::Index i = 0; i < n; ++i) {
        g(i, i) = Complex(g(i, i).real(), 0.0);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            g(i, j) = std::conj(g(j, i));
        }
    }
    return g;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("Hermitian eigenvalue solve did not converge");
    }
    return solver.eigenvalues();  // ascending
}

LemmaCheckRecord make_record(std::string id, std::size_t samples, double violation, double tol) {
    LemmaCheckRecord rec;
    rec.lemma = std::move(id);
    rec.samples = samples;
    rec.max_violation = violation;
    rec.tolerance = tol;
    rec.pass = violation <= tol;
    return rec;
}

int partition_base(const MeasureSpec& spec, int base) {
    if (base != 0) {
        return base;
    }
    const int b = natural_base(spec);
    return b == 0 ? 2 : b;
}

}  // namespace

Complex inner_product(const MeasureSpec& spec, const Point& t, const Point& lambda, double tol) {
    if (t.size() != spec.dim() || lambda.size() != spec.dim()) {
        throw DomainError("inner product frequencies must match the measure dimension");
    }
    if (t == lambda) {
        return total_mass(spec);
    }
    return fourier(spec, difference(t, lambda), tol);
}

ComplexMatrix gram_matrix(const MeasureSpec& spec, const SpectrumSet& lambda, double tol, const Limits& limits,
                          unsigned threads) {
    require_dim(spec, lambda);
    check_limit("max_gram", limits.max_gram, lambda.size());
    const auto n = static_cast<Eigen::Index>(lambda.size());
    if (const auto* a = spec.as<Atomic>()) {
        check_limit("max_gram", limits.max_gram, a->atoms.size());
        if (a->atoms.empty()) {
            return ComplexMatrix::Zero(n, n);
        }
        return outer_gram(synthesis_rows(*a, lambda));
    }
    ComplexMatrix g(n, n);
    const double mass = total_mass(spec);
    // rows are independent; each worker writes its own upper-triangle entries
    parallel_for(lambda.size(), threads, [&](std::size_t r) {
        const auto i = static_cast<Eigen::Index>(r);
        g(i, i) = mass;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            g(i, j) = fourier(spec, difference(lambda.points()[r], lambda.points()[static_cast<std::size_t>(j)]), tol);
        }
    });
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            g(j, i) = std::conj(g(i, j));
        }
    }
    return g;
}

double identity_deviation(const ComplexMatrix& g) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            dev = std::max(dev, std::abs(g(i, j) - (i == j ? Complex(1.0, 0.0) : Complex(0.0, 0.0))));
        }
    }
    return dev;
}

FrameReport frame_bounds_atomic(const MeasureSpec& spec, const SpectrumSet& lambda, const Limits& limits) {
    const auto* raw = spec.as<Atomic>();
    if (!raw) {
        throw DomainError("exact frame bounds need an atomic measure; use the trial-function bracket");
    }
    require_dim(spec, lambda);
    const Atomic a = merged_atoms(*raw);
    if (a.atoms.empty()) {
        throw DomainError("frame bounds of the zero measure are undefined");
    }
    check_limit("max_gram", limits.max_gram, a.atoms.size());
    check_limit("max_gram", limits.max_gram, lambda.size());

    FrameReport rep;
    rep.exact = true;
    rep.spectrum_size = lambda.size();
    rep.function_dim = a.atoms.size();
    if (lambda.empty()) {
        rep.condition = std::numeric_limits<double>::infinity();
        return rep;
    }
    // With g_j = sqrt(w_j) f_j the ratio is |E g|^2 / |g|^2, E[l][j] = sqrt(w_j) e(-l x_j);
    // E E* is the conjugate Gram matrix, so both share the nonzero spectrum.
    const ComplexMatrix f = synthesis_rows(a, lambda);
    const std::size_t n = lambda.size();
    const std::size_t m = a.atoms.size();
    if (n >= m) {
        const Eigen::VectorXd ev = hermitian_eigenvalues(outer_gram(f.adjoint()));
        rep.lower = std::max(0.0, ev(0));
        rep.upper = ev(ev.size() - 1);
        rep.gram_min_eig = n > m ? 0.0 : ev(0);
    } else {
        const Eigen::VectorXd ev = hermitian_eigenvalues(outer_gram(f));
        rep.lower = 0.0;  // fewer frequencies than dimensions
        rep.upper = ev(ev.size() - 1);
        rep.gram_min_eig = ev(0);
    }
    rep.gram_max_eig = rep.upper;
    rep.condition = rep.lower > 0.0 ? rep.upper / rep.lower : std::numeric_limits<double>::infinity();
    return rep;
}

TrialFunction TrialFunction::exponential(Point t) { return TrialFunction{{std::move(t)}, {Complex(1.0, 0.0)}}; }

double trial_ratio(const MeasureSpec& spec, const SpectrumSet& lambda, const TrialFunction& f, double tol) {
    require_dim(spec, lambda);
    if (f.frequencies.size() != f.coefficients.size() || f.frequencies.empty()) {
        throw DomainError("trial function needs one coefficient per frequency");
    }
    const std::size_t k = f.frequencies.size();
    double norm2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            norm2 += std::real(f.coefficients[i] * std::conj(f.coefficients[j]) *
                               inner_product(spec, f.frequencies[i], f.frequencies[j], tol));
        }
    }
    if (!(norm2 > 1e-300) || !(norm2 > 1e-12 * total_mass(spec))) {
        throw DomainError("trial function has zero norm in L^2(mu)");
    }
    double energy = 0.0;
    for (const auto& l : lambda.points()) {
        Complex c{0.0, 0.0};
        for (std::size_t i = 0; i < k; ++i) {
            c += f.coefficients[i] * inner_product(spec, f.frequencies[i], l, tol);
        }
        energy += std::norm(c);
    }
    return energy / norm2;
}

FrameReport frame_bounds_bracket(const MeasureSpec& spec, const SpectrumSet& lambda,
                                 const std::vector<TrialFunction>& trials, double tol) {
    if (trials.empty()) {
        throw DomainError("bracket needs at least one trial function");
    }
    FrameReport rep;
    rep.exact = false;
    rep.spectrum_size = lambda.size();
    rep.function_dim = trials.size();
    for (const auto& f : trials) {
        rep.trial_ratios.push_back(trial_ratio(spec, lambda, f, tol));
    }
    rep.lower = *std::min_element(rep.trial_ratios.begin(), rep.trial_ratios.end());
    rep.upper = *std::max_element(rep.trial_ratios.begin(), rep.trial_ratios.end());
    rep.gram_min_eig = std::numeric_limits<double>::quiet_NaN();
    rep.gram_max_eig = std::numeric_limits<double>::quiet_NaN();
    rep.condition = rep.lower > 0.0 ? rep.upper / rep.lower : std::numeric_limits<double>::infinity();
    return rep;
}

LemmaCheckRecord check_restriction_lemma(const MeasureSpec& spec, const SpectrumSet& lambda, const Cell& k,
                                         double tol, const Limits& limits) {
    if (!spec.as<Atomic>()) {
        throw DomainError("restriction check needs an atomic measure");
    }
    const double bm = boundary_mass(spec, k);
    if (bm > 0.0) {
        throw DomainError("cell boundary carries mass " + std::to_string(bm) + "; the restriction lemma needs zero");
    }
    const FrameReport full = frame_bounds_atomic(spec, lambda, limits);
    const FrameReport part = frame_bounds_atomic(restrict_to(spec, k), lambda, limits);
    // restricted ratios are ratios of functions supported in K, so [A', B'] ⊆ [A, B]
    const double violation = std::max({0.0, full.lower - part.lower, part.upper - full.upper});
    auto rec = make_record("restriction", 2, violation, tol);
    rec.details.set("A", full.lower);
    rec.details.set("B", full.upper);
    rec.details.set("A_restricted", part.lower);
    rec.details.set("B_restricted", part.upper);
    rec.details.set("atoms_restricted", static_cast<std::int64_t>(part.function_dim));
    return rec;
}

LemmaCheckRecord check_change_of_measure(const MeasureSpec& spec, const Cell& d,
                                         const std::vector<FrequencyPair>& samples, double tol) {
    const double md = cell_mass(spec, d);
    if (!(md > 0.0)) {
        throw DomainError("change of measure needs a positive-mass cell");
    }
    const MeasureSpec restricted = restrict_to(spec, d);
    const MeasureSpec rescaled = normalize_rescale(spec, d);
    const double s = static_cast<double>(d.scale());
    double squared = 0.0;
    double unsquared = 0.0;
    for (const auto& [t, l] : samples) {
        const Complex lhs = inner_product(restricted, t, l, 1e-14);
        Point ts(t.size());
        Point ls(l.size());
        for (std::size_t j = 0; j < t.size(); ++j) {
            ts[j] = t[j] / s;
            ls[j] = l[j] / s;
        }
        const Complex rhs = inner_product(rescaled, ts, ls, 1e-14);
        const double a = std::abs(lhs);
        const double b = md * std::abs(rhs);
        squared = std::max(squared, std::fabs(a * a - b * b));
        unsquared = std::max(unsquared, std::fabs(a - b));
    }
    auto rec = make_record("change_of_measure", samples.size(), squared, tol);
    rec.details.set("form", std::string("squared"));
    rec.details.set("squared_violation", squared);
    rec.details.set("unsquared_violation", unsquared);
    rec.details.set("cell_mass", md);
    rec.details.set("cell_depth", static_cast<std::int64_t>(d.depth));
    rec.details.set("cell_base", static_cast<std::int64_t>(d.base));
    return rec;
}

LemmaCheckRecord check_change_of_measure_sampled(const MeasureSpec& spec, int depth, std::size_t count, Rng& rng,
                                                 double range, int base, double tol, const Limits& limits) {
    const auto cells = occupied_cells(spec, partition_base(spec, base), depth, limits);
    if (cells.empty()) {
        throw DomainError("change of measure needs a measure with positive mass");
    }
    const std::size_t dim = spec.dim();
    // draw everything up front so the sample stream does not depend on grouping
    std::map<std::size_t, std::vector<FrequencyPair>> by_cell;
    for (std::size_t i = 0; i < count; ++i) {
        const auto c = static_cast<std::size_t>(rng.below(cells.size()));
        Point t(dim);
        Point l(dim);
        for (auto& x : t) {
            x = rng.uniform(-range, range);
        }
        for (auto& x : l) {
            x = rng.uniform(-range, range);
        }
        by_cell[c].emplace_back(std::move(t), std::move(l));
    }
    double squared = 0.0;
    double unsquared = 0.0;
    for (const auto& [c, samples] : by_cell) {
        const auto rec = check_change_of_measure(spec, cells[c].cell, samples, tol);
        squared = std::max(squared, rec.details.number("squared_violation"));
        unsquared = std::max(unsquared, rec.details.number("unsquared_violation"));
    }
    auto rec = make_record("change_of_measure", count, squared, tol);
    rec.details.set("form", std::string("squared"));
    rec.details.set("squared_violation", squared);
    rec.details.set("unsquared_violation", unsquared);
    rec.details.set("cell_depth", static_cast<std::int64_t>(depth));
    rec.details.set("cell_base", static_cast<std::int64_t>(cells.front().cell.base));
    rec.details.set("cells_available", static_cast<std::int64_t>(cells.size()));
    rec.details.set("cells_sampled", static_cast<std::int64_t>(by_cell.size()));
    rec.details.set("frequency_range", range);
    return rec;
}

double delta_for_epsilon(double eps, int d) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw DomainError("epsilon must lie in (0, 1)");
    }
    if (d < 1) {
        throw DomainError("dimension must be >= 1");
    }
    const double pi = std::numbers::pi;
    const double delta = 0.999 * std::min(1.0 / (4.0 * d), std::acos(eps) / (2.0 * pi * d));
    if (!(delta > 0.0 && delta < 1.0 / (4.0 * d) && std::cos(2.0 * pi * d * delta) > eps)) {
        throw std::logic_error("delta postcondition failed");
    }
    return delta;
}

std::vector<Point> sample_small_frequencies(Rng& rng, std::size_t count, double delta, std::size_t dim) {
    std::vector<Point> out;
    out.reserve(count);
    while (out.size() < count) {
        Point xi(dim);
        double r2 = 0.0;
        for (auto& x : xi) {
            x = rng.uniform(-delta, delta);
            r2 += x * x;
        }
        if (std::sqrt(r2) < delta) {
            out.push_back(std::move(xi));
        }
    }
    return out;
}

LemmaCheckRecord check_small_freq_lowerbound(const MeasureSpec& spec, double eps, int depth,
                                             const std::vector<Point>& xi_samples, int base, unsigned threads) {
    const auto d = static_cast<int>(spec.dim());
    const double delta = delta_for_epsilon(eps, d);
    if (!is_probability(spec, 1e-9)) {
        throw DomainError("small-frequency check needs a probability measure");
    }
    const auto [lo, hi] = support_box(spec);
    for (std::size_t j = 0; j < lo.size(); ++j) {
        if (lo[j] < 0.0 || hi[j] > 1.0) {
            throw DomainError("small-frequency check needs a measure on the unit cube");
        }
    }
    for (const auto& xi : xi_samples) {
        double r2 = 0.0;
        for (double x : xi) {
            r2 += x * x;
        }
        if (xi.size() != spec.dim() || !(std::sqrt(r2) < delta)) {
            throw DomainError("frequency sample outside the ball |xi| < delta");
        }
    }
    const int b = partition_base(spec, base);
    const auto cells = occupied_cells(spec, b, depth);
    std::vector<double> worst(cells.size(), 0.0);
    std::vector<double> smallest(cells.size(), 1.0);
    std::vector<std::int64_t> failures(cells.size(), 0);
    parallel_for(cells.size(), threads, [&](std::size_t c) {
        const MeasureSpec box = normalize_rescale(spec, cells[c].cell);
        for (const auto& xi : xi_samples) {
            const double v = std::abs(fourier(box, xi, 1e-13));
            smallest[c] = std::min(smallest[c], v);
            if (!(v > eps)) {
                ++failures[c];
                worst[c] = std::max(worst[c], eps - v);
            }
        }
    });
    double violation = 0.0;
    double min_modulus = 1.0;
    std::int64_t failed = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        violation = std::max(violation, worst[c]);
        min_modulus = std::min(min_modulus, smallest[c]);
        failed += failures[c];
    }
    auto rec = make_record("small_frequency_lower_bound", xi_samples.size() * cells.size(), violation, 0.0);
    rec.pass = failed == 0;
    rec.details.set("epsilon", eps);
    rec.details.set("delta", delta);
    rec.details.set("depth", static_cast<std::int64_t>(depth));
    rec.details.set("base", static_cast<std::int64_t>(b));
    rec.details.set("cells", static_cast<std::int64_t>(cells.size()));
    rec.details.set("min_modulus", min_modulus);
    rec.details.set("failures", failed);
    return rec;
}

std::vector<BallQuery> sample_ball_queries(Rng& rng, const SpectrumSet& lambda, std::size_t count, double h_min,
                                           double h_max) {
    if (lambda.empty()) {
        throw DomainError("ball queries need a nonempty spectrum");
    }
    if (!(h_min > 0.0 && h_min <= h_max)) {
        throw DomainError("ball radii need 0 < h_min <= h_max");
    }
    const std::size_t dim = lambda.dim();
    Point lo(dim, std::numeric_limits<double>::infinity());
    Point hi(dim, -std::numeric_limits<double>::infinity());
    for (const auto& p : lambda.points()) {
        for (std::size_t j = 0; j < dim; ++j) {
            lo[j] = std::min(lo[j], p[j]);
            hi[j] = std::max(hi[j], p[j]);
        }
    }
    std::vector<BallQuery> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        BallQuery q;
        q.center.resize(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            q.center[j] = rng.uniform(lo[j] - 1.0, hi[j] + 1.0);
        }
        q.h = std::exp(rng.uniform(std::log(h_min), std::log(h_max)));
        out.push_back(std::move(q));
    }
    return out;
}

LemmaCheckRecord check_counting_bound(const MeasureSpec& spec, const SpectrumSet& lambda, double b_known, double eps,
                                      const std::vector<BallQuery>& queries, int base, const Limits& limits) {
    if (!(b_known > 0.0)) {
        throw DomainError("Bessel bound must be positive");
    }
    require_dim(spec, lambda);
    const auto d = static_cast<int>(spec.dim());
    const double delta = delta_for_epsilon(eps, d);
    const int b = partition_base(spec, base);
    const double lb = std::log(static_cast<double>(b));
    // smallest rho with b^-rho < delta
    int rho = static_cast<int>(std::floor(-std::log(delta) / lb)) - 1;
    while (!(std::pow(static_cast<double>(b), -rho) < delta)) {
        ++rho;
    }
    std::map<int, double> entropy_at;  // depth -> H (bits)
    double violation = 0.0;
    double max_log_ratio = -std::numeric_limits<double>::infinity();
    std::int64_t max_count = 0;
    for (const auto& q : queries) {
        if (!(q.h > 0.0)) {
            throw DomainError("ball radius must be positive");
        }
        // smallest n_h with h <= b^n_h
        int nh = static_cast<int>(std::floor(std::log(q.h) / lb)) - 1;
        while (!(q.h <= std::pow(static_cast<double>(b), nh))) {
            ++nh;
        }
        const int depth = std::max(0, nh + rho);
        if (depth > limits.max_depth) {
            throw ResourceLimit("max_depth", static_cast<std::uint64_t>(limits.max_depth),
                                static_cast<std::uint64_t>(depth));
        }
        auto it = entropy_at.find(depth);
        if (it == entropy_at.end()) {
            it = entropy_at.emplace(depth, partition_entropy(spec, depth, b, limits)).first;
        }
        const std::int64_t count = ball_count(lambda, q.center, q.h);
        max_count = std::max(max_count, count);
        if (count == 0) {
            continue;
        }
        const double log_rhs = std::log(b_known) - 2.0 * std::log(eps) + it->second * std::numbers::ln2;
        const double log_ratio = std::log(static_cast<double>(count)) - log_rhs;
        max_log_ratio = std::max(max_log_ratio, log_ratio);
        violation = std::max(violation, log_ratio);
    }
    auto rec = make_record("counting_bound", queries.size(), violation, 1e-12);
    rec.details.set("epsilon", eps);
    rec.details.set("delta", delta);
    rec.details.set("rho", static_cast<std::int64_t>(rho));
    rec.details.set("base", static_cast<std::int64_t>(b));
    rec.details.set("bessel_bound", b_known);
    rec.details.set("violation_scale", std::string("log(count / bound)"));
    rec.details.set("max_count", max_count);
    rec.details.set("max_log_ratio", max_log_ratio);
    return rec;
}

double cell_entropy_product(const MeasureSpec& spec, int base, int depth, const Limits& limits) {
    double prod = 1.0;
    for (const auto& c : occupied_cells(spec, partition_base(spec, base), depth, limits)) {
        prod *= std::pow(c.mass, -c.mass);
    }
    return prod;
}

}  // namespace specdim
