#include "specdim/constructions.hpp"

#include "specdim/frame.hpp"
#include "specdim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace specdim {

MeasureSpec build_digit_measure(int p, LevelSet levels) {
    if (p < 2) {
        throw DomainError("digit measure needs p >= 2");
    }
    return make_digit(p, std::move(levels));
}

SpectrumSet enumerate_spectrum(int p, const LevelSet& levels, int n, int exponent_offset, const Limits& limits) {
    if (n < 0) {
        throw DomainError("spectrum level must be >= 0");
    }
    return SpectrumSet::digit(DigitSpectrumSpec{p, levels, n, exponent_offset}, limits);
}

OscillatingConstruction oscillating_levelset(double low, double high, double growth, std::int64_t n_max) {
    if (n_max < 1) {
        throw DomainError("oscillating construction needs n_max >= 1");
    }
    OscillatingConstruction out;
    out.levels = LevelSet::oscillating(low, high, growth, n_max);  // validates the parameters
    const auto runs = oscillating_runs(OscillatingLevels{low, high, growth, n_max}, n_max);
    bool saw_high = false;
    bool saw_low_after_high = false;
    for (const auto& r : runs) {
        if (r.last <= n_max) {
            out.switch_points.push_back(r.last);
            if (r.included) {
                saw_high = true;
            } else if (saw_high) {
                saw_low_after_high = true;
            }
        }
    }
    if (low < high && !saw_low_after_high) {
        throw DomainError("n_max=" + std::to_string(n_max) + " is too small to complete one oscillation between " +
                          std::to_string(low) + " and " + std::to_string(high));
    }
    out.partial_density.reserve(static_cast<std::size_t>(n_max));
    for (std::int64_t n = 1; n <= n_max; ++n) {
        out.partial_density.push_back(static_cast<double>(out.levels.count_upto(n)) / static_cast<double>(n));
    }
    out.burn_in = (n_max + 3) / 4;
    out.tail_min = 1.0;
    out.tail_max = 0.0;
    for (std::int64_t n = out.burn_in; n <= n_max; ++n) {
        const double v = out.partial_density[static_cast<std::size_t>(n - 1)];
        out.tail_min = std::min(out.tail_min, v);
        out.tail_max = std::max(out.tail_max, v);
    }
    out.low_met = std::fabs(out.tail_min - low) <= 0.05;
    out.high_met = std::fabs(out.tail_max - high) <= 0.05;
    return out;
}

MeasureSpec mixed_measure(const MeasureSpec& mu, const MeasureSpec& nu) {
    if (!is_probability(mu, 1e-9) || !is_probability(nu, 1e-9)) {
        throw DomainError("mixed measure needs probability measures");
    }
    return make_mixed(mu, nu);
}

int largest_level_within(int p, const LevelSet& levels, int n_max, std::uint64_t cap) {
    const double limit = std::log(static_cast<double>(cap)) / std::log(static_cast<double>(p)) + 1e-9;
    int best = 0;
    for (int n = 1; n <= n_max; ++n) {
        if (static_cast<double>(levels.count_upto(n)) <= limit) {
            best = n;
        } else {
            break;
        }
    }
    return best;
}

CounterexampleReport counterexample_report(int p, const LevelSet& levels, int n_max, const CounterexampleOptions& opt) {
    if (p < 2) {
        throw DomainError("counterexample needs p >= 2");
    }
    if (n_max < 8) {
        throw DomainError("counterexample needs n_max >= 8");
    }
    CounterexampleReport rep;
    rep.p = p;
    rep.levels = levels;
    rep.n_max = n_max;
    rep.exponent_offset = opt.exponent_offset;
    rep.margin = opt.margin;
    rep.limsup_density = levels.limsup_density();
    rep.liminf_density = levels.liminf_density();
    rep.spectrum_level = largest_level_within(p, levels, n_max, opt.spectrum_cap);
    rep.gram_level = largest_level_within(p, levels, n_max, opt.gram_cap);

    const MeasureSpec nu = build_digit_measure(p, levels);
    // three independent pipelines; each writes its own slot
    parallel_for(3, opt.threads, [&](std::size_t task) {
        if (task == 0) {
            rep.entropy = entropy_dim_estimate(nu, n_max, EntropyMode::upper);
        } else if (task == 1) {
            const auto lam = enumerate_spectrum(p, levels, rep.spectrum_level, opt.exponent_offset);
            rep.spectrum_size = lam.size();
            if (lam.size() < 2) {
                rep.beurling.quantity = "beurling_dimension";
                rep.beurling.value = 0.0;
            } else {
                rep.beurling = beurling_dim_estimate(lam);
            }
        } else {
            const auto lam = enumerate_spectrum(p, levels, rep.gram_level, opt.exponent_offset);
            const auto trunc = truncate_digit(*nu.as<Digit>(), rep.gram_level);
            rep.gram_size = lam.size();
            rep.orthonormality_residual = identity_deviation(gram_matrix(trunc, lam));
        }
    });
    rep.beurling_exceeds_hausdorff = rep.beurling.value > rep.liminf_density + opt.margin;
    rep.orthonormal = rep.orthonormality_residual < 1e-7;
    rep.verdict = rep.beurling_exceeds_hausdorff && rep.orthonormal;
    return rep;
}

DisjointnessCheck support_disjoint(const MeasureSpec& m, const MeasureSpec& s, int max_depth, std::size_t max_cells) {
    if (m.dim() != s.dim()) {
        throw DomainError("support comparison needs measures of equal dimension");
    }
    DisjointnessCheck out;
    if (total_mass(s) == 0.0 || total_mass(m) == 0.0) {
        out.disjoint = true;
        out.cover_depth = 0;
        return out;
    }
    if (const auto* a = s.as<Atomic>()) {
        // supp s is the atom set itself
        double mass = 0.0;
        for (const auto& atom : a->atoms) {
            if (atom.weight > 0.0) {
                mass += point_mass(m, atom.point);
            }
        }
        out.disjoint = mass == 0.0;
        out.cover_depth = out.disjoint ? 0 : -1;
        out.cover_cells = a->atoms.size();
        return out;
    }
    const int base = natural_base(s) == 0 ? 2 : natural_base(s);
    for (int depth = 0; depth <= max_depth; ++depth) {
        std::vector<CellMass> cells;
        try {
            Limits lim;
            lim.max_cells = max_cells;
            lim.max_atoms = max_cells;
            cells = occupied_cells(s, base, depth, lim);
        } catch (const ResourceLimit&) {
            break;
        }
        if (cells.size() > max_cells) {
            break;
        }
        // supp s lies in the union of the closures of its positive-mass cells
        bool clear = true;
        for (const auto& c : cells) {
            Point lo = c.cell.anchor();
            Point hi = lo;
            for (auto& v : hi) {
                v += c.cell.width();
            }
            if (box_mass(m, lo, hi).upper > 0.0) {
                clear = false;
                break;
            }
        }
        out.cover_cells = cells.size();
        if (clear) {
            out.disjoint = true;
            out.cover_depth = depth;
            return out;
        }
    }
    return out;
}

Certificate non_spectral_certificate(const MeasureSpec& mu, const MeasureSpec& nu, const MeasureSpec& rho,
                                     const CertificateOptions& opt) {
    if (mu.dim() != nu.dim() || mu.dim() != rho.dim()) {
        throw DomainError("certificate needs measures of equal dimension");
    }
    Certificate c;
    c.fourier = fourier_dim_estimate(mu, opt.fourier);
    c.entropy = entropy_dim_estimate(normalized(nu), opt.entropy_n_max, EntropyMode::upper);
    c.gap = c.fourier.value - c.entropy.value;
    c.inequality_holds = c.gap > c.fourier.residual + c.entropy.residual;
    c.mu_vs_nu = support_disjoint(mu, nu);
    c.mu_vs_rho = support_disjoint(mu, rho);
    c.nu_vs_mu = support_disjoint(nu, mu);
    c.nu_vs_rho = support_disjoint(nu, rho);
    c.mu_null_on_others = c.mu_vs_nu.disjoint && c.mu_vs_rho.disjoint;
    c.nu_null_on_others = c.nu_vs_mu.disjoint && c.nu_vs_rho.disjoint;
    c.conclusion = c.inequality_holds && c.mu_null_on_others && c.nu_null_on_others;
    c.caveat =
        "Fourier and entropy dimensions are finite-data estimates; the inequality is checked against their "
        "residuals, not proven. Support disjointness is certified exactly by closed cell covers of zero mass.";
    return c;
}

std::vector<Family> bundled_families() {
    std::vector<Family> out;
    out.push_back({"delta_atoms", dirac({0.0}), SpectrumSet::explicit_1d({0.0}), 40});

    std::vector<double> window;
    for (int k = -2048; k < 2048; ++k) {
        window.push_back(k);
    }
    out.push_back({"lebesgue", lebesgue_unit(), SpectrumSet::explicit_1d(window), 40});

    const LevelSet evens = LevelSet::evens();
    out.push_back({"digit_evens", build_digit_measure(2, evens), enumerate_spectrum(2, evens, 32), 40});

    const LevelSet osc = oscillating_levelset(1.0 / 3.0, 2.0 / 3.0, 2.0, 200).levels;
    out.push_back({"digit_oscillating", build_digit_measure(2, osc),
                   enumerate_spectrum(2, osc, largest_level_within(2, osc, 200, std::uint64_t{1} << 16)), 200});

    // rho = nu_evens x delta_0 + delta_0 x nu_odds with (Lambda_evens x {0}) ∪ ({0} x Lambda_odds)
    const LevelSet odds = LevelSet::odds();
    const auto le = enumerate_spectrum(2, evens, 24);
    const auto lo = enumerate_spectrum(2, odds, 24);
    std::vector<Point> cross;
    for (double a : le.line()) {
        cross.push_back({a, 0.0});
    }
    for (double b : lo.line()) {
        if (b != 0.0) {
            cross.push_back({0.0, b});
        }
    }
    out.push_back({"mixed_evens_odds",
                   mixed_measure(build_digit_measure(2, evens), build_digit_measure(2, odds)),
                   SpectrumSet::explicit_points(std::move(cross), 2), 40});
    return out;
}

}  // namespace specdim
