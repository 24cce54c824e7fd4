// Fourier transforms  mu^(xi) = int exp(2 pi i xi.x) dmu(x).

#include "specdim/measure.hpp"

#include "measure_detail.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace specdim {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

/// exp(2 pi i theta) after reducing theta to [-1/2, 1/2].
Complex unit_phase(long double theta) {
    theta -= std::nearbyint(theta);
    const long double a = kTwoPi * theta;
    return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

bool is_integer(double v) { return std::isfinite(v) && v == std::nearbyint(v) && std::fabs(v) < 4.0e18; }

/// (k * m) mod q in [0, q), exact.
std::int64_t mulmod(std::int64_t k, std::int64_t m, std::int64_t q) {
    __int128 r = (static_cast<__int128>(k) * m) % q;
    if (r < 0) {
        r += q;
    }
    return static_cast<std::int64_t>(r);
}

Complex atomic_fourier(const Atomic& a, std::span<const double> xi) {
    bool integer_xi = a.has_lattice();
    for (double x : xi) {
        integer_xi = integer_xi && is_integer(x);
    }
    const std::int64_t q = a.has_lattice() ? checked_pow(a.lattice_base, a.lattice_depth).value_or(0) : 0;
    Complex s{0.0, 0.0};
    for (const auto& atom : a.atoms) {
        if (integer_xi && q > 0) {
            // phase = sum_j xi_j k_j / q  mod 1, exactly
            std::int64_t r = 0;
            for (std::size_t j = 0; j < xi.size(); ++j) {
                r = (r + mulmod(static_cast<std::int64_t>(xi[j]), atom.numerators[j], q)) % q;
            }
            s += atom.weight * unit_phase(static_cast<long double>(r) / static_cast<long double>(q));
        } else {
            long double theta = 0.0L;
            for (std::size_t j = 0; j < xi.size(); ++j) {
                long double t = static_cast<long double>(xi[j]) * static_cast<long double>(atom.point[j]);
                theta += t - std::nearbyint(t);
            }
            s += atom.weight * unit_phase(theta);
        }
    }
    return s;
}

/// xi * p^-level mod 1, exact for integer xi.
long double scaled_fraction(double xi, int p, std::int64_t level) {
    if (is_integer(xi)) {
        if (auto q = checked_pow(p, static_cast<int>(level))) {
            const auto k = static_cast<std::int64_t>(xi);
            std::int64_t r = k % *q;
            if (r < 0) {
                r += *q;
            }
            return static_cast<long double>(r) / static_cast<long double>(*q);
        }
    }
    const long double t = static_cast<long double>(xi) *
                          std::pow(static_cast<long double>(p), -static_cast<long double>(level));
    return t - std::floor(t);
}

/// (1/p) sum_{b<p} exp(2 pi i b theta).
Complex digit_factor(int p, long double theta) {
    Complex s{0.0, 0.0};
    for (int b = 0; b < p; ++b) {
        s += unit_phase(b * theta);
    }
    return s / static_cast<double>(p);
}

Complex digit_fourier(const Digit& d, double xi, double tol) {
    if (d.mass == 0.0) {
        return {0.0, 0.0};
    }
    Complex prefix{1.0, 0.0};
    if (d.prefix_index != 0) {
        // prefix_index * xi / p^n0
        long double theta = 0.0L;
        const auto q = checked_pow(d.p, d.prefix_depth);
        if (is_integer(xi) && q) {
            theta = static_cast<long double>(mulmod(static_cast<std::int64_t>(xi), d.prefix_index, *q)) /
                    static_cast<long double>(*q);
        } else {
            theta = static_cast<long double>(xi) * static_cast<long double>(d.prefix_index) /
                    std::pow(static_cast<long double>(d.p), static_cast<long double>(d.prefix_depth));
        }
        prefix = unit_phase(theta);
    }
    // Every factor at level i differs from 1 by at most pi (p-1) |xi| p^-i, so
    // the tail from i* on is bounded by pi |xi| p^(1-i*).
    const double budget = tol / d.mass;
    const long double ax = std::fabs(static_cast<long double>(xi));
    Complex prod{1.0, 0.0};
    const auto last = d.levels.is_finite() ? d.levels.max_element() : std::nullopt;
    for (std::int64_t i = d.prefix_depth + 1;; ++i) {
        if (d.levels.is_finite() && (!last || i > *last)) {
            break;
        }
        const long double tail = std::numbers::pi_v<long double> * ax *
                                 std::pow(static_cast<long double>(d.p), static_cast<long double>(1 - i));
        if (tail < budget) {
            break;
        }
        if (i > 4000) {
            throw ConvergenceError("digit product did not reach tolerance");
        }
        if (d.levels.contains(i)) {
            prod *= digit_factor(d.p, scaled_fraction(xi, d.p, i));
            if (prod == Complex{0.0, 0.0}) {
                break;
            }
        }
    }
    return d.mass * prefix * prod;
}

Complex tree_fourier(const DyadicTree& t, double xi, double tol) {
    const long double w = 1.0L / std::pow(static_cast<long double>(t.base), t.root_depth + t.depth);
    const long double origin = t.root_index / std::pow(static_cast<long double>(t.base), t.root_depth);
    const long double lx = xi;
    // integral over a leaf of constant density: center phase times sinc
    long double damp = 1.0L;
    if (t.fill == TreeFill::uniform) {
        const long double a = std::numbers::pi_v<long double> * lx * w;
        damp = a == 0.0L ? 1.0L : std::sin(a) / a;
    } else {
        double mass = 0.0;
        for (double m : t.masses) {
            mass += m;
        }
        const double bound = static_cast<double>(std::numbers::pi_v<long double> * std::fabs(lx) * w) * mass;
        if (bound > tol) {
            throw ConvergenceError("tree depth " + std::to_string(t.root_depth + t.depth) +
                                   " cannot reach tolerance " + std::to_string(tol) + " at xi=" + std::to_string(xi));
        }
    }
    // phase of the leaf centers xi * (origin + (k + 1/2) w)
    const long double theta0 = lx * origin - std::nearbyint(lx * origin);
    const long double step = lx * w;
    Complex s{0.0, 0.0};
    for (std::size_t k = 0; k < t.masses.size(); ++k) {
        if (t.masses[k] == 0.0) {
            continue;
        }
        const long double th = theta0 + (static_cast<long double>(k) + 0.5L) * step;
        s += t.masses[k] * unit_phase(th);
    }
    return s * static_cast<double>(damp);
}

}  // namespace

Complex fourier(const MeasureSpec& spec, std::span<const double> xi, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("fourier tolerance must be > 0");
    }
    if (xi.size() != spec.dim()) {
        throw DomainError("frequency dimension " + std::to_string(xi.size()) + " does not match measure dimension " +
                          std::to_string(spec.dim()));
    }
    return std::visit(
        [&](const auto& n) -> Complex {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                return atomic_fourier(n, xi);
            } else if constexpr (std::is_same_v<T, Digit>) {
                return digit_fourier(n, xi[0], tol);
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                return tree_fourier(n, xi[0], tol);
            } else if constexpr (std::is_same_v<T, Product>) {
                const std::size_t k = n.left->dim();
                const double ml = total_mass(*n.left);
                const double mr = total_mass(*n.right);
                // |ab - a'b'| <= |a - a'| |b| + |a'| |b - b'|
                const double tl = tol / (2.0 * std::max(1.0, mr));
                const double tr = tol / (2.0 * std::max(1.0, ml + tl));
                return fourier(*n.left, xi.subspan(0, k), tl) * fourier(*n.right, xi.subspan(k), tr);
            } else if constexpr (std::is_same_v<T, Mixed>) {
                const std::size_t k = n.mu->dim();
                return fourier(*n.mu, xi.subspan(0, k), tol / 2) + fourier(*n.nu, xi.subspan(k), tol / 2);
            } else {
                std::vector<double> inner(xi.size());
                long double theta = 0.0L;
                for (std::size_t j = 0; j < xi.size(); ++j) {
                    inner[j] = xi[j] / n.scale;
                    const long double t = static_cast<long double>(xi[j]) * n.translate[j];
                    theta += t - std::nearbyint(t);
                }
                return unit_phase(theta) * fourier(*n.base, inner, tol);
            }
        },
        spec.node());
}

Complex fourier(const MeasureSpec& spec, double xi, double tol) {
    return fourier(spec, std::span<const double>(&xi, 1), tol);
}

}  // namespace specdim
