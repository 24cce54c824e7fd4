// Partitions, cell masses, boundary and box masses.

#include "specdim/measure.hpp"

#include "measure_detail.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace specdim {

namespace detail {

namespace {

std::optional<Atomic> materialize_digit(const Digit& d, std::uint64_t max_atoms) {
    if (!d.levels.is_finite()) {
        return std::nullopt;
    }
    const std::int64_t top = std::max<std::int64_t>({d.levels.max_element().value_or(0), d.prefix_depth, 1});
    const auto free = d.levels.count_between(d.prefix_depth, top);
    const long double count = std::pow(static_cast<long double>(d.p), static_cast<long double>(free));
    if (count > static_cast<long double>(max_atoms)) {
        return std::nullopt;
    }
    Limits lim = default_limits();
    lim.max_atoms = max_atoms;
    return *truncate_digit(d, static_cast<int>(top), lim).as<Atomic>();
}

}  // namespace

std::optional<Atomic> materialize(const MeasureSpec& spec, std::uint64_t max_atoms) {
    return std::visit(
        [&](const auto& n) -> std::optional<Atomic> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                if (n.atoms.size() > max_atoms) {
                    return std::nullopt;
                }
                return n;
            } else if constexpr (std::is_same_v<T, Digit>) {
                return materialize_digit(n, max_atoms);
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                const bool zero = std::all_of(n.masses.begin(), n.masses.end(), [](double m) { return m == 0.0; });
                if (zero) {
                    return Atomic{1, {}, 0, 0};
                }
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, Product>) {
                auto l = materialize(*n.left, max_atoms);
                auto r = materialize(*n.right, max_atoms);
                if (!l || !r) {
                    return std::nullopt;
                }
                if (static_cast<long double>(l->atoms.size()) * r->atoms.size() > max_atoms) {
                    return std::nullopt;
                }
                Atomic out{l->dim + r->dim, {}, 0, 0};
                for (const auto& a : l->atoms) {
                    for (const auto& b : r->atoms) {
                        Point p = a.point;
                        p.insert(p.end(), b.point.begin(), b.point.end());
                        out.atoms.push_back(Atom{std::move(p), a.weight * b.weight, {}});
                    }
                }
                return out;
            } else if constexpr (std::is_same_v<T, Mixed>) {
                auto m = materialize(*n.mu, max_atoms);
                auto v = materialize(*n.nu, max_atoms);
                if (!m || !v || m->atoms.size() + v->atoms.size() > max_atoms) {
                    return std::nullopt;
                }
                const std::size_t dm = n.mu->dim();
                const std::size_t dv = n.nu->dim();
                Atomic out{dm + dv, {}, 0, 0};
                for (const auto& a : m->atoms) {
                    Point p = a.point;
                    p.resize(dm + dv, 0.0);
                    out.atoms.push_back(Atom{std::move(p), a.weight, {}});
                }
                for (const auto& a : v->atoms) {
                    Point p(dm, 0.0);
                    p.insert(p.end(), a.point.begin(), a.point.end());
                    out.atoms.push_back(Atom{std::move(p), a.weight, {}});
                }
                return out;
            } else {
                auto b = materialize(*n.base, max_atoms);
                if (!b) {
                    return std::nullopt;
                }
                return *affine_image(MeasureSpec(*b), n.translate, n.scale).template as<Atomic>();
            }
        },
        spec.node());
}

}  // namespace detail

namespace {

constexpr std::uint64_t kEnumerateAtoms = 4096;

bool all_zero(const std::vector<std::int64_t>& v) {
    return std::all_of(v.begin(), v.end(), [](std::int64_t k) { return k == 0; });
}

[[noreturn]] void base_mismatch(const char* what, int have, int want) {
    throw DomainError(std::string(what) + " with natural base " + std::to_string(have) +
                      " cannot be partitioned in base " + std::to_string(want));
}

double affine_cell_mass(const Affine& a, const Cell& cell) {
    if (auto at = detail::materialize(MeasureSpec(a), default_limits().max_atoms)) {
        return cell_mass(MeasureSpec(*at), cell);
    }
    // The preimage of a cell is again a cell when the map is a b-adic similarity.
    const int nb = natural_base(*a.base);
    if (nb == cell.base && a.scale > 0) {
        const long double ls = std::log(static_cast<long double>(a.scale)) / std::log(static_cast<long double>(nb));
        const long double lr = std::nearbyint(ls);
        // x / s + v in cell (n, k)  <=>  x in cell (n - log_b s, k - v b^n)
        if (std::fabs(ls - lr) < 1e-12L && cell.depth - lr >= 0) {
            const int depth = cell.depth - static_cast<int>(lr);
            std::vector<std::int64_t> idx(cell.dim());
            bool ok = true;
            for (std::size_t j = 0; j < cell.dim() && ok; ++j) {
                const long double off = static_cast<long double>(a.translate[j]) *
                                        std::pow(static_cast<long double>(nb), cell.depth);
                ok = off == std::nearbyint(off);
                idx[j] = cell.index[j] - static_cast<std::int64_t>(off);
            }
            if (ok) {
                return cell_mass(*a.base, Cell{nb, depth, std::move(idx)});
            }
        }
    }
    throw DomainError("cell mass of this affine image is not representable on the requested grid");
}

}  // namespace

double cell_mass(const MeasureSpec& spec, const Cell& cell) {
    if (cell.dim() != spec.dim()) {
        throw DomainError("cell dimension does not match measure dimension");
    }
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                double m = 0.0;
                for (const auto& atom : n.atoms) {
                    if (detail::atom_in_cell(n, atom, cell)) {
                        m += atom.weight;
                    }
                }
                return m;
            } else if constexpr (std::is_same_v<T, Digit>) {
                if (cell.base != n.p) {
                    if (auto at = detail::materialize(spec, kEnumerateAtoms)) {
                        return cell_mass(MeasureSpec(*at), cell);
                    }
                    base_mismatch("digit measure", n.p, cell.base);
                }
                return detail::digit_cell_mass(n, cell.depth, cell.index[0]);
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                return detail::tree_cell_mass(n, cell.base, cell.depth, cell.index[0]);
            } else if constexpr (std::is_same_v<T, Product>) {
                auto [l, r] = detail::split_cell(cell, n.left->dim());
                const double ml = cell_mass(*n.left, l);
                return ml == 0.0 ? 0.0 : ml * cell_mass(*n.right, r);
            } else if constexpr (std::is_same_v<T, Mixed>) {
                auto [cx, cy] = detail::split_cell(cell, n.mu->dim());
                double m = 0.0;
                if (all_zero(cy.index)) {
                    m += cell_mass(*n.mu, cx);
                }
                if (all_zero(cx.index)) {
                    m += cell_mass(*n.nu, cy);
                }
                return m;
            } else {
                return affine_cell_mass(n, cell);
            }
        },
        spec.node());
}

// Occupied cells ------------------------------------------------------------------

namespace {

bool index_less(const CellMass& a, const CellMass& b) { return a.cell.index < b.cell.index; }

std::vector<CellMass> atomic_cells(const Atomic& a, int base, int depth, const Limits& limits) {
    std::map<std::vector<std::int64_t>, double> acc;
    for (const auto& atom : a.atoms) {
        if (atom.weight == 0.0) {
            continue;
        }
        std::vector<std::int64_t> idx(a.dim);
        for (std::size_t j = 0; j < a.dim; ++j) {
            idx[j] = detail::atom_index(a, atom, j, base, depth);
        }
        acc[std::move(idx)] += atom.weight;
    }
    check_limit("max_cells", limits.max_cells, acc.size());
    std::vector<CellMass> out;
    out.reserve(acc.size());
    for (auto& [idx, m] : acc) {
        out.push_back(CellMass{Cell{base, depth, idx}, m});
    }
    return out;
}

std::vector<CellMass> digit_cells(const Digit& d, int depth, const Limits& limits) {
    if (d.mass == 0.0) {
        return {};
    }
    if (depth <= d.prefix_depth) {
        const auto anc = floor_div(d.prefix_index, detail::pow_or_throw(d.p, d.prefix_depth - depth));
        return {CellMass{Cell{d.p, depth, {anc}}, d.mass}};
    }
    std::vector<std::int64_t> levels;
    for (auto l : d.levels.elements_upto(depth)) {
        if (l > d.prefix_depth) {
            levels.push_back(l);
        }
    }
    const long double count = std::pow(static_cast<long double>(d.p), static_cast<long double>(levels.size()));
    check_limit("max_cells", limits.max_cells,
                count > 1.8e19L ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(count));
    const double m = d.mass / static_cast<double>(count);
    const std::int64_t base_idx = d.prefix_index * detail::pow_or_throw(d.p, depth - d.prefix_depth);
    std::vector<std::int64_t> weights;
    for (auto l : levels) {
        weights.push_back(detail::pow_or_throw(d.p, depth - static_cast<int>(l)));
    }
    std::vector<CellMass> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> digits(levels.size(), 0);
    for (std::size_t c = 0; c < static_cast<std::size_t>(count); ++c) {
        std::int64_t idx = base_idx;
        for (std::size_t j = 0; j < digits.size(); ++j) {
            idx += digits[j] * weights[j];
        }
        out.push_back(CellMass{Cell{d.p, depth, {idx}}, m});
        for (std::size_t j = 0; j < digits.size(); ++j) {
            if (++digits[j] < d.p) {
                break;
            }
            digits[j] = 0;
        }
    }
    std::sort(out.begin(), out.end(), index_less);
    return out;
}

std::vector<CellMass> tree_cells(const DyadicTree& t, int base, int depth, const Limits& limits) {
    const long double origin = t.root_index / std::pow(static_cast<long double>(t.base), t.root_depth);
    const long double end = (t.root_index + 1) / std::pow(static_cast<long double>(t.base), t.root_depth);
    const long double s = std::pow(static_cast<long double>(base), depth);
    const auto first = static_cast<std::int64_t>(std::floor(origin * s));
    const auto last = static_cast<std::int64_t>(std::ceil(end * s)) - 1;
    check_limit("max_cells", limits.max_cells, static_cast<std::uint64_t>(std::max<std::int64_t>(last - first + 1, 0)));
    std::vector<CellMass> out;
    for (std::int64_t k = first; k <= last; ++k) {
        const double m = detail::tree_cell_mass(t, base, depth, k);
        if (m > 0.0) {
            out.push_back(CellMass{Cell{base, depth, {k}}, m});
        }
    }
    return out;
}

}  // namespace

std::vector<CellMass> occupied_cells(const MeasureSpec& spec, int base, int depth, const Limits& limits) {
    if (base < 2 || depth < 0) {
        throw DomainError("partition needs base >= 2 and depth >= 0");
    }
    check_limit("max_depth", static_cast<std::uint64_t>(limits.max_depth), static_cast<std::uint64_t>(depth));
    return std::visit(
        [&](const auto& n) -> std::vector<CellMass> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                return atomic_cells(n, base, depth, limits);
            } else if constexpr (std::is_same_v<T, Digit>) {
                if (base != n.p) {
                    if (auto at = detail::materialize(spec, limits.max_atoms)) {
                        return atomic_cells(*at, base, depth, limits);
                    }
                    base_mismatch("digit measure", n.p, base);
                }
                return digit_cells(n, depth, limits);
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                return tree_cells(n, base, depth, limits);
            } else if constexpr (std::is_same_v<T, Product>) {
                auto l = occupied_cells(*n.left, base, depth, limits);
                auto r = occupied_cells(*n.right, base, depth, limits);
                check_limit("max_cells", limits.max_cells,
                            static_cast<std::uint64_t>(l.size()) * static_cast<std::uint64_t>(r.size()));
                std::vector<CellMass> out;
                out.reserve(l.size() * r.size());
                for (const auto& a : l) {
                    for (const auto& b : r) {
                        auto idx = a.cell.index;
                        idx.insert(idx.end(), b.cell.index.begin(), b.cell.index.end());
                        out.push_back(CellMass{Cell{base, depth, std::move(idx)}, a.mass * b.mass});
                    }
                }
                return out;
            } else if constexpr (std::is_same_v<T, Mixed>) {
                const std::size_t dm = n.mu->dim();
                const std::size_t dv = n.nu->dim();
                std::map<std::vector<std::int64_t>, double> acc;
                for (const auto& c : occupied_cells(*n.mu, base, depth, limits)) {
                    auto idx = c.cell.index;
                    idx.resize(dm + dv, 0);
                    acc[std::move(idx)] += c.mass;
                }
                for (const auto& c : occupied_cells(*n.nu, base, depth, limits)) {
                    std::vector<std::int64_t> idx(dm, 0);
                    idx.insert(idx.end(), c.cell.index.begin(), c.cell.index.end());
                    acc[std::move(idx)] += c.mass;
                }
                check_limit("max_cells", limits.max_cells, acc.size());
                std::vector<CellMass> out;
                for (auto& [idx, m] : acc) {
                    out.push_back(CellMass{Cell{base, depth, idx}, m});
                }
                return out;
            } else {
                if (auto at = detail::materialize(spec, limits.max_atoms)) {
                    return atomic_cells(*at, base, depth, limits);
                }
                throw DomainError("partition of a continuous affine image is not supported");
            }
        },
        spec.node());
}

// Mass histograms -----------------------------------------------------------------

namespace {

std::vector<MassBin> merge_bins(std::vector<MassBin> bins) {
    std::sort(bins.begin(), bins.end(), [](const MassBin& a, const MassBin& b) { return a.mass < b.mass; });
    std::vector<MassBin> out;
    for (const auto& b : bins) {
        if (b.mass <= 0.0 || b.count <= 0.0) {
            continue;
        }
        if (!out.empty() && out.back().mass == b.mass) {
            out.back().count += b.count;
        } else {
            out.push_back(b);
        }
    }
    return out;
}

std::vector<MassBin> bins_from_cells(const std::vector<CellMass>& cells) {
    std::vector<MassBin> bins;
    bins.reserve(cells.size());
    for (const auto& c : cells) {
        bins.push_back(MassBin{c.mass, 1.0});
    }
    return merge_bins(std::move(bins));
}

// Beyond the coordinate resolution an atomic histogram is still known when the
// atoms are already separated: deeper cells cannot merge anything.
std::vector<MassBin> atomic_histogram(const Atomic& a, int base, int depth, const Limits& limits) {
    try {
        return bins_from_cells(atomic_cells(a, base, depth, limits));
    } catch (const DomainError&) {
        int guard = depth;
        std::vector<CellMass> cells;
        while (guard > 0) {
            --guard;
            try {
                cells = atomic_cells(a, base, guard, limits);
                break;
            } catch (const DomainError&) {
            }
        }
        std::map<Point, double> points;
        for (const auto& atom : a.atoms) {
            if (atom.weight > 0.0) {
                points[atom.point] += atom.weight;
            }
        }
        if (cells.size() != points.size()) {
            throw DomainError("atoms are not separated at the coordinate resolution; depth " +
                              std::to_string(depth) + " is out of reach");
        }
        std::vector<MassBin> bins;
        for (const auto& [p, w] : points) {
            bins.push_back(MassBin{w, 1.0});
        }
        return merge_bins(std::move(bins));
    }
}

}  // namespace

std::vector<MassBin> mass_histogram(const MeasureSpec& spec, int base, int depth, const Limits& limits) {
    if (base < 2 || depth < 0) {
        throw DomainError("partition needs base >= 2 and depth >= 0");
    }
    return std::visit(
        [&](const auto& n) -> std::vector<MassBin> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                return atomic_histogram(n, base, depth, limits);
            } else if constexpr (std::is_same_v<T, Digit>) {
                if (base != n.p) {
                    if (auto at = detail::materialize(spec, limits.max_atoms)) {
                        return atomic_histogram(*at, base, depth, limits);
                    }
                    base_mismatch("digit measure", n.p, base);
                }
                if (n.mass == 0.0) {
                    return {};
                }
                if (depth <= n.prefix_depth) {
                    return {MassBin{n.mass, 1.0}};
                }
                const auto free = n.levels.count_between(n.prefix_depth, depth);
                const double count = std::pow(static_cast<double>(n.p), static_cast<double>(free));
                return {MassBin{n.mass / count, count}};
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                const int leaf_depth = n.root_depth + n.depth;
                if (base == n.base && depth > leaf_depth && n.fill == TreeFill::uniform) {
                    const double split = std::pow(static_cast<double>(base), depth - leaf_depth);
                    std::vector<MassBin> bins;
                    for (double m : n.masses) {
                        bins.push_back(MassBin{m / split, split});
                    }
                    return merge_bins(std::move(bins));
                }
                return bins_from_cells(tree_cells(n, base, depth, limits));
            } else if constexpr (std::is_same_v<T, Product>) {
                const auto l = mass_histogram(*n.left, base, depth, limits);
                const auto r = mass_histogram(*n.right, base, depth, limits);
                std::vector<MassBin> bins;
                bins.reserve(l.size() * r.size());
                for (const auto& a : l) {
                    for (const auto& b : r) {
                        bins.push_back(MassBin{a.mass * b.mass, a.count * b.count});
                    }
                }
                return merge_bins(std::move(bins));
            } else if constexpr (std::is_same_v<T, Mixed>) {
                // The two parts only share the cell at the origin.
                auto mu = mass_histogram(*n.mu, base, depth, limits);
                auto nu = mass_histogram(*n.nu, base, depth, limits);
                const double m0 = cell_mass(*n.mu, Cell{base, depth, std::vector<std::int64_t>(n.mu->dim(), 0)});
                const double v0 = cell_mass(*n.nu, Cell{base, depth, std::vector<std::int64_t>(n.nu->dim(), 0)});
                auto drop = [](std::vector<MassBin>& bins, double m) {
                    if (m <= 0.0) {
                        return;
                    }
                    for (auto& b : bins) {
                        if (b.mass == m) {
                            b.count -= 1.0;
                            return;
                        }
                    }
                    throw DomainError("inconsistent origin cell mass in mixed histogram");
                };
                drop(mu, m0);
                drop(nu, v0);
                std::vector<MassBin> bins = mu;
                bins.insert(bins.end(), nu.begin(), nu.end());
                bins.push_back(MassBin{m0 + v0, 1.0});
                return merge_bins(std::move(bins));
            } else {
                return bins_from_cells(occupied_cells(spec, base, depth, limits));
            }
        },
        spec.node());
}

// Boundary, box and point masses ------------------------------------------------------

namespace {

/// Masses of the interior and of the closure of a cell.
struct OpenClosed {
    double open = 0.0;
    double closed = 0.0;
};

// Position of an atom coordinate relative to [k, k+1] on the depth grid:
// -1 outside, 0 on an endpoint, 1 strictly inside.
int coordinate_position(const Atomic& a, const Atom& atom, std::size_t j, const Cell& cell) {
    const std::int64_t k = cell.index[j];
    if (a.has_lattice() && a.lattice_base == cell.base) {
        // compare numer * b^depth against k * b^L in 128-bit arithmetic
        const __int128 lhs = static_cast<__int128>(atom.numerators[j]) *
                             (cell.depth >= a.lattice_depth ? detail::pow_or_throw(cell.base, cell.depth - a.lattice_depth) : 1);
        const __int128 unit = cell.depth >= a.lattice_depth ? 1 : detail::pow_or_throw(cell.base, a.lattice_depth - cell.depth);
        const __int128 lo = static_cast<__int128>(k) * unit;
        const __int128 hi = static_cast<__int128>(k + 1) * unit;
        if (lhs == lo || lhs == hi) {
            return 0;
        }
        return (lhs > lo && lhs < hi) ? 1 : -1;
    }
    const std::int64_t idx = locate(atom.point[j], cell.base, cell.depth);
    const long double y = static_cast<long double>(atom.point[j]) * static_cast<long double>(cell.scale());
    const bool on_grid = static_cast<long double>(idx) == std::nearbyint(y) &&
                         std::fabs(y - std::nearbyint(y)) <= 4.0L * 2.220446049250313e-16L * std::max<long double>(1.0L, std::fabs(y));
    if (on_grid && (idx == k || idx == k + 1)) {
        return 0;
    }
    return idx == k ? 1 : -1;
}

OpenClosed atomic_open_closed(const Atomic& a, const Cell& cell) {
    OpenClosed r;
    for (const auto& atom : a.atoms) {
        bool inside = true;
        bool interior = true;
        for (std::size_t j = 0; j < a.dim && inside; ++j) {
            const int pos = coordinate_position(a, atom, j, cell);
            if (pos < 0) {
                inside = false;
            } else if (pos == 0) {
                interior = false;
            }
        }
        if (inside) {
            r.closed += atom.weight;
            if (interior) {
                r.open += atom.weight;
            }
        }
    }
    return r;
}

OpenClosed open_closed(const MeasureSpec& spec, const Cell& cell) {
    // in one dimension the boundary is two points; higher-dimensional
    // continuous measures may still charge a face (mu x delta_0)
    if (spec.dim() == 1 && is_continuous(spec)) {
        const double m = cell_mass(spec, cell);
        return {m, m};
    }
    if (auto at = detail::materialize(spec, default_limits().max_atoms)) {
        return atomic_open_closed(*at, cell);
    }
    return std::visit(
        [&](const auto& n) -> OpenClosed {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, DyadicTree>) {
                // Unknown fill: the leaves touching the cell's endpoints bound the
                // mass that could sit on them.
                const double m = cell_mass(spec, cell);
                const long double w = cell.width();
                const long double a = static_cast<long double>(cell.index[0]) * w;
                const long double leaf_w = 1.0L / std::pow(static_cast<long double>(n.base), n.root_depth + n.depth);
                const long double origin = n.root_index / std::pow(static_cast<long double>(n.base), n.root_depth);
                auto leaf_mass = [&](long double x) {
                    const long double pos = (x - origin) / leaf_w;
                    double s = 0.0;
                    for (long double q : {pos - 0.5L, pos + 0.5L}) {
                        const auto i = static_cast<std::int64_t>(std::floor(q));
                        if (i >= 0 && i < static_cast<std::int64_t>(n.masses.size())) {
                            s += n.masses[static_cast<std::size_t>(i)];
                        }
                    }
                    return s;
                };
                const double bound = leaf_mass(a) + leaf_mass(a + w);
                return {std::max(0.0, m - bound), m + bound};
            } else if constexpr (std::is_same_v<T, Product>) {
                auto [l, r] = detail::split_cell(cell, n.left->dim());
                const auto ol = open_closed(*n.left, l);
                const auto orr = open_closed(*n.right, r);
                return {ol.open * orr.open, ol.closed * orr.closed};
            } else if constexpr (std::is_same_v<T, Mixed>) {
                auto [cx, cy] = detail::split_cell(cell, n.mu->dim());
                // the origin is a grid point, never interior to a cell
                const auto in_closure = [](const Cell& c) {
                    return std::all_of(c.index.begin(), c.index.end(), [](std::int64_t k) { return k == 0 || k == -1; });
                };
                OpenClosed r;
                if (in_closure(cy)) {
                    r.closed += open_closed(*n.mu, cx).closed;
                }
                if (in_closure(cx)) {
                    r.closed += open_closed(*n.nu, cy).closed;
                }
                return r;
            } else {
                throw DomainError("boundary mass is not available for this measure kind");
            }
        },
        spec.node());
}

}  // namespace

double boundary_mass(const MeasureSpec& spec, const Cell& cell) {
    if (cell.dim() != spec.dim()) {
        throw DomainError("cell dimension does not match measure dimension");
    }
    const auto oc = open_closed(spec, cell);
    return std::max(0.0, oc.closed - oc.open);
}

bool is_continuous(const MeasureSpec& spec) {
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                return std::all_of(n.atoms.begin(), n.atoms.end(), [](const Atom& a) { return a.weight == 0.0; });
            } else if constexpr (std::is_same_v<T, Digit>) {
                return n.mass == 0.0 || !n.levels.is_finite();
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                return n.fill == TreeFill::uniform;
            } else if constexpr (std::is_same_v<T, Product>) {
                return is_continuous(*n.left) || is_continuous(*n.right);
            } else if constexpr (std::is_same_v<T, Mixed>) {
                return is_continuous(*n.mu) && is_continuous(*n.nu);
            } else {
                return is_continuous(*n.base);
            }
        },
        spec.node());
}

namespace {

MassBounds digit_interval_mass(const Digit& d, int depth, std::int64_t index, double mass, double lo, double hi,
                               int budget) {
    const long double w = std::pow(static_cast<long double>(d.p), -static_cast<long double>(depth));
    const long double a = index * w;
    const long double b = a + w;  // the support of the cell piece lies in [a, b]
    if (b < lo || a > hi) {
        return {0.0, 0.0};
    }
    if (a >= lo && b <= hi) {
        return {mass, mass};
    }
    if (budget <= 0) {
        return {0.0, mass};
    }
    // finitely many atoms left below this cell: decide exactly
    Digit sub = d;
    sub.prefix_depth = depth;
    sub.prefix_index = index;
    sub.mass = mass;
    if (auto at = detail::materialize(MeasureSpec(sub), kEnumerateAtoms)) {
        double m = 0.0;
        for (const auto& atom : at->atoms) {
            if (atom.point[0] >= lo && atom.point[0] <= hi) {
                m += atom.weight;
            }
        }
        return {m, m};
    }
    const int next = depth + 1;
    const bool random = d.levels.contains(next);
    MassBounds r;
    for (int digit = 0; digit < (random ? d.p : 1); ++digit) {
        const double child = random ? mass / d.p : mass;
        const auto c = digit_interval_mass(d, next, index * d.p + digit, child, lo, hi, budget - 1);
        r.lower += c.lower;
        r.upper += c.upper;
    }
    return r;
}

MassBounds tree_interval_mass(const DyadicTree& t, double lo, double hi) {
    const long double leaf_w = 1.0L / std::pow(static_cast<long double>(t.base), t.root_depth + t.depth);
    const long double origin = t.root_index / std::pow(static_cast<long double>(t.base), t.root_depth);
    MassBounds r;
    for (std::size_t i = 0; i < t.masses.size(); ++i) {
        const long double a = origin + static_cast<long double>(i) * leaf_w;
        const long double b = a + leaf_w;
        if (b < lo || a > hi) {
            continue;
        }
        if (t.fill == TreeFill::uniform) {
            const long double overlap = std::min<long double>(b, hi) - std::max<long double>(a, lo);
            const double m = static_cast<double>(t.masses[i] * std::max(0.0L, overlap) / leaf_w);
            r.lower += m;
            r.upper += m;
        } else {
            if (a >= lo && b <= hi) {
                r.lower += t.masses[i];
            }
            r.upper += t.masses[i];
        }
    }
    return r;
}

}  // namespace

MassBounds box_mass(const MeasureSpec& spec, std::span<const double> lo, std::span<const double> hi) {
    if (lo.size() != spec.dim() || hi.size() != spec.dim()) {
        throw DomainError("box dimension does not match measure dimension");
    }
    for (std::size_t j = 0; j < lo.size(); ++j) {
        if (lo[j] > hi[j]) {
            return {0.0, 0.0};
        }
    }
    return std::visit(
        [&](const auto& n) -> MassBounds {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                double m = 0.0;
                for (const auto& atom : n.atoms) {
                    bool in = true;
                    for (std::size_t j = 0; j < n.dim && in; ++j) {
                        in = atom.point[j] >= lo[j] && atom.point[j] <= hi[j];
                    }
                    if (in) {
                        m += atom.weight;
                    }
                }
                return {m, m};
            } else if constexpr (std::is_same_v<T, Digit>) {
                return digit_interval_mass(n, n.prefix_depth, n.prefix_index, n.mass, lo[0], hi[0], 60);
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                return tree_interval_mass(n, lo[0], hi[0]);
            } else if constexpr (std::is_same_v<T, Product>) {
                const std::size_t k = n.left->dim();
                const auto l = box_mass(*n.left, lo.subspan(0, k), hi.subspan(0, k));
                const auto r = box_mass(*n.right, lo.subspan(k), hi.subspan(k));
                return {l.lower * r.lower, l.upper * r.upper};
            } else if constexpr (std::is_same_v<T, Mixed>) {
                const std::size_t k = n.mu->dim();
                auto contains_origin = [](std::span<const double> a, std::span<const double> b) {
                    for (std::size_t j = 0; j < a.size(); ++j) {
                        if (a[j] > 0.0 || b[j] < 0.0) {
                            return false;
                        }
                    }
                    return true;
                };
                MassBounds r;
                if (contains_origin(lo.subspan(k), hi.subspan(k))) {
                    const auto m = box_mass(*n.mu, lo.subspan(0, k), hi.subspan(0, k));
                    r.lower += m.lower;
                    r.upper += m.upper;
                }
                if (contains_origin(lo.subspan(0, k), hi.subspan(0, k))) {
                    const auto m = box_mass(*n.nu, lo.subspan(k), hi.subspan(k));
                    r.lower += m.lower;
                    r.upper += m.upper;
                }
                return r;
            } else {
                // preimage of the box under x -> x / s + v
                std::vector<double> plo(lo.size());
                std::vector<double> phi(lo.size());
                for (std::size_t j = 0; j < lo.size(); ++j) {
                    const double a = (lo[j] - n.translate[j]) * n.scale;
                    const double b = (hi[j] - n.translate[j]) * n.scale;
                    plo[j] = std::min(a, b);
                    phi[j] = std::max(a, b);
                }
                return box_mass(*n.base, plo, phi);
            }
        },
        spec.node());
}

double point_mass(const MeasureSpec& spec, std::span<const double> x) {
    if (x.size() != spec.dim()) {
        throw DomainError("point dimension does not match measure dimension");
    }
    if (is_continuous(spec)) {
        return 0.0;
    }
    if (auto at = detail::materialize(spec, default_limits().max_atoms)) {
        double m = 0.0;
        for (const auto& atom : at->atoms) {
            if (std::equal(atom.point.begin(), atom.point.end(), x.begin())) {
                m += atom.weight;
            }
        }
        return m;
    }
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Product>) {
                const std::size_t k = n.left->dim();
                return point_mass(*n.left, x.subspan(0, k)) * point_mass(*n.right, x.subspan(k));
            } else if constexpr (std::is_same_v<T, Mixed>) {
                const std::size_t k = n.mu->dim();
                auto zero = [](std::span<const double> v) {
                    return std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; });
                };
                double m = 0.0;
                if (zero(x.subspan(k))) {
                    m += point_mass(*n.mu, x.subspan(0, k));
                }
                if (zero(x.subspan(0, k))) {
                    m += point_mass(*n.nu, x.subspan(k));
                }
                return m;
            } else if constexpr (std::is_same_v<T, Affine>) {
                std::vector<double> pre(x.size());
                for (std::size_t j = 0; j < x.size(); ++j) {
                    pre[j] = (x[j] - n.translate[j]) * n.scale;
                }
                return point_mass(*n.base, pre);
            } else {
                throw DomainError("point masses of this measure are not computable");
            }
        },
        spec.node());
}

}  // namespace specdim

namespace specdim {

std::pair<Point, Point> support_box(const MeasureSpec& spec) {
    const std::size_t d = spec.dim();
    return std::visit(
        [&](const auto& n) -> std::pair<Point, Point> {
            using T = std::decay_t<decltype(n)>;
            Point lo(d, std::numeric_limits<double>::infinity());
            Point hi(d, -std::numeric_limits<double>::infinity());
            if constexpr (std::is_same_v<T, Atomic>) {
                for (const auto& a : n.atoms) {
                    if (a.weight <= 0.0) {
                        continue;
                    }
                    for (std::size_t j = 0; j < d; ++j) {
                        lo[j] = std::min(lo[j], a.point[j]);
                        hi[j] = std::max(hi[j], a.point[j]);
                    }
                }
            } else if constexpr (std::is_same_v<T, Digit>) {
                if (n.mass > 0.0) {
                    const long double w = std::pow(static_cast<long double>(n.p), -static_cast<long double>(n.prefix_depth));
                    lo[0] = static_cast<double>(n.prefix_index * w);
                    hi[0] = static_cast<double>((n.prefix_index + 1) * w);
                }
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                const long double leaf = std::pow(static_cast<long double>(n.base), -static_cast<long double>(n.root_depth + n.depth));
                const long double origin = n.root_index * std::pow(static_cast<long double>(n.base), -static_cast<long double>(n.root_depth));
                for (std::size_t i = 0; i < n.masses.size(); ++i) {
                    if (n.masses[i] > 0.0) {
                        lo[0] = std::min(lo[0], static_cast<double>(origin + i * leaf));
                        hi[0] = std::max(hi[0], static_cast<double>(origin + (i + 1) * leaf));
                    }
                }
            } else if constexpr (std::is_same_v<T, Product>) {
                auto [a, b] = support_box(*n.left);
                auto [c, e] = support_box(*n.right);
                if (!(a.empty() || a[0] > b[0] || c[0] > e[0])) {
                    a.insert(a.end(), c.begin(), c.end());
                    b.insert(b.end(), e.begin(), e.end());
                    return {a, b};
                }
            } else if constexpr (std::is_same_v<T, Mixed>) {
                auto [a, b] = support_box(*n.mu);
                auto [c, e] = support_box(*n.nu);
                const std::size_t k = n.mu->dim();
                if (total_mass(*n.mu) > 0.0) {
                    for (std::size_t j = 0; j < k; ++j) {
                        lo[j] = std::min(lo[j], a[j]);
                        hi[j] = std::max(hi[j], b[j]);
                    }
                    for (std::size_t j = k; j < d; ++j) {
                        lo[j] = std::min(lo[j], 0.0);
                        hi[j] = std::max(hi[j], 0.0);
                    }
                }
                if (total_mass(*n.nu) > 0.0) {
                    for (std::size_t j = 0; j < k; ++j) {
                        lo[j] = std::min(lo[j], 0.0);
                        hi[j] = std::max(hi[j], 0.0);
                    }
                    for (std::size_t j = k; j < d; ++j) {
                        lo[j] = std::min(lo[j], c[j - k]);
                        hi[j] = std::max(hi[j], e[j - k]);
                    }
                }
            } else {
                auto [a, b] = support_box(*n.base);
                for (std::size_t j = 0; j < d; ++j) {
                    if (a[j] > b[j]) {
                        continue;
                    }
                    const double x = a[j] / n.scale + n.translate[j];
                    const double y = b[j] / n.scale + n.translate[j];
                    lo[j] = std::min(x, y);
                    hi[j] = std::max(x, y);
                }
            }
            return {lo, hi};
        },
        spec.node());
}

}  // namespace specdim
