#include "specdim/measure.hpp"

#include "measure_detail.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>

namespace specdim {

// Integer helpers -----------------------------------------------------------

std::optional<std::int64_t> checked_pow(std::int64_t b, int n) {
    constexpr std::int64_t kMax = std::int64_t{1} << 62;
    if (n < 0) {
        return std::nullopt;
    }
    std::int64_t v = 1;
    for (int i = 0; i < n; ++i) {
        if (v > kMax / b) {
            return std::nullopt;
        }
        v *= b;
    }
    return v;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

namespace detail {

std::int64_t pow_or_throw(std::int64_t b, int n) {
    auto v = checked_pow(b, n);
    if (!v) {
        throw ResourceLimit("cell_index_range", 62, static_cast<std::uint64_t>(std::max(n, 0)));
    }
    return *v;
}

}  // namespace detail

// Cell ------------------------------------------------------------------------

Cell Cell::make(int base, int depth, std::vector<std::int64_t> index) {
    if (base < 2) {
        throw DomainError("cell base must be >= 2");
    }
    if (depth < 0) {
        throw DomainError("cell depth must be >= 0");
    }
    check_limit("max_depth", static_cast<std::uint64_t>(default_limits().max_depth),
                static_cast<std::uint64_t>(depth));
    detail::pow_or_throw(base, depth);
    if (index.empty()) {
        throw DomainError("cell needs at least one coordinate");
    }
    return Cell{base, depth, std::move(index)};
}

Cell Cell::unit(int base, std::size_t dim) {
    return make(base, 0, std::vector<std::int64_t>(dim, 0));
}

std::int64_t Cell::scale() const { return detail::pow_or_throw(base, depth); }

double Cell::width() const { return 1.0 / static_cast<double>(scale()); }

Point Cell::anchor() const {
    const long double s = static_cast<long double>(scale());
    Point p(index.size());
    for (std::size_t j = 0; j < index.size(); ++j) {
        p[j] = static_cast<double>(static_cast<long double>(index[j]) / s);
    }
    return p;
}

std::int64_t locate(double x, int base, int depth) {
    // Coordinates are doubles; beyond ~2^42 cells per unit the snap tolerance
    // would exceed a sizeable fraction of a cell.
    constexpr long double kResolution = 4398046511104.0L;  // 2^42
    const long double s = std::pow(static_cast<long double>(base), static_cast<long double>(depth));
    const long double y = static_cast<long double>(x) * s;
    if (!(std::fabs(y) < kResolution)) {
        throw DomainError("coordinate " + std::to_string(x) + " cannot be resolved at base " +
                          std::to_string(base) + " depth " + std::to_string(depth));
    }
    const long double r = std::nearbyint(y);
    if (std::fabs(y - r) <= 4.0L * DBL_EPSILON * std::max<long double>(1.0L, std::fabs(y))) {
        return static_cast<std::int64_t>(r);
    }
    return static_cast<std::int64_t>(std::floor(y));
}

namespace detail {

std::int64_t atom_index(const Atomic& a, const Atom& atom, std::size_t coord, int base, int depth) {
    if (a.has_lattice() && a.lattice_base == base) {
        const std::int64_t k = atom.numerators[coord];
        if (depth <= a.lattice_depth) {
            return floor_div(k, pow_or_throw(base, a.lattice_depth - depth));
        }
        const std::int64_t f = pow_or_throw(base, depth - a.lattice_depth);
        if (k != 0 && std::abs(k) > (std::int64_t{1} << 62) / f) {
            throw ResourceLimit("cell_index_range", 62, static_cast<std::uint64_t>(depth));
        }
        return k * f;
    }
    return locate(atom.point[coord], base, depth);
}

bool atom_in_cell(const Atomic& a, const Atom& atom, const Cell& cell) {
    for (std::size_t j = 0; j < cell.dim(); ++j) {
        if (atom_index(a, atom, j, cell.base, cell.depth) != cell.index[j]) {
            return false;
        }
    }
    return true;
}

std::int64_t digit_levels_between(const Digit& d, std::int64_t from, std::int64_t to) {
    return d.levels.count_between(from, to);
}

bool digit_tail_finite(const Digit& d) { return d.levels.is_finite(); }

double digit_cell_mass(const Digit& d, int depth, std::int64_t index) {
    const int n0 = d.prefix_depth;
    if (depth <= n0) {
        const std::int64_t anc = floor_div(d.prefix_index, pow_or_throw(d.p, n0 - depth));
        return anc == index ? d.mass : 0.0;
    }
    const std::int64_t span = pow_or_throw(d.p, depth - n0);
    if (floor_div(index, span) != d.prefix_index) {
        return 0.0;
    }
    std::int64_t rel = index - d.prefix_index * span;
    for (int level = depth; level > n0; --level) {
        const std::int64_t digit = rel % d.p;
        rel /= d.p;
        if (digit != 0 && !d.levels.contains(level)) {
            return 0.0;
        }
    }
    const auto free = d.levels.count_between(n0, depth);
    return d.mass * std::pow(static_cast<double>(d.p), -static_cast<double>(free));
}

double tree_cell_mass(const DyadicTree& t, int base, int depth, std::int64_t index) {
    const int leaf_depth = t.root_depth + t.depth;
    if (base == t.base) {
        if (depth <= t.root_depth) {
            const std::int64_t anc = floor_div(t.root_index, pow_or_throw(base, t.root_depth - depth));
            if (anc != index) {
                return 0.0;
            }
            return std::accumulate(t.masses.begin(), t.masses.end(), 0.0);
        }
        const std::int64_t below_root = pow_or_throw(base, depth - t.root_depth);
        if (floor_div(index, below_root) != t.root_index) {
            return 0.0;
        }
        const std::int64_t rel = index - t.root_index * below_root;
        if (depth <= leaf_depth) {
            const std::int64_t per = pow_or_throw(base, leaf_depth - depth);
            double m = 0.0;
            for (std::int64_t i = rel * per; i < (rel + 1) * per; ++i) {
                m += t.masses[static_cast<std::size_t>(i)];
            }
            return m;
        }
        if (t.fill == TreeFill::unknown) {
            throw DomainError("tree depth " + std::to_string(leaf_depth) +
                              " is too coarse for a depth-" + std::to_string(depth) + " cell");
        }
        const std::int64_t split = pow_or_throw(base, depth - leaf_depth);
        return t.masses[static_cast<std::size_t>(floor_div(rel, split))] / static_cast<double>(split);
    }
    if (t.fill == TreeFill::unknown) {
        throw DomainError("unknown-fill tree of base " + std::to_string(t.base) +
                          " cannot be partitioned in base " + std::to_string(base));
    }
    // Uniform density: integrate the piecewise-constant density over the cell.
    const long double cw = 1.0L / std::pow(static_cast<long double>(base), depth);
    const long double a = index * cw;
    const long double b = a + cw;
    const long double lw = 1.0L / std::pow(static_cast<long double>(t.base), leaf_depth);
    const long double origin = t.root_index / std::pow(static_cast<long double>(t.base), t.root_depth);
    const auto n = static_cast<std::int64_t>(t.masses.size());
    const std::int64_t first = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((a - origin) / lw)));
    const std::int64_t last = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(std::floor((b - origin) / lw)));
    long double m = 0.0L;
    for (std::int64_t i = first; i <= last; ++i) {
        const long double la = origin + i * lw;
        const long double overlap = std::min(b, la + lw) - std::max(a, la);
        if (overlap > 0) {
            m += t.masses[static_cast<std::size_t>(i)] * (overlap / lw);
        }
    }
    return static_cast<double>(m);
}

std::pair<Cell, Cell> split_cell(const Cell& cell, std::size_t left_dim) {
    Cell l{cell.base, cell.depth, {cell.index.begin(), cell.index.begin() + static_cast<std::ptrdiff_t>(left_dim)}};
    Cell r{cell.base, cell.depth, {cell.index.begin() + static_cast<std::ptrdiff_t>(left_dim), cell.index.end()}};
    return {std::move(l), std::move(r)};
}

int combine_bases(int a, int b) {
    if (a == 0) {
        return b;
    }
    if (b == 0 || a == b) {
        return a;
    }
    throw DomainError("factors use incompatible partition bases " + std::to_string(a) + " and " +
                      std::to_string(b));
}

}  // namespace detail

// MeasureSpec ------------------------------------------------------------------

namespace {

void validate_weight(double w) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
        throw MalformedSpec("weights and masses must be finite and >= 0");
    }
}

}  // namespace

MeasureSpec::MeasureSpec(Atomic a) : node_(std::move(a)) {
    const auto& at = std::get<Atomic>(node_);
    if (at.dim == 0) {
        throw MalformedSpec("atomic measure needs dimension >= 1");
    }
    for (const auto& atom : at.atoms) {
        if (atom.point.size() != at.dim) {
            throw MalformedSpec("atom dimension mismatch");
        }
        if (at.has_lattice() && atom.numerators.size() != at.dim) {
            throw MalformedSpec("lattice atoms need one numerator per coordinate");
        }
        validate_weight(atom.weight);
    }
    dim_ = at.dim;
}

MeasureSpec::MeasureSpec(Digit d) : node_(std::move(d)) {
    const auto& dg = std::get<Digit>(node_);
    if (dg.p < 2) {
        throw MalformedSpec("digit measure needs p >= 2");
    }
    if (dg.prefix_depth < 0) {
        throw MalformedSpec("digit prefix depth must be >= 0");
    }
    validate_weight(dg.mass);
    dim_ = 1;
}

MeasureSpec::MeasureSpec(DyadicTree t) : node_(std::move(t)) {
    const auto& tr = std::get<DyadicTree>(node_);
    if (tr.base < 2 || tr.depth < 0 || tr.root_depth < 0) {
        throw MalformedSpec("tree needs base >= 2 and nonnegative depths");
    }
    const auto leaves = checked_pow(tr.base, tr.depth);
    if (!leaves || static_cast<std::uint64_t>(*leaves) != tr.masses.size()) {
        throw MalformedSpec("tree needs exactly base^depth leaf masses");
    }
    for (double m : tr.masses) {
        validate_weight(m);
    }
    dim_ = 1;
}

MeasureSpec::MeasureSpec(Product p) : node_(std::move(p)) {
    const auto& pr = std::get<Product>(node_);
    if (!pr.left || !pr.right) {
        throw MalformedSpec("product needs both factors");
    }
    dim_ = pr.left->dim() + pr.right->dim();
}

MeasureSpec::MeasureSpec(Mixed m) : node_(std::move(m)) {
    const auto& mx = std::get<Mixed>(node_);
    if (!mx.mu || !mx.nu) {
        throw MalformedSpec("mixed measure needs both parts");
    }
    dim_ = mx.mu->dim() + mx.nu->dim();
}

MeasureSpec::MeasureSpec(Affine a) : node_(std::move(a)) {
    const auto& af = std::get<Affine>(node_);
    if (!af.base) {
        throw MalformedSpec("affine image needs a base measure");
    }
    if (af.scale == 0.0 || !std::isfinite(af.scale)) {
        throw MalformedSpec("affine scale must be finite and nonzero");
    }
    if (af.translate.size() != af.base->dim()) {
        throw MalformedSpec("affine translation dimension mismatch");
    }
    dim_ = af.base->dim();
}

// Builders ------------------------------------------------------------------

MeasureSpec make_atomic(std::vector<Atom> atoms, std::size_t dim) {
    return MeasureSpec(Atomic{dim, std::move(atoms), 0, 0});
}

MeasureSpec zero_measure(std::size_t dim) { return make_atomic({}, dim); }

MeasureSpec dirac(Point at) {
    const std::size_t dim = at.size();
    return make_atomic({Atom{std::move(at), 1.0, {}}}, dim);
}

MeasureSpec lebesgue_unit(int base) { return make_tree(base, 0, {1.0}); }

MeasureSpec make_digit(int p, LevelSet levels) { return MeasureSpec(Digit{p, std::move(levels), 0, 0, 1.0}); }

MeasureSpec make_tree(int base, int depth, std::vector<double> leaf_masses, TreeFill fill) {
    return MeasureSpec(DyadicTree{base, 0, 0, depth, std::move(leaf_masses), fill});
}

MeasureSpec make_product(MeasureSpec left, MeasureSpec right) {
    return MeasureSpec(Product{std::make_shared<const MeasureSpec>(std::move(left)),
                               std::make_shared<const MeasureSpec>(std::move(right))});
}

MeasureSpec make_mixed(MeasureSpec mu, MeasureSpec nu) {
    return MeasureSpec(Mixed{std::make_shared<const MeasureSpec>(std::move(mu)),
                             std::make_shared<const MeasureSpec>(std::move(nu))});
}

// Mass ----------------------------------------------------------------------

double total_mass(const MeasureSpec& spec) {
    return std::visit(
        [](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                double s = 0.0;
                for (const auto& a : n.atoms) {
                    s += a.weight;
                }
                return s;
            } else if constexpr (std::is_same_v<T, Digit>) {
                return n.mass;
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                return std::accumulate(n.masses.begin(), n.masses.end(), 0.0);
            } else if constexpr (std::is_same_v<T, Product>) {
                return total_mass(*n.left) * total_mass(*n.right);
            } else if constexpr (std::is_same_v<T, Mixed>) {
                return total_mass(*n.mu) + total_mass(*n.nu);
            } else {
                return total_mass(*n.base);
            }
        },
        spec.node());
}

bool is_probability(const MeasureSpec& spec, double tol) { return std::abs(total_mass(spec) - 1.0) <= tol; }

int natural_base(const MeasureSpec& spec) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                return 0;
            } else if constexpr (std::is_same_v<T, Digit>) {
                return n.p;
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                return n.base;
            } else if constexpr (std::is_same_v<T, Product>) {
                return detail::combine_bases(natural_base(*n.left), natural_base(*n.right));
            } else if constexpr (std::is_same_v<T, Mixed>) {
                return detail::combine_bases(natural_base(*n.mu), natural_base(*n.nu));
            } else {
                return natural_base(*n.base);
            }
        },
        spec.node());
}

// Transformations -------------------------------------------------------------

MeasureSpec scaled(const MeasureSpec& spec, double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
        throw DomainError("scaling factor must be finite and >= 0");
    }
    return std::visit(
        [c](const auto& n) -> MeasureSpec {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                Atomic out = n;
                for (auto& a : out.atoms) {
                    a.weight *= c;
                }
                return out;
            } else if constexpr (std::is_same_v<T, Digit>) {
                Digit out = n;
                out.mass *= c;
                return out;
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                DyadicTree out = n;
                for (auto& m : out.masses) {
                    m *= c;
                }
                return out;
            } else if constexpr (std::is_same_v<T, Product>) {
                return Product{std::make_shared<const MeasureSpec>(scaled(*n.left, c)), n.right};
            } else if constexpr (std::is_same_v<T, Mixed>) {
                return Mixed{std::make_shared<const MeasureSpec>(scaled(*n.mu, c)),
                             std::make_shared<const MeasureSpec>(scaled(*n.nu, c))};
            } else {
                return Affine{std::make_shared<const MeasureSpec>(scaled(*n.base, c)), n.translate, n.scale};
            }
        },
        spec.node());
}

MeasureSpec normalized(const MeasureSpec& spec) {
    const double m = total_mass(spec);
    if (!(m > 0.0)) {
        throw DomainError("cannot normalize a zero measure");
    }
    return scaled(spec, 1.0 / m);
}

MeasureSpec affine_image(const MeasureSpec& spec, const Point& v, double s) {
    if (s == 0.0 || !std::isfinite(s)) {
        throw DomainError("affine scale must be finite and nonzero");
    }
    if (v.size() != spec.dim()) {
        throw DomainError("translation dimension mismatch");
    }
    if (const auto* a = spec.as<Atomic>()) {
        Atomic out{a->dim, {}, 0, 0};
        out.atoms.reserve(a->atoms.size());
        for (const auto& atom : a->atoms) {
            Point p(atom.point.size());
            for (std::size_t j = 0; j < p.size(); ++j) {
                p[j] = atom.point[j] / s + v[j];
            }
            out.atoms.push_back(Atom{std::move(p), atom.weight, {}});
        }
        return out;
    }
    if (const auto* t = spec.as<DyadicTree>(); t && s == 1.0) {
        const long double shift = static_cast<long double>(v[0]) *
                                  std::pow(static_cast<long double>(t->base), t->root_depth);
        if (shift == std::nearbyint(shift) && std::fabs(shift) < 4e18L) {
            DyadicTree out = *t;
            out.root_index += static_cast<std::int64_t>(shift);
            return out;
        }
    }
    if (const auto* inner = spec.as<Affine>()) {
        // (x / s1 + v1) / s + v = x / (s1 s) + v1 / s + v
        Point nv(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            nv[j] = inner->translate[j] / s + v[j];
        }
        return Affine{inner->base, std::move(nv), inner->scale * s};
    }
    return Affine{std::make_shared<const MeasureSpec>(spec), v, s};
}

namespace {

void require_cell_dim(const MeasureSpec& spec, const Cell& cell) {
    if (cell.dim() != spec.dim()) {
        throw DomainError("cell dimension " + std::to_string(cell.dim()) + " does not match measure dimension " +
                          std::to_string(spec.dim()));
    }
}

void require_positive(double m) {
    if (!(m > 0.0)) {
        throw DomainError("cell carries zero mass");
    }
}

Digit require_digit_base(const Digit& d, int base) {
    if (base != d.p) {
        throw DomainError("digit measure with p=" + std::to_string(d.p) + " cannot be cut along base-" +
                          std::to_string(base) + " cells");
    }
    return d;
}

DyadicTree tree_subtree(const DyadicTree& t, const Cell& cell) {
    const int leaf_depth = t.root_depth + t.depth;
    if (cell.base != t.base) {
        throw DomainError("tree restriction needs a cell of the tree's base");
    }
    if (cell.depth <= t.root_depth) {
        return t;
    }
    const std::int64_t below_root = detail::pow_or_throw(t.base, cell.depth - t.root_depth);
    const std::int64_t rel = cell.index[0] - t.root_index * below_root;
    DyadicTree out = t;
    out.root_depth = cell.depth;
    out.root_index = cell.index[0];
    if (cell.depth <= leaf_depth) {
        const std::int64_t per = detail::pow_or_throw(t.base, leaf_depth - cell.depth);
        out.depth = leaf_depth - cell.depth;
        out.masses.assign(t.masses.begin() + rel * per, t.masses.begin() + (rel + 1) * per);
        return out;
    }
    if (t.fill == TreeFill::unknown) {
        throw DomainError("unknown-fill tree is too coarse for this cell");
    }
    out.depth = 0;
    out.masses = {detail::tree_cell_mass(t, t.base, cell.depth, cell.index[0])};
    return out;
}

}  // namespace

MeasureSpec restrict_to(const MeasureSpec& spec, const Cell& cell) {
    require_cell_dim(spec, cell);
    require_positive(cell_mass(spec, cell));
    return std::visit(
        [&](const auto& n) -> MeasureSpec {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                Atomic out = n;
                out.atoms.clear();
                for (const auto& atom : n.atoms) {
                    if (detail::atom_in_cell(n, atom, cell)) {
                        out.atoms.push_back(atom);
                    }
                }
                return out;
            } else if constexpr (std::is_same_v<T, Digit>) {
                Digit d = require_digit_base(n, cell.base);
                if (cell.depth <= d.prefix_depth) {
                    return d;
                }
                d.mass = detail::digit_cell_mass(n, cell.depth, cell.index[0]);
                d.prefix_depth = cell.depth;
                d.prefix_index = cell.index[0];
                return d;
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                return tree_subtree(n, cell);
            } else if constexpr (std::is_same_v<T, Product>) {
                auto [l, r] = detail::split_cell(cell, n.left->dim());
                return make_product(restrict_to(*n.left, l), restrict_to(*n.right, r));
            } else if constexpr (std::is_same_v<T, Mixed>) {
                auto [cx, cy] = detail::split_cell(cell, n.mu->dim());
                const bool y_origin = std::all_of(cy.index.begin(), cy.index.end(), [](auto k) { return k == 0; });
                const bool x_origin = std::all_of(cx.index.begin(), cx.index.end(), [](auto k) { return k == 0; });
                const double mu_part = y_origin ? cell_mass(*n.mu, cx) : 0.0;
                const double nu_part = x_origin ? cell_mass(*n.nu, cy) : 0.0;
                MeasureSpec mu = mu_part > 0.0 ? restrict_to(*n.mu, cx) : zero_measure(n.mu->dim());
                MeasureSpec nu = nu_part > 0.0 ? restrict_to(*n.nu, cy) : zero_measure(n.nu->dim());
                return make_mixed(std::move(mu), std::move(nu));
            } else {
                throw DomainError("restriction of a general affine image is not supported");
            }
        },
        spec.node());
}

MeasureSpec normalize_rescale(const MeasureSpec& spec, const Cell& cell) {
    require_cell_dim(spec, cell);
    const double m = cell_mass(spec, cell);
    require_positive(m);
    return std::visit(
        [&](const auto& n) -> MeasureSpec {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                const bool exact = n.has_lattice() && n.lattice_base == cell.base;
                Atomic out{n.dim, {}, 0, 0};
                const long double s = static_cast<long double>(cell.scale());
                int new_depth = 0;
                std::int64_t lattice_factor = 1;
                if (exact) {
                    new_depth = std::max(n.lattice_depth - cell.depth, 0);
                    if (n.lattice_depth >= cell.depth) {
                        lattice_factor = detail::pow_or_throw(cell.base, n.lattice_depth - cell.depth);
                    }
                    out.lattice_base = cell.base;
                    out.lattice_depth = new_depth;
                }
                for (const auto& atom : n.atoms) {
                    if (!detail::atom_in_cell(n, atom, cell)) {
                        continue;
                    }
                    Atom img;
                    img.weight = atom.weight / m;
                    img.point.resize(n.dim);
                    if (exact) {
                        img.numerators.resize(n.dim);
                        const long double denom = std::pow(static_cast<long double>(cell.base), new_depth);
                        for (std::size_t j = 0; j < n.dim; ++j) {
                            std::int64_t k = 0;
                            if (n.lattice_depth >= cell.depth) {
                                k = atom.numerators[j] - cell.index[j] * lattice_factor;
                            }
                            img.numerators[j] = k;
                            img.point[j] = static_cast<double>(k / denom);
                        }
                    } else {
                        for (std::size_t j = 0; j < n.dim; ++j) {
                            img.point[j] = static_cast<double>(
                                (static_cast<long double>(atom.point[j]) * s - cell.index[j]));
                        }
                    }
                    out.atoms.push_back(std::move(img));
                }
                return out;
            } else if constexpr (std::is_same_v<T, Digit>) {
                Digit d = require_digit_base(n, cell.base);
                Digit out;
                out.p = d.p;
                out.levels = d.levels.shifted(cell.depth);
                out.mass = 1.0;
                if (d.prefix_depth > cell.depth) {
                    const std::int64_t span = detail::pow_or_throw(d.p, d.prefix_depth - cell.depth);
                    out.prefix_depth = d.prefix_depth - cell.depth;
                    out.prefix_index = d.prefix_index - cell.index[0] * span;
                }
                return out;
            } else if constexpr (std::is_same_v<T, DyadicTree>) {
                DyadicTree t = tree_subtree(n, cell);
                if (t.root_depth > cell.depth) {
                    const std::int64_t span = detail::pow_or_throw(t.base, t.root_depth - cell.depth);
                    t.root_index -= cell.index[0] * span;
                    t.root_depth -= cell.depth;
                } else {
                    t.root_depth = 0;
                    t.root_index = 0;
                }
                for (auto& x : t.masses) {
                    x /= m;
                }
                return t;
            } else if constexpr (std::is_same_v<T, Product>) {
                auto [l, r] = detail::split_cell(cell, n.left->dim());
                return make_product(normalize_rescale(*n.left, l), normalize_rescale(*n.right, r));
            } else if constexpr (std::is_same_v<T, Mixed>) {
                auto [cx, cy] = detail::split_cell(cell, n.mu->dim());
                const bool y_origin = std::all_of(cy.index.begin(), cy.index.end(), [](auto k) { return k == 0; });
                const bool x_origin = std::all_of(cx.index.begin(), cx.index.end(), [](auto k) { return k == 0; });
                const double mu_part = y_origin ? cell_mass(*n.mu, cx) : 0.0;
                const double nu_part = x_origin ? cell_mass(*n.nu, cy) : 0.0;
                MeasureSpec mu = mu_part > 0.0 ? scaled(normalize_rescale(*n.mu, cx), mu_part / m)
                                               : zero_measure(n.mu->dim());
                MeasureSpec nu = nu_part > 0.0 ? scaled(normalize_rescale(*n.nu, cy), nu_part / m)
                                               : zero_measure(n.nu->dim());
                return make_mixed(std::move(mu), std::move(nu));
            } else {
                throw DomainError("rescaling of a general affine image is not supported");
            }
        },
        spec.node());
}

MeasureSpec truncate_digit(const Digit& digit, int n, const Limits& limits) {
    if (n < 0) {
        throw DomainError("truncation level must be >= 0");
    }
    const int top = std::max(n, digit.prefix_depth);
    std::vector<std::int64_t> levels;
    for (auto l : digit.levels.elements_upto(n)) {
        if (l > digit.prefix_depth) {
            levels.push_back(l);
        }
    }
    const long double count_ld = std::pow(static_cast<long double>(digit.p), static_cast<long double>(levels.size()));
    check_limit("max_atoms", limits.max_atoms,
                count_ld > 1.8e19L ? std::numeric_limits<std::uint64_t>::max()
                                   : static_cast<std::uint64_t>(count_ld));
    const auto count = static_cast<std::size_t>(count_ld);
    const double w = digit.mass / static_cast<double>(count);

    const auto denom = checked_pow(digit.p, top);
    Atomic out{1, {}, 0, 0};
    if (denom) {
        out.lattice_base = digit.p;
        out.lattice_depth = top;
    }
    out.atoms.reserve(count);
    std::vector<int> digits(levels.size(), 0);
    for (std::size_t c = 0; c < count; ++c) {
        long double x = static_cast<long double>(digit.prefix_index) /
                        std::pow(static_cast<long double>(digit.p), digit.prefix_depth);
        std::int64_t numer = 0;
        if (denom) {
            numer = digit.prefix_index * detail::pow_or_throw(digit.p, top - digit.prefix_depth);
        }
        for (std::size_t j = 0; j < levels.size(); ++j) {
            if (digits[j] == 0) {
                continue;
            }
            x += digits[j] / std::pow(static_cast<long double>(digit.p), static_cast<long double>(levels[j]));
            if (denom) {
                numer += digits[j] * detail::pow_or_throw(digit.p, top - static_cast<int>(levels[j]));
            }
        }
        Atom a{{static_cast<double>(x)}, w, {}};
        if (denom) {
            a.numerators = {numer};
        }
        out.atoms.push_back(std::move(a));
        // odometer over the free digits
        for (std::size_t j = 0; j < digits.size(); ++j) {
            if (++digits[j] < digit.p) {
                break;
            }
            digits[j] = 0;
        }
    }
    std::sort(out.atoms.begin(), out.atoms.end(),
              [](const Atom& a, const Atom& b) { return a.point[0] < b.point[0]; });
    return out;
}

}  // namespace specdim
