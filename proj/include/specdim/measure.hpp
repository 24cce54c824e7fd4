#pragma once

#include "specdim/errors.hpp"
#include "specdim/levelset.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace specdim {

using Point = std::vector<double>;
using Complex = std::complex<double>;

/// Half-open b-adic cube  prod_j [k_j b^-n, (k_j + 1) b^-n).
struct Cell {
    int base = 2;
    int depth = 0;
    std::vector<std::int64_t> index;

    static Cell make(int base, int depth, std::vector<std::int64_t> index);
    static Cell unit(int base, std::size_t dim);

    std::size_t dim() const { return index.size(); }
    double width() const;
    Point anchor() const;
    /// b^depth; throws when it does not fit the index range.
    std::int64_t scale() const;

    bool operator==(const Cell&) const = default;
};

/// b^n as an integer, or nullopt when it exceeds 2^62.
std::optional<std::int64_t> checked_pow(std::int64_t b, int n);
std::int64_t floor_div(std::int64_t a, std::int64_t b);

struct Atom {
    Point point;
    double weight = 0.0;
    /// Exact coordinates numerator / lattice_base^lattice_depth when the owning
    /// Atomic carries a lattice; empty otherwise.
    std::vector<std::int64_t> numerators;
};

struct Atomic {
    std::size_t dim = 1;
    std::vector<Atom> atoms;
    int lattice_base = 0;  // 0: no exact lattice
    int lattice_depth = 0;

    bool has_lattice() const { return lattice_base != 0; }
};

/// nu_I restricted to a p-adic prefix cell: the law of
///   prefix_index * p^-prefix_depth + sum_{i in levels, i > prefix_depth} b_i p^-i
/// with b_i uniform on {0..p-1}, scaled to total mass `mass`.
struct Digit {
    int p = 2;
    LevelSet levels;
    int prefix_depth = 0;
    std::int64_t prefix_index = 0;
    double mass = 1.0;
};

enum class TreeFill {
    uniform,  // constant density inside every leaf
    unknown,  // only leaf masses are known
};

/// One-dimensional b-adic tree with leaf masses at relative depth `depth` below a
/// root cell (root_depth, root_index).
struct DyadicTree {
    int base = 2;
    int root_depth = 0;
    std::int64_t root_index = 0;
    int depth = 0;
    std::vector<double> masses;
    TreeFill fill = TreeFill::uniform;
};

class MeasureSpec;
using SpecPtr = std::shared_ptr<const MeasureSpec>;

struct Product {
    SpecPtr left;
    SpecPtr right;
};

/// mu x delta_0 + delta_0 x nu on R^{dim mu + dim nu}.
struct Mixed {
    SpecPtr mu;
    SpecPtr nu;
};

/// Push-forward of `base` under x -> x / scale + translate.
struct Affine {
    SpecPtr base;
    Point translate;
    double scale = 1.0;
};

class MeasureSpec {
  public:
    using Node = std::variant<Atomic, Digit, DyadicTree, Product, Mixed, Affine>;

    MeasureSpec(Atomic a);
    MeasureSpec(Digit d);
    MeasureSpec(DyadicTree t);
    MeasureSpec(Product p);
    MeasureSpec(Mixed m);
    MeasureSpec(Affine a);

    const Node& node() const { return node_; }
    std::size_t dim() const { return dim_; }

    template <class T>
    const T* as() const {
        return std::get_if<T>(&node_);
    }

  private:
    Node node_;
    std::size_t dim_ = 1;
};

// Builders ------------------------------------------------------------------

MeasureSpec make_atomic(std::vector<Atom> atoms, std::size_t dim = 1);
MeasureSpec zero_measure(std::size_t dim);
MeasureSpec dirac(Point at);
MeasureSpec lebesgue_unit(int base = 2);
MeasureSpec make_digit(int p, LevelSet levels);
MeasureSpec make_tree(int base, int depth, std::vector<double> leaf_masses,
                      TreeFill fill = TreeFill::uniform);
MeasureSpec make_product(MeasureSpec left, MeasureSpec right);
MeasureSpec make_mixed(MeasureSpec mu, MeasureSpec nu);

// Core operations -----------------------------------------------------------

double total_mass(const MeasureSpec& spec);
bool is_probability(const MeasureSpec& spec, double tol = 1e-12);

/// Preferred partition base: Digit -> p, tree -> b, Atomic -> 0 (any).
int natural_base(const MeasureSpec& spec);

/// mu(D) for the half-open cell D.
double cell_mass(const MeasureSpec& spec, const Cell& cell);

/// mu(. ∩ K).
MeasureSpec restrict_to(const MeasureSpec& spec, const Cell& cell);

/// (1/mu(D)) times the image of mu_D under the map sending D onto the unit cube.
MeasureSpec normalize_rescale(const MeasureSpec& spec, const Cell& cell);

/// Push-forward under x -> x / s + v. Spectra of the image pair as s*Lambda (+ any t).
MeasureSpec affine_image(const MeasureSpec& spec, const Point& v, double s);

/// c * mu, c >= 0.
MeasureSpec scaled(const MeasureSpec& spec, double c);

/// mu / mu(R^d).
MeasureSpec normalized(const MeasureSpec& spec);

/// int exp(2 pi i xi.x) dmu(x) with |error| <= tol.
Complex fourier(const MeasureSpec& spec, std::span<const double> xi, double tol = 1e-12);
Complex fourier(const MeasureSpec& spec, double xi, double tol = 1e-12);

/// Mass on the topological boundary of the cell. Exact for atomic, digit and
/// uniform-fill measures; an upper bound for unknown-fill trees.
double boundary_mass(const MeasureSpec& spec, const Cell& cell);

/// Uniform atoms on C(I_n). Carries an exact lattice when p^n fits the index range.
MeasureSpec truncate_digit(const Digit& digit, int n, const Limits& limits = default_limits());

// Partition machinery -------------------------------------------------------

struct CellMass {
    Cell cell;
    double mass = 0.0;
};

struct MassBin {
    double mass = 0.0;
    double count = 0.0;  // may exceed 2^53 for deep digit partitions
};

/// Positive-mass cells of the depth-n partition, ordered by index.
std::vector<CellMass> occupied_cells(const MeasureSpec& spec, int base, int depth,
                                     const Limits& limits = default_limits());

/// Multiset of positive cell masses of the depth-n partition, ascending by mass.
std::vector<MassBin> mass_histogram(const MeasureSpec& spec, int base, int depth,
                                    const Limits& limits = default_limits());

struct MassBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Bounds on mu of the closed box [lo, hi].
MassBounds box_mass(const MeasureSpec& spec, std::span<const double> lo, std::span<const double> hi);

/// mu({x}).
double point_mass(const MeasureSpec& spec, std::span<const double> x);

/// Closed bounding box [lo, hi] of the support (lo > hi for the zero measure).
std::pair<Point, Point> support_box(const MeasureSpec& spec);

/// True when the measure is known to carry no atoms.
bool is_continuous(const MeasureSpec& spec);

/// Cell index containing x at (base, depth); coordinates within rounding of a cell
/// boundary are snapped onto it.
std::int64_t locate(double x, int base, int depth);

}  // namespace specdim
