#pragma once

#include "specdim/errors.hpp"
#include "specdim/levelset.hpp"
#include "specdim/measure.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace specdim {

/// Description of Lambda_{I_n}: all sums  sum_{i in I_n} b_i p^(i + exponent_offset).
struct DigitSpectrumSpec {
    int p = 2;
    LevelSet levels;
    int max_level = 1;
    int exponent_offset = -1;
};

/// Finite frequency set with sorted, duplicate-free points. Digit spectra keep
/// their description for serialization.
class SpectrumSet {
  public:
    static SpectrumSet explicit_points(std::vector<Point> points, std::size_t dim);
    static SpectrumSet explicit_1d(std::vector<double> values);
    static SpectrumSet digit(const DigitSpectrumSpec& spec, const Limits& limits = default_limits());

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::vector<Point>& points() const { return points_; }
    /// First coordinates, sorted (the whole set when dim == 1).
    const std::vector<double>& line() const { return line_; }
    const std::optional<DigitSpectrumSpec>& digit_spec() const { return digit_; }

    /// s * Lambda + t (t may be empty for no translation).
    SpectrumSet transformed(double s, const Point& t = {}) const;
    /// Largest distance between two points along any coordinate.
    double diameter() const;

  private:
    SpectrumSet(std::vector<Point> points, std::size_t dim);

    std::vector<Point> points_;
    std::vector<double> line_;
    std::size_t dim_ = 1;
    std::optional<DigitSpectrumSpec> digit_;
};

/// #(Lambda ∩ B(t, h)) for the closed Euclidean ball.
std::int64_t ball_count(const SpectrumSet& lambda, const Point& t, double h);

struct CenterSup {
    std::int64_t count = 0;
    Point center;
    bool exact = true;  // false for the grid heuristic in d > 1
};

/// Smallest Euclidean distance between two distinct points (+inf for fewer than two).
double min_separation(const SpectrumSet& lambda);

/// sup over centers of ball_count(lambda, x, h). Exact sweep in one dimension,
/// grid centers at spacing h/4 otherwise.
CenterSup max_ball_count(const SpectrumSet& lambda, double h);

}  // namespace specdim
