#pragma once

#include "specdim/errors.hpp"
#include "specdim/levelset.hpp"
#include "specdim/measure.hpp"
#include "specdim/spectrum.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace specdim {

enum class EstimateMethod { tail_max, tail_min, slope_fit };

const char* method_name(EstimateMethod m);

struct CurvePoint {
    double index = 0.0;
    double scale = 0.0;
    double statistic = 0.0;
};

using ParamValue = std::variant<bool, std::int64_t, double, std::string>;

/// Ordered key/value record of the settings an estimate was produced with.
struct ParamList {
    std::vector<std::pair<std::string, ParamValue>> items;

    void set(std::string key, ParamValue v);
    const ParamValue* find(const std::string& key) const;
    double number(const std::string& key) const;
};

struct DimensionEstimate {
    std::string quantity;
    double value = 0.0;
    EstimateMethod method = EstimateMethod::slope_fit;
    std::vector<CurvePoint> curve;
    double residual = 0.0;
    ParamList parameters;
};

/// index,scale,statistic rows with a header line.
void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve);

/// Least-squares slope of y against x; `residual` receives the RMS residual.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y, double* residual = nullptr);

// Entropy ----------------------------------------------------------------------

/// Shannon entropy (bits) of the depth-n partition in base b (0: natural base, or 2
/// for atomic measures).
double partition_entropy(const MeasureSpec& spec, int n, int base = 0, const Limits& limits = default_limits());

enum class EntropyMode { upper, lower };

DimensionEstimate entropy_dim_estimate(const MeasureSpec& spec, int n_max, EntropyMode mode, int base = 0,
                                       int tail_window = 0);

/// #I_n log2 p.
double digit_entropy_exact(const LevelSet& levels, int p, std::int64_t n);

/// Analytic liminf of #I_n / n.
double digit_hausdorff_formula(const LevelSet& levels);

// Beurling -----------------------------------------------------------------------

/// Geometric ratio-2 schedule of `points` radii ending at diameter/2.
std::vector<double> default_h_schedule(const SpectrumSet& lambda, int points = 24);

struct BeurlingDensity {
    double value = 0.0;
    std::vector<CurvePoint> curve;  // (k, h, sup count / h^r)
    bool exact_centers = true;
};

BeurlingDensity beurling_density(const SpectrumSet& lambda, double r, const std::vector<double>& h_schedule);

DimensionEstimate beurling_dim_estimate(const SpectrumSet& lambda, std::vector<double> h_schedule = {});

// Fourier decay ------------------------------------------------------------------

struct FourierDimOptions {
    double xi0 = 1.0;
    int points = 24;         // schedule xi_k = xi0 2^k
    int samples_per_octave = 16;
    int block = 4;           // envelope block, in schedule intervals
    double tol = 1e-12;
    double floor = 1e-10;    // moduli below this are not trusted
    Point direction;         // empty: (1, ..., 1) / sqrt(d)
};

DimensionEstimate fourier_dim_estimate(const MeasureSpec& spec, const FourierDimOptions& opt = {});

// Lev ----------------------------------------------------------------------------

/// int_{-r}^{r} |mu^(t)|^2 dt with absolute error <= quad_tol. d = 1 only.
double lev_integral(const MeasureSpec& spec, double r, double quad_tol = 1e-8);

/// 2^(k-11), k = 0..23.
std::vector<double> default_r_schedule();

DimensionEstimate lev_exponent_estimate(const MeasureSpec& spec, std::vector<double> r_schedule = {},
                                        double quad_tol = 1e-8);

}  // namespace specdim
