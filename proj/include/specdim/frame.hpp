#pragma once

#include "specdim/dimension.hpp"
#include "specdim/errors.hpp"
#include "specdim/measure.hpp"
#include "specdim/rng.hpp"
#include "specdim/spectrum.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace specdim {

using ComplexMatrix = Eigen::MatrixXcd;

struct FrameReport {
    double lower = 0.0;  // A (exact) or the smallest trial ratio (bracket)
    double upper = 0.0;  // B (exact) or the largest trial ratio (bracket)
    bool exact = false;
    double gram_min_eig = 0.0;
    double gram_max_eig = 0.0;
    double condition = 0.0;  // upper / lower, +inf when lower == 0
    std::size_t spectrum_size = 0;
    std::size_t function_dim = 0;  // number of atoms, or number of trials
    std::vector<double> trial_ratios;
};

struct LemmaCheckRecord {
    std::string lemma;
    std::size_t samples = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    ParamList details;
};

/// <e_t, e_lambda> in L^2(mu), i.e. mu^(t - lambda).
Complex inner_product(const MeasureSpec& spec, const Point& t, const Point& lambda, double tol = 1e-12);

/// G[a][b] = mu^(lambda_a - lambda_b).
ComplexMatrix gram_matrix(const MeasureSpec& spec, const SpectrumSet& lambda, double tol = 1e-12,
                          const Limits& limits = default_limits(), unsigned threads = 1);

/// max |G - I| entrywise.
double identity_deviation(const ComplexMatrix& g);

/// Exact frame bounds of {e_lambda} in L^2(mu) for a finite atomic mu.
FrameReport frame_bounds_atomic(const MeasureSpec& spec, const SpectrumSet& lambda,
                                const Limits& limits = default_limits());

/// f = sum_k c_k e_{t_k}.
struct TrialFunction {
    std::vector<Point> frequencies;
    std::vector<Complex> coefficients;

    static TrialFunction exponential(Point t);
};

/// sum_lambda |<f, e_lambda>|^2 / ||f||^2.
double trial_ratio(const MeasureSpec& spec, const SpectrumSet& lambda, const TrialFunction& f, double tol = 1e-12);

/// Trial-function bracket: `upper` is a lower bound for B and `lower` an upper bound for A.
FrameReport frame_bounds_bracket(const MeasureSpec& spec, const SpectrumSet& lambda,
                                 const std::vector<TrialFunction>& trials, double tol = 1e-12);

/// Frame ratios of the restriction to K stay inside [A - tol, B + tol].
LemmaCheckRecord check_restriction_lemma(const MeasureSpec& spec, const SpectrumSet& lambda, const Cell& k,
                                         double tol = 1e-9, const Limits& limits = default_limits());

using FrequencyPair = std::pair<Point, Point>;

/// |<t,l>_{mu_D}|^2 = mu(D)^2 |<t/b^n, l/b^n>_{mu_D^box}|^2; the unsquared residual is
/// recorded alongside.
LemmaCheckRecord check_change_of_measure(const MeasureSpec& spec, const Cell& d,
                                         const std::vector<FrequencyPair>& samples, double tol = 1e-9);

/// `count` random (t, lambda, D) triples: D uniform among the positive-mass depth-n
/// cells, t and lambda with coordinates uniform in [-range, range]. Aggregated over cells.
LemmaCheckRecord check_change_of_measure_sampled(const MeasureSpec& spec, int depth, std::size_t count, Rng& rng,
                                                 double range = 64.0, int base = 0, double tol = 1e-9,
                                                 const Limits& limits = default_limits());

/// 0.999 min(1/(4d), arccos(eps)/(2 pi d)).
double delta_for_epsilon(double eps, int d);

/// |(mu_D^box)^(xi)| > eps for every positive-mass depth-n cell D and every sample.
LemmaCheckRecord check_small_freq_lowerbound(const MeasureSpec& spec, double eps, int depth,
                                             const std::vector<Point>& xi_samples, int base = 0,
                                             unsigned threads = 1);

/// Frequencies drawn uniformly from the open ball |xi| < delta.
std::vector<Point> sample_small_frequencies(Rng& rng, std::size_t count, double delta, std::size_t dim);

struct BallQuery {
    Point center;
    double h = 0.0;
};

/// Centers uniform in the bounding box of Lambda grown by 1, radii log-uniform in [h_min, h_max].
std::vector<BallQuery> sample_ball_queries(Rng& rng, const SpectrumSet& lambda, std::size_t count, double h_min,
                                           double h_max);

/// #(Lambda ∩ B(t,h)) <= B eps^-2 prod_D mu(D)^-mu(D) over the depth n_h + rho partition.
LemmaCheckRecord check_counting_bound(const MeasureSpec& spec, const SpectrumSet& lambda, double b_known,
                                      double eps, const std::vector<BallQuery>& queries, int base = 0,
                                      const Limits& limits = default_limits());

/// prod over positive-mass depth-n cells of mu(D)^-mu(D), multiplied out directly.
double cell_entropy_product(const MeasureSpec& spec, int base, int depth, const Limits& limits = default_limits());

}  // namespace specdim
