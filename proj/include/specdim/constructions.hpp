#pragma once

#include "specdim/dimension.hpp"
#include "specdim/errors.hpp"
#include "specdim/levelset.hpp"
#include "specdim/measure.hpp"
#include "specdim/spectrum.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace specdim {

/// nu_I: uniform digits b_i in {0..p-1} at the levels of I.
MeasureSpec build_digit_measure(int p, LevelSet levels);

/// Lambda_{I_n} = { sum_{i in I_n} b_i p^(i + exponent_offset) }.
SpectrumSet enumerate_spectrum(int p, const LevelSet& levels, int n, int exponent_offset = -1,
                               const Limits& limits = default_limits());

struct OscillatingConstruction {
    LevelSet levels;
    std::vector<double> partial_density;  // #I_n / n for n = 1..n_max
    std::int64_t burn_in = 1;             // first n of the tail window
    double tail_min = 0.0;
    double tail_max = 0.0;
    bool low_met = false;                 // tail_min within 0.05 of low
    bool high_met = false;                // tail_max within 0.05 of high
    std::vector<std::int64_t> switch_points;
};

/// Levels alternating between excluded and included runs so that #I_n/n swings
/// between `low` and `high`. Tail statistics are taken over [ceil(n_max/4), n_max].
OscillatingConstruction oscillating_levelset(double low, double high, double growth, std::int64_t n_max);

/// mu x delta_0 + delta_0 x nu (mass 2, not renormalized).
MeasureSpec mixed_measure(const MeasureSpec& mu, const MeasureSpec& nu);

struct CounterexampleOptions {
    int exponent_offset = -1;
    std::uint64_t spectrum_cap = std::uint64_t{1} << 16;  // |Lambda_{I_n}| used for the Beurling estimate
    std::uint64_t gram_cap = 1024;                         // |Lambda_{I_n}| used for the Gram residual
    double margin = 0.1;
    unsigned threads = 1;
};

struct CounterexampleReport {
    int p = 2;
    LevelSet levels;
    int n_max = 0;
    int exponent_offset = -1;
    DimensionEstimate entropy;  // upper
    double limsup_density = 0.0;
    double liminf_density = 0.0;  // Hausdorff dimension of the support
    int spectrum_level = 0;
    std::size_t spectrum_size = 0;
    DimensionEstimate beurling;
    int gram_level = 0;
    std::size_t gram_size = 0;
    double orthonormality_residual = 0.0;
    double margin = 0.1;
    bool beurling_exceeds_hausdorff = false;
    bool orthonormal = false;
    bool verdict = false;  // Beurling above Hausdorff + margin, with an orthonormal spectrum
};

CounterexampleReport counterexample_report(int p, const LevelSet& levels, int n_max,
                                           const CounterexampleOptions& opt = {});

/// Largest n <= n_max with p^{#I_n} <= cap.
int largest_level_within(int p, const LevelSet& levels, int n_max, std::uint64_t cap);

struct DisjointnessCheck {
    bool disjoint = false;  // mass of the closed cover is exactly zero
    int cover_depth = -1;   // depth that certified it, -1 if none
    std::size_t cover_cells = 0;
};

/// Certifies m(supp s) = 0 by covering supp s with closed cells of zero m-mass,
/// refining until `max_depth` or `max_cells`.
DisjointnessCheck support_disjoint(const MeasureSpec& m, const MeasureSpec& s, int max_depth = 20,
                                   std::size_t max_cells = 4096);

struct CertificateOptions {
    int entropy_n_max = 40;
    FourierDimOptions fourier;
};

struct Certificate {
    DimensionEstimate fourier;  // of mu
    DimensionEstimate entropy;  // of nu, upper
    double gap = 0.0;           // fourier - entropy
    bool inequality_holds = false;
    DisjointnessCheck mu_vs_nu;
    DisjointnessCheck mu_vs_rho;
    DisjointnessCheck nu_vs_mu;
    DisjointnessCheck nu_vs_rho;
    bool mu_null_on_others = false;  // mu(supp(nu + rho)) = 0
    bool nu_null_on_others = false;  // nu(supp(mu + rho)) = 0
    bool conclusion = false;         // mu + nu + rho admits no frame spectrum
    std::string caveat;
};

/// rho may be the zero measure.
Certificate non_spectral_certificate(const MeasureSpec& mu, const MeasureSpec& nu, const MeasureSpec& rho,
                                     const CertificateOptions& opt = {});

/// A measure paired with a frequency set that is a frame spectrum for it.
struct Family {
    std::string name;
    MeasureSpec measure;
    SpectrumSet spectrum;
    int entropy_n_max = 40;
};

/// Bundled (measure, spectrum) pairs used by the inequality harness.
std::vector<Family> bundled_families();

}  // namespace specdim
