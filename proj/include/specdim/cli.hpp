#pragma once

#include "specdim/errors.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace specdim::cli {

/// Everything a run depends on. Parallelism is the only field that is not
/// echoed into the output, since it never changes results.
struct RunConfig {
    std::string subcommand;
    std::string measure;   // file path or inline JSON
    std::string spectrum;
    std::string mu;
    std::string nu;
    std::string rho;

    int depth = -1;        // -1: subcommand default
    int base = 0;          // 0: natural base
    std::string mode = "both";
    int window = 0;
    double tol = 1e-12;         // Fourier evaluation
    double check_tol = 1e-9;    // lemma checks
    double quad_tol = 1e-8;
    int points = 24;
    std::vector<double> schedule;
    double xi0 = 1.0;
    double epsilon = 0.5;
    long long samples = -1;     // -1: subcommand default
    int cell_depth = 3;
    std::vector<long long> cell_index;
    double freq_range = 64.0;
    double bessel = 0.0;        // 0: derive from an atomic measure
    double h_min = 1.0;
    double h_max = 1024.0;

    int p = 2;
    std::string levels = "evens";
    int n_max = 200;
    int n = -1;
    int exponent_offset = -1;
    int truncate = -1;
    double margin = 0.1;
    std::uint64_t spectrum_cap = std::uint64_t{1} << 16;
    std::uint64_t gram_cap = 1024;
    int entropy_n_max = 40;
    bool normalize = false;
    bool include_matrix = false;

    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string format = "json";
    std::string plot_dir;
    std::string output;
    Limits limits;
};

/// Runs one subcommand. `args` excludes the program name. Exit status: 0 success,
/// 2 a check failed, 1 usage, I/O, malformed input or resource limits.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Names of all subcommands, in help order.
const std::vector<std::string>& subcommands();

}  // namespace specdim::cli
