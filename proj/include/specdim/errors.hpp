#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace specdim {

/// Spec document or value that does not describe a valid measure/spectrum.
class MalformedSpec : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operation called outside its precondition (zero-mass cell, bad epsilon, ...).
class DomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A named resource limit would be exceeded. The limit name is kept so the
/// CLI can report it verbatim.
class ResourceLimit : public std::runtime_error {
  public:
    ResourceLimit(std::string limit_name, std::uint64_t limit, std::uint64_t requested)
        : std::runtime_error("resource limit '" + limit_name + "' exceeded: requested " +
                             std::to_string(requested) + ", limit " + std::to_string(limit)),
          limit_name_(std::move(limit_name)) {}

    const std::string& limit_name() const noexcept { return limit_name_; }

  private:
    std::string limit_name_;
};

/// Iterative or adaptive numerics failed to meet the requested tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Limits {
    std::uint64_t max_atoms = std::uint64_t{1} << 20;
    std::uint64_t max_gram = 4096;
    int max_depth = 64;
    std::uint64_t max_spectrum = std::uint64_t{1} << 20;
    std::uint64_t max_cells = std::uint64_t{1} << 20;
};

inline const Limits& default_limits() {
    static const Limits limits{};
    return limits;
}

inline void check_limit(const char* name, std::uint64_t limit, std::uint64_t requested) {
    if (requested > limit) {
        throw ResourceLimit(name, limit, requested);
    }
}

}  // namespace specdim
