#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace specdim {

/// Finite set of positive levels, stored sorted and duplicate free.
struct ExplicitLevels {
    std::vector<std::int64_t> elements;

    bool operator==(const ExplicitLevels&) const = default;
};

/// Levels i >= 1 with (i mod modulus) in residues. bound == 0 means unbounded,
/// otherwise only levels i <= bound belong to the set.
struct PeriodicLevels {
    std::int64_t modulus = 1;
    std::vector<std::int64_t> residues;
    std::int64_t bound = 0;

    bool operator==(const PeriodicLevels&) const = default;
};

/// Alternating excluded/included runs whose switch points are chosen so that the
/// partial density #I_n/n oscillates between `low` and `high`. The run pattern is
/// defined for every level; `max_level` is only the reporting horizon.
///
/// Runs start with an excluded run. An excluded run ends at the first n with
/// #I_n <= low*n, an included run at the first n with #I_n >= high*n. When a
/// target can never be met (low == 0 after an inclusion, high == 1 after an
/// exclusion) run j instead ends at ceil(start * growth^j).
struct OscillatingLevels {
    double low = 0.0;
    double high = 1.0;
    double growth = 2.0;
    std::int64_t max_level = 0;

    bool operator==(const OscillatingLevels&) const = default;
};

struct LevelRun {
    std::int64_t first = 0;  // inclusive
    std::int64_t last = 0;   // inclusive
    bool included = false;
};

/// Runs of an oscillating pattern covering [1, upto].
std::vector<LevelRun> oscillating_runs(const OscillatingLevels& osc, std::int64_t upto);

/// The index set I of positive integers used by digit measures and their spectra.
/// `shift` re-bases the set: the represented set is {i - shift : i in base, i > shift}.
class LevelSet {
  public:
    using Kind = std::variant<ExplicitLevels, PeriodicLevels, OscillatingLevels>;

    LevelSet();
    explicit LevelSet(Kind kind, std::int64_t shift = 0);

    static LevelSet explicit_set(std::vector<std::int64_t> elements);
    static LevelSet periodic(std::int64_t modulus, std::vector<std::int64_t> residues,
                             std::int64_t bound = 0);
    static LevelSet all() { return periodic(1, {0}); }
    static LevelSet evens() { return periodic(2, {0}); }
    static LevelSet odds() { return periodic(2, {1}); }
    static LevelSet oscillating(double low, double high, double growth, std::int64_t max_level);

    const Kind& kind() const { return kind_; }
    std::int64_t shift() const { return shift_; }

    bool contains(std::int64_t level) const;
    /// #I_n, exact.
    std::int64_t count_upto(std::int64_t n) const;
    /// #(I ∩ (from, to]).
    std::int64_t count_between(std::int64_t from, std::int64_t to) const;
    std::vector<std::int64_t> elements_upto(std::int64_t n) const;

    bool is_finite() const;
    /// Largest element for finite sets (nullopt for the empty set or infinite sets).
    std::optional<std::int64_t> max_element() const;
    bool empty() const;

    /// Analytic liminf / limsup of #I_n / n.
    double liminf_density() const;
    double limsup_density() const;

    /// Levels above `levels` re-based to start at 1.
    LevelSet shifted(std::int64_t levels) const;

    bool operator==(const LevelSet& other) const;

  private:
    std::int64_t base_count(std::int64_t n) const;
    bool base_contains(std::int64_t level) const;

    Kind kind_;
    std::int64_t shift_ = 0;
};

}  // namespace specdim
