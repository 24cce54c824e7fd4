#include "specdim/levelset.hpp"

#include "specdim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace specdim {

namespace {

constexpr long double kSaturate = 4.0e18L;

bool reached_low(const OscillatingLevels& o, std::int64_t count, std::int64_t n) {
    return static_cast<long double>(count) <=
           static_cast<long double>(o.low) * n * (1.0L + 1e-12L) + 1e-12L;
}

bool reached_high(const OscillatingLevels& o, std::int64_t count, std::int64_t n) {
    return static_cast<long double>(count) >=
           static_cast<long double>(o.high) * n * (1.0L - 1e-12L) - 1e-12L;
}

std::int64_t saturating(long double v) {
    if (!(v < kSaturate)) {
        return static_cast<std::int64_t>(kSaturate);
    }
    return static_cast<std::int64_t>(std::ceil(v));
}

std::int64_t fallback_end(const OscillatingLevels& o, std::int64_t start, std::int64_t run) {
    const long double target = static_cast<long double>(start) *
                               std::pow(static_cast<long double>(o.growth), static_cast<long double>(run));
    return std::max<std::int64_t>(start + 1, saturating(target));
}

template <class Pred>
std::int64_t first_satisfying(std::int64_t start, std::int64_t guess, Pred pred) {
    std::int64_t n = std::max<std::int64_t>(start + 1, guess);
    while (!pred(n)) {
        ++n;
    }
    while (n - 1 > start && pred(n - 1)) {
        --n;
    }
    return n;
}

void validate(const OscillatingLevels& o) {
    if (!(o.low >= 0.0 && o.high <= 1.0 && o.low <= o.high && o.high > 0.0)) {
        throw MalformedSpec("oscillating levels need 0 <= low <= high <= 1 and high > 0");
    }
    if (!(o.growth > 1.0)) {
        throw MalformedSpec("oscillating levels need growth > 1");
    }
}

}  // namespace

std::vector<LevelRun> oscillating_runs(const OscillatingLevels& o, std::int64_t upto) {
    validate(o);
    std::vector<LevelRun> runs;
    std::int64_t done = 0;
    std::int64_t count = 0;
    for (std::int64_t run = 0; done < upto; ++run) {
        const bool included = (run % 2) == 1;
        std::int64_t end = 0;
        if (!included) {
            if (reached_low(o, count, done + 1)) {
                end = done + 1;
            } else if (o.low <= 0.0) {
                end = fallback_end(o, done, run);
            } else {
                const long double guess = static_cast<long double>(count) / o.low;
                end = first_satisfying(done, saturating(guess) - 1,
                                       [&](std::int64_t n) { return reached_low(o, count, n); });
            }
        } else {
            if (reached_high(o, count + 1, done + 1)) {
                end = done + 1;
            } else if (o.high >= 1.0) {
                end = fallback_end(o, done, run);
            } else {
                const long double guess = static_cast<long double>(done - count) / (1.0L - o.high);
                end = first_satisfying(done, saturating(guess) - 1, [&](std::int64_t n) {
                    return reached_high(o, count + (n - done), n);
                });
            }
        }
        runs.push_back({done + 1, end, included});
        if (included) {
            count += end - done;
        }
        done = end;
    }
    return runs;
}

namespace {

struct RunTable {
    std::vector<LevelRun> runs;
    std::vector<std::int64_t> count_before;  // #I before runs[k].first
    std::int64_t horizon = 0;
};

RunTable make_table(const OscillatingLevels& o, std::int64_t upto) {
    RunTable t;
    t.runs = oscillating_runs(o, upto);
    t.count_before.reserve(t.runs.size());
    std::int64_t c = 0;
    for (const auto& r : t.runs) {
        t.count_before.push_back(c);
        if (r.included) {
            c += r.last - r.first + 1;
        }
    }
    t.horizon = t.runs.empty() ? 0 : t.runs.back().last;
    return t;
}

std::int64_t table_count(const RunTable& t, std::int64_t n) {
    if (n <= 0) {
        return 0;
    }
    auto it = std::upper_bound(t.runs.begin(), t.runs.end(), n,
                               [](std::int64_t v, const LevelRun& r) { return v < r.first; });
    const auto k = static_cast<std::size_t>(std::distance(t.runs.begin(), it)) - 1;
    const auto& r = t.runs[k];
    return t.count_before[k] + (r.included ? std::min(n, r.last) - r.first + 1 : 0);
}

bool table_contains(const RunTable& t, std::int64_t level) {
    auto it = std::upper_bound(t.runs.begin(), t.runs.end(), level,
                               [](std::int64_t v, const LevelRun& r) { return v < r.first; });
    return it != t.runs.begin() && std::prev(it)->included;
}

std::shared_ptr<const RunTable> table_for(const OscillatingLevels& o, std::int64_t upto) {
    // Small horizons are shared between calls; larger ones are computed on demand.
    constexpr std::int64_t kCached = 4096;
    if (upto <= std::max<std::int64_t>(kCached, o.max_level)) {
        thread_local OscillatingLevels last_key{-1.0, -1.0, -1.0, -1};
        thread_local std::shared_ptr<const RunTable> last_table;
        if (!last_table || !(last_key == o)) {
            last_table = std::make_shared<const RunTable>(
                make_table(o, std::max<std::int64_t>(kCached, o.max_level)));
            last_key = o;
        }
        return last_table;
    }
    return std::make_shared<const RunTable>(make_table(o, upto));
}

}  // namespace

LevelSet::LevelSet() : kind_(ExplicitLevels{}) {}

LevelSet::LevelSet(Kind kind, std::int64_t shift) : kind_(std::move(kind)), shift_(shift) {
    if (shift_ < 0) {
        throw MalformedSpec("level set shift must be >= 0");
    }
    if (auto* e = std::get_if<ExplicitLevels>(&kind_)) {
        std::sort(e->elements.begin(), e->elements.end());
        e->elements.erase(std::unique(e->elements.begin(), e->elements.end()), e->elements.end());
        if (!e->elements.empty() && e->elements.front() < 1) {
            throw MalformedSpec("explicit levels must be positive integers");
        }
    } else if (auto* p = std::get_if<PeriodicLevels>(&kind_)) {
        if (p->modulus < 1) {
            throw MalformedSpec("periodic levels need modulus >= 1");
        }
        for (auto& r : p->residues) {
            if (r < 0 || r >= p->modulus) {
                throw MalformedSpec("periodic residue outside [0, modulus)");
            }
        }
        std::sort(p->residues.begin(), p->residues.end());
        p->residues.erase(std::unique(p->residues.begin(), p->residues.end()), p->residues.end());
        if (p->bound < 0) {
            throw MalformedSpec("periodic bound must be >= 0");
        }
    } else {
        validate(std::get<OscillatingLevels>(kind_));
    }
}

LevelSet LevelSet::explicit_set(std::vector<std::int64_t> elements) {
    return LevelSet(ExplicitLevels{std::move(elements)});
}

LevelSet LevelSet::periodic(std::int64_t modulus, std::vector<std::int64_t> residues,
                            std::int64_t bound) {
    return LevelSet(PeriodicLevels{modulus, std::move(residues), bound});
}

LevelSet LevelSet::oscillating(double low, double high, double growth, std::int64_t max_level) {
    return LevelSet(OscillatingLevels{low, high, growth, max_level});
}

std::int64_t LevelSet::base_count(std::int64_t n) const {
    if (n <= 0) {
        return 0;
    }
    return std::visit(
        [n](const auto& k) -> std::int64_t {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ExplicitLevels>) {
                return std::upper_bound(k.elements.begin(), k.elements.end(), n) - k.elements.begin();
            } else if constexpr (std::is_same_v<T, PeriodicLevels>) {
                const std::int64_t m = k.bound > 0 ? std::min(n, k.bound) : n;
                const std::int64_t full = m / k.modulus;
                const std::int64_t rem = m % k.modulus;
                std::int64_t c = full * static_cast<std::int64_t>(k.residues.size());
                for (auto r : k.residues) {
                    // residue 0 is hit at multiples of the modulus, covered by `full`
                    if (r >= 1 && r <= rem) {
                        ++c;
                    }
                }
                return c;
            } else {
                return table_count(*table_for(k, n), n);
            }
        },
        kind_);
}

bool LevelSet::base_contains(std::int64_t level) const {
    if (level < 1) {
        return false;
    }
    return std::visit(
        [level](const auto& k) -> bool {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ExplicitLevels>) {
                return std::binary_search(k.elements.begin(), k.elements.end(), level);
            } else if constexpr (std::is_same_v<T, PeriodicLevels>) {
                if (k.bound > 0 && level > k.bound) {
                    return false;
                }
                return std::binary_search(k.residues.begin(), k.residues.end(), level % k.modulus);
            } else {
                return table_contains(*table_for(k, level), level);
            }
        },
        kind_);
}

bool LevelSet::contains(std::int64_t level) const {
    return level >= 1 && base_contains(level + shift_);
}

std::int64_t LevelSet::count_upto(std::int64_t n) const {
    if (n <= 0) {
        return 0;
    }
    return base_count(n + shift_) - base_count(shift_);
}

std::int64_t LevelSet::count_between(std::int64_t from, std::int64_t to) const {
    if (to <= from) {
        return 0;
    }
    return count_upto(to) - count_upto(std::max<std::int64_t>(from, 0));
}

std::vector<std::int64_t> LevelSet::elements_upto(std::int64_t n) const {
    std::vector<std::int64_t> out;
    if (const auto* e = std::get_if<ExplicitLevels>(&kind_)) {
        for (auto v : e->elements) {
            if (v > shift_ && v - shift_ <= n) {
                out.push_back(v - shift_);
            }
        }
        return out;
    }
    if (const auto* o = std::get_if<OscillatingLevels>(&kind_)) {
        const auto t = table_for(*o, n + shift_);
        for (const auto& r : t->runs) {
            if (!r.included) {
                continue;
            }
            for (std::int64_t i = std::max(r.first, shift_ + 1); i <= std::min(r.last, n + shift_); ++i) {
                out.push_back(i - shift_);
            }
        }
        return out;
    }
    for (std::int64_t i = 1; i <= n; ++i) {
        if (contains(i)) {
            out.push_back(i);
        }
    }
    return out;
}

bool LevelSet::is_finite() const {
    return std::visit(
        [](const auto& k) -> bool {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ExplicitLevels>) {
                return true;
            } else if constexpr (std::is_same_v<T, PeriodicLevels>) {
                return k.bound > 0 || k.residues.empty();
            } else {
                return false;
            }
        },
        kind_);
}

std::optional<std::int64_t> LevelSet::max_element() const {
    if (!is_finite()) {
        return std::nullopt;
    }
    if (const auto* e = std::get_if<ExplicitLevels>(&kind_)) {
        if (e->elements.empty() || e->elements.back() <= shift_) {
            return std::nullopt;
        }
        return e->elements.back() - shift_;
    }
    const auto& p = std::get<PeriodicLevels>(kind_);
    for (std::int64_t i = p.bound; i > shift_; --i) {
        if (base_contains(i)) {
            return i - shift_;
        }
    }
    return std::nullopt;
}

bool LevelSet::empty() const {
    if (!is_finite()) {
        return false;
    }
    return !max_element().has_value();
}

double LevelSet::liminf_density() const {
    return std::visit(
        [this](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ExplicitLevels>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, PeriodicLevels>) {
                return is_finite() ? 0.0
                                   : static_cast<double>(k.residues.size()) / static_cast<double>(k.modulus);
            } else {
                return k.low;
            }
        },
        kind_);
}

double LevelSet::limsup_density() const {
    return std::visit(
        [this](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ExplicitLevels>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, PeriodicLevels>) {
                return is_finite() ? 0.0
                                   : static_cast<double>(k.residues.size()) / static_cast<double>(k.modulus);
            } else {
                return k.high;
            }
        },
        kind_);
}

LevelSet LevelSet::shifted(std::int64_t levels) const {
    if (levels < 0) {
        throw DomainError("level shift must be >= 0");
    }
    return LevelSet(kind_, shift_ + levels);
}

bool LevelSet::operator==(const LevelSet& other) const {
    return shift_ == other.shift_ && kind_ == other.kind_;
}

}  // namespace specdim
