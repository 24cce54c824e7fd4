#include "specdim/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

namespace specdim {

SpectrumSet::SpectrumSet(std::vector<Point> points, std::size_t dim) : points_(std::move(points)), dim_(dim) {
    if (dim_ == 0) {
        throw MalformedSpec("spectrum dimension must be >= 1");
    }
    for (const auto& p : points_) {
        if (p.size() != dim_) {
            throw MalformedSpec("spectrum point dimension mismatch");
        }
        for (double c : p) {
            if (!std::isfinite(c)) {
                throw MalformedSpec("spectrum points must be finite");
            }
        }
    }
    std::sort(points_.begin(), points_.end());
    if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
        throw MalformedSpec("spectrum contains duplicate points");
    }
    line_.reserve(points_.size());
    for (const auto& p : points_) {
        line_.push_back(p[0]);
    }
    if (dim_ > 1) {
        std::sort(line_.begin(), line_.end());
    }
}

SpectrumSet SpectrumSet::explicit_points(std::vector<Point> points, std::size_t dim) {
    return SpectrumSet(std::move(points), dim);
}

SpectrumSet SpectrumSet::explicit_1d(std::vector<double> values) {
    std::vector<Point> pts;
    pts.reserve(values.size());
    for (double v : values) {
        pts.push_back({v});
    }
    return SpectrumSet(std::move(pts), 1);
}

SpectrumSet SpectrumSet::digit(const DigitSpectrumSpec& spec, const Limits& limits) {
    if (spec.p < 2) {
        throw MalformedSpec("digit spectrum needs p >= 2");
    }
    if (spec.max_level < 0) {
        throw MalformedSpec("digit spectrum needs max_level >= 0");
    }
    const auto levels = spec.levels.elements_upto(spec.max_level);
    const long double count = std::pow(static_cast<long double>(spec.p), static_cast<long double>(levels.size()));
    check_limit("max_spectrum", limits.max_spectrum,
                count > 1.8e19L ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(count));
    std::vector<long double> steps;
    for (auto l : levels) {
        steps.push_back(std::pow(static_cast<long double>(spec.p), static_cast<long double>(l + spec.exponent_offset)));
    }
    std::vector<long double> values{0.0L};
    for (long double step : steps) {
        std::vector<long double> next;
        next.reserve(values.size() * static_cast<std::size_t>(spec.p));
        for (long double v : values) {
            for (int b = 0; b < spec.p; ++b) {
                next.push_back(v + b * step);
            }
        }
        values = std::move(next);
    }
    std::vector<Point> pts;
    pts.reserve(values.size());
    for (long double v : values) {
        pts.push_back({static_cast<double>(v)});
    }
    SpectrumSet out(std::move(pts), 1);
    out.digit_ = spec;
    return out;
}

SpectrumSet SpectrumSet::transformed(double s, const Point& t) const {
    if (s == 0.0 || !std::isfinite(s)) {
        throw DomainError("spectrum scale must be finite and nonzero");
    }
    if (!t.empty() && t.size() != dim_) {
        throw DomainError("translation dimension mismatch");
    }
    std::vector<Point> pts = points_;
    for (auto& p : pts) {
        for (std::size_t j = 0; j < dim_; ++j) {
            p[j] = s * p[j] + (t.empty() ? 0.0 : t[j]);
        }
    }
    return SpectrumSet(std::move(pts), dim_);
}

double SpectrumSet::diameter() const {
    if (points_.size() < 2) {
        return 0.0;
    }
    double d = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        double lo = points_[0][j];
        double hi = lo;
        for (const auto& p : points_) {
            lo = std::min(lo, p[j]);
            hi = std::max(hi, p[j]);
        }
        d = std::max(d, hi - lo);
    }
    return d;
}

namespace {

bool in_ball(const Point& p, const Point& t, double h) {
    long double s = 0.0L;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const long double d = static_cast<long double>(p[j]) - t[j];
        s += d * d;
    }
    return s <= static_cast<long double>(h) * h;
}

}  // namespace

std::int64_t ball_count(const SpectrumSet& lambda, const Point& t, double h) {
    if (!(h > 0.0)) {
        throw DomainError("ball radius must be > 0");
    }
    if (t.size() != lambda.dim()) {
        throw DomainError("ball center dimension mismatch");
    }
    const auto& line = lambda.line();
    // closed interval [t - h, t + h], endpoints compared exactly
    const long double lo = static_cast<long double>(t[0]) - h;
    const long double hi = static_cast<long double>(t[0]) + h;
    auto first = std::lower_bound(line.begin(), line.end(), lo,
                                  [](double v, long double x) { return static_cast<long double>(v) < x; });
    auto last = std::upper_bound(line.begin(), line.end(), hi,
                                 [](long double x, double v) { return x < static_cast<long double>(v); });
    if (lambda.dim() == 1) {
        return last - first;
    }
    // points are sorted lexicographically, so the first coordinate is sorted too
    const auto& pts = lambda.points();
    auto pfirst = std::lower_bound(pts.begin(), pts.end(), lo,
                                   [](const Point& p, long double x) { return static_cast<long double>(p[0]) < x; });
    std::int64_t c = 0;
    for (auto it = pfirst; it != pts.end() && static_cast<long double>((*it)[0]) <= hi; ++it) {
        if (in_ball(*it, t, h)) {
            ++c;
        }
    }
    return c;
}

CenterSup max_ball_count(const SpectrumSet& lambda, double h) {
    if (!(h > 0.0)) {
        throw DomainError("ball radius must be > 0");
    }
    CenterSup best;
    best.center = Point(lambda.dim(), 0.0);
    if (lambda.empty()) {
        return best;
    }
    if (lambda.dim() == 1) {
        // any closed interval of length 2h can be slid right until its left end
        // hits a point, so it suffices to start windows at points
        const auto& v = lambda.line();
        std::size_t j = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const long double right = static_cast<long double>(v[i]) + 2.0L * h;
            j = std::max(j, i);
            while (j + 1 < v.size() && static_cast<long double>(v[j + 1]) <= right) {
                ++j;
            }
            const auto c = static_cast<std::int64_t>(j - i + 1);
            if (c > best.count) {
                best.count = c;
                best.center = {static_cast<double>(static_cast<long double>(v[i]) + h)};
            }
        }
        best.exact = true;
        return best;
    }
    // d > 1: centers on the grid (h/4) Z^d within distance h of some point
    const std::size_t d = lambda.dim();
    const double step = h / 4.0;
    std::set<std::vector<std::int64_t>> candidates;
    const int reach = 4;
    for (const auto& p : lambda.points()) {
        std::vector<std::int64_t> base(d);
        for (std::size_t j = 0; j < d; ++j) {
            base[j] = static_cast<std::int64_t>(std::floor(p[j] / step));
        }
        std::vector<int> off(d, -reach);
        while (true) {
            std::vector<std::int64_t> g(d);
            Point c(d);
            for (std::size_t j = 0; j < d; ++j) {
                g[j] = base[j] + off[j];
                c[j] = static_cast<double>(g[j]) * step;
            }
            if (in_ball(p, c, h)) {
                candidates.insert(std::move(g));
            }
            std::size_t j = 0;
            while (j < d && ++off[j] > reach + 1) {
                off[j] = -reach;
                ++j;
            }
            if (j == d) {
                break;
            }
        }
        check_limit("max_cells", default_limits().max_cells, candidates.size());
    }
    // bucket points by cells of side h for the counts
    std::map<std::vector<std::int64_t>, std::vector<std::size_t>> buckets;
    const auto& pts = lambda.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<std::int64_t> key(d);
        for (std::size_t j = 0; j < d; ++j) {
            key[j] = static_cast<std::int64_t>(std::floor(pts[i][j] / h));
        }
        buckets[key].push_back(i);
    }
    for (const auto& g : candidates) {
        Point c(d);
        std::vector<std::int64_t> key(d);
        for (std::size_t j = 0; j < d; ++j) {
            c[j] = static_cast<double>(g[j]) * step;
            key[j] = static_cast<std::int64_t>(std::floor(c[j] / h));
        }
        std::int64_t count = 0;
        std::vector<int> off(d, -1);
        while (true) {
            std::vector<std::int64_t> k(d);
            for (std::size_t j = 0; j < d; ++j) {
                k[j] = key[j] + off[j];
            }
            if (auto it = buckets.find(k); it != buckets.end()) {
                for (auto i : it->second) {
                    if (in_ball(pts[i], c, h)) {
                        ++count;
                    }
                }
            }
            std::size_t j = 0;
            while (j < d && ++off[j] > 1) {
                off[j] = -1;
                ++j;
            }
            if (j == d) {
                break;
            }
        }
        if (count > best.count) {
            best.count = count;
            best.center = c;
        }
    }
    best.exact = false;
    return best;
}

}  // namespace specdim

namespace specdim {

double min_separation(const SpectrumSet& lambda) {
    const auto& pts = lambda.points();  // sorted lexicographically, so by first coordinate
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size() && pts[j][0] - pts[i][0] < best; ++j) {
            double d2 = 0.0;
            for (std::size_t c = 0; c < pts[i].size(); ++c) {
                const double t = pts[j][c] - pts[i][c];
                d2 += t * t;
            }
            best = std::min(best, std::sqrt(d2));
        }
    }
    return best;
}

}  // namespace specdim
