#include "specdim/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace specdim {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw MalformedSpec(where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) {
        bad(where, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        bad(where, std::string("missing field '") + key + "'");
    }
    return *it;
}

const Json* optional_field(const Json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

std::int64_t parse_int(const Json& v, const std::string& where) {
    if (v.is_number_integer()) {
        return v.get<std::int64_t>();
    }
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        std::size_t used = 0;
        try {
            const long long x = std::stoll(s, &used);
            if (used == s.size()) {
                return x;
            }
        } catch (const std::exception&) {
        }
    }
    bad(where, "expected an integer");
}

int parse_small_int(const Json& v, const std::string& where) {
    const auto x = parse_int(v, where);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        bad(where, "integer out of range");
    }
    return static_cast<int>(x);
}

Point parse_point(const Json& v, const std::string& where) {
    if (!v.is_array()) {
        bad(where, "expected an array of reals");
    }
    Point p;
    for (std::size_t i = 0; i < v.size(); ++i) {
        p.push_back(parse_real(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return p;
}

Json real_strings(const Point& p) {
    Json a = Json::array();
    for (double x : p) {
        a.push_back(format_real(x));
    }
    return a;
}

Json int_array(const std::vector<std::int64_t>& v) {
    Json a = Json::array();
    for (auto x : v) {
        a.push_back(x);
    }
    return a;
}

std::vector<std::int64_t> parse_int_array(const Json& v, const std::string& where) {
    if (!v.is_array()) {
        bad(where, "expected an array of integers");
    }
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(parse_int(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

void dump_into(std::string& out, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += inner;
                out += Json(it.key()).dump();
                out += ": ";
                dump_into(out, it.value(), indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // arrays of scalars stay on one line
            bool flat = true;
            for (const auto& e : j) {
                if (e.is_structured()) {
                    flat = false;
                    break;
                }
            }
            if (flat) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) {
                        out += ", ";
                    }
                    dump_into(out, j[i], indent + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) {
                    out += ",\n";
                }
                out += inner;
                dump_into(out, j[i], indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v)) {
                out += format_real(v);
            } else {
                out += "\"" + format_real(v) + "\"";
            }
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

const char* fill_name(TreeFill f) { return f == TreeFill::uniform ? "uniform" : "unknown"; }

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (v == 0.0) {
        return std::signbit(v) ? "-0" : "0";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_real(const std::string& text, const std::string& where) {
    if (text == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (text == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const double num = parse_real(text.substr(0, slash), where);
        const double den = parse_real(text.substr(slash + 1), where);
        if (den == 0.0) {
            bad(where, "zero denominator in '" + text + "'");
        }
        return num / den;
    }
    // classic locale, whatever the global one is
    std::istringstream is(text);
    is.imbue(std::locale::classic());
    double v = 0.0;
    is >> v;
    if (text.empty() || is.fail() || !is.eof()) {
        bad(where, "'" + text + "' is not a decimal real");
    }
    return v;
}

double parse_real(const Json& v, const std::string& where) {
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        return parse_real(v.get_ref<const std::string&>(), where);
    }
    bad(where, "expected a real (decimal string)");
}

std::string dump_json(const Json& j) {
    std::string out;
    dump_into(out, j, 0);
    out += "\n";
    return out;
}

// Level sets ------------------------------------------------------------------------

Json to_json(const LevelSet& levels) {
    Json j;
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, ExplicitLevels>) {
                j["type"] = "explicit";
                j["elements"] = int_array(k.elements);
            } else if constexpr (std::is_same_v<K, PeriodicLevels>) {
                j["type"] = "periodic";
                j["modulus"] = k.modulus;
                j["residues"] = int_array(k.residues);
                j["bound"] = k.bound;
            } else {
                j["type"] = "oscillating";
                j["low"] = format_real(k.low);
                j["high"] = format_real(k.high);
                j["growth"] = format_real(k.growth);
                j["max_level"] = k.max_level;
            }
        },
        levels.kind());
    j["shift"] = levels.shift();
    return j;
}

LevelSet level_set_from_json(const Json& j, const std::string& where) {
    if (j.is_string()) {
        return parse_level_shorthand(j.get<std::string>());
    }
    const std::string type = field(j, "type", where).is_string() ? field(j, "type", where).get<std::string>() : "";
    std::int64_t shift = 0;
    if (const auto* s = optional_field(j, "shift")) {
        shift = parse_int(*s, where + ".shift");
    }
    LevelSet base;
    if (type == "explicit") {
        base = LevelSet::explicit_set(parse_int_array(field(j, "elements", where), where + ".elements"));
    } else if (type == "periodic") {
        std::int64_t bound = 0;
        if (const auto* b = optional_field(j, "bound")) {
            bound = parse_int(*b, where + ".bound");
        }
        base = LevelSet::periodic(parse_int(field(j, "modulus", where), where + ".modulus"),
                                  parse_int_array(field(j, "residues", where), where + ".residues"), bound);
    } else if (type == "oscillating") {
        std::int64_t max_level = 0;
        if (const auto* m = optional_field(j, "max_level")) {
            max_level = parse_int(*m, where + ".max_level");
        }
        try {
            base = LevelSet::oscillating(parse_real(field(j, "low", where), where + ".low"),
                                         parse_real(field(j, "high", where), where + ".high"),
                                         parse_real(field(j, "growth", where), where + ".growth"), max_level);
        } catch (const DomainError& e) {
            bad(where, e.what());
        }
    } else {
        bad(where, "unknown level-set type '" + type + "'");
    }
    if (shift == 0) {
        return base;
    }
    return LevelSet(base.kind(), shift);
}

LevelSet parse_level_shorthand(const std::string& text, std::int64_t default_max_level) {
    const std::string where = "levels '" + text + "'";
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::string cur;
        std::istringstream is(s);
        while (std::getline(is, cur, sep)) {
            parts.push_back(cur);
        }
        if (!s.empty() && s.back() == sep) {
            parts.emplace_back();
        }
        return parts;
    };
    auto ints = [&](const std::string& s) {
        std::vector<std::int64_t> out;
        if (s.empty()) {
            return out;
        }
        for (const auto& part : split(s, ',')) {
            out.push_back(parse_int(Json(part), where));
        }
        return out;
    };
    if (text == "evens") {
        return LevelSet::evens();
    }
    if (text == "odds") {
        return LevelSet::odds();
    }
    if (text == "all") {
        return LevelSet::all();
    }
    if (text == "none") {
        return LevelSet::explicit_set({});
    }
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "explicit") {
        return LevelSet::explicit_set(ints(rest));
    }
    if (head == "periodic") {
        const auto parts = split(rest, ':');
        if (parts.size() < 2 || parts.size() > 3) {
            bad(where, "expected periodic:modulus:r1,r2[:bound]");
        }
        const std::int64_t bound = parts.size() == 3 ? parse_int(Json(parts[2]), where) : 0;
        return LevelSet::periodic(parse_int(Json(parts[0]), where), ints(parts[1]), bound);
    }
    if (head == "osc") {
        const auto parts = split(rest, ',');
        if (parts.size() < 3 || parts.size() > 4) {
            bad(where, "expected osc:low,high,growth[,max_level]");
        }
        const std::int64_t max_level = parts.size() == 4 ? parse_int(Json(parts[3]), where) : default_max_level;
        try {
            return LevelSet::oscillating(parse_real(parts[0], where), parse_real(parts[1], where),
                                         parse_real(parts[2], where), max_level);
        } catch (const DomainError& e) {
            bad(where, e.what());
        }
    }
    bad(where, "unknown level-set shorthand");
}

// Measures --------------------------------------------------------------------------

Json to_json(const MeasureSpec& spec) {
    Json j;
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Atomic>) {
                j["type"] = "atomic";
                j["dim"] = n.dim;
                if (n.has_lattice()) {
                    j["lattice"] = Json{{"base", n.lattice_base}, {"depth", n.lattice_depth}};
                }
                Json atoms = Json::array();
                for (const auto& a : n.atoms) {
                    Json e;
                    e["point"] = real_strings(a.point);
                    e["weight"] = format_real(a.weight);
                    if (n.has_lattice()) {
                        e["numerators"] = int_array(a.numerators);
                    }
                    atoms.push_back(std::move(e));
                }
                j["atoms"] = std::move(atoms);
            } else if constexpr (std::is_same_v<N, Digit>) {
                j["type"] = "digit";
                j["p"] = n.p;
                j["levels"] = to_json(n.levels);
                j["prefix_depth"] = n.prefix_depth;
                j["prefix_index"] = n.prefix_index;
                j["mass"] = format_real(n.mass);
            } else if constexpr (std::is_same_v<N, DyadicTree>) {
                j["type"] = "tree";
                j["base"] = n.base;
                j["root_depth"] = n.root_depth;
                j["root_index"] = n.root_index;
                j["depth"] = n.depth;
                j["fill"] = fill_name(n.fill);
                j["masses"] = real_strings(n.masses);
            } else if constexpr (std::is_same_v<N, Product>) {
                j["type"] = "product";
                j["left"] = to_json(*n.left);
                j["right"] = to_json(*n.right);
            } else if constexpr (std::is_same_v<N, Mixed>) {
                j["type"] = "mixed";
                j["mu"] = to_json(*n.mu);
                j["nu"] = to_json(*n.nu);
            } else {
                j["type"] = "affine";
                j["scale"] = format_real(n.scale);
                j["translate"] = real_strings(n.translate);
                j["base"] = to_json(*n.base);
            }
        },
        spec.node());
    return j;
}

MeasureSpec measure_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) {
        bad(where, "expected an object");
    }
    if (const auto* kind = optional_field(j, "kind")) {
        if (!kind->is_string() || kind->get<std::string>() != "measure") {
            bad(where, "document kind must be 'measure'");
        }
        const auto version = parse_int(field(j, "schema_version", where), where + ".schema_version");
        if (version != kSchemaVersion) {
            bad(where, "unsupported schema_version " + std::to_string(version));
        }
        return measure_from_json(field(j, "measure", where), where + ".measure");
    }
    const Json& type_field = field(j, "type", where);
    if (!type_field.is_string()) {
        bad(where, "type must be a string");
    }
    const std::string type = type_field.get<std::string>();
    try {
        if (type == "atomic") {
            Atomic a;
            a.dim = static_cast<std::size_t>(parse_int(field(j, "dim", where), where + ".dim"));
            std::int64_t scale = 0;
            if (const auto* lat = optional_field(j, "lattice")) {
                a.lattice_base = parse_small_int(field(*lat, "base", where + ".lattice"), where + ".lattice.base");
                a.lattice_depth = parse_small_int(field(*lat, "depth", where + ".lattice"), where + ".lattice.depth");
                const auto s = a.lattice_base >= 2 && a.lattice_depth >= 0 ? checked_pow(a.lattice_base, a.lattice_depth)
                                                                           : std::nullopt;
                if (!s) {
                    bad(where + ".lattice", "base^depth must be an integer below 2^62 with base >= 2");
                }
                scale = *s;
            }
            const Json& atoms = field(j, "atoms", where);
            if (!atoms.is_array()) {
                bad(where + ".atoms", "expected an array");
            }
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                const std::string w = where + ".atoms[" + std::to_string(i) + "]";
                Atom atom;
                atom.weight = parse_real(field(atoms[i], "weight", w), w + ".weight");
                if (a.has_lattice()) {
                    atom.numerators = parse_int_array(field(atoms[i], "numerators", w), w + ".numerators");
                    for (auto num : atom.numerators) {
                        atom.point.push_back(
                            static_cast<double>(static_cast<long double>(num) / static_cast<long double>(scale)));
                    }
                    if (const auto* pt = optional_field(atoms[i], "point")) {
                        const Point given = parse_point(*pt, w + ".point");
                        if (given != atom.point) {
                            bad(w, "point disagrees with its lattice numerators");
                        }
                    }
                } else {
                    atom.point = parse_point(field(atoms[i], "point", w), w + ".point");
                }
                a.atoms.push_back(std::move(atom));
            }
            return MeasureSpec(std::move(a));
        }
        if (type == "digit") {
            Digit d;
            d.p = parse_small_int(field(j, "p", where), where + ".p");
            d.levels = level_set_from_json(field(j, "levels", where), where + ".levels");
            if (const auto* v = optional_field(j, "prefix_depth")) {
                d.prefix_depth = parse_small_int(*v, where + ".prefix_depth");
            }
            if (const auto* v = optional_field(j, "prefix_index")) {
                d.prefix_index = parse_int(*v, where + ".prefix_index");
            }
            if (const auto* v = optional_field(j, "mass")) {
                d.mass = parse_real(*v, where + ".mass");
            }
            return MeasureSpec(std::move(d));
        }
        if (type == "tree") {
            DyadicTree t;
            t.base = parse_small_int(field(j, "base", where), where + ".base");
            if (const auto* v = optional_field(j, "root_depth")) {
                t.root_depth = parse_small_int(*v, where + ".root_depth");
            }
            if (const auto* v = optional_field(j, "root_index")) {
                t.root_index = parse_int(*v, where + ".root_index");
            }
            t.depth = parse_small_int(field(j, "depth", where), where + ".depth");
            t.masses = parse_point(field(j, "masses", where), where + ".masses");
            if (const auto* v = optional_field(j, "fill")) {
                const std::string f = v->is_string() ? v->get<std::string>() : "";
                if (f == "uniform") {
                    t.fill = TreeFill::uniform;
                } else if (f == "unknown") {
                    t.fill = TreeFill::unknown;
                } else {
                    bad(where + ".fill", "expected 'uniform' or 'unknown'");
                }
            }
            return MeasureSpec(std::move(t));
        }
        if (type == "product") {
            return make_product(measure_from_json(field(j, "left", where), where + ".left"),
                                measure_from_json(field(j, "right", where), where + ".right"));
        }
        if (type == "mixed") {
            return make_mixed(measure_from_json(field(j, "mu", where), where + ".mu"),
                              measure_from_json(field(j, "nu", where), where + ".nu"));
        }
        if (type == "affine") {
            Affine a;
            a.base = std::make_shared<const MeasureSpec>(measure_from_json(field(j, "base", where), where + ".base"));
            a.scale = parse_real(field(j, "scale", where), where + ".scale");
            a.translate = parse_point(field(j, "translate", where), where + ".translate");
            return MeasureSpec(std::move(a));
        }
        // conveniences
        if (type == "dirac") {
            return dirac(parse_point(field(j, "point", where), where + ".point"));
        }
        if (type == "lebesgue") {
            int base = 2;
            if (const auto* v = optional_field(j, "base")) {
                base = parse_small_int(*v, where + ".base");
            }
            return lebesgue_unit(base);
        }
        if (type == "zero") {
            return zero_measure(static_cast<std::size_t>(parse_int(field(j, "dim", where), where + ".dim")));
        }
    } catch (const MalformedSpec& e) {
        const std::string msg = e.what();
        if (msg.rfind(where, 0) == 0) {
            throw;
        }
        bad(where, msg);
    }
    bad(where, "unknown measure type '" + type + "'");
}

Json measure_document(const MeasureSpec& spec) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "measure";
    j["dim"] = spec.dim();
    j["total_mass"] = format_real(total_mass(spec));
    j["measure"] = to_json(spec);
    return j;
}

// Spectra ---------------------------------------------------------------------------

Json to_json(const SpectrumSet& lambda, bool with_points) {
    Json j;
    if (const auto& d = lambda.digit_spec()) {
        j["type"] = "digit";
        j["p"] = d->p;
        j["levels"] = to_json(d->levels);
        j["max_level"] = d->max_level;
        j["exponent_offset"] = d->exponent_offset;
    } else {
        j["type"] = "explicit";
    }
    j["dim"] = lambda.dim();
    j["size"] = lambda.size();
    if (with_points || !lambda.digit_spec()) {
        Json pts = Json::array();
        for (const auto& p : lambda.points()) {
            pts.push_back(real_strings(p));
        }
        j["points"] = std::move(pts);
    }
    return j;
}

SpectrumSet spectrum_from_json(const Json& j, const Limits& limits, const std::string& where) {
    if (!j.is_object()) {
        bad(where, "expected an object");
    }
    if (const auto* kind = optional_field(j, "kind")) {
        if (!kind->is_string() || kind->get<std::string>() != "spectrum") {
            bad(where, "document kind must be 'spectrum'");
        }
        const auto version = parse_int(field(j, "schema_version", where), where + ".schema_version");
        if (version != kSchemaVersion) {
            bad(where, "unsupported schema_version " + std::to_string(version));
        }
        return spectrum_from_json(field(j, "spectrum", where), limits, where + ".spectrum");
    }
    const Json& type_field = field(j, "type", where);
    const std::string type = type_field.is_string() ? type_field.get<std::string>() : "";
    if (type == "digit") {
        DigitSpectrumSpec d;
        d.p = parse_small_int(field(j, "p", where), where + ".p");
        d.levels = level_set_from_json(field(j, "levels", where), where + ".levels");
        d.max_level = parse_small_int(field(j, "max_level", where), where + ".max_level");
        if (const auto* v = optional_field(j, "exponent_offset")) {
            d.exponent_offset = parse_small_int(*v, where + ".exponent_offset");
        }
        if (d.p < 2 || d.max_level < 0) {
            bad(where, "digit spectrum needs p >= 2 and max_level >= 0");
        }
        return SpectrumSet::digit(d, limits);
    }
    if (type == "explicit") {
        const Json& pts = field(j, "points", where);
        if (!pts.is_array()) {
            bad(where + ".points", "expected an array");
        }
        std::size_t dim = 1;
        if (const auto* v = optional_field(j, "dim")) {
            dim = static_cast<std::size_t>(parse_int(*v, where + ".dim"));
        }
        check_limit("max_spectrum", limits.max_spectrum, pts.size());
        std::vector<Point> points;
        points.reserve(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const std::string w = where + ".points[" + std::to_string(i) + "]";
            // one-dimensional sets may list bare reals
            points.push_back(pts[i].is_array() ? parse_point(pts[i], w) : Point{parse_real(pts[i], w)});
        }
        return SpectrumSet::explicit_points(std::move(points), dim);
    }
    bad(where, "unknown spectrum type '" + type + "'");
}

Json spectrum_document(const SpectrumSet& lambda, bool with_points) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "spectrum";
    j["spectrum"] = to_json(lambda, with_points);
    return j;
}

Json read_json_source(const std::string& source) {
    std::string text;
    if (!source.empty() && source.front() == '{') {
        text = source;
    } else {
        std::ifstream in(source, std::ios::binary);
        if (!in) {
            throw std::ios_base::failure("cannot open '" + source + "'");
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw MalformedSpec("'" + (source.size() > 60 ? source.substr(0, 60) + "..." : source) +
                            "' is not valid JSON: " + e.what());
    }
}

// Reports ---------------------------------------------------------------------------

Json to_json(const ParamList& params) {
    Json j = Json::object();
    for (const auto& [key, value] : params.items) {
        std::visit([&](const auto& v) { j[key] = v; }, value);
    }
    return j;
}

Json to_json(const std::vector<CurvePoint>& curve) {
    Json a = Json::array();
    for (const auto& c : curve) {
        a.push_back(Json{{"index", c.index}, {"scale", c.scale}, {"statistic", c.statistic}});
    }
    return a;
}

Json to_json(const DimensionEstimate& est) {
    Json j;
    j["quantity"] = est.quantity;
    j["value"] = est.value;
    j["method"] = method_name(est.method);
    j["residual"] = est.residual;
    j["parameters"] = to_json(est.parameters);
    j["curve"] = to_json(est.curve);
    return j;
}

Json to_json(const FrameReport& rep) {
    Json j;
    j["exact"] = rep.exact;
    j["lower"] = rep.lower;
    j["upper"] = rep.upper;
    j["gram_min_eig"] = rep.gram_min_eig;
    j["gram_max_eig"] = rep.gram_max_eig;
    j["condition"] = rep.condition;
    j["spectrum_size"] = rep.spectrum_size;
    j["function_dim"] = rep.function_dim;
    Json ratios = Json::array();
    for (double r : rep.trial_ratios) {
        ratios.push_back(r);
    }
    j["trial_ratios"] = std::move(ratios);
    return j;
}

Json to_json(const LemmaCheckRecord& rec) {
    Json j;
    j["lemma"] = rec.lemma;
    j["pass"] = rec.pass;
    j["samples"] = rec.samples;
    j["max_violation"] = rec.max_violation;
    j["tolerance"] = rec.tolerance;
    j["details"] = to_json(rec.details);
    return j;
}

Json to_json(const OscillatingConstruction& osc) {
    Json j;
    j["levels"] = to_json(osc.levels);
    j["burn_in"] = osc.burn_in;
    j["tail_min"] = osc.tail_min;
    j["tail_max"] = osc.tail_max;
    j["low_met"] = osc.low_met;
    j["high_met"] = osc.high_met;
    j["switch_points"] = int_array(osc.switch_points);
    Json dens = Json::array();
    for (double d : osc.partial_density) {
        dens.push_back(d);
    }
    j["partial_density"] = std::move(dens);
    return j;
}

Json to_json(const CounterexampleReport& rep) {
    Json j;
    j["verdict"] = rep.verdict;
    j["p"] = rep.p;
    j["levels"] = to_json(rep.levels);
    j["n_max"] = rep.n_max;
    j["exponent_offset"] = rep.exponent_offset;
    j["hausdorff"] = rep.liminf_density;
    j["limsup_density"] = rep.limsup_density;
    j["margin"] = rep.margin;
    j["beurling_exceeds_hausdorff"] = rep.beurling_exceeds_hausdorff;
    j["orthonormal"] = rep.orthonormal;
    j["spectrum_level"] = rep.spectrum_level;
    j["spectrum_size"] = rep.spectrum_size;
    j["gram_level"] = rep.gram_level;
    j["gram_size"] = rep.gram_size;
    j["orthonormality_residual"] = rep.orthonormality_residual;
    j["entropy"] = to_json(rep.entropy);
    j["beurling"] = to_json(rep.beurling);
    return j;
}

Json to_json(const DisjointnessCheck& chk) {
    return Json{{"disjoint", chk.disjoint}, {"cover_depth", chk.cover_depth}, {"cover_cells", chk.cover_cells}};
}

Json to_json(const Certificate& cert) {
    Json j;
    j["conclusion"] = cert.conclusion;
    j["inequality_holds"] = cert.inequality_holds;
    j["gap"] = cert.gap;
    j["mu_null_on_others"] = cert.mu_null_on_others;
    j["nu_null_on_others"] = cert.nu_null_on_others;
    j["mu_vs_nu"] = to_json(cert.mu_vs_nu);
    j["mu_vs_rho"] = to_json(cert.mu_vs_rho);
    j["nu_vs_mu"] = to_json(cert.nu_vs_mu);
    j["nu_vs_rho"] = to_json(cert.nu_vs_rho);
    j["caveat"] = cert.caveat;
    j["fourier"] = to_json(cert.fourier);
    j["entropy"] = to_json(cert.entropy);
    return j;
}

Json to_json(const Limits& limits) {
    Json j;
    j["max_atoms"] = limits.max_atoms;
    j["max_gram"] = limits.max_gram;
    j["max_depth"] = limits.max_depth;
    j["max_spectrum"] = limits.max_spectrum;
    j["max_cells"] = limits.max_cells;
    return j;
}

}  // namespace specdim
