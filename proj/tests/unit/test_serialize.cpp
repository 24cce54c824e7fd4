#include "doctest.h"

#include "specdim/cli.hpp"
#include "specdim/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

using namespace specdim;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

void same_measure(const MeasureSpec& a, const MeasureSpec& b) {
    CHECK(a.dim() == b.dim());
    CHECK(total_mass(a) == total_mass(b));
    for (double xi : {0.0, 0.37, 1.0, 5.5, 123.25}) {
        Point x(a.dim(), xi);
        CHECK(std::abs(fourier(a, x) - fourier(b, x)) == 0.0);
    }
}

}  // namespace

TEST_CASE("real formatting") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(0.0) == "0");
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_real(std::nan("")) == "nan");
    for (double v : {0.1, 1.0 / 3.0, 2.0 / 3.0, 1e-300, 6.02214076e23, -7.5}) {
        CHECK(parse_real(format_real(v), "x") == v);
    }
    CHECK(parse_real(Json("1/3"), "x") == 1.0 / 3.0);
    CHECK(parse_real(Json(0.25), "x") == 0.25);
    CHECK_THROWS_AS(parse_real(Json("0,5"), "x"), MalformedSpec);
    CHECK_THROWS_AS(parse_real(Json("1/0"), "x"), MalformedSpec);
    CHECK_THROWS_AS(parse_real(Json(true), "x"), MalformedSpec);
}

TEST_CASE("json dump is deterministic and keeps insertion order") {
    Json j;
    j["z"] = 1;
    j["a"] = 0.1;
    j["list"] = Json::array({1.5, 2, "s"});
    j["bad"] = -std::numeric_limits<double>::infinity();
    j["nested"] = Json{{"k", Json::array({Json{{"x", 1}}})}};
    const std::string text = dump_json(j);
    CHECK(text == dump_json(j));
    CHECK(text.find("\"z\"") < text.find("\"a\""));
    CHECK(text.find("0.10000000000000001") != std::string::npos);
    CHECK(text.find("\"-inf\"") != std::string::npos);
    CHECK(text.find("[1.5, 2, \"s\"]") != std::string::npos);
    // the output is valid JSON
    CHECK(Json::parse(text)["a"].get<double>() == 0.1);
}

TEST_CASE("level set shorthand") {
    CHECK(parse_level_shorthand("evens") == LevelSet::evens());
    CHECK(parse_level_shorthand("odds") == LevelSet::odds());
    CHECK(parse_level_shorthand("all") == LevelSet::all());
    CHECK(parse_level_shorthand("none").empty());
    CHECK(parse_level_shorthand("explicit:3,1,2") == LevelSet::explicit_set({1, 2, 3}));
    CHECK(parse_level_shorthand("periodic:3:0,2") == LevelSet::periodic(3, {0, 2}));
    CHECK(parse_level_shorthand("periodic:3:0,2:30") == LevelSet::periodic(3, {0, 2}, 30));
    CHECK(parse_level_shorthand("osc:1/3,2/3,2", 200) == LevelSet::oscillating(1.0 / 3.0, 2.0 / 3.0, 2.0, 200));
    CHECK(parse_level_shorthand("osc:0.25,0.75,2,50") == LevelSet::oscillating(0.25, 0.75, 2.0, 50));
    CHECK_THROWS_AS(parse_level_shorthand("primes"), MalformedSpec);
    CHECK_THROWS_AS(parse_level_shorthand("osc:0.5,2"), MalformedSpec);
    CHECK_THROWS_AS(parse_level_shorthand("osc:0.9,0.1,2"), MalformedSpec);
    CHECK_THROWS_AS(parse_level_shorthand("explicit:1,x"), MalformedSpec);
}

TEST_CASE("level sets round-trip") {
    for (const auto& l : {LevelSet::evens(), LevelSet::explicit_set({1, 4, 9}), LevelSet::periodic(5, {1, 3}, 40),
                          LevelSet::oscillating(1.0 / 3.0, 2.0 / 3.0, 2.0, 200), LevelSet::all().shifted(3)}) {
        CHECK(level_set_from_json(to_json(l)) == l);
    }
}

TEST_CASE("measures round-trip through documents") {
    const auto nu = make_digit(3, LevelSet::oscillating(0.25, 0.75, 2.0, 100));
    const std::vector<MeasureSpec> specs = {
        dirac({0.25}),
        lebesgue_unit(),
        make_tree(2, 2, {0.1, 0.2, 0.3, 0.4}),
        nu,
        truncate_digit(*make_digit(2, LevelSet::evens()).as<Digit>(), 6),
        truncate_digit(*nu.as<Digit>(), 6),
        make_product(lebesgue_unit(), dirac({0.5})),
        make_mixed(make_digit(2, LevelSet::evens()), lebesgue_unit()),
        affine_image(make_digit(2, LevelSet::odds()), {0.125}, 3.0),
        restrict_to(make_digit(2, LevelSet::all()), Cell::make(2, 3, {5})),
        scaled(make_atomic({Atom{{0.1, 0.2}, 0.3, {}}, Atom{{0.7, 0.9}, 0.6, {}}}, 2), 2.0),
    };
    for (const auto& m : specs) {
        const Json doc = measure_document(m);
        CHECK(doc["schema_version"] == kSchemaVersion);
        CHECK(doc["kind"] == "measure");
        const auto back = measure_from_json(Json::parse(dump_json(doc)));
        same_measure(m, back);
        CHECK(dump_json(measure_document(back)) == dump_json(doc));
    }
}

TEST_CASE("unknown-fill trees keep their fill") {
    const auto t = make_tree(3, 1, {0.2, 0.0, 0.8}, TreeFill::unknown);
    const auto back = measure_from_json(measure_document(t));
    REQUIRE(back.as<DyadicTree>());
    CHECK(back.as<DyadicTree>()->fill == TreeFill::unknown);
    CHECK(back.as<DyadicTree>()->masses == std::vector<double>{0.2, 0.0, 0.8});
}

TEST_CASE("lattice atoms keep their exact numerators") {
    const auto t = truncate_digit(*make_digit(2, LevelSet::all()).as<Digit>(), 4);
    const auto back = measure_from_json(measure_document(t));
    const auto* a = back.as<Atomic>();
    REQUIRE(a);
    CHECK(a->lattice_base == 2);
    CHECK(a->lattice_depth == 4);
    CHECK(a->atoms[3].numerators == std::vector<std::int64_t>{3});
    CHECK(a->atoms[3].point[0] == 3.0 / 16.0);
}

TEST_CASE("malformed measure documents name the offending field") {
    auto fails_with = [](const std::string& text, const std::string& fragment) {
        try {
            measure_from_json(Json::parse(text));
            FAIL("no exception for " << text);
        } catch (const MalformedSpec& e) {
            CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
        }
    };
    fails_with(R"({"type": "digit", "levels": "evens"})", "missing field 'p'");
    fails_with(R"({"type": "digit", "p": 1, "levels": "evens"})", "p >= 2");
    fails_with(R"({"type": "atomic", "dim": 1, "atoms": [{"point": ["x"], "weight": "1"}]})",
               "measure.atoms[0].point[0]");
    fails_with(R"({"type": "atomic", "dim": 1, "atoms": [{"point": ["0.5"], "weight": "-1"}]})", ">= 0");
    fails_with(R"({"type": "spiral"})", "unknown measure type");
    fails_with(R"({"kind": "measure", "schema_version": 7, "measure": {"type": "lebesgue"}})", "schema_version");
    fails_with(R"({"kind": "spectrum", "schema_version": 1})", "kind must be 'measure'");
    fails_with(R"({"type": "tree", "base": 2, "depth": 1, "masses": ["1"]})", "base^depth");
    fails_with(R"({"type": "atomic", "dim": 1, "lattice": {"base": 2, "depth": 2},
                   "atoms": [{"point": ["0.5"], "numerators": [1], "weight": "1"}]})",
               "lattice numerators");
}

TEST_CASE("spectra round-trip") {
    const auto digit = SpectrumSet::digit(DigitSpectrumSpec{2, LevelSet::evens(), 10, -1});
    for (bool with_points : {false, true}) {
        const auto back = spectrum_from_json(spectrum_document(digit, with_points));
        CHECK(back.points() == digit.points());
        CHECK(back.digit_spec().has_value());
    }
    const auto plane = SpectrumSet::explicit_points({{0.5, 1.0}, {-2.0, 0.1}}, 2);
    CHECK(spectrum_from_json(spectrum_document(plane, false)).points() == plane.points());
    const auto bare = spectrum_from_json(Json::parse(R"({"type": "explicit", "points": ["3", "1/2", 2]})"));
    CHECK(bare.line() == std::vector<double>{0.5, 2.0, 3.0});
    Limits small;
    small.max_spectrum = 100;
    const auto big = SpectrumSet::digit(DigitSpectrumSpec{2, LevelSet::evens(), 20, -1});
    CHECK_THROWS_AS(spectrum_from_json(spectrum_document(big, false), small), ResourceLimit);
    CHECK_THROWS_AS(spectrum_from_json(Json::parse(R"({"type": "explicit", "points": ["1", "1"]})")),
                    MalformedSpec);
}

TEST_CASE("cli exit codes") {
    const std::string leb = R"({"type": "lebesgue"})";
    const std::string atoms = R"({"type": "atomic", "dim": 1, "atoms": [{"point": ["0"], "weight": "0.5"},
        {"point": ["0.5"], "weight": "0.5"}]})";
    const std::string pair = R"({"type": "explicit", "points": ["0", "1"]})";

    auto r = run_cli({"entropy-dim", "--measure", leb, "--depth", "20"});
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["result"]["upper"]["value"].get<double>() == doctest::Approx(1.0));

    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({"no-such-command"}).code == 1);
    CHECK(run_cli({"entropy-dim", "--bogus"}).code == 1);
    CHECK(run_cli({"entropy-dim"}).code == 1);  // --measure missing
    CHECK(run_cli({"entropy-dim", "--measure", "/nonexistent/file.json"}).code == 1);
    CHECK(run_cli({"--help"}).code == 0);

    r = run_cli({"entropy-dim", "--measure", R"({"type": "digit", "p": 0, "levels": "all"})"});
    CHECK(r.code == 1);
    CHECK(r.err.find("malformed spec") != std::string::npos);

    r = run_cli({"entropy-dim", "--measure", leb, "--depth", "80"});
    CHECK(r.code == 1);
    CHECK(r.err.find("max_depth") != std::string::npos);

    r = run_cli({"build-nu", "--levels", "all", "--truncate", "30", "--max-atoms", "1000"});
    CHECK(r.code == 1);
    CHECK(r.err.find("max_atoms") != std::string::npos);

    // an exact orthonormal pair passes; an impossible Bessel bound fails the check
    CHECK(run_cli({"check-counting-bound", "--measure", atoms, "--spectrum", pair}).code == 0);
    r = run_cli({"check-counting-bound", "--measure", atoms, "--spectrum", pair, "--bessel", "1e-9"});
    CHECK(r.code == 2);
    CHECK(Json::parse(r.out)["result"]["pass"] == false);
}

TEST_CASE("cli csv output and resolved defaults") {
    const std::string leb = R"({"type": "lebesgue"})";
    auto r = run_cli({"entropy-dim", "--measure", leb, "--depth", "8", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("index,scale,statistic\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 9);
    CHECK(run_cli({"gram", "--measure", leb, "--spectrum", R"({"type": "explicit", "points": ["0"]})", "--format",
               "csv"})
              .code == 1);

    r = run_cli({"check-lemma42", "--measure", leb, "--samples", "50"});
    CHECK(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["config"]["depth"] == 6);
    CHECK(j["config"]["samples"] == 50);
    CHECK(j["config"].find("threads") == j["config"].end());
}
