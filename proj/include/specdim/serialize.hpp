#pragma once

#include "specdim/constructions.hpp"
#include "specdim/dimension.hpp"
#include "specdim/errors.hpp"
#include "specdim/frame.hpp"
#include "specdim/levelset.hpp"
#include "specdim/measure.hpp"
#include "specdim/spectrum.hpp"

#include <json.hpp>

#include <string>

namespace specdim {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// %.17g, with "inf", "-inf", "nan" for non-finite values.
std::string format_real(double v);
/// Accepts a decimal string (the documented form), a JSON number, or a/b fraction string.
double parse_real(const Json& v, const std::string& where);
double parse_real(const std::string& text, const std::string& where);

/// Deterministic text form: two-space indent, insertion order, reals at 17
/// significant digits, non-finite reals as strings.
std::string dump_json(const Json& j);

// Level sets ---------------------------------------------------------------------

Json to_json(const LevelSet& levels);
LevelSet level_set_from_json(const Json& j, const std::string& where = "levels");

/// evens | odds | all | none | explicit:1,2,5 | periodic:q:r1,r2[:bound] | osc:low,high,growth[,max_level]
/// (reals may be written as a/b).
LevelSet parse_level_shorthand(const std::string& text, std::int64_t default_max_level = 0);

// Measures and spectra -------------------------------------------------------------

/// Bare node (no envelope).
Json to_json(const MeasureSpec& spec);
/// Accepts either a bare node or a {"schema_version", "kind": "measure", "measure"} document.
MeasureSpec measure_from_json(const Json& j, const std::string& where = "measure");
Json measure_document(const MeasureSpec& spec);

Json to_json(const SpectrumSet& lambda, bool with_points);
SpectrumSet spectrum_from_json(const Json& j, const Limits& limits = default_limits(),
                               const std::string& where = "spectrum");
Json spectrum_document(const SpectrumSet& lambda, bool with_points);

/// Reads a file (or inline JSON text when `source` starts with '{').
Json read_json_source(const std::string& source);

// Reports --------------------------------------------------------------------------

Json to_json(const ParamList& params);
Json to_json(const std::vector<CurvePoint>& curve);
Json to_json(const DimensionEstimate& est);
Json to_json(const FrameReport& rep);
Json to_json(const LemmaCheckRecord& rec);
Json to_json(const OscillatingConstruction& osc);
Json to_json(const CounterexampleReport& rep);
Json to_json(const DisjointnessCheck& chk);
Json to_json(const Certificate& cert);
Json to_json(const Limits& limits);

}  // namespace specdim
