#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "polyspec/geometry.hpp"
#include "polyspec/parallel.hpp"
#include "polyspec/search.hpp"
#include "polyspec/spectral.hpp"
#include "polyspec/stationarity.hpp"

namespace polyspec {

using nlohmann::json;

// Polygon serialization.  Vertex form:
//   {"d": 2, "l": 1.0, "vertices": [[x, y], ...]}
// Angle form:
//   {"N": 6, "l": 1.0, "phi": 0.0, "beta": [...], "w": 1}
json to_json(const VertexPolygon& p);
json to_json(const AnglePolygon& a);
VertexPolygon vertex_polygon_from_json(const json& j);
AnglePolygon angle_polygon_from_json(const json& j);

// Accepts either polygon form (an angle-form input is converted through the
// chart, so it must describe a closed polygon).
VertexPolygon polygon_from_json(const json& j, int d_hint = 2);

// Result serialization.
json to_json(const SpectralResult& r);
json to_json(const ExistenceReport& r);
json to_json(const DiagonalReport& r);
json to_json(const SweepResult& r);
json to_json(const StationarityReport& r);
json to_json(const LocalMaxReport& r);
json to_json(const P2Report& r);
json to_json(const ConsistencyReport& r);
json to_json(const SearchOutcome& r);

// Metadata block included in every CLI output: version, seed, thread cap,
// execution mode, and the library tolerance set, enough to reproduce a run.
json make_meta(std::uint64_t seed, int threads, ExecMode mode);

// Machine-readable error payload: {"error": {"kind", "message", ...extra}}.
json error_json(const std::string& kind, const std::string& message,
                const json& extra = json::object());

std::string mode_name(ExecMode mode);
ExecMode mode_from_name(const std::string& name);

}  // namespace polyspec
