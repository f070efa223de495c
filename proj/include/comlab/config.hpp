#pragma once

// JSON construction of metric families, densities, ladders and grids, with
// strict schema validation (unknown keys rejected at every level).

#include <json.hpp>

#include "comlab/limits.hpp"
#include "comlab/metric.hpp"
#include "comlab/newtonian.hpp"

namespace comlab {

using Json = nlohmann::json;

// {"kind": "schwarzschild" | "translated_schwarzschild" | "york_perturbed" |
//          "graph_slice",
//  "m": num, "z": [x,y,z], "P": [x,y,z],
//  "f": {"type": "sin_log"|"power"|"const", "eps": num},
//  "T": {"type": "divergent"|"prescribed", "u": [x,y,z]},
//  "r_min": num}
FamilyPtr family_from_json(const Json& j);

// {"kind": "divergent_u"|"prescribed"|"custom_radial",
//  "m": num, "u": [x,y,z], "z": [x,y,z], "odd_eps": num}
NewtonianDensity density_from_json(const Json& j);

// {"r0": num, "ratio": num, "count": int}; defaults fill from the mass scale.
RadiusLadder ladder_from_json(const Json& j, double mass_scale);

Vec3 vec3_from_json(const Json& j, const std::string& what);

}  // namespace comlab
