#include "comlab/config.hpp"

#include <set>
#include <string>

namespace comlab {

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw config_error(where + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (allowed.find(it.key()) == allowed.end())
      throw config_error(where + ": unknown key \"" + it.key() + "\"");
  }
}

double require_number(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw config_error(where + ": missing \"" + key + "\"");
  if (!j[key].is_number()) throw config_error(where + ": \"" + key + "\" must be a number");
  return j[key].get<double>();
}

}  // namespace

Vec3 vec3_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number())
    throw config_error(what + ": expected an array of 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

FamilyPtr family_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw config_error("family: missing \"kind\"");
  const std::string kind = j["kind"].get<std::string>();

  if (kind == "schwarzschild") {
    require_keys(j, {"kind", "m"}, "family(schwarzschild)");
    return make_schwarzschild(require_number(j, "m", "family"));
  }
  if (kind == "translated_schwarzschild") {
    require_keys(j, {"kind", "m", "z"}, "family(translated_schwarzschild)");
    if (!j.contains("z")) throw config_error("translated_schwarzschild: missing \"z\"");
    return make_translated_schwarzschild(require_number(j, "m", "family"),
                                         vec3_from_json(j["z"], "family z"));
  }
  if (kind == "york_perturbed") {
    require_keys(j, {"kind", "m", "P", "f", "r_min"}, "family(york_perturbed)");
    if (!j.contains("P")) throw config_error("york_perturbed: missing \"P\"");
    YorkWeight w;
    if (j.contains("f")) {
      const Json& f = j["f"];
      require_keys(f, {"type", "eps"}, "family f");
      if (!f.contains("type") || !f["type"].is_string())
        throw config_error("york weight: missing \"type\"");
      const std::string t = f["type"].get<std::string>();
      if (t == "sin_log") w.kind = YorkWeight::Kind::SinLog;
      else if (t == "power") w.kind = YorkWeight::Kind::Power;
      else if (t == "const") w.kind = YorkWeight::Kind::Const;
      else throw config_error("york weight: unknown type \"" + t + "\"");
      if (f.contains("eps")) w.eps = require_number(f, "eps", "york weight");
      if (w.kind != YorkWeight::Kind::Power && f.contains("eps"))
        throw config_error("york weight: \"eps\" applies to the power weight only");
    }
    std::optional<double> r_min;
    if (j.contains("r_min")) r_min = require_number(j, "r_min", "family");
    return make_york_perturbed(require_number(j, "m", "family"),
                               vec3_from_json(j["P"], "family P"), w, r_min);
  }
  if (kind == "graph_slice") {
    require_keys(j, {"kind", "m", "z", "T", "r_min"}, "family(graph_slice)");
    GraphFunction T;
    if (j.contains("T")) {
      const Json& t = j["T"];
      require_keys(t, {"type", "u"}, "family T");
      if (!t.contains("type") || !t["type"].is_string())
        throw config_error("graph function: missing \"type\"");
      const std::string tt = t["type"].get<std::string>();
      if (tt == "divergent") {
        T.kind = GraphFunction::Kind::Divergent;
        if (!t.contains("u")) throw config_error("divergent graph function: missing \"u\"");
        T.u = vec3_from_json(t["u"], "graph function u");
      } else if (tt == "prescribed") {
        T.kind = GraphFunction::Kind::Prescribed;
        if (t.contains("u"))
          throw config_error("prescribed graph function: \"u\" not allowed (uses family z)");
        if (!j.contains("z"))
          throw config_error("prescribed graph function: missing family-level \"z\"");
        T.z = vec3_from_json(j["z"], "family z");
      } else {
        throw config_error("graph function: unknown type \"" + tt + "\"");
      }
    } else if (j.contains("z")) {
      throw config_error("graph_slice: \"z\" requires a prescribed \"T\" block");
    }
    std::optional<double> r_min;
    if (j.contains("r_min")) r_min = require_number(j, "r_min", "family");
    return make_graph_slice(require_number(j, "m", "family"), T, r_min);
  }
  throw config_error("family: unknown kind \"" + kind + "\"");
}

NewtonianDensity density_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw config_error("density: missing \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "divergent_u") {
    require_keys(j, {"kind", "u"}, "density(divergent_u)");
    if (!j.contains("u")) throw config_error("divergent_u density: missing \"u\"");
    return make_divergent_density(vec3_from_json(j["u"], "density u"));
  }
  if (kind == "prescribed") {
    require_keys(j, {"kind", "m", "z"}, "density(prescribed)");
    Vec3 z{};
    if (j.contains("z")) z = vec3_from_json(j["z"], "density z");
    return make_prescribed_density(require_number(j, "m", "density"), z);
  }
  if (kind == "custom_radial") {
    require_keys(j, {"kind", "m", "u", "odd_eps"}, "density(custom_radial)");
    Vec3 u{};
    double odd_eps = 0.0;
    if (j.contains("u")) u = vec3_from_json(j["u"], "density u");
    if (j.contains("odd_eps")) odd_eps = require_number(j, "odd_eps", "density");
    return make_custom_radial_density(require_number(j, "m", "density"), u, odd_eps);
  }
  throw config_error("density: unknown kind \"" + kind + "\"");
}

RadiusLadder ladder_from_json(const Json& j, double mass_scale) {
  RadiusLadder ladder = RadiusLadder::default_for(mass_scale);
  if (!j.is_null()) {
    require_keys(j, {"r0", "ratio", "count"}, "ladder");
    if (j.contains("r0")) ladder.r0 = require_number(j, "r0", "ladder");
    if (j.contains("ratio")) ladder.ratio = require_number(j, "ratio", "ladder");
    if (j.contains("count")) {
      if (!j["count"].is_number_integer()) throw config_error("ladder: \"count\" must be an integer");
      ladder.count = j["count"].get<int>();
    }
  }
  ladder.validate(mass_scale);
  return ladder;
}

}  // namespace comlab
