#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "popa/homs.hpp"
#include "popa/radial.hpp"
#include "popa/report.hpp"

namespace popa {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Schemas. The files under schemas/ are the canonical copies; these embedded
// strings must stay identical to them (a test enforces it). Documents are
// validated structurally on every load.
// ---------------------------------------------------------------------------

inline const char* homspec_schema_text() {
  return R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "HomSpec",
  "type": "object",
  "required": ["family", "rho", "sigma"],
  "properties": {
    "family": {"type": "string", "enum": ["zero", "linear", "power", "log", "exp"]},
    "rho": {"type": "array", "items": {"type": "number"}},
    "sigma": {"type": "array", "items": {"type": "number"}},
    "m": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    "v": {"type": "array", "items": {"type": "number"}},
    "gamma": {"type": "number"},
    "b": {"type": "array", "items": {"type": "number"}},
    "c": {"type": "array", "items": {"type": "number"}},
    "kap": {"type": "array", "items": {"type": "number"}}
  }
}
)";
}

inline const char* report_schema_text() {
  return R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "Report",
  "type": "object",
  "required": ["command", "seed", "pass", "metrics"],
  "properties": {
    "command": {"type": "string"},
    "inputs_digest": {"type": "string"},
    "seed": {"type": "integer"},
    "pass": {"type": "boolean"},
    "metrics": {"type": "object"},
    "wall_ms": {"type": "number"}
  }
}
)";
}

/// Minimal draft-07 subset checker: type / required / properties / items /
/// enum. Returns human-readable violations; empty means valid.
inline void validate_against_schema(const json& doc, const json& schema,
                                    const std::string& where,
                                    std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    const std::string want = schema["type"];
    const bool ok = (want == "object" && doc.is_object()) ||
                    (want == "array" && doc.is_array()) ||
                    (want == "string" && doc.is_string()) ||
                    (want == "boolean" && doc.is_boolean()) ||
                    (want == "integer" && doc.is_number_integer()) ||
                    (want == "number" && doc.is_number());
    if (!ok) {
      errors.push_back(where + ": expected " + want);
      return;
    }
  }
  if (schema.contains("enum")) {
    bool hit = false;
    for (const auto& candidate : schema["enum"])
      if (doc == candidate) hit = true;
    if (!hit) errors.push_back(where + ": value not in enum");
  }
  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!doc.contains(key.get<std::string>()))
          errors.push_back(where + ": missing required key '" +
                           key.get<std::string>() + "'");
    if (schema.contains("properties"))
      for (const auto& [key, sub] : schema["properties"].items())
        if (doc.contains(key))
          validate_against_schema(doc[key], sub, where + "." + key, errors);
  }
  if (doc.is_array() && schema.contains("items")) {
    std::size_t i = 0;
    for (const auto& el : doc)
      validate_against_schema(el, schema["items"], where + "[" + std::to_string(i++) + "]",
                              errors);
  }
}

inline std::vector<std::string> validate_document(const json& doc, const json& schema) {
  std::vector<std::string> errors;
  validate_against_schema(doc, schema, "$", errors);
  return errors;
}

// ---------------------------------------------------------------------------
// HomSpec
// ---------------------------------------------------------------------------

inline json homspec_to_json(const HomSpec& spec) {
  json j;
  j["family"] = family_name(spec.family);
  j["rho"] = spec.rho.coeffs;
  j["sigma"] = spec.sigma.coeffs;
  switch (spec.family) {
    case HomFamily::Zero:
      break;
    case HomFamily::Linear: {
      std::vector<std::vector<double>> rows(spec.m.rows);
      for (std::size_t i = 0; i < spec.m.rows; ++i)
        for (std::size_t k = 0; k < spec.m.cols; ++k) rows[i].push_back(spec.m(i, k));
      j["m"] = rows;
      break;
    }
    case HomFamily::Power:
      j["v"] = spec.v;
      j["gamma"] = spec.gamma;
      break;
    case HomFamily::Log:
      j["b"] = spec.b;
      break;
    case HomFamily::Exp:
      j["c"] = spec.c;
      j["kap"] = spec.kap.coeffs;
      break;
  }
  return j;
}

/// Parses and validates a HomSpec document: schema first, then the family
/// constraints (the result is ready for hom_eval).
inline HomSpec homspec_from_json(const json& j) {
  const json schema = json::parse(homspec_schema_text());
  const auto errors = validate_document(j, schema);
  if (!errors.empty()) throw ParseError("HomSpec fails its schema: " + errors[0]);

  HomSpec spec;
  spec.family = family_from_name(j["family"].get<std::string>());
  spec.rho = LinFunc<double>(j["rho"].get<std::vector<double>>());
  spec.sigma = LinFunc<double>(j["sigma"].get<std::vector<double>>());
  auto need = [&](const char* key) {
    if (!j.contains(key))
      throw ParseError(std::string("family '") + family_name(spec.family) +
                       "' needs field '" + key + "'");
  };
  switch (spec.family) {
    case HomFamily::Zero:
      break;
    case HomFamily::Linear: {
      need("m");
      const auto rows = j["m"].get<std::vector<std::vector<double>>>();
      if (rows.empty()) throw ParseError("matrix 'm' is empty");
      spec.m = Matrix(rows.size(), rows[0].size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw ParseError("ragged matrix 'm'");
        for (std::size_t k = 0; k < rows[i].size(); ++k) spec.m(i, k) = rows[i][k];
      }
      break;
    }
    case HomFamily::Power:
      need("v");
      need("gamma");
      spec.v = j["v"].get<std::vector<double>>();
      spec.gamma = j["gamma"].get<double>();
      break;
    case HomFamily::Log:
      need("b");
      spec.b = j["b"].get<std::vector<double>>();
      break;
    case HomFamily::Exp:
      need("c");
      need("kap");
      spec.c = j["c"].get<std::vector<double>>();
      spec.kap = LinFunc<double>(j["kap"].get<std::vector<double>>());
      break;
  }
  const Report rep = hom_validate(spec);
  if (!rep.pass)
    throw ConstraintViolation("HomSpec constraints: " +
                              (rep.notes.empty() ? "invalid" : rep.notes[0]));
  return spec;
}

inline HomSpec load_homspec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError("bad JSON in '" + path + "': " + e.what());
  }
  return homspec_from_json(j);
}

// ---------------------------------------------------------------------------
// Reports and witnesses
// ---------------------------------------------------------------------------

inline json report_to_json(const Report& rep) {
  json j;
  j["check"] = rep.check;
  j["pass"] = rep.pass;
  j["max_residual"] = rep.max_residual;
  j["tolerance"] = rep.tolerance;
  j["samples"] = rep.samples;
  j["seed"] = rep.seed;
  j["notes"] = rep.notes;
  return j;
}

template <class S>
json witness_to_json(const Witness<S>& w) {
  json j;
  j["case"] = w.case_tag == WitnessCase::Case1 ? "case1" : "case2";
  if (w.delta)
    j["delta"] = scalar_traits<S>::str(*w.delta);
  else
    j["delta"] = nullptr;
  j["word"] = json::array();
  for (const auto& letter : w.word) {
    json l;
    l["generator"] = letter.generator;
    l["scale"] = scalar_traits<S>::str(letter.scale);
    std::vector<std::string> coords;
    for (const auto& c : letter.element) coords.push_back(scalar_traits<S>::str(c));
    l["element"] = coords;
    j["word"].push_back(l);
  }
  std::vector<std::string> target;
  for (const auto& c : w.target) target.push_back(scalar_traits<S>::str(c));
  j["target"] = target;
  return j;
}

}  // namespace popa
