#pragma once

// JSON input parsing and report serialization.  Inputs are validated
// strictly: unknown fields, wrong types, and missing keys are rejected with
// MalformedInput so callers can distinguish contract violations from
// semantic errors raised by the library itself.  Serializers emit
// insertion-ordered objects so identical inputs render byte-identical text.
//
// Requires the single-header nlohmann json library on the include path.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "gammaspec/cech.hpp"
#include "gammaspec/core.hpp"
#include "gammaspec/ideal.hpp"
#include "gammaspec/localization.hpp"
#include "gammaspec/semiring.hpp"
#include "gammaspec/sheaf.hpp"
#include "gammaspec/spectrum.hpp"
#include "gammaspec/tensor.hpp"
#include "gammaspec/verify.hpp"

namespace gammaspec {

using Json = nlohmann::ordered_json;

// Input that fails the published format contract: not an object, unknown
// fields, missing fields, wrong element types or shapes.
class MalformedInput : public Error {
 public:
  explicit MalformedInput(const std::string& what) : Error(what) {}
};

namespace detail {

inline void require_keys(const Json& j, const std::vector<std::string>& keys,
                         const std::string& what) {
  if (!j.is_object()) throw MalformedInput(what + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const auto& k : keys) known = known || item.key() == k;
    if (!known)
      throw MalformedInput("unknown field \"" + item.key() + "\" in " + what);
  }
  for (const auto& k : keys)
    if (!j.contains(k))
      throw MalformedInput("missing field \"" + k + "\" in " + what);
}

inline int int_field(const Json& j, const std::string& key,
                     const std::string& what) {
  const auto& v = j.at(key);
  if (!v.is_number_integer())
    throw MalformedInput("field \"" + key + "\" in " + what +
                         " must be an integer");
  return v.get<int>();
}

inline std::vector<int> int_array(const Json& v, const std::string& name) {
  if (!v.is_array())
    throw MalformedInput(name + " must be an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer())
      throw MalformedInput(name + " must be an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace detail

// Accepted shapes:
//   {"kind":"modular","n":12,"gamma":[1,5]}
//   {"kind":"tables","n":N,"gamma_names":[...],"add":[[...]],
//    "ternary":{"<gamma_name>":[[[...]]]}}
// with add[a][b] and ternary[g][a][b][c] row-major.
inline TernarySemiring semiring_from_json(const Json& j,
                                          const Limits& limits = {}) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw MalformedInput(
        "semiring description needs a string field \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "modular") {
    detail::require_keys(j, {"kind", "n", "gamma"}, "modular description");
    const int n = detail::int_field(j, "n", "modular description");
    const auto gamma = detail::int_array(j.at("gamma"), "\"gamma\"");
    return build_modular(n, gamma, limits);
  }
  if (kind == "tables") {
    detail::require_keys(j, {"kind", "n", "gamma_names", "add", "ternary"},
                         "tables description");
    const int n = detail::int_field(j, "n", "tables description");
    if (n < 1) throw MalformedInput("\"n\" must be positive");
    const auto& names_json = j.at("gamma_names");
    if (!names_json.is_array() || names_json.empty())
      throw MalformedInput("\"gamma_names\" must be a nonempty array");
    std::vector<std::string> gamma_names;
    for (const auto& g : names_json) {
      if (!g.is_string())
        throw MalformedInput("\"gamma_names\" entries must be strings");
      gamma_names.push_back(g.get<std::string>());
    }
    const auto& add_json = j.at("add");
    if (!add_json.is_array() || add_json.size() != static_cast<size_t>(n))
      throw MalformedInput("\"add\" must be an n-by-n matrix");
    std::vector<Elem> add;
    for (const auto& row : add_json) {
      const auto r = detail::int_array(row, "\"add\" row");
      if (r.size() != static_cast<size_t>(n))
        throw MalformedInput("\"add\" must be an n-by-n matrix");
      add.insert(add.end(), r.begin(), r.end());
    }
    const auto& tern_json = j.at("ternary");
    if (!tern_json.is_object())
      throw MalformedInput("\"ternary\" must map gamma names to cubes");
    for (const auto& item : tern_json.items()) {
      bool known = false;
      for (const auto& g : gamma_names) known = known || g == item.key();
      if (!known)
        throw MalformedInput("unknown gamma \"" + item.key() +
                             "\" in \"ternary\"");
    }
    std::vector<Elem> tern;
    for (const auto& g : gamma_names) {
      if (!tern_json.contains(g))
        throw MalformedInput("\"ternary\" misses gamma \"" + g + "\"");
      const auto& cube = tern_json.at(g);
      if (!cube.is_array() || cube.size() != static_cast<size_t>(n))
        throw MalformedInput("ternary cube for \"" + g +
                             "\" must be n-by-n-by-n");
      for (const auto& plane : cube) {
        if (!plane.is_array() || plane.size() != static_cast<size_t>(n))
          throw MalformedInput("ternary cube for \"" + g +
                               "\" must be n-by-n-by-n");
        for (const auto& row : plane) {
          const auto r = detail::int_array(row, "ternary cube row");
          if (r.size() != static_cast<size_t>(n))
            throw MalformedInput("ternary cube for \"" + g +
                                 "\" must be n-by-n-by-n");
          tern.insert(tern.end(), r.begin(), r.end());
        }
      }
    }
    return build_from_tables(n, gamma_names, add, tern, std::nullopt,
                             limits);
  }
  throw MalformedInput("\"kind\" must be \"modular\" or \"tables\"");
}

inline Json axiom_report_to_json(const TernarySemiring& t,
                                 const AxiomReport& report) {
  Json out;
  out["ok"] = report.ok;
  out["violations"] = Json::array();
  for (const auto& v : report.violations) {
    Json item;
    item["axiom"] = axiom_name(v.axiom);
    item["args"] = v.args;
    out["violations"].push_back(std::move(item));
  }
  out["truncated"] = report.truncated;
  out["carrier"] = t.n;
  return out;
}

inline Json spectrum_report_to_json(const SpectrumSpace& space) {
  Json out;
  out["primes"] = Json::array();
  for (const auto& p : space.primes) {
    Json item;
    item["members"] = p.members;
    item["generators"] = ideal_generators(*space.parent, p);
    out["primes"].push_back(std::move(item));
  }
  out["closed_sets"] = space.closed_sets;
  out["t0"] = is_t0(space);
  out["discrete"] = is_discrete(space);
  return out;
}

inline Json localization_report_to_json(const LocalizedSemiring& loc) {
  Json out;
  out["system"] = loc.system.members;
  out["num_classes"] = static_cast<int>(loc.classes.size());
  out["classes"] = Json::array();
  for (const auto& cls : loc.classes) {
    Json pairs = Json::array();
    for (const int pi : cls)
      pairs.push_back(Json::array({loc.pairs[pi].first,
                                   loc.pairs[pi].second}));
    out["classes"].push_back(std::move(pairs));
  }
  out["canonical_map"] = loc.canonical_class;
  out["raw_relation_transitive"] = loc.raw_relation_transitive;
  out["addition_supported"] = loc.addition_supported;
  return out;
}

inline Json basic_sections_report_to_json(const BasicSectionsReport& report,
                                          const OpenSet& open) {
  Json out;
  out["element"] = report.element;
  out["open"] = open.primes;
  out["num_sections"] = report.num_sections;
  Json iso;
  iso["injective"] = report.injective;
  iso["surjective"] = report.surjective;
  out["basic_iso"] = std::move(iso);
  out["degenerate"] = report.degenerate;
  return out;
}

inline Json cohomology_report_to_json(const CohomologyReport& report) {
  Json out;
  out["cover"] = report.cover;
  out["equalizer_sections"] = report.equalizer_sections;
  out["complete"] = report.complete;
  out["note"] = report.note;
  out["h"] = Json::array();
  for (const auto& g : report.h) {
    Json item;
    item["degree"] = g.degree;
    item["invariant_factors"] = g.invariant_factors;
    out["h"].push_back(std::move(item));
  }
  return out;
}

inline Json tensor_report_to_json(const TensorProduct& tp) {
  Json out;
  out["generators"] = tp.presentation.num_generators;
  out["relations_count"] = static_cast<int64_t>(tp.presentation.relations.size());
  out["invariant_factors"] = tp.invariant_factors();
  return out;
}

inline Json tor_report_to_json(const TorComputation& tc) {
  Json out;
  out["presentation"] = tc.presentation;
  out["cover_generators"] = tc.cover_generators;
  out["kernel_generators"] = tc.kernel_generators;
  out["invariant_factors"] = tc.invariant_factors;
  return out;
}

// Slice of one ternary operation at fixed mode and last argument, with a
// caller-chosen row set; columns always run over the whole carrier.
inline Json slice_table_to_json(const TernarySemiring& t, GammaIdx g, Elem c,
                                const std::vector<Elem>& rows) {
  if (g < 0 || g >= t.gamma_count)
    throw InvalidInput("gamma index outside the parameter set");
  if (c < 0 || c >= t.n) throw InvalidInput("slice element outside carrier");
  Json out;
  out["gamma"] = t.gamma_names[g];
  out["c"] = c;
  out["rows"] = rows;
  out["entries"] = Json::array();
  for (const Elem a : rows) {
    if (a < 0 || a >= t.n)
      throw InvalidInput("table row outside the carrier");
    Json row = Json::array();
    for (Elem b = 0; b < t.n; ++b) row.push_back(t.tern(g, a, b, c));
    out["entries"].push_back(std::move(row));
  }
  return out;
}

}  // namespace gammaspec
