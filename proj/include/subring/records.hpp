#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "json.hpp"
#include "subring/checked_int.hpp"
#include "subring/enumeration.hpp"
#include "subring/lattice.hpp"
#include "subring/partition.hpp"

namespace subring {

/// Bumped whenever an engine change could alter a stored count.
inline constexpr std::string_view kEngineVersion = "1.0.0";

enum class Method { oracle, formula, unital };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::oracle: return "oracle";
    case Method::formula: return "formula";
    case Method::unital: return "unital";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "oracle") return Method::oracle;
  if (s == "formula") return Method::formula;
  if (s == "unital") return Method::unital;
  throw UsageError("unknown method '" + std::string(s) + "'");
}

struct CountRecord {
  std::size_t n = 0;
  std::size_t k = 0;
  Int r = 1;
  Int count = 0;
  Method method = Method::oracle;
  std::string engine_version{kEngineVersion};

  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

inline nlohmann::ordered_json to_json(const CountRecord& rec) {
  return {{"n", rec.n},           {"k", rec.k},
          {"r", rec.r},           {"count", rec.count},
          {"method", to_string(rec.method)}, {"version", rec.engine_version}};
}

inline CountRecord count_record_from_json(const nlohmann::json& j) {
  CountRecord rec;
  rec.n = j.at("n").get<std::size_t>();
  rec.k = j.at("k").get<std::size_t>();
  rec.r = j.at("r").get<Int>();
  rec.count = j.at("count").get<Int>();
  rec.method = parse_method(j.at("method").get<std::string>());
  rec.engine_version = j.at("version").get<std::string>();
  if (rec.r < 1 || rec.count < 0) throw UsageError("count record out of range");
  if (rec.k == 0 && rec.method == Method::formula)
    throw UsageError("count record: k = 0 records are oracle or unital");
  return rec;
}

/// {"ambient": n, "rank": m, "basis": [[...], ...]}
inline nlohmann::ordered_json to_json(const Lattice& l) {
  nlohmann::ordered_json basis = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < l.rank(); ++i) basis.push_back(l.basis().row_vector(i));
  return {{"ambient", l.ambient_dim()}, {"rank", l.rank()}, {"basis", std::move(basis)}};
}

inline Lattice lattice_from_json(const nlohmann::json& j) {
  const auto ambient = j.at("ambient").get<std::size_t>();
  const auto rows = j.at("basis").get<std::vector<IntVector>>();
  Lattice l = lattice_from_rows(ambient, rows);
  if (l.rank() != j.at("rank").get<std::size_t>()) throw UsageError("lattice JSON: rank does not match basis");
  return l;
}

inline nlohmann::ordered_json to_json(const VerificationReport& rep) {
  nlohmann::ordered_json j{{"n", rep.n},
                           {"k", rep.k},
                           {"r", rep.r},
                           {"bound_multiplier", rep.bound_multiplier},
                           {"oracle_count", rep.oracle_count},
                           {"formula_count", rep.formula_count},
                           {"stirling_factor", rep.stirling_factor},
                           {"phi_base", rep.phi_base},
                           {"witnesses_checked", rep.witnesses_checked},
                           {"status", rep.pass ? "pass" : "fail"}};
  if (!rep.failure.empty()) j["failure"] = rep.failure;
  if (rep.counterexample) j["counterexample"] = to_json(*rep.counterexample);
  return j;
}

inline nlohmann::ordered_json to_json(const SetPartition& p) {
  return p.blocks();
}

}  // namespace subring
