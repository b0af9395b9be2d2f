#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "ordstat/distributions.hpp"
#include "ordstat/experiment.hpp"
#include "ordstat/oracle.hpp"

namespace ordstat {

using Json = nlohmann::json;

// Readers throw SchemaError carrying a JSON pointer to the offending field;
// `where` is the pointer of the value being read.

/// {"segments": [{"x_lo","x_hi","f_lo","f_hi"}...], "atoms": [{"x","mass"}...]}
PiecewiseCdf cdf_from_json(const Json& j, const std::string& where = "");
Json to_json(const PiecewiseCdf& cdf);

/// {"box": [[lo, hi], ...], "marginals": [{"kind": "uniform"} |
///  {"kind": "truncated_gaussian", "mean": m, "sigma": s}, ...]}
/// "marginals" may be omitted (all uniform).
ParameterDomain domain_from_json(const Json& j, const std::string& where = "");
Json to_json(const ParameterDomain& domain);

/// {"label": text, "domain": {...}, "expression": text,
///  "undefined_policy": "reject" | "fail"}
UncertainModel model_from_json(const Json& j);

/// {"fixtures": [{"id", "cdf": {...}, "cases": [{"indices", "thresholds", "N"}]}]}
std::vector<InequalityFixture> fixtures_from_json(const Json& j);

Json to_json(const AnalysisReport& report);
Json to_json(const std::vector<Verdict>& verdicts);

/// Parses text, mapping syntax errors to SchemaError at the root.
Json parse_json_text(const std::string& text);

}  // namespace ordstat
