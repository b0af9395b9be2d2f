#include "ordstat/json_io.hpp"

#include "ordstat/error.hpp"

namespace ordstat {
namespace {

std::string child(const std::string& where, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return where + "/" + escaped;
}

std::string child(const std::string& where, std::size_t index) {
  return where + "/" + std::to_string(index);
}

const Json& require(const Json& j, const std::string& where, const std::string& key) {
  if (!j.is_object()) throw SchemaError(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(child(where, key), "required field is missing");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where, "expected a number");
  return j.get<double>();
}

std::int64_t integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where, "expected an integer");
  return j.get<std::int64_t>();
}

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where, "expected an array");
  return j;
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where, "expected a string");
  return j.get<std::string>();
}

void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw SchemaError(child(where, it.key()), "unknown field");
  }
}

}  // namespace

PiecewiseCdf cdf_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where, "expected an object");
  check_keys(j, where, {"segments", "atoms"});
  std::vector<PiecewiseCdf::Segment> segments;
  std::vector<PiecewiseCdf::Atom> atoms;
  if (j.contains("segments")) {
    const std::string at = child(where, "segments");
    const Json& arr = array(j["segments"], at);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = child(at, i);
      const Json& s = arr[i];
      if (!s.is_object()) throw SchemaError(p, "expected an object");
      check_keys(s, p, {"x_lo", "x_hi", "f_lo", "f_hi"});
      segments.push_back({number(require(s, p, "x_lo"), child(p, "x_lo")),
                          number(require(s, p, "x_hi"), child(p, "x_hi")),
                          number(require(s, p, "f_lo"), child(p, "f_lo")),
                          number(require(s, p, "f_hi"), child(p, "f_hi"))});
    }
  }
  if (j.contains("atoms")) {
    const std::string at = child(where, "atoms");
    const Json& arr = array(j["atoms"], at);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = child(at, i);
      const Json& a = arr[i];
      if (!a.is_object()) throw SchemaError(p, "expected an object");
      check_keys(a, p, {"x", "mass"});
      atoms.push_back({number(require(a, p, "x"), child(p, "x")),
                       number(require(a, p, "mass"), child(p, "mass"))});
    }
  }
  try {
    return PiecewiseCdf(std::move(segments), std::move(atoms));
  } catch (const DomainError& e) {
    throw SchemaError(where, e.what());
  }
}

Json to_json(const PiecewiseCdf& cdf) {
  Json segments = Json::array();
  for (const auto& s : cdf.segments())
    segments.push_back({{"x_lo", s.x_lo}, {"x_hi", s.x_hi}, {"f_lo", s.f_lo}, {"f_hi", s.f_hi}});
  Json atoms = Json::array();
  for (const auto& a : cdf.atoms()) atoms.push_back({{"x", a.x}, {"mass", a.mass}});
  return {{"segments", segments}, {"atoms", atoms}};
}

ParameterDomain domain_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where, "expected an object");
  check_keys(j, where, {"box", "marginals"});
  ParameterDomain d;
  const std::string box_at = child(where, "box");
  const Json& box = array(require(j, where, "box"), box_at);
  if (box.empty()) throw SchemaError(box_at, "dimension must be positive");
  for (std::size_t i = 0; i < box.size(); ++i) {
    const std::string p = child(box_at, i);
    const Json& iv = array(box[i], p);
    if (iv.size() != 2) throw SchemaError(p, "expected [lo, hi]");
    const double lo = number(iv[0], child(p, 0));
    const double hi = number(iv[1], child(p, 1));
    if (!(lo <= hi)) throw SchemaError(p, "interval needs lo <= hi");
    d.box.emplace_back(lo, hi);
  }
  if (j.contains("marginals")) {
    const std::string m_at = child(where, "marginals");
    const Json& ms = array(j["marginals"], m_at);
    if (ms.size() != box.size())
      throw SchemaError(m_at, "expected one marginal per box coordinate");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string p = child(m_at, i);
      if (!ms[i].is_object()) throw SchemaError(p, "expected an object");
      const std::string kind = text(require(ms[i], p, "kind"), child(p, "kind"));
      if (kind == "uniform") {
        check_keys(ms[i], p, {"kind"});
        d.marginals.push_back(Marginal::uniform());
      } else if (kind == "truncated_gaussian") {
        check_keys(ms[i], p, {"kind", "mean", "sigma"});
        const double mean = number(require(ms[i], p, "mean"), child(p, "mean"));
        const double sigma = number(require(ms[i], p, "sigma"), child(p, "sigma"));
        if (!(sigma > 0.0)) throw SchemaError(child(p, "sigma"), "sigma must be positive");
        d.marginals.push_back(Marginal::truncated_gaussian(mean, sigma));
      } else {
        throw SchemaError(child(p, "kind"), "unknown marginal kind '" + kind + "'");
      }
    }
  } else {
    d.marginals.assign(box.size(), Marginal::uniform());
  }
  try {
    d.validate();
  } catch (const DomainError& e) {
    throw SchemaError(where, e.what());
  }
  return d;
}

Json to_json(const ParameterDomain& domain) {
  Json box = Json::array();
  for (const auto& [lo, hi] : domain.box) box.push_back({lo, hi});
  Json ms = Json::array();
  for (const auto& m : domain.marginals) {
    if (m.kind == Marginal::Kind::Uniform)
      ms.push_back({{"kind", "uniform"}});
    else
      ms.push_back({{"kind", "truncated_gaussian"}, {"mean", m.mean}, {"sigma", m.sigma}});
  }
  return {{"box", box}, {"marginals", ms}};
}

UncertainModel model_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("", "expected an object");
  check_keys(j, "", {"label", "domain", "expression", "undefined_policy"});
  ParameterDomain domain = domain_from_json(require(j, "", "domain"), "/domain");
  const std::string source = text(require(j, "", "expression"), "/expression");
  std::optional<QuantityExpr> expr;
  try {
    expr = QuantityExpr::parse(source);
  } catch (const ParseError& e) {
    throw SchemaError("/expression", e.what());
  }
  UncertainModel model{std::move(domain), std::move(*expr), "", UndefinedPolicy::Reject};
  if (j.contains("label")) model.label = text(j["label"], "/label");
  if (j.contains("undefined_policy")) {
    const std::string p = text(j["undefined_policy"], "/undefined_policy");
    if (p == "reject") model.policy = UndefinedPolicy::Reject;
    else if (p == "fail") model.policy = UndefinedPolicy::Fail;
    else throw SchemaError("/undefined_policy", "expected \"reject\" or \"fail\"");
  }
  try {
    model.validate();
  } catch (const DomainError& e) {
    throw SchemaError("/expression", e.what());
  }
  return model;
}

std::vector<InequalityFixture> fixtures_from_json(const Json& j) {
  const Json& arr = array(require(j, "", "fixtures"), "/fixtures");
  std::vector<InequalityFixture> out;
  for (std::size_t f = 0; f < arr.size(); ++f) {
    const std::string p = child("/fixtures", f);
    const Json& fx = arr[f];
    if (!fx.is_object()) throw SchemaError(p, "expected an object");
    check_keys(fx, p, {"id", "cdf", "cases"});
    InequalityFixture fixture{text(require(fx, p, "id"), child(p, "id")),
                              cdf_from_json(require(fx, p, "cdf"), child(p, "cdf")),
                              {}};
    const std::string cases_at = child(p, "cases");
    const Json& cases = array(require(fx, p, "cases"), cases_at);
    for (std::size_t c = 0; c < cases.size(); ++c) {
      const std::string cp = child(cases_at, c);
      const Json& cs = cases[c];
      if (!cs.is_object()) throw SchemaError(cp, "expected an object");
      check_keys(cs, cp, {"indices", "thresholds", "N"});
      InequalityCase ic{{}, integer(require(cs, cp, "N"), child(cp, "N"))};
      const Json& idx = array(require(cs, cp, "indices"), child(cp, "indices"));
      for (std::size_t i = 0; i < idx.size(); ++i)
        ic.query.indices.push_back(integer(idx[i], child(child(cp, "indices"), i)));
      const Json& th = array(require(cs, cp, "thresholds"), child(cp, "thresholds"));
      for (std::size_t i = 0; i < th.size(); ++i)
        ic.query.thresholds.push_back(number(th[i], child(child(cp, "thresholds"), i)));
      try {
        ic.query.validate(ic.sample_size);
      } catch (const DomainError& e) {
        throw SchemaError(cp, e.what());
      }
      fixture.cases.push_back(std::move(ic));
    }
    out.push_back(std::move(fixture));
  }
  return out;
}

Json to_json(const AnalysisReport& r) {
  Json curve = Json::array();
  for (const auto& p : r.curve) curve.push_back({{"n", p.n}, {"bound", p.bound}});
  return {
      {"label", r.label},
      {"N", r.sample_size},
      {"seed", r.seed},
      {"rejected", r.rejected},
      {"truncation_rejections", r.truncation_rejections},
      {"extremes",
       {{"epsilon", r.extremes.epsilon},
        {"min", {{"value", r.extremes.min.value}, {"confidence", r.extremes.min.confidence}}},
        {"max", {{"value", r.extremes.max.value}, {"confidence", r.extremes.max.confidence}}}}},
      {"tolerance",
       {{"m", r.tolerance.m},
        {"n", r.tolerance.n},
        {"epsilon", r.tolerance.epsilon},
        {"lower", r.tolerance.lower},
        {"upper", r.tolerance.upper},
        {"confidence", r.tolerance.confidence}}},
      {"planner",
       {{"epsilon", r.planner.epsilon},
        {"delta", r.planner.delta},
        {"min_sample_size_extreme", r.planner.min_sample_size_extreme},
        {"min_sample_size_tolerance", r.planner.min_sample_size_tolerance}}},
      {"curve", curve},
  };
}

Json to_json(const std::vector<Verdict>& verdicts) {
  Json out = Json::array();
  for (const auto& v : verdicts)
    out.push_back({{"fixture", v.fixture},
                   {"check", v.check},
                   {"expected", v.expected},
                   {"observed", v.observed},
                   {"sigma", v.sigma},
                   {"gap", v.gap},
                   {"pass", v.pass}});
  return out;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace ordstat
