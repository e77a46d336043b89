#include "core/report_io.hpp"

#include <cstdio>

#include "json.hpp"

namespace nlk::report {

namespace {

using Json = nlohmann::ordered_json;
using verify::Verdict;

Json checks_json(const std::vector<verify::Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name},
                   {"value", c.value},
                   {"threshold", c.threshold},
                   {"pass", c.pass}});
  }
  return out;
}

Json growth_json(const ode::GrowthEstimate& g) {
  return {{"kind", ode::growth_kind_name(g.kind)},
          {"exponent", g.exponent},
          {"power_slope", g.power_slope},
          {"log_coefficient", g.log_coefficient},
          {"log_offset", g.log_offset},
          {"fit_window", {g.fit_window.lo, g.fit_window.hi}},
          {"residual", g.residual},
          {"conclusive", g.conclusive}};
}

Json tolerances_json(const verify::Tolerances& t) {
  return {{"residual", t.residual},
          {"exponent", t.exponent},
          {"log_fit", t.log_fit},
          {"power_fit", t.power_fit},
          {"bounded_exponent", t.bounded_exponent},
          {"lagrange", t.lagrange},
          {"match", t.match},
          {"wronskian", t.wronskian},
          {"ode_rtol", t.ode_rtol},
          {"ode_atol", t.ode_atol},
          {"pde", t.pde},
          {"mass", t.mass},
          {"operator_equivalence", t.operator_equivalence},
          {"kernel_element", t.kernel_element}};
}

Json report_json(const verify::VerificationReport& r) {
  Json modes = Json::array();
  for (const auto& m : r.modes) {
    Json j = {{"k", m.k},
              {"lambda", m.lambda},
              {"multiplicity", m.multiplicity},
              {"bounded_solution_found", m.bounded_solution_found},
              {"bounded_solution_matches", m.bounded_solution_matches},
              {"second_solution_growth", growth_json(m.second_solution_growth)},
              {"checks", checks_json(m.checks)},
              {"verdict", verify::verdict_name(m.verdict)}};
    if (!m.diagnostic.empty()) j["diagnostic"] = m.diagnostic;
    modes.push_back(std::move(j));
  }
  Json out = {{"dimension", r.dimension},
              {"k_max", r.k_max},
              {"seed", r.seed},
              {"tolerances", tolerances_json(r.tolerances)},
              {"checks", checks_json(r.checks)},
              {"modes", std::move(modes)}};
  out["kernel_dimension"] =
      r.kernel_dimension ? Json(*r.kernel_dimension) : Json(nullptr);
  out["verdict"] = verify::verdict_name(r.verdict);
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Verdict overall(const std::vector<verify::VerificationReport>& reports) {
  Verdict v = Verdict::pass;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::inconclusive) return Verdict::inconclusive;
    if (r.verdict == Verdict::fail) v = Verdict::fail;
  }
  return v;
}

std::string to_json(const std::vector<verify::VerificationReport>& reports) {
  Json doc;
  doc["reports"] = Json::array();
  for (const auto& r : reports) doc["reports"].push_back(report_json(r));
  doc["verdict"] = verify::verdict_name(overall(reports));
  return doc.dump(2) + "\n";
}

std::string to_csv(const std::vector<verify::VerificationReport>& reports) {
  std::string out = "dimension,k,lambda,check,value,threshold,pass\n";
  auto row = [&](int dim, const std::string& k, const std::string& lambda,
                 const verify::Check& c) {
    out += std::to_string(dim) + "," + k + "," + lambda + "," + c.name + "," +
           num(c.value) + "," + num(c.threshold) + "," +
           (c.pass ? "true" : "false") + "\n";
  };
  for (const auto& r : reports) {
    for (const auto& c : r.checks) row(r.dimension, "", "", c);
    for (const auto& m : r.modes) {
      for (const auto& c : m.checks) {
        row(r.dimension, std::to_string(m.k), num(m.lambda), c);
      }
    }
  }
  return out;
}

}  // namespace nlk::report
