#include "gcgeo/scene.hpp"

#include <fstream>

#include "gcgeo/fixtures.hpp"

namespace gcgeo {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw std::invalid_argument("scene: " + what);
}

struct Constraint {
  JetScalar expr;
  std::string kind;  // abs_ge | abs_le | re_ge | re_le
  double value;
};

ChartPtr parse_chart(const json& jc) {
  if (!jc.contains("name") || !jc.contains("dim") || !jc.contains("box"))
    schema_error("chart needs name, dim, box");
  const std::string name = jc.at("name").get<std::string>();
  const int dim = jc.at("dim").get<int>();
  std::vector<std::string> coords;
  if (jc.contains("coords"))
    coords = jc.at("coords").get<std::vector<std::string>>();
  else
    for (int j = 0; j < dim; ++j) coords.push_back("x" + std::to_string(j + 1));
  if (static_cast<int>(coords.size()) != dim) schema_error("coords length != dim");
  std::vector<std::pair<double, double>> box;
  for (const auto& b : jc.at("box")) {
    if (!b.is_array() || b.size() != 2) schema_error("box entries must be [lo, hi]");
    box.emplace_back(b[0].get<double>(), b[1].get<double>());
  }
  if (static_cast<int>(box.size()) != dim) schema_error("box length != dim");
  auto constraints = std::make_shared<std::vector<Constraint>>();
  if (jc.contains("constraints")) {
    for (const auto& c : jc.at("constraints")) {
      Constraint cc;
      cc.expr = parse_expr(c.at("expr").get<std::string>(), coords);
      cc.kind = c.at("kind").get<std::string>();
      cc.value = c.at("value").get<double>();
      if (cc.kind != "abs_ge" && cc.kind != "abs_le" && cc.kind != "re_ge" &&
          cc.kind != "re_le")
        schema_error("unknown constraint kind '" + cc.kind + "'");
      constraints->push_back(std::move(cc));
    }
  }
  auto domain = [constraints](const RVec& p) {
    JetContext ctx(p);
    for (const auto& c : *constraints) {
      const cplx v = c.expr.value(ctx);
      if (c.kind == "abs_ge" && !(std::abs(v) >= c.value)) return false;
      if (c.kind == "abs_le" && !(std::abs(v) <= c.value)) return false;
      if (c.kind == "re_ge" && !(v.real() >= c.value)) return false;
      if (c.kind == "re_le" && !(v.real() <= c.value)) return false;
    }
    return true;
  };
  return std::make_shared<Chart>(name, dim, std::move(box), domain, coords);
}

size_t parse_mask(const std::string& key, int dim) {
  size_t mask = 0;
  if (key.empty()) return 0;
  size_t pos = 0;
  while (pos < key.size()) {
    size_t comma = key.find(',', pos);
    if (comma == std::string::npos) comma = key.size();
    const int idx = std::stoi(key.substr(pos, comma - pos));
    if (idx < 1 || idx > dim) schema_error("multi-index entry out of range: " + key);
    const size_t bit = size_t(1) << (idx - 1);
    if (mask & bit) schema_error("repeated multi-index entry: " + key);
    mask |= bit;
    pos = comma + 1;
  }
  return mask;
}

FormField parse_field(const json& jf, const std::map<std::string, ChartPtr>& charts) {
  const std::string chart_name = jf.at("chart").get<std::string>();
  auto it = charts.find(chart_name);
  if (it == charts.end()) schema_error("field references unknown chart '" + chart_name + "'");
  ChartPtr chart = it->second;
  Multivector<JetScalar> coeffs(chart->dim());
  for (const auto& [key, value] : jf.at("coefficients").items())
    coeffs[parse_mask(key, chart->dim())] =
        parse_expr(value.get<std::string>(), chart->coord_names());
  return FormField(chart, std::move(coeffs));
}

CheckFn generic_check(const std::string& name, const std::string& kind, const Scene& scene,
                      const json& spec, double tol) {
  auto field_of = [&scene](const json& spec, const char* key) {
    const std::string fname = spec.at(key).get<std::string>();
    auto it = scene.fields.find(fname);
    if (it == scene.fields.end()) schema_error("check references unknown field '" + fname + "'");
    return it->second;
  };
  if (kind == "closed") {
    FormField f = field_of(spec, "field");
    return [name, f, tol](const RunConfig& cfg) {
      CheckResult r{name, "user field has vanishing exterior derivative", 0, 0.0,
                    cfg.tolerance_for(name, tol), ""};
      try {
        Rng rng = cfg.rng_for(name);
        for (const RVec& p : f.chart()->sample_many(cfg.samples, rng)) {
          r.max_residual = std::max(r.max_residual, form_norm(exterior_d(f, p)));
          ++r.samples;
        }
        r.status = r.max_residual < r.tolerance ? "pass" : "fail";
      } catch (const SamplingError&) {
        r.status = "inconclusive";
      }
      return r;
    };
  }
  if (kind == "pure-spinor") {
    FormField f = field_of(spec, "field");
    return [name, f, tol](const RunConfig& cfg) {
      CheckResult r{name, "user field is a pure spinor at sampled points", 0, 0.0,
                    cfg.tolerance_for(name, tol), ""};
      try {
        Rng rng = cfg.rng_for(name);
        const int m = f.chart()->dim();
        for (const RVec& p : f.chart()->sample_many(cfg.samples, rng)) {
          r.max_residual =
              std::max(r.max_residual, double(std::abs(annihilator(f.value(p)).dim() - m)));
          ++r.samples;
        }
        r.status = r.max_residual < r.tolerance ? "pass" : "fail";
      } catch (const SamplingError&) {
        r.status = "inconclusive";
      }
      return r;
    };
  }
  if (kind == "clifford-integrability") {
    FormField rho = field_of(spec, "rho");
    FormField h = field_of(spec, "twist");
    return [name, rho, h, tol](const RunConfig& cfg) {
      CheckResult r{name, "(d + twist^) of the field lies in its Clifford image", 0, 0.0,
                    cfg.tolerance_for(name, tol), ""};
      try {
        Rng rng = cfg.rng_for(name);
        for (const RVec& p : rho.chart()->sample_many(cfg.samples, rng)) {
          r.max_residual =
              std::max(r.max_residual, in_clifford_image(twisted_d(rho, h, p), rho.value(p)));
          ++r.samples;
        }
        r.status = r.max_residual < r.tolerance ? "pass" : "fail";
      } catch (const SamplingError&) {
        r.status = "inconclusive";
      }
      return r;
    };
  }
  schema_error("unknown generic check kind '" + kind + "'");
}

}  // namespace

Scene load_scene(const json& doc) {
  Scene scene;
  if (!doc.contains("schema") || doc.at("schema").get<int>() != 1)
    schema_error("missing or unsupported schema version (expected 1)");
  if (doc.contains("seed")) scene.config.seed = doc.at("seed").get<uint64_t>();
  if (doc.contains("samples")) scene.config.samples = doc.at("samples").get<int>();
  if (doc.contains("tolerances"))
    for (const auto& [k, v] : doc.at("tolerances").items())
      scene.config.tol_by_check[k] = v.get<double>();
  if (doc.contains("charts"))
    for (const auto& jc : doc.at("charts")) {
      ChartPtr c = parse_chart(jc);
      scene.charts[c->name()] = c;
    }
  if (doc.contains("fields"))
    for (const auto& jf : doc.at("fields"))
      scene.fields.emplace(jf.at("name").get<std::string>(), parse_field(jf, scene.charts));
  if (!doc.contains("checks")) schema_error("no checks selected");
  const auto& reg = check_registry();
  int user_index = 0;
  for (const auto& jc : doc.at("checks")) {
    if (jc.is_string()) {
      const std::string name = jc.get<std::string>();
      auto it = reg.find(name);
      if (it == reg.end()) {
        // allow suite names as shorthand
        try {
          for (const auto& n : builtin_suite(name)) scene.checks.emplace_back(n, reg.at(n));
          continue;
        } catch (const std::invalid_argument&) {
          schema_error("unknown check '" + name + "'");
        }
      }
      scene.checks.emplace_back(name, it->second);
    } else if (jc.is_object()) {
      const std::string kind = jc.at("check").get<std::string>();
      std::string name = jc.contains("name") ? jc.at("name").get<std::string>()
                                             : "user." + std::to_string(user_index++);
      const double tol = jc.contains("tolerance") ? jc.at("tolerance").get<double>() : 1e-8;
      scene.checks.emplace_back(name, generic_check(name, kind, scene, jc, tol));
    } else {
      schema_error("checks entries must be names or objects");
    }
  }
  return scene;
}

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema_error("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    schema_error(std::string("JSON parse failure: ") + e.what());
  }
  return load_scene(doc);
}

nlohmann::ordered_json export_scene(const std::string& builtin) {
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["seed"] = 42;
  doc["samples"] = 64;
  nlohmann::ordered_json charts = nlohmann::ordered_json::array();
  nlohmann::ordered_json fields = nlohmann::ordered_json::array();
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();

  auto chart_json = [](const Chart& c, const std::vector<nlohmann::ordered_json>& constraints) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name();
    jc["dim"] = c.dim();
    jc["coords"] = c.coord_names();
    nlohmann::ordered_json box = nlohmann::ordered_json::array();
    for (auto [lo, hi] : c.box()) box.push_back({lo, hi});
    jc["box"] = box;
    jc["constraints"] = constraints;
    return jc;
  };
  auto constraint = [](const std::string& expr, const std::string& kind, double v) {
    nlohmann::ordered_json c;
    c["expr"] = expr;
    c["kind"] = kind;
    c["value"] = v;
    return c;
  };
  auto field_json = [](const std::string& name, const FormField& f) {
    nlohmann::ordered_json jf;
    jf["name"] = name;
    jf["chart"] = f.chart()->name();
    nlohmann::ordered_json coeffs;
    for (size_t mask = 0; mask < f.coeffs().mask_count(); ++mask) {
      if (f.coeffs()[mask].is_zero()) continue;
      std::string key;
      for (size_t rest = mask; rest; rest &= rest - 1) {
        if (!key.empty()) key += ",";
        key += std::to_string(__builtin_ctzll(rest) + 1);
      }
      coeffs[key] = f.coeffs()[mask].str();
    }
    jf["coefficients"] = std::move(coeffs);
    return jf;
  };

  if (builtin == "hopf") {
    HopfData hd = hopf_fixture();
    const std::string r2 = "abs2(a1+i*b1)+abs2(a2+i*b2)";
    std::vector<nlohmann::ordered_json> shell_cons = {
        constraint(r2, "re_ge", 1.05 * 1.05), constraint(r2, "re_le", 1.95 * 1.95)};
    auto with = [&shell_cons, &constraint](std::initializer_list<nlohmann::ordered_json> more) {
      std::vector<nlohmann::ordered_json> v = shell_cons;
      for (const auto& m : more) v.push_back(m);
      return v;
    };
    charts.push_back(chart_json(*hd.shell, shell_cons));
    charts.push_back(chart_json(*hd.chart_c, with({constraint("a2+i*b2", "abs_ge", 0.1)})));
    charts.push_back(chart_json(*hd.chart_w, with({constraint("a1+i*b1", "abs_ge", 0.1),
                                                   constraint("a2+i*b2", "abs_ge", 0.1)})));
    charts.push_back(
        chart_json(*hd.chart_z, with({constraint("a2+i*b2", "abs_ge", 0.1),
                                      constraint("(a1+i*b1)/conj(a2+i*b2)", "abs_le", 0.45)})));
    fields.push_back(field_json("C", hd.c_form));
    fields.push_back(field_json("rho", hd.rho));
    fields.push_back(field_json("H", hd.h_twist));
    fields.push_back(field_json("W", hd.w_form));
    fields.push_back(field_json("Z", hd.z_form));
    fields.push_back(field_json("B1", hd.b1));
    fields.push_back(field_json("B2", hd.b2));
    for (const auto& n : builtin_suite("hopf")) checks.push_back(n);
  } else if (builtin == "phi22") {
    Phi22Data pd = phi22_fixture();
    charts.push_back(chart_json(*pd.g.base, {constraint("u2+i*v2", "abs_le", 0.9)}));
    charts.push_back(chart_json(*pd.g.arrows, {constraint("u2+i*v2", "abs_le", 0.9),
                                               constraint("(u2+i*v2)*exp(c2+i*d2)", "abs_le",
                                                          0.9)}));
    fields.push_back(field_json("Omega", pd.omega));
    for (const auto& n : builtin_suite("phi22")) checks.push_back(n);
  } else {
    for (const auto& n : builtin_suite(builtin)) checks.push_back(n);
  }
  doc["charts"] = std::move(charts);
  doc["fields"] = std::move(fields);
  doc["checks"] = std::move(checks);
  return doc;
}

}  // namespace gcgeo
