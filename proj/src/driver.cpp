#include "tdg/driver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "tdg/error.hpp"
#include "tdg/mesh.hpp"
#include "tdg/solver.hpp"

namespace tdg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> k{
      "case", "method", "p", "q", "mode", "lambda1", "lambda2", "a", "b", "dim", "boundary", "levels", "level",
      "lambda1_list", "flux.alpha", "flux.beta", "flux.delta", "quadrature.order", "fictitious.gamma", "fictitious.patch", "output",
      "seed", "properties.random_tensor", "properties.rho_max", "properties.dim", "properties.samples",
      "debug.corrupt_flux_sign"};
  return k;
}

int case_dim(const std::string& id, int requested) {
  if (id == "hom2d_hat" || id == "nonhom2d") return 2;
  if (id == "hom3d_hat" || id == "nonhom3d") return 3;
  if (id == "nonhom1d") return 1;
  return requested;
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, std::string field, const std::string& msg)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " + field + ": " + msg),
      line_(line),
      field_(std::move(field)) {}

Config Config::parse(std::istream& in, const std::string& source) {
  Config c;
  c.source_ = source;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, text, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, line, "(empty)", "missing key");
    for (char ch : key)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.'))
        throw ConfigError(source, line, key, "invalid character in key");
    if (value.empty()) throw ConfigError(source, line, key, "missing value");
    if (c.entries_.count(key)) throw ConfigError(source, line, key, "duplicate key (first set on line " +
                                                                      std::to_string(c.entries_[key].line) + ")");
    c.entries_[key] = {value, line};
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "--config", "cannot open file");
  return parse(in, path);
}

const Config::Entry& Config::entry(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(source_, 0, key, "required key is missing");
  return it->second;
}

int Config::line_of(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

void Config::fail(const std::string& key, const std::string& msg) const {
  throw ConfigError(source_, line_of(key), key, msg);
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> k;
  for (const auto& [key, e] : entries_) k.push_back(key);
  return k;
}

std::string Config::get_string(const std::string& key) const { return entry(key).value; }

int Config::get_int(const std::string& key) const {
  const std::string& v = entry(key).value;
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(x);
  } catch (const std::exception&) {
    fail(key, "expected an integer, got '" + v + "'");
  }
}

double Config::get_double(const std::string& key) const {
  const std::string& v = entry(key).value;
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(key, "expected a number, got '" + v + "'");
  }
}

bool Config::get_bool(const std::string& key) const {
  const std::string& v = entry(key).value;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(key, "expected true or false, got '" + v + "'");
}

std::vector<int> Config::get_int_list(const std::string& key) const {
  std::vector<int> out;
  for (const std::string& s : split_list(entry(key).value)) {
    try {
      std::size_t pos = 0;
      const long x = std::stol(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      out.push_back(static_cast<int>(x));
    } catch (const std::exception&) {
      fail(key, "expected a list of integers, got item '" + s + "'");
    }
  }
  return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& s : split_list(entry(key).value)) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(s, &pos);
      if (pos != s.size() || !std::isfinite(x)) throw std::invalid_argument(s);
      out.push_back(x);
    } catch (const std::exception&) {
      fail(key, "expected a list of numbers, got item '" + s + "'");
    }
  }
  return out;
}

const char* to_string(RunMethod m) {
  switch (m) {
    case RunMethod::Method1:
      return "method1";
    case RunMethod::Method2:
      return "method2";
    case RunMethod::Combined:
      return "combined";
  }
  return "?";
}

RunConfig RunConfig::from(const Config& cfg) {
  for (const std::string& k : cfg.keys())
    if (!known_keys().count(k)) cfg.fail(k, "unknown key");

  RunConfig r;
  if (cfg.has("case")) {
    r.case_id = cfg.get_string("case");
    bool ok = false;
    for (const std::string& id : case_ids()) ok = ok || id == r.case_id;
    if (!ok) cfg.fail("case", "unknown case '" + r.case_id + "'");
  }
  if (cfg.has("method")) {
    const std::string m = cfg.get_string("method");
    if (m == "method1") r.method = RunMethod::Method1;
    else if (m == "method2") r.method = RunMethod::Method2;
    else if (m == "combined") r.method = RunMethod::Combined;
    else cfg.fail("method", "expected method1, method2 or combined");
  }
  if (cfg.has("p")) r.p = cfg.get_int("p");
  if (r.p < 0) cfg.fail("p", "degree must be >= 0");
  if (cfg.has("q")) {
    if (r.method != RunMethod::Combined) cfg.fail("q", "only used with method = combined");
    r.q = cfg.get_int("q");
    if (r.q < 0) cfg.fail("q", "degree must be >= 0");
  }
  if (cfg.has("mode")) {
    const std::string m = cfg.get_string("mode");
    if (m == "overlapping") r.mode = LocalMode::Overlapping;
    else if (m == "nonoverlapping") r.mode = LocalMode::Nonoverlapping;
    else cfg.fail("mode", "expected overlapping or nonoverlapping");
  }
  if (cfg.has("fictitious.gamma")) {
    r.gamma = cfg.get_double("fictitious.gamma");
    if (!(r.gamma >= 1)) cfg.fail("fictitious.gamma", "must be >= 1");
  }
  if (cfg.has("fictitious.patch")) {
    r.patch = cfg.get_int("fictitious.patch");
    if (r.patch < 1 || r.patch % 2 == 0) cfg.fail("fictitious.patch", "must be an odd number of cells >= 1");
  }

  const int requested_dim = cfg.has("dim") ? cfg.get_int("dim") : 2;
  if (requested_dim < 1 || requested_dim > 3) cfg.fail("dim", "must be 1, 2 or 3");
  r.tensor.dim = case_dim(r.case_id, requested_dim);
  if (cfg.has("dim") && r.tensor.dim != requested_dim) cfg.fail("dim", "case '" + r.case_id + "' has a fixed dimension");
  if (cfg.has("lambda1")) r.tensor.lambda1 = cfg.get_double("lambda1");
  if (cfg.has("lambda2")) r.tensor.lambda2 = cfg.get_double("lambda2");
  if (cfg.has("a")) r.tensor.a = cfg.get_double("a");
  if (cfg.has("b")) r.tensor.b = cfg.get_double("b");
  if (!(r.tensor.lambda1 > 0)) cfg.fail("lambda1", "must be > 0");
  if (!(r.tensor.lambda2 > 0)) cfg.fail("lambda2", "must be > 0");
  if (cfg.has("case") && r.tensor.dim > 1 && !cfg.has("lambda1") && !cfg.has("lambda1_list") && r.case_id != "zero" && r.case_id != "patch")
    cfg.fail("lambda1", "required: the anisotropy is not guessed (use lambda1 or lambda1_list)");

  if (cfg.has("boundary")) {
    try {
      r.boundary = parse_boundary_mode(cfg.get_string("boundary"));
    } catch (const Error& e) {
      cfg.fail("boundary", e.what());
    }
  }
  if (cfg.has("levels")) {
    r.levels = cfg.get_int_list("levels");
    if (r.levels.empty()) cfg.fail("levels", "empty list");
    for (std::size_t i = 0; i < r.levels.size(); ++i) {
      if (r.levels[i] < 0 || r.levels[i] > 8) cfg.fail("levels", "levels must lie in 0..8");
      if (i > 0 && r.levels[i] <= r.levels[i - 1]) cfg.fail("levels", "levels must be strictly ascending");
    }
  }
  if (cfg.has("level")) {
    r.level = cfg.get_int("level");
    if (*r.level < 0 || *r.level > 8) cfg.fail("level", "level must lie in 0..8");
  }
  if (cfg.has("lambda1_list")) {
    r.lambda1_list = cfg.get_double_list("lambda1_list");
    for (double x : r.lambda1_list)
      if (!(x > 0)) cfg.fail("lambda1_list", "entries must be > 0");
  }
  if (cfg.has("flux.alpha")) r.flux.alpha = cfg.get_double("flux.alpha");
  if (cfg.has("flux.beta")) r.flux.beta = cfg.get_double("flux.beta");
  if (cfg.has("flux.delta")) r.flux.delta = cfg.get_double("flux.delta");
  if (!(r.flux.alpha > 0)) cfg.fail("flux.alpha", "must be > 0");
  if (!(r.flux.beta > 0)) cfg.fail("flux.beta", "must be > 0");
  if (cfg.has("quadrature.order")) {
    r.quad_order = cfg.get_int("quadrature.order");
    if (r.quad_order < 1 || r.quad_order > 20) cfg.fail("quadrature.order", "must lie in 1..20");
  }
  if (cfg.has("output")) r.output = cfg.get_string("output");
  if (cfg.has("seed")) {
    const int s = cfg.get_int("seed");
    if (s < 0) cfg.fail("seed", "must be >= 0");
    r.seed = static_cast<std::uint64_t>(s);
  }
  if (cfg.has("debug.corrupt_flux_sign")) r.corrupt_flux_sign = cfg.get_bool("debug.corrupt_flux_sign");

  r.properties.seed = r.seed;
  r.properties.corrupt_flux_sign = r.corrupt_flux_sign;
  if (cfg.has("properties.random_tensor")) r.properties.random_tensor = cfg.get_bool("properties.random_tensor");
  if (cfg.has("properties.rho_max")) {
    r.properties.rho_max = cfg.get_double("properties.rho_max");
    if (!(r.properties.rho_max >= 1)) cfg.fail("properties.rho_max", "must be >= 1");
  }
  if (cfg.has("properties.dim")) {
    r.properties.dim = cfg.get_int("properties.dim");
    if (r.properties.dim < 1 || r.properties.dim > 3) cfg.fail("properties.dim", "must be 1, 2 or 3");
  }
  if (cfg.has("properties.samples")) {
    r.properties.samples = cfg.get_int("properties.samples");
    if (r.properties.samples < 1) cfg.fail("properties.samples", "must be >= 1");
  }

  if (!cfg.has("case")) {
    r.case_id.clear();
    return r;
  }
  const ManufacturedCase probe = [&] {
    try {
      return make_case(r.case_id, r.tensor, r.boundary_mode());
    } catch (const Error& e) {
      cfg.fail(cfg.has("lambda1") ? "lambda1" : "case", e.what());
    }
  }();
  if (!probe.homogeneous && r.method != RunMethod::Combined)
    cfg.fail("method", "case '" + r.case_id + "' has a source term; use method = combined");
  return r;
}

BoundaryMode RunConfig::boundary_mode() const {
  if (boundary) return *boundary;
  return case_id == "nonhom1d" ? BoundaryMode::Dirichlet : BoundaryMode::Neumann;
}

ErrorReport run_level(const RunConfig& cfg, int level, const TensorParameters& tensor) {
  if (cfg.case_id.empty()) throw ConfigError("<config>", 0, "case", "required key is missing");
  const ManufacturedCase mc = make_case(cfg.case_id, tensor, cfg.boundary_mode());
  auto mesh = std::make_shared<const SpaceTimeMesh>(generate(mc.domain(), mc.tensor, level, 1 << level, mc.boundary_spec()));
  auto space = std::make_shared<const TrefftzSpace>(mesh, cfg.p, mc.c);
  const ProblemData data = ProblemData::from_case(mc);
  const Method method = cfg.method == RunMethod::Method2 ? Method::II : Method::I;
  AssemblyOptions ao;
  ao.quad_order = cfg.quad_order;
  ao.corrupt_flux_sign = cfg.corrupt_flux_sign;

  BlockSystem sys = assemble(*space, method, cfg.flux, data, ao);
  std::shared_ptr<const Field> approx;
  if (cfg.method == RunMethod::Combined) {
    ParticularOptions po;
    po.mode = cfg.mode;
    po.gamma = cfg.gamma;
    po.patch = cfg.patch;
    po.quad_order = cfg.quad_order;
    auto part = std::make_shared<const ParticularSolution>(
        solve_particular(*mesh, cfg.q, mc.homogeneous ? nullptr : data.f, cfg.flux, mc.c, po));
    sys.rhs = assemble_nonhomogeneous_rhs(*space, method, cfg.flux, data, *part, ao);
    auto sol = std::make_shared<const DiscreteSolution>(solve(space, sys, method));
    approx = std::make_shared<const SumField>(part, sol);
  } else {
    approx = std::make_shared<const DiscreteSolution>(solve(space, sys, method));
  }

  auto exact = mc.exact_field();
  const L2Error l2 = l2_error_at_time(*mesh, *approx, *exact, mesh->time_nodes().back());
  SeminormOptions so;
  so.c = mc.c;
  const DifferenceField diff(approx, exact);
  const double dg_abs = dg_seminorm(*mesh, diff, cfg.flux, so);
  const double dg_ref = dg_seminorm(*mesh, *exact, cfg.flux, so);

  ErrorReport r;
  r.level = level;
  r.h = mesh->grid_spacing();
  r.h_hat = mesh->max_hat_diameter();
  r.dofs = space->size();
  r.err_v = l2.err_v;
  r.err_sigma = l2.err_sigma;
  const bool dg_absolute = dg_ref < 1e-14;
  r.err_dg = dg_absolute ? dg_abs : dg_abs / dg_ref;
  r.absolute = l2.absolute_v || l2.absolute_sigma || dg_absolute;
  r.rho = mc.tensor->rho();
  return r;
}

std::vector<ErrorReport> run_convergence(const RunConfig& cfg) {
  std::vector<ErrorReport> rows;
  for (int l : cfg.levels) rows.push_back(run_level(cfg, l, cfg.tensor));
  return rows;
}

std::vector<ErrorReport> run_rho_sweep(const RunConfig& cfg) {
  if (cfg.lambda1_list.size() < 2)
    throw ConfigError("<config>", 0, "lambda1_list", "a rho sweep needs at least two lambda1 values");
  std::vector<ErrorReport> rows;
  for (double l1 : cfg.lambda1_list) {
    TensorParameters tp = cfg.tensor;
    tp.lambda1 = l1;
    rows.push_back(run_level(cfg, cfg.single_level(), tp));
  }
  return rows;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5e", x);
  return buf;
}

namespace {

std::string rate_cell(const std::vector<double>& r, std::size_t k) {
  return k == 0 || std::isnan(r[k]) ? "" : format_number(r[k]);
}

}  // namespace

void write_convergence_csv(const std::vector<ErrorReport>& rows, std::ostream& os) {
  std::vector<double> h, ev, es, ed;
  for (const auto& r : rows) {
    h.push_back(r.h);
    ev.push_back(r.err_v);
    es.push_back(r.err_sigma);
    ed.push_back(r.err_dg);
  }
  const auto rv = rates(ev, h), rs = rates(es, h), rd = rates(ed, h);
  os << "level,h,dofs,err_v,rate_v,err_sigma,rate_sigma,err_dg,rate_dg\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    os << r.level << ',' << format_number(r.h) << ',' << r.dofs << ',' << format_number(r.err_v) << ','
       << rate_cell(rv, k) << ',' << format_number(r.err_sigma) << ',' << rate_cell(rs, k) << ','
       << format_number(r.err_dg) << ',' << rate_cell(rd, k) << '\n';
  }
}

void write_rho_csv(const std::vector<ErrorReport>& rows, std::ostream& os) {
  std::vector<double> rho, ev, es, ed;
  for (const auto& r : rows) {
    rho.push_back(r.rho);
    ev.push_back(r.err_v);
    es.push_back(r.err_sigma);
    ed.push_back(r.err_dg);
  }
  const auto rv = rho_rates(ev, rho), rs = rho_rates(es, rho), rd = rho_rates(ed, rho);
  os << "rho,err_v,rho_rate_v,err_sigma,rho_rate_sigma,err_dg,rho_rate_dg\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    os << format_number(r.rho) << ',' << format_number(r.err_v) << ',' << rate_cell(rv, k) << ','
       << format_number(r.err_sigma) << ',' << rate_cell(rs, k) << ',' << format_number(r.err_dg) << ','
       << rate_cell(rd, k) << '\n';
  }
}

void write_properties_csv(const std::vector<PropertyResult>& rows, std::ostream& os) {
  os << "property,status,value,tolerance,detail\n";
  for (const auto& r : rows) {
    std::string detail = r.detail;
    for (char& ch : detail)
      if (ch == ',') ch = ';';
    os << r.name << ',' << (r.passed ? "pass" : "fail") << ',' << format_number(r.value) << ','
       << format_number(r.tol) << ',' << detail << '\n';
  }
}

}  // namespace tdg
