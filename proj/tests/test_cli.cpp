#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "tdg/driver.hpp"

using namespace tdg;

namespace {

Config parse(const std::string& text) {
  std::istringstream is(text);
  return Config::parse(is, "test.cfg");
}

RunConfig run_config(const std::string& text) { return RunConfig::from(parse(text)); }

std::vector<std::string> csv_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("tdg_cli_test_" + name);
  std::ofstream(p) << text;
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TDG_BINARY) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("config syntax") {
  const Config c = parse("# comment\ncase = hom2d_hat  # trailing\n\nflux.alpha = 2.5\nlevels = 1, 2,3\n");
  CHECK(c.get_string("case") == "hom2d_hat");
  CHECK(c.get_double("flux.alpha") == 2.5);
  CHECK(c.get_int_list("levels") == std::vector<int>{1, 2, 3});
  CHECK(c.line_of("flux.alpha") == 4);
}

TEST_CASE("config errors carry line and field") {
  try {
    parse("case = hom2d_hat\nthis line has no equals\n");
    FAIL("parsed");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
  try {
    parse("p = 1\np = 2\n");
    FAIL("parsed");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.field() == "p");
  }
  try {
    run_config("case = hom2d_hat\nlambda1 = 0.5\np = two\n");
    FAIL("accepted");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(e.field() == "p");
    CHECK(std::string(e.what()).find("test.cfg:3") != std::string::npos);
  }
  try {
    run_config("case = hom2d_hat\nlambda1 = 0.5\nflux.gamma = 1\n");
    FAIL("accepted");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "flux.gamma");
  }
}

TEST_CASE("run config validation") {
  CHECK_THROWS_AS(run_config("case = hom2d_hat\n"), ConfigError);  // lambda1 is not guessed
  CHECK_THROWS_AS(run_config("case = nonhom1d\nmethod = method1\n"), ConfigError);
  CHECK_THROWS_AS(run_config("case = hom2d_hat\nlambda1 = 0.5\nq = 1\n"), ConfigError);
  CHECK_THROWS_AS(run_config("case = hom2d_hat\nlambda1 = 0.5\nlevels = 3, 2\n"), ConfigError);
  CHECK_THROWS_AS(run_config("case = hom2d_hat\nlambda1 = 0.5\nflux.alpha = -1\n"), ConfigError);
  CHECK_THROWS_AS(run_config("case = hom2d_hat\nlambda1 = 0.5\ndim = 3\n"), ConfigError);
  CHECK_THROWS_AS(run_config("case = hom5d\nlambda1 = 0.5\n"), ConfigError);
  const RunConfig r = run_config("case = nonhom1d\nmethod = combined\np = 2\nq = 2\nlevels = 2,3\n");
  CHECK(r.method == RunMethod::Combined);
  CHECK(r.mode == LocalMode::Nonoverlapping);
  CHECK(r.boundary_mode() == BoundaryMode::Dirichlet);
  CHECK(r.tensor.dim == 1);
  const RunConfig props = run_config("properties.random_tensor = true\nseed = 42\n");
  CHECK(props.properties.random_tensor);
  CHECK(props.case_id.empty());
  CHECK_THROWS_AS(run_level(props, 1, props.tensor), ConfigError);
}

TEST_CASE("convergence CSV layout and the hom2d p = 1 rates") {
  const RunConfig cfg = run_config("case = hom2d_hat\nmethod = method1\np = 1\nlambda1 = 0.561552812809\nlevels = 2,3,4\n");
  const auto rows = run_convergence(cfg);
  std::ostringstream os;
  write_convergence_csv(rows, os);
  const auto lines = csv_lines(os.str());
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "level,h,dofs,err_v,rate_v,err_sigma,rate_sigma,err_dg,rate_dg");
  const auto first = fields(lines[1]);
  REQUIRE(first.size() == 9);
  CHECK(first[0] == "2");
  CHECK(first[4].empty());
  CHECK(first[6].empty());
  CHECK(first[8].empty());
  CHECK(first[3].find('e') != std::string::npos);
  const auto last = fields(lines[3]);
  CHECK(std::stod(last[4]) == doctest::Approx(2.30).epsilon(0.3 / 2.30));
  CHECK(std::stod(last[8]) == doctest::Approx(1.49).epsilon(0.3 / 1.49));
  CHECK(format_number(0.0470123456) == "4.70123e-02");

  std::ostringstream again;
  write_convergence_csv(run_convergence(cfg), again);
  CHECK(again.str() == os.str());
}

TEST_CASE("nonhom1d (3,3) combined rates") {
  const RunConfig cfg = run_config("case = nonhom1d\nmethod = combined\np = 3\nq = 3\nlevels = 1,2,3\n");
  const auto rows = run_convergence(cfg);
  std::vector<double> ev, ed, h;
  for (const auto& r : rows) {
    ev.push_back(r.err_v);
    ed.push_back(r.err_dg);
    h.push_back(r.h);
  }
  CHECK(rates(ev, h).back() == doctest::Approx(4.28).epsilon(0.4 / 4.28));
  CHECK(rates(ed, h).back() == doctest::Approx(3.55).epsilon(0.4 / 3.55));
}

TEST_CASE("zero case reports absolute errors") {
  const RunConfig cfg = run_config("case = zero\ndim = 2\nlevels = 1\n");
  const ErrorReport r = run_level(cfg, 1, cfg.tensor);
  CHECK(r.absolute);
  CHECK(r.err_v == 0.0);
  CHECK(r.err_sigma == 0.0);
  CHECK(r.err_dg == 0.0);
}

TEST_CASE("identity twice in a rho sweep has rate 0") {
  const RunConfig cfg = run_config("case = hom2d_hat\nlambda1_list = 1, 1\nlevel = 1\n");
  const auto rows = run_rho_sweep(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].err_v == rows[1].err_v);
  std::ostringstream os;
  write_rho_csv(rows, os);
  const auto lines = csv_lines(os.str());
  CHECK(lines[0] == "rho,err_v,rho_rate_v,err_sigma,rho_rate_sigma,err_dg,rho_rate_dg");
  const auto second = fields(lines[2]);
  CHECK(std::stod(second[2]) == 0.0);
  CHECK(std::stod(second[4]) == 0.0);
  CHECK(std::stod(second[6]) == 0.0);
}

TEST_CASE("properties CSV") {
  std::vector<PropertyResult> res{{"a", true, 1e-13, 1e-12, "ok, fine"}, {"b", false, 2.0, 1.0, "bad"}};
  std::ostringstream os;
  write_properties_csv(res, os);
  const auto lines = csv_lines(os.str());
  CHECK(lines[0] == "property,status,value,tolerance,detail");
  CHECK(lines[1] == "a,pass,1.00000e-13,1.00000e-12,ok; fine");
  CHECK(lines[2].rfind("b,fail,", 0) == 0);
}

TEST_CASE("binary exit codes") {
  const auto ok = temp_file("ok.cfg", "case = nonhom1d\nmethod = combined\np = 1\nq = 1\nlevel = 1\n");
  const auto unknown = temp_file("unknown.cfg", "case = nonhom1d\nmethod = combined\nbogus = 1\n");
  const auto props = temp_file("props.cfg", "seed = 42\n");
  const auto corrupt = temp_file("corrupt.cfg", "debug.corrupt_flux_sign = true\n");
  const auto out = std::filesystem::temp_directory_path() / "tdg_cli_test_out.csv";
  CHECK(run_cli("run --config " + ok.string() + " --out " + out.string()) == 0);
  CHECK(csv_lines([&] {
          std::ifstream is(out);
          std::stringstream ss;
          ss << is.rdbuf();
          return ss.str();
        }())
            .size() == 2);
  CHECK(run_cli("run --config " + unknown.string()) == 2);
  CHECK(run_cli("run --config /nonexistent/x.cfg") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("properties --config " + props.string()) == 0);
  CHECK(run_cli("properties --config " + corrupt.string()) == 1);
}
