#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdg/analysis.hpp"
#include "tdg/assembly.hpp"
#include "tdg/cases.hpp"
#include "tdg/properties.hpp"

namespace tdg {

// Bad config text or value; line is 0 when the field is missing altogether.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string field, const std::string& msg);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

// `key = value` lines, `#` comments, dotted keys, comma separated lists.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  int get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> keys() const;

  int line_of(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string source_;
  std::map<std::string, Entry> entries_;
  const Entry& entry(const std::string& key) const;
};

enum class RunMethod { Method1, Method2, Combined };

struct RunConfig {
  std::string case_id = "hom2d_hat";
  RunMethod method = RunMethod::Method1;
  int p = 1;
  int q = 1;
  LocalMode mode = LocalMode::Nonoverlapping;
  TensorParameters tensor;
  std::optional<BoundaryMode> boundary;  // unset: case default
  std::vector<int> levels{1, 2, 3};
  std::optional<int> level;  // single solves and rho sweeps
  std::vector<double> lambda1_list;
  FluxParameters flux;
  int quad_order = 0;
  double gamma = 1.0;
  int patch = 1;
  std::string output;
  std::uint64_t seed = 42;
  PropertyOptions properties;
  bool corrupt_flux_sign = false;

  static RunConfig from(const Config& cfg);
  BoundaryMode boundary_mode() const;
  int single_level() const { return level ? *level : levels.back(); }
};

const char* to_string(RunMethod m);

// One solve at level l (N_t = 2^l slabs) with errors at T = 1.
ErrorReport run_level(const RunConfig& cfg, int level, const TensorParameters& tensor);

std::vector<ErrorReport> run_convergence(const RunConfig& cfg);
std::vector<ErrorReport> run_rho_sweep(const RunConfig& cfg);

// level,h,dofs,err_v,rate_v,err_sigma,rate_sigma,err_dg,rate_dg
void write_convergence_csv(const std::vector<ErrorReport>& rows, std::ostream& os);
// rho,err_v,rho_rate_v,err_sigma,rho_rate_sigma,err_dg,rho_rate_dg
void write_rho_csv(const std::vector<ErrorReport>& rows, std::ostream& os);
// property,status,value,tolerance,detail
void write_properties_csv(const std::vector<PropertyResult>& rows, std::ostream& os);

// 6 significant digits, scientific.
std::string format_number(double x);

}  // namespace tdg
