// tdg: convergence driver for the space-time Trefftz DG solver.
//
//   tdg run|convergence|rho-sweep|properties --config FILE [--out FILE]
//
// exit codes: 0 ok, 1 property failed, 2 config error, 3 solver failure

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "tdg/driver.hpp"
#include "tdg/error.hpp"

namespace {

int emit(const tdg::RunConfig& cfg, const std::string& out_flag, const std::function<void(std::ostream&)>& write) {
  const std::string path = out_flag.empty() ? cfg.output : out_flag;
  if (path.empty() || path == "-") {
    write(std::cout);
    return 0;
  }
  std::ofstream os(path);
  if (!os) {
    std::cerr << "error: cannot write " << path << "\n";
    return 2;
  }
  write(os);
  return 0;
}

void note_absolute(const std::vector<tdg::ErrorReport>& rows) {
  for (const auto& r : rows)
    if (r.absolute)
      std::cerr << "note: level " << r.level << ": exact solution has zero norm, errors are absolute\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-time Trefftz DG solver for anisotropic acoustic waves"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "run configuration (key = value)")->required();
    sub->add_option("--out", out_path, "output CSV (default: stdout, or the config's output key)");
    return sub;
  };
  CLI::App* run = add("run", "single solve at `level` (or the last of `levels`)");
  CLI::App* conv = add("convergence", "h-convergence table over `levels`");
  CLI::App* rho = add("rho-sweep", "errors over `lambda1_list` at a fixed `level`");
  CLI::App* props = add("properties", "invariant and identity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const tdg::RunConfig cfg = tdg::RunConfig::from(tdg::Config::load(config_path));
    if (run->parsed()) {
      const auto rows = std::vector<tdg::ErrorReport>{tdg::run_level(cfg, cfg.single_level(), cfg.tensor)};
      note_absolute(rows);
      return emit(cfg, out_path, [&](std::ostream& os) { tdg::write_convergence_csv(rows, os); });
    }
    if (conv->parsed()) {
      const auto rows = tdg::run_convergence(cfg);
      note_absolute(rows);
      return emit(cfg, out_path, [&](std::ostream& os) { tdg::write_convergence_csv(rows, os); });
    }
    if (rho->parsed()) {
      const auto rows = tdg::run_rho_sweep(cfg);
      note_absolute(rows);
      return emit(cfg, out_path, [&](std::ostream& os) { tdg::write_rho_csv(rows, os); });
    }
    if (props->parsed()) {
      const auto results = tdg::run_property_suite(cfg.properties);
      const int rc = emit(cfg, out_path, [&](std::ostream& os) { tdg::write_properties_csv(results, os); });
      if (rc != 0) return rc;
      for (const auto& r : results) {
        if (!r.passed) {
          std::cerr << "property failed: " << r.name << " (" << r.detail << ")\n";
          return 1;
        }
      }
      return 0;
    }
  } catch (const tdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const tdg::SingularBlockError& e) {
    std::cerr << "solver failure in slab " << e.slab() << ": " << e.what() << "\n";
    return 3;
  } catch (const tdg::Error& e) {
    std::cerr << "solver failure: " << tdg::to_string(e.kind()) << ": " << e.what() << "\n";
    return 3;
  }
  return 0;
}
