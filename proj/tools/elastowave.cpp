// elastowave <suite> [--config PATH] [--out DIR] [--seed N]
// nonlinear and picard also take --tensor, --dt, --t-end, --n, --L and
// --export DIR (binary snapshots of the marched solution plus a manifest).
//
// Exit status: 0 when every assertion of the suite holds, 1 when one fails
// or the run itself breaks down, 2 for usage and configuration errors. A run
// that does not finish leaves the output directory untouched.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "elastowave/suites.hpp"

namespace ew = elastowave;
namespace fs = std::filesystem;

namespace {

// write into a sibling staging directory, then move the files over
std::vector<std::string> publish(const ew::Scenario& sc, const ew::SuiteResult& res, const fs::path& out) {
  const fs::path stage = out.string() + ".partial";
  fs::remove_all(stage);
  const auto files = ew::write_outputs(sc, res, stage.string());
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ew::Error(ew::Errc::io, "cannot create '" + out.string() + "': " + ec.message());
  for (const auto& f : files) {
    fs::rename(stage / f, out / f, ec);
    if (ec) throw ew::Error(ew::Errc::io, "cannot move '" + f + "' into '" + out.string() + "': " + ec.message());
  }
  fs::remove_all(stage);
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscoelastic wave toolkit: run a named experiment suite and write its reports."};
  app.require_subcommand(1, 1);
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> tensor;
  std::optional<double> dt, t_end, box;
  std::optional<int> n;
  std::string export_dir;
  for (const auto& name : ew::suite_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " suite");
    sub->add_option("--config", config, "scenario file (INI)")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (default $ELASTOWAVE_OUT/<suite> or out/<suite>)");
    sub->add_option("--seed", seed, "overrides [scenario] seed");
    if (name == "nonlinear" || name == "picard") {
      sub->add_option("--tensor", tensor, "contraction tensor: standard, transposed or zero");
      sub->add_option("--dt", dt, "time step");
      sub->add_option("--t-end", t_end, "final time, a whole number of steps");
      sub->add_option("--n", n, "grid points per axis");
      sub->add_option("--L", box, "box length");
      sub->add_option("--export", export_dir, "write the marched trajectory into this directory");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string suite = app.get_subcommands().front()->get_name();

  ew::Scenario sc;
  try {
    sc = config.empty() ? ew::default_scenario(suite) : ew::load_scenario(config, suite);
    if (seed) sc.seed = *seed;
    if (tensor) sc.tensor = *tensor;
    if (dt) sc.dt = *dt;
    if (t_end) sc.t_end = *t_end;
    if (n) sc.n = *n;
    if (box) sc.box = *box;
    ew::validate_scenario(sc);
  } catch (const ew::Error& e) {
    std::cerr << "elastowave: " << e.what() << "\n";
    return 2;
  }
  if (out.empty()) {
    const char* env = std::getenv("ELASTOWAVE_OUT");
    out = (fs::path(env && *env ? env : "out") / suite).string();
  }

  try {
    const ew::SuiteResult res = ew::run_suite(sc);
    publish(sc, res, out);
    if (!export_dir.empty() && res.trajectory) {
      const auto files = ew::export_trajectory(*res.trajectory, res.trajectory_info, export_dir);
      std::cout << "exported " << files.size() << " files to " << export_dir << "\n";
    }
    for (const auto& a : res.assertions) {
      std::cout << (a.passed ? "ok   " : "FAIL ") << a.criterion << " " << a.name << ": " << ew::format_double(a.observed)
                << " " << a.relation << " " << ew::format_double(a.bound) << "\n";
    }
    std::cout << suite << ": " << (res.passed() ? "passed" : "FAILED") << ", reports in " << out << "\n";
    return res.passed() ? 0 : 1;
  } catch (const ew::Error& e) {
    std::cerr << "elastowave: " << e.what() << "\n";
    return e.code() == ew::Errc::config || e.code() == ew::Errc::usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "elastowave: " << e.what() << "\n";
    return 1;
  }
}
