#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "monodromy/commands.hpp"
#include "monodromy/io.hpp"

namespace {

using monodromy::commands::ExitCode;
using monodromy::io::json;

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::string spec_file;
  std::string out_file;
  std::string format = "table";
  std::optional<double> tol;
  std::optional<int> order;
  std::vector<double> h_grid;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

monodromy::io::ProblemSpec load_spec(const Common& c) {
  if (c.spec_file.empty()) throw monodromy::InvalidInput("--spec is required");
  std::ifstream in(c.spec_file);
  if (!in) throw monodromy::InvalidInput("cannot open problem file " + c.spec_file);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw monodromy::InvalidInput(c.spec_file + ": " + e.what());
  }
  auto spec = monodromy::io::problem_from_json(j);
  monodromy::commands::Overrides o;
  o.tol = c.tol;
  o.order = c.order;
  if (!c.h_grid.empty()) o.h_grid = c.h_grid;
  monodromy::commands::apply_overrides(spec, o);
  return spec;
}

void emit(const Common& c, const monodromy::commands::CommandResult& r) {
  std::string text;
  if (c.format == "structured") {
    const json doc = {{"report", r.report},
                      {"metadata", {{"tool", "monodromy"}, {"version", kVersion}, {"generated_at", utc_timestamp()}}}};
    text = doc.dump(2) + "\n";
  } else {
    text = monodromy::commands::render_table(r.report) + "# generated_at " + utc_timestamp() + "\n";
  }
  if (c.out_file.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out_file);
  if (!out) throw monodromy::InvalidInput("cannot write " + c.out_file);
  out << text;
}

void add_common(CLI::App* cmd, Common& c, bool needs_spec) {
  if (needs_spec) cmd->add_option("--spec", c.spec_file, "problem file (JSON)")->required();
  cmd->add_option("--out", c.out_file, "write the report here instead of stdout");
  cmd->add_option("--tol", c.tol, "integration tolerance");
  cmd->add_option("--order", c.order, "series order N (theta truncation for fuchsian demo)");
  cmd->add_option("--format", c.format, "table or structured")->check(CLI::IsMember({"table", "structured"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monodromy and matrizant computations for u'' + Q u = 0"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common mono, var, demo;
  auto* c_mono = app.add_subcommand("monodromy", "monodromy matrix around a closed loop");
  add_common(c_mono, mono, true);
  auto* c_var = app.add_subcommand("variation", "matrizant series and convergence audit");
  add_common(c_var, var, true);
  c_var->add_option("--h-grid", var.h_grid, "comma-separated sample magnitudes along the h direction")
      ->delimiter(',');
  auto* c_fuchs = app.add_subcommand("fuchsian", "genus-2 octagon group laboratory");
  c_fuchs->require_subcommand(1);
  auto* c_demo = c_fuchs->add_subcommand("demo", "group, theta series and developing-map monodromy");
  add_common(c_demo, demo, false);
  std::vector<double> seed;
  c_demo->add_option("--seed", seed, "real seed polynomial coefficients, ascending")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::validation);
  }

  try {
    monodromy::commands::CommandResult result;
    const Common* common = nullptr;
    if (*c_mono) {
      result = monodromy::commands::cmd_monodromy(load_spec(mono));
      common = &mono;
    } else if (*c_var) {
      result = monodromy::commands::cmd_variation(load_spec(var));
      common = &var;
    } else {
      monodromy::commands::DemoOptions o;
      if (demo.order) o.order = *demo.order;
      if (demo.tol) o.tol = *demo.tol;
      if (!seed.empty()) o.seed.assign(seed.begin(), seed.end());
      result = monodromy::commands::cmd_fuchsian_demo(o);
      common = &demo;
    }
    emit(*common, result);
    return static_cast<int>(result.accepted ? ExitCode::ok : ExitCode::acceptance);
  } catch (const monodromy::InvalidInput& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::validation);
  } catch (const monodromy::ContourError& e) {
    std::cerr << "contour error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::validation);
  } catch (const monodromy::PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::validation);
  } catch (const monodromy::CapExceededError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return static_cast<int>(ExitCode::validation);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::internal);
  }
}
