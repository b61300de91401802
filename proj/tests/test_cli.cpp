#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "monodromy.hpp"

using namespace monodromy;
using io::json;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(PROBLEMS_DIR) + "/" + name);
  return json::parse(in);
}

std::string pointer_of(const json& j) {
  try {
    io::problem_from_json(j);
  } catch (const io::SpecError& e) {
    return e.pointer();
  }
  return "<none>";
}

int run(const std::string& args) {
  const std::string cmd = std::string(CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string problem(const std::string& name) { return std::string(PROBLEMS_DIR) + "/" + name; }

}  // namespace

TEST(SpecParsing, ValidFiles) {
  const io::ProblemSpec euler = io::problem_from_json(load("euler.json"));
  EXPECT_TRUE(euler.closed);
  EXPECT_EQ(euler.order, 3);
  EXPECT_EQ(euler.field.dimension(), 1u);
  EXPECT_DOUBLE_EQ(euler.tol, 1e-13);
  const io::ProblemSpec diag = io::problem_from_json(load("diagonal.json"));
  EXPECT_TRUE(diag.diagonal_check);
  EXPECT_EQ(diag.field.dimension(), 2u);
}

TEST(SpecParsing, ErrorPointers) {
  json j = load("euler.json");
  json missing = j;
  missing.erase("field");
  EXPECT_EQ(pointer_of(missing), "/field");

  json order = j;
  order["order"] = -1;
  EXPECT_EQ(pointer_of(order), "/order");

  json tol = j;
  tol["tol"] = 0.0;
  EXPECT_EQ(pointer_of(tol), "/tol");

  json den = j;
  den["field"]["r"]["den"] = json::array({json::array({0, 0})});
  EXPECT_EQ(pointer_of(den), "/field/r/den");

  json dir = j;
  dir["h_direction"] = json::array({json::array({1, 0}), json::array({1, 0})});
  EXPECT_EQ(pointer_of(dir), "/h_direction");

  json t0 = j;
  t0["t0"] = json::array({2, 0});
  EXPECT_EQ(pointer_of(t0), "/geometry/t0");

  json coeff = j;
  coeff["field"]["basis"][0]["num"][0] = "x";
  EXPECT_EQ(pointer_of(coeff), "/field/basis/0/num/0");

  EXPECT_EQ(pointer_of(json::array()), "");
}

TEST(Reports, ConvergenceRoundTrip) {
  const commands::CommandResult res = commands::cmd_variation(io::problem_from_json(load("euler.json")));
  const json& conv = res.report.at("convergence");
  const ConvergenceReport back = io::convergence_from_json(conv);
  EXPECT_EQ(io::convergence_to_json(back), conv);
  EXPECT_EQ(back.rows.size(), io::default_h_magnitudes().size());
  const MatrizantSeries s = io::series_from_json(res.report.at("series"));
  EXPECT_EQ(io::series_to_json(s), res.report.at("series"));
  EXPECT_EQ(s.order, 3);
}

TEST(Reports, Deterministic) {
  const io::ProblemSpec spec = io::problem_from_json(load("free_particle.json"));
  EXPECT_EQ(commands::cmd_variation(spec).report.dump(), commands::cmd_variation(spec).report.dump());
  commands::DemoOptions o;
  o.order = 1;
  EXPECT_EQ(commands::cmd_fuchsian_demo(o).report.dump(), commands::cmd_fuchsian_demo(o).report.dump());
}

TEST(Reports, MonodromyEuler) {
  const json r = commands::cmd_monodromy(io::problem_from_json(load("euler.json"))).report;
  ASSERT_EQ(r.at("eigenvalues").size(), 2u);
  for (const json& e : r.at("eigenvalues")) {
    EXPECT_NEAR(std::abs(io::complex_from_json(e, "")), 1.0, 1e-8);
    EXPECT_NEAR(std::abs(e[0].get<double>()), 0.0, 1e-8);
  }
  EXPECT_TRUE(r.at("det_within_tolerance").get<bool>());
}

TEST(Reports, OpenPathNeedsLoopForMonodromy) {
  EXPECT_THROW(commands::cmd_monodromy(io::problem_from_json(load("free_particle.json"))), InvalidInput);
}

TEST(ExitCodes, Binary) {
  EXPECT_EQ(run("monodromy --spec " + problem("euler.json")), 0);
  EXPECT_EQ(run("monodromy --spec " + problem("euler.json") + " --format structured"), 0);
  EXPECT_EQ(run("variation --spec " + problem("free_particle.json")), 0);
  EXPECT_EQ(run("monodromy --spec " + problem("through_pole.json")), 2);
  EXPECT_EQ(run("monodromy --spec " + problem("free_particle.json")), 2);
  EXPECT_EQ(run("monodromy --spec " + problem("does_not_exist.json")), 2);
  EXPECT_EQ(run("monodromy --spec " + problem("euler.json") + " --format xml"), 2);
  EXPECT_EQ(run("monodromy --spec " + problem("euler.json") + " --tol -1"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("fuchsian demo --order 9"), 2);
  EXPECT_EQ(run("variation --spec " + problem("single_magnitude.json")), 3);
}

TEST(ExitCodes, OutputFile) {
  const std::string out = ::testing::TempDir() + "monodromy_cli_out.json";
  ASSERT_EQ(run("monodromy --spec " + problem("euler.json") + " --format structured --out " + out), 0);
  std::ifstream in(out);
  const json j = json::parse(in);
  EXPECT_TRUE(j.contains("report"));
  EXPECT_EQ(j.at("metadata").at("tool").get<std::string>(), "monodromy");
}
