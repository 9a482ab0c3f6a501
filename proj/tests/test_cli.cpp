#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fracspec/special.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out_file;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / "fracspec_cli_test";
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(FRACSPEC_CLI_PATH) + " " + args + " > " +
                          (work_dir() / "stdout.txt").string() + " 2> " +
                          (work_dir() / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("build writes deterministic csv") {
  const auto a = work_dir() / "op_a.csv";
  const auto b = work_dir() / "op_b.csv";
  REQUIRE(run("build --mu 0.5 --alpha 0 --beta 0.5 --n 24 --out " + a.string()) == 0);
  REQUIRE(run("build --mu 0.5 --alpha 0 --beta 0.5 --n 24 --out " + b.string()) == 0);
  const auto ta = slurp(a), tb = slurp(b);
  CHECK(ta == tb);  // byte identical
  CHECK(ta.find("0.797884560802865") != std::string::npos);
}

TEST_CASE("build validates its parameters") {
  CHECK(run("build --mu 0.5 --beta 0.3 --n 8") == 2);
  const auto err = slurp(work_dir() / "stderr.txt");
  CHECK(err.find("integer multiple") != std::string::npos);
}

TEST_CASE("solve runs the bundled abel problem") {
  const auto rep = work_dir() / "abel_report.json";
  const std::string problem = std::string(FRACSPEC_PROBLEM_DIR) + "/abel_lambda2.json";
  REQUIRE(run("solve " + problem + " --out " + rep.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(rep));
  CHECK(j.at("schema_version").get<int>() == 1);
  CHECK(j.at("residual").get<double>() < 1e-12);
  const auto& xs = j.at("values").at("x");
  const auto& us = j.at("values").at("u");
  double emax = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i].get<double>();
    const double u = us[i].get<double>();
    emax = std::max(emax, std::abs(u - fracspec::special::erfcx(4.0 * std::sqrt(1.0 + x))));
  }
  CHECK(emax < 1e-12);
}

TEST_CASE("solve runs the bundled variable-coefficient problem") {
  const auto rep = work_dir() / "var_report.json";
  const std::string problem = std::string(FRACSPEC_PROBLEM_DIR) + "/var_coeff.json";
  REQUIRE(run("solve " + problem + " --out " + rep.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(rep));
  CHECK(j.at("n_used").get<int>() <= 16);
  const auto& xs = j.at("values").at("x");
  const auto& us = j.at("values").at("u");
  double emax = 0.0;
  for (size_t i = 0; i < xs.size(); ++i)
    emax = std::max(emax, std::abs(us[i].get<double>() -
                                   std::pow(1.0 + xs[i].get<double>(), 1.5)));
  CHECK(emax < 1e-13);
}

TEST_CASE("solve rejects malformed input") {
  const auto bad = work_dir() / "bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK(run("solve " + bad.string()) == 2);
  CHECK(run("solve " + (work_dir() / "missing.json").string()) == 4);
}

TEST_CASE("showcase validates its name") {
  CHECK(run("showcase nosuch") == 2);
}

TEST_CASE("showcase var emits plot-ready csv") {
  const auto out = work_dir() / "var.csv";
  REQUIRE(run("showcase var --out " + out.string()) == 0);
  const auto text = slurp(out);
  CHECK(text.find("x,u,exact,error") != std::string::npos);
  CHECK(text.find("schema 1") != std::string::npos);
}

TEST_CASE("bench reports n/a slope for a single size") {
  REQUIRE(run("bench --sizes 160 --reps 1 --out " + (work_dir() / "b.csv").string()) == 0);
  CHECK(slurp(work_dir() / "stdout.txt").find("slope: n/a") != std::string::npos);
  CHECK(run("bench --sizes 300,200 --reps 1") == 2);  // not ascending
}

TEST_CASE("config file supplies defaults and rejects unknown keys") {
  const auto cfg = work_dir() / "cfg.json";
  std::ofstream(cfg) << R"({"n": 12})";
  const auto out = work_dir() / "cfg_op.csv";
  REQUIRE(run("--config " + cfg.string() + " build --mu 0.5 --beta 0.5 --out " + out.string()) ==
          0);
  const auto text = slurp(out);
  CHECK(text.find("n=12") != std::string::npos);
  std::ofstream(cfg) << R"({"wat": 1})";
  CHECK(run("--config " + cfg.string() + " build --mu 0.5 --beta 0.5") == 2);
}
