#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  fs::path d(NLK_SCRATCH_DIR);
  fs::create_directories(d);
  return d;
}

Run run(const std::string& args, const std::string& env = "") {
  const fs::path out = scratch() / "stdout.txt";
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = env + " '" NLK_CLI_PATH "' " + args + " >'" + out.string() +
                          "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("verify writes a passing report for one dimension") {
  const auto r = run("verify --dim 3 --kmax 10");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["reports"].size() == 1);
  CHECK(doc["reports"][0]["kernel_dimension"] == 4);
  CHECK(doc["verdict"] == "pass");
  CHECK(r.err.find("verdict=pass") != std::string::npos);
}

TEST_CASE("verify fans out over repeated --dim") {
  const fs::path out = scratch() / "report.json";
  fs::remove(out);
  const auto r = run("verify --dim 2 --dim 3 --format json --out '" + out.string() + "'");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const auto doc = nlohmann::json::parse(slurp(out));
  REQUIRE(doc["reports"].size() == 2);
  CHECK(doc["reports"][0]["dimension"] == 2);
  CHECK(doc["reports"][1]["dimension"] == 3);
}

TEST_CASE("verify CSV projection") {
  const auto r = run("verify --dim 4 --kmax 3 --format csv");
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == std::vector<std::string>{"dimension", "k", "lambda", "check", "value",
                                            "threshold", "pass"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 7);
    CHECK(rows[i][0] == "4");
    CHECK(rows[i][6] == "true");
  }
}

TEST_CASE("verify exit codes for failures and usage errors") {
  CHECK(run("verify --dim 1").code == 1);
  CHECK(run("verify --kmax 1").code == 1);
  CHECK(run("verify --tol-residual -1").code == 1);
  CHECK(run("verify --format xml").code == 1);
  CHECK(run("verify --bogus").code == 1);
  CHECK(run("").code == 1);
  const auto r = run("verify --dim 3 --out /nonexistent-dir/x/report.json");
  CHECK(r.code == 1);
  CHECK(r.err.find("cannot open") != std::string::npos);
  CHECK(run("verify --dim 3 --kmax 4 --tol-exponent 1e-9").code == 2);
  CHECK(run("verify --dim 3", "NLK_THREADS=abc").code == 1);
}

TEST_CASE("verify output is byte-identical across runs and thread caps") {
  const auto a = run("verify --dim 2 --dim 5 --seed 9");
  const auto b = run("verify --dim 2 --dim 5 --seed 9", "NLK_THREADS=1");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = run("verify --dim 2 --dim 5 --seed 9 --format csv");
  const auto d = run("verify --dim 2 --dim 5 --seed 9 --format csv", "NLK_THREADS=3");
  CHECK(c.out == d.out);
}

TEST_CASE("modes: k = 1 decays like 1/r") {
  const auto r = run("modes --dim 3 --k 1");
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"r", "psi", "dpsi"});
  const auto& last = rows.back();
  CHECK(std::stod(last[0]) * std::stod(last[1]) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("modes: k = 0 second solution grows like log r") {
  const auto r = run("modes --dim 3 --k 0 --which second");
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  std::vector<double> x, y;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double rr = std::stod(rows[i][0]);
    if (rr < 1e2) continue;
    x.push_back(std::log(rr));
    y.push_back(std::stod(rows[i][1]));
  }
  REQUIRE(x.size() > 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double a = (sxy - sx * sy / m) / (sxx - sx * sx / m);
  const double b = (sy - a * sx) / m;
  double peak = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    peak = std::max(peak, std::abs(y[i]));
    worst = std::max(worst, std::abs(y[i] - (a * x[i] + b)));
  }
  CHECK(a != 0.0);
  CHECK(worst <= 0.02 * peak);
}

TEST_CASE("modes: --out writes both solutions for k <= 1") {
  const fs::path out = scratch() / "mode0.csv";
  const fs::path second = scratch() / "mode0_second.csv";
  fs::remove(out);
  fs::remove(second);
  CHECK(run("modes --dim 2 --k 0 --out '" + out.string() + "'").code == 0);
  CHECK(fs::exists(out));
  CHECK(fs::exists(second));
  CHECK(slurp(second).rfind("r,psi,dpsi\n", 0) == 0);
}

TEST_CASE("modes: usage errors") {
  CHECK(run("modes --dim 3 --k 99").code == 1);
  CHECK(run("modes --dim 3").code == 1);
  CHECK(run("modes --k 1").code == 1);
  CHECK(run("modes --dim 3 --dim 4 --k 1").code == 1);
  CHECK(run("modes --dim 3 --k 2 --which second").code == 1);
}

TEST_CASE("modes: JSON form") {
  const auto r = run("modes --dim 3 --k 2 --format json");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["k"] == 2);
  CHECK(doc["samples"].size() > 100);
}

TEST_CASE("bubble: mass pairs") {
  const auto r = run("bubble --dim 2 --dim 3");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  const double m2 = doc["bubbles"][0]["mass"], t2 = doc["bubbles"][0]["mass_target"];
  CHECK(t2 == doctest::Approx(25.132741228718345).epsilon(1e-15));
  CHECK(std::abs(m2 / t2 - 1.0) <= 1e-9);
  CHECK(doc["bubbles"][1]["mass"].get<double>() == doctest::Approx(254.46900).epsilon(1e-7));
}

TEST_CASE("bubble: CSV") {
  const auto r = run("bubble --dim 4 --format csv");
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"n", "r", "u", "du", "exp_u", "z0", "psi0",
                                            "psi1", "mass", "mass_target"});
  CHECK(rows.size() == 62);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 10);
    const double u = std::stod(rows[i][2]);
    CHECK(std::exp(u) == doctest::Approx(std::stod(rows[i][4])).epsilon(1e-12));
  }
  CHECK(r.out.find('\r') == std::string::npos);
  CHECK(run("bubble --dim 4 --format csv").out == r.out);
}
