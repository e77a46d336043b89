// nlk: verification reports, mode trajectories and bubble tables.
//
// Exit codes: 0 pass, 1 usage or I/O error, 2 verification failed,
// 3 inconclusive (including integrator breakdown).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlk/nlk.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;
constexpr int kExitInconclusive = 3;

struct RunConfig {
  std::vector<int> dims;
  int k_max = 10;
  double tol_residual = 1e-8;
  double tol_exponent = 0.01;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  int k = -1;
  std::string which = "regular";
};

struct CliError {
  int code;
  std::string message;
};

void check(nlk_status s) {
  if (s == NLK_OK) return;
  const int code = s == NLK_ERR_NOT_CONVERGED ? kExitInconclusive : kExitUsage;
  throw CliError{code, std::string(nlk_status_string(s)) + ": " + nlk_last_error()};
}

struct StringDeleter {
  void operator()(char* s) const { nlk_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct ReportDeleter {
  void operator()(nlk_report* r) const { nlk_report_free(r); }
};
struct TrajectoryDeleter {
  void operator()(nlk_trajectory* t) const { nlk_trajectory_free(t); }
};
using Trajectory = std::unique_ptr<nlk_trajectory, TrajectoryDeleter>;

int thread_cap() {
  const char* env = std::getenv("NLK_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 4096)
    throw CliError{kExitUsage, "NLK_THREADS must be a positive integer"};
  return static_cast<int>(v);
}

// Opens the destination before any computation so that a bad path fails fast.
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw CliError{kExitUsage, "cannot open output file: " + path};
  }

  void write(const std::string& text) {
    if (path_.empty()) {
      std::cout << text << std::flush;
      return;
    }
    file_ << text;
    file_.flush();
    if (!file_) throw CliError{kExitUsage, "failed writing " + path_};
  }

 private:
  std::string path_;
  std::ofstream file_;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string second_path(const std::string& out) {
  std::filesystem::path p(out);
  const auto name = p.stem().string() + "_second" + p.extension().string();
  return (p.parent_path() / name).string();
}

int cmd_verify(const RunConfig& cfg) {
  Sink sink(cfg.out);
  nlk_tolerances tol;
  nlk_tolerances_default(&tol);
  tol.residual = cfg.tol_residual;
  tol.exponent = cfg.tol_exponent;

  nlk_report* raw = nullptr;
  check(nlk_verify(cfg.dims.data(), cfg.dims.size(), cfg.k_max, &tol, cfg.seed,
                   thread_cap(), &raw));
  std::unique_ptr<nlk_report, ReportDeleter> rep(raw);

  char* text = nullptr;
  check(cfg.format == "csv" ? nlk_report_to_csv(rep.get(), &text)
                            : nlk_report_to_json(rep.get(), &text));
  CString owned(text);
  sink.write(owned.get());

  double secs = 0.0;
  check(nlk_report_wall_seconds(rep.get(), &secs));
  nlk_verdict v;
  check(nlk_report_verdict(rep.get(), &v));
  for (size_t i = 0; i < cfg.dims.size(); ++i) {
    int64_t kd = 0;
    int available = 0;
    check(nlk_report_kernel_dimension(rep.get(), i, &kd, &available));
    std::cerr << "n=" << cfg.dims[i] << " kernel_dimension="
              << (available ? std::to_string(kd) : std::string("withheld")) << "\n";
  }
  std::cerr << "verdict="
            << (v == NLK_VERDICT_PASS ? "pass"
                : v == NLK_VERDICT_FAIL ? "fail" : "inconclusive")
            << " wall_seconds=" << secs << "\n";
  if (v == NLK_VERDICT_PASS) return kExitPass;
  return v == NLK_VERDICT_FAIL ? kExitFail : kExitInconclusive;
}

std::string trajectory_text(const nlk_trajectory* t, int k, int n,
                            const std::string& format, const char* kind) {
  if (format == "csv") {
    char* text = nullptr;
    check(nlk_trajectory_to_csv(t, &text));
    return CString(text).get();
  }
  size_t count = 0;
  check(nlk_trajectory_size(t, &count));
  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  for (size_t i = 0; i < count; ++i) {
    double r, psi, dpsi;
    check(nlk_trajectory_sample(t, i, &r, &psi, &dpsi));
    samples.push_back({r, psi, dpsi});
  }
  nlohmann::ordered_json doc = {{"dimension", n},
                                {"k", k},
                                {"solution", kind},
                                {"columns", {"r", "psi", "dpsi"}},
                                {"samples", std::move(samples)}};
  return doc.dump() + "\n";
}

int cmd_modes(const RunConfig& cfg) {
  if (cfg.dims.size() != 1)
    throw CliError{kExitUsage, "modes: exactly one --dim is required"};
  if (cfg.k > cfg.k_max)
    throw CliError{kExitUsage, "modes: --k exceeds --kmax (" +
                                   std::to_string(cfg.k_max) + ")"};
  const bool has_second = cfg.k <= 1;
  if (cfg.which == "second" && !has_second)
    throw CliError{kExitUsage, "modes: second solutions exist only for k = 0, 1"};
  const int n = cfg.dims.front();

  // Without --out only the selected solution is printed.
  std::optional<Sink> regular_sink, second_sink;
  if (!cfg.out.empty()) {
    regular_sink.emplace(cfg.out);
    if (has_second) second_sink.emplace(second_path(cfg.out));
  } else if (cfg.which == "second") {
    second_sink.emplace("");
  } else {
    regular_sink.emplace("");
  }

  if (regular_sink) {
    nlk_trajectory* raw = nullptr;
    check(nlk_integrate_regular(cfg.k, n, 1e-5, 1e4, nullptr, &raw));
    Trajectory t(raw);
    regular_sink->write(trajectory_text(t.get(), cfg.k, n, cfg.format, "regular"));
  }
  if (second_sink) {
    nlk_trajectory* raw = nullptr;
    check(nlk_second_solution(cfg.k, n, NLK_SECOND_WRONSKIAN_LAUNCH, 1e-3, 1e4,
                              nullptr, &raw));
    Trajectory t(raw);
    second_sink->write(trajectory_text(t.get(), cfg.k, n, cfg.format, "second"));
  }
  return kExitPass;
}

struct BubbleRow {
  double r, u, du, exp_u, z0, psi0, psi1;
};

int cmd_bubble(const RunConfig& cfg) {
  Sink sink(cfg.out);
  constexpr int kPoints = 61;  // 10 per decade over [1e-3, 1e3]
  nlohmann::ordered_json doc;
  doc["bubbles"] = nlohmann::ordered_json::array();
  std::string csv = "n,r,u,du,exp_u,z0,psi0,psi1,mass,mass_target\n";

  for (int n : cfg.dims) {
    double mass = 0.0, err = 0.0, target = 0.0;
    check(nlk_mass_integral(n, 1e-13, &mass, &err));
    check(nlk_mass_target(n, &target));
    std::vector<BubbleRow> rows;
    std::vector<double> x(n, 0.0);
    for (int i = 0; i < kPoints; ++i) {
      BubbleRow row;
      row.r = std::pow(10.0, -3.0 + 6.0 * i / (kPoints - 1));
      x[0] = row.r;
      double j0[3], j1[3];
      check(nlk_u_radial(n, row.r, &row.u));
      check(nlk_u_radial_derivative(n, row.r, &row.du, nullptr));
      check(nlk_exp_u(n, row.r, &row.exp_u));
      check(nlk_z0(n, x.data(), &row.z0));
      check(nlk_psi0(n, row.r, j0));
      check(nlk_psi1(n, row.r, j1));
      row.psi0 = j0[0];
      row.psi1 = j1[0];
      rows.push_back(row);
    }
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      table.push_back({{"r", row.r},
                       {"u", row.u},
                       {"du", row.du},
                       {"exp_u", row.exp_u},
                       {"z0", row.z0},
                       {"psi0", row.psi0},
                       {"psi1", row.psi1}});
      csv += std::to_string(n) + "," + num(row.r) + "," + num(row.u) + "," +
             num(row.du) + "," + num(row.exp_u) + "," + num(row.z0) + "," +
             num(row.psi0) + "," + num(row.psi1) + "," + num(mass) + "," +
             num(target) + "\n";
    }
    doc["bubbles"].push_back({{"dimension", n},
                              {"mass", mass},
                              {"mass_target", target},
                              {"mass_error_estimate", err},
                              {"table", std::move(table)}});
  }
  sink.write(cfg.format == "csv" ? csv : doc.dump(2) + "\n");
  return kExitPass;
}

void common_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--dim", cfg.dims, "Dimension N >= 2 (repeatable; default 2..6)")
      ->check(CLI::Range(2, 1000));
  sub->add_option("--kmax", cfg.k_max, "Highest mode checked")
      ->check(CLI::Range(2, 64));
  sub->add_option("--tol-residual", cfg.tol_residual,
                  "Closed-form residual tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tol-exponent", cfg.tol_exponent,
                  "Relative tolerance on growth exponents")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", cfg.out, "Output path (default: stdout)");
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", cfg.seed, "Seed for randomized operator checks");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nondegeneracy checks for the N-Laplace Liouville bubble"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* verify = app.add_subcommand("verify", "Run the kernel verification");
  common_options(verify, cfg);
  auto* modes = app.add_subcommand("modes", "Export mode trajectories as CSV");
  common_options(modes, cfg);
  modes->add_option("--k", cfg.k, "Mode index")->required()->check(CLI::NonNegativeNumber);
  modes->add_option("--which", cfg.which,
                    "Solution printed when --out is not given")
      ->check(CLI::IsMember({"regular", "second"}));
  auto* bubble = app.add_subcommand("bubble", "Tabulate the bubble and its mass");
  common_options(bubble, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (cfg.dims.empty()) {
      if (modes->parsed()) throw CliError{kExitUsage, "modes: --dim is required"};
      cfg.dims = {2, 3, 4, 5, 6};
    }
    if (modes->parsed() && cfg.format == "json" && modes->count("--format") == 0)
      cfg.format = "csv";
    if (verify->parsed()) return cmd_verify(cfg);
    if (modes->parsed()) return cmd_modes(cfg);
    return cmd_bubble(cfg);
  } catch (const CliError& e) {
    std::cerr << "nlk: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "nlk: " << e.what() << "\n";
    return kExitUsage;
  }
}
