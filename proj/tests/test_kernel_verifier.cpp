#include "doctest.h"

#include <cmath>

#include "core/kernel_verifier.hpp"
#include "core/report_io.hpp"

using namespace nlk;
using bubble::Dimension;
using verify::Verdict;

namespace {

const verify::Check* find(const std::vector<verify::Check>& checks, const std::string& name) {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_SUITE("kernel_verifier") {

TEST_CASE("mode 0") {
  for (int N : {2, 3, 6}) {
    const auto m = verify::verify_mode0(Dimension(N), {});
    CHECK(m.verdict == Verdict::pass);
    CHECK(m.bounded_solution_found);
    CHECK(m.bounded_solution_matches == "psi0");
    CHECK(m.second_solution_growth.kind == ode::GrowthKind::logarithmic);
    CHECK(m.lambda == 0.0);
    CHECK(m.multiplicity == 1);
  }
}

TEST_CASE("mode 1") {
  for (int N : {2, 3, 5}) {
    const auto m = verify::verify_mode1(Dimension(N), {});
    CHECK(m.verdict == Verdict::pass);
    CHECK(m.bounded_solution_found);
    CHECK(m.bounded_solution_matches == "psi1");
    CHECK(m.second_solution_growth.exponent == doctest::Approx(1.0).epsilon(0.01));
    const auto* decay = find(m.checks, "psi1_decay_exponent_error");
    REQUIRE(decay != nullptr);
    CHECK(decay->value <= 0.01);
    CHECK(m.multiplicity == N);
  }
}

TEST_CASE("higher modes") {
  struct Case {
    int k, n;
    double gamma;
  };
  for (const auto& c : {Case{2, 3, std::sqrt(3.0)}, Case{2, 2, 2.0}, Case{10, 4, std::sqrt(40.0)}}) {
    const auto m = verify::verify_higher_mode(c.k, Dimension(c.n), {});
    CHECK(m.verdict == Verdict::pass);
    CHECK_FALSE(m.bounded_solution_found);
    CHECK(m.bounded_solution_matches == "none");
    CHECK(m.second_solution_growth.exponent == doctest::Approx(c.gamma).epsilon(0.01));
    CHECK(find(m.checks, "min_lagrange_partial_integral")->pass);
  }
  CHECK_THROWS_AS(verify::verify_higher_mode(1, Dimension(3), {}), Error);
}

TEST_CASE("largest admissible mode stays representable") {
  const auto m = verify::verify_higher_mode(ode::kMaxMode, Dimension(2), {});
  CHECK(m.verdict == Verdict::pass);
}

TEST_CASE("full report counts N + 1") {
  struct Case {
    int n, k_max;
  };
  for (const auto& c : {Case{3, 10}, Case{2, 10}, Case{6, 6}}) {
    const auto rep = verify::full_report(Dimension(c.n), c.k_max, {}, 0, 2);
    CHECK(rep.verdict == Verdict::pass);
    REQUIRE(rep.kernel_dimension.has_value());
    CHECK(*rep.kernel_dimension == c.n + 1);
    REQUIRE(rep.modes.size() == static_cast<std::size_t>(c.k_max + 1));
    std::int64_t count = 0;
    for (std::size_t k = 0; k < rep.modes.size(); ++k) {
      CHECK(rep.modes[k].k == static_cast<int>(k));
      CHECK(rep.modes[k].bounded_solution_found == (k <= 1));
      if (rep.modes[k].bounded_solution_found) count += rep.modes[k].multiplicity;
    }
    CHECK(count == *rep.kernel_dimension);
    for (int k = 3; k <= c.k_max; ++k)
      CHECK(rep.modes[k].second_solution_growth.exponent >
            rep.modes[k - 1].second_solution_growth.exponent);
  }
}

TEST_CASE("report does not depend on the worker count") {
  const auto a = verify::full_report(Dimension(4), 8, {}, 42, 1);
  const auto b = verify::full_report(Dimension(4), 8, {}, 42, 4);
  CHECK(report::to_json({a}) == report::to_json({b}));
  const auto c = verify::full_report(Dimension(4), 8, {}, 43, 1);
  CHECK(report::to_json({a}) != report::to_json({c}));
}

TEST_CASE("tighter integration tolerances keep every dimension passing") {
  for (int N = 2; N <= 6; ++N) {
    for (double f : {0.1, 0.01}) {
      verify::Tolerances t;
      t.ode_rtol *= f;
      t.ode_atol *= f;
      const auto rep = verify::full_report(Dimension(N), 10, t, 0, 0);
      CHECK(rep.verdict == Verdict::pass);
    }
  }
}

TEST_CASE("an unattainable threshold fails instead of passing") {
  verify::Tolerances t;
  t.exponent = 1e-9;
  const auto rep = verify::full_report(Dimension(3), 4, t, 0, 1);
  CHECK(rep.verdict == Verdict::fail);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(verify::full_report(Dimension(3), 1, {}), Error);
  CHECK_THROWS_AS(verify::full_report(Dimension(3), ode::kMaxMode + 1, {}), Error);
  verify::Tolerances bad;
  bad.residual = -1.0;
  CHECK_THROWS_AS(verify::full_report(Dimension(3), 4, bad), Error);
  CHECK_THROWS_AS(verify::full_report(Dimension(3), 4, {}, 0, -1), Error);
}

TEST_CASE("check helpers") {
  CHECK(verify::at_most("a", 1.0, 1.0).pass);
  CHECK_FALSE(verify::at_most("a", 1.1, 1.0).pass);
  CHECK_FALSE(verify::at_most("a", NAN, 1.0).pass);
  CHECK_FALSE(verify::above("min_a", 0.0, 0.0).pass);
  CHECK(verify::above("min_a", 1e-300, 0.0).pass);
}

}  // TEST_SUITE
