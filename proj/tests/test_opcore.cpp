#include <doctest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "fracspec/opcore.hpp"
#include "fracspec/quad.hpp"
#include "fracspec/special.hpp"
#include "support/fio_oracle.hpp"

using namespace fracspec;
namespace oc = fracspec::opcore;

namespace {

double rel_inf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0, s = 0.0;
  const size_t n = std::max(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    const double av = i < a.size() ? a[i] : 0.0;
    const double bv = i < b.size() ? b[i] : 0.0;
    m = std::max(m, std::abs(av - bv));
    s = std::max(s, std::abs(av));
  }
  return m / std::max(s, 1e-300);
}

}  // namespace

TEST_CASE("differentiation and conversion truncations") {
  const auto d = oc::diff_matrix(4);
  CHECK(d.rows() == 5);
  CHECK(d.cols() == 6);
  CHECK(d.get(0, 0) == 0.0);
  CHECK(d.get(0, 1) == 1.0);
  CHECK(d.get(0, 2) == 1.0);
  CHECK(d.get(1, 1) == 0.5);
  CHECK(d.get(1, 2) == 2.0);
  CHECK(d.get(1, 3) == 1.5);
  // column n carries (n/2, n, n/2)
  CHECK(d.get(1, 3) == 1.5);
  CHECK(d.get(2, 3) == 3.0);
  CHECK(d.get(3, 3) == 1.5);
  CHECK(d.get(2, 0) == 0.0);  // strictly (0,2) banded

  const auto c = oc::conv_matrix(4);
  CHECK(c.get(0, 0) == 1.0);
  CHECK(c.get(0, 2) == -0.5);
  CHECK(c.get(1, 1) == 0.5);
  CHECK(c.get(2, 4) == -0.5);
  CHECK(c.get(1, 0) == 0.0);
}

TEST_CASE("power multiplier coefficients") {
  CHECK(oc::power_multiplier_coeffs(0) == std::vector<double>{1.0});
  CHECK(oc::power_multiplier_coeffs(1) == std::vector<double>{0.5, 0.5});
  const auto k2 = oc::power_multiplier_coeffs(2);
  CHECK(k2[0] == doctest::Approx(3.0 / 8.0).epsilon(1e-15));
  CHECK(k2[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(k2[2] == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
  // k = 3 against the independent binomial route
  const auto k3 = oc::power_multiplier_coeffs(3);
  const auto want = oracle::shifted_cheb_of_monomial(3);
  for (size_t i = 0; i < want.size(); ++i) CHECK(k3[i] == doctest::Approx(want[i]).epsilon(1e-15));
}

TEST_CASE("multiplication matrix entries") {
  const oc::MulOp ident({0.75});
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(ident.entry(i, j) == (i == j ? 0.75 : 0.0));

  const oc::MulOp half({0.5, 0.5});
  CHECK(half.entry(0, 0) == 0.5);
  CHECK(half.entry(1, 0) == 0.5);
  CHECK(half.entry(2, 0) == 0.0);

  // the multiplier x for the square-root map
  const oc::MulOp mx({-0.25, 1.0, 0.25});
  const std::vector<double> e0{1.0};
  const auto col0 = mx.apply(e0);
  CHECK(col0[0] == -0.25);
  CHECK(col0[1] == 1.0);
  CHECK(col0[2] == 0.25);
}

TEST_CASE("initial columns") {
  const double mu = 0.5, al = 0.0, be = 0.5;
  const auto ic = oc::initial_columns(mu, al, be);
  const double h0 = quad::moment_h(0, mu, al, be);
  CHECK(ic.r0[0] == doctest::Approx(h0).epsilon(1e-15));
  // R_1 = (pi/sqrt(2) - 2 sqrt(2), pi/sqrt(2))
  CHECK(ic.r1[0] == doctest::Approx(M_PI / std::sqrt(2.0) - 2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(ic.r1[1] == doctest::Approx(M_PI / std::sqrt(2.0)).epsilon(1e-14));
  // row-of-ones functional applied to R_1 gives the endpoint value
  CHECK(ic.r1[0] + ic.r1[1] ==
        doctest::Approx(quad::boundary_phi(1, mu, al, be)).epsilon(1e-13));
}

TEST_CASE("recursion reproduces the closed-form third column") {
  for (auto [mu, al, be] : {std::tuple{0.5, 0.0, 0.5}, {1.5, 0.5, 1.5}, {0.75, -0.25, 0.25}}) {
    const auto ic = oc::initial_columns(mu, al, be);
    const double bc = quad::boundary_phi(2, mu, al, be);
    const auto r2 = oc::recurse_column(1, ic.r0, ic.r1, bc);
    CHECK(rel_inf_diff(r2, ic.r2) < 1e-13);
  }
}

TEST_CASE("recursed columns satisfy their defining system") {
  const double mu = 0.5, al = 0.0, be = 0.5;
  const auto ic = oc::initial_columns(mu, al, be);
  std::vector<double> r_prev = ic.r1, r_last = ic.r2;
  for (int n = 2; n <= 1000; ++n) {
    const double bc = quad::boundary_phi(n + 1, mu, al, be);
    const auto r_next = oc::recurse_column(n, r_prev, r_last, bc);

    if (n % 97 == 2 || n == 1000) {
      // boundary row
      long double sum = 0.0L;
      for (double v : r_next) sum += v;
      CHECK(std::abs((double)sum - bc) <= 1e-12 * std::max(1.0, std::abs(bc)));
      // banded rows: (D/(n+1) - C) R_{n+1} = 2C R_n + (C + D/(n-1)) R_{n-1}
      const auto d = oc::diff_matrix(n);
      const auto c = oc::conv_matrix(n);
      std::vector<double> rn(r_last), rm(r_prev);
      rn.resize(r_next.size(), 0.0);
      rm.resize(r_next.size(), 0.0);
      auto crn = c.apply(rn), crm = c.apply(rm), drm = d.apply(rm), dr1 = d.apply(r_next);
      const auto cr1 = c.apply(r_next);
      double resid = 0.0, scale = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double lhs = dr1[i] / (n + 1) - cr1[i];
        const double rhs = 2.0 * crn[i] + crm[i] + drm[i] / (n - 1);
        resid = std::max(resid, std::abs(lhs - rhs));
        scale = std::max(scale, std::abs(rhs));
      }
      CHECK(resid <= 1e-12 * std::max(scale, 1.0));
    }
    r_prev = std::move(r_last);
    r_last = r_next;
  }
}

TEST_CASE("operator columns: spot values and structure") {
  oc::FioOperator op(0.5, 0.0, 0.5, 24);
  const auto c0 = op.column(0);
  CHECK(c0[0] == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-14));
  CHECK(c0[1] == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-14));
  for (int j = 0; j <= 24; ++j)
    CHECK(static_cast<int>(op.column(j).size()) == j + op.power_k() + 1);

  oc::FioOperator unit(1.0, 0.0, 1.0, 8);
  const auto u0 = unit.column(0);
  CHECK(u0[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u0[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("operator validation") {
  CHECK_THROWS_AS(oc::FioOperator(0.5, 0.0, 0.3, 4), std::invalid_argument);
  CHECK_THROWS_AS(oc::FioOperator(-0.5, 0.0, 0.5, 4), std::invalid_argument);
}

TEST_CASE("columns match the brute-force oracle") {
  for (auto [mu, al, be] : {std::tuple{0.5, 0.0, 0.5},
                            {1.0 / 3.0, 0.0, 1.0 / 6.0},
                            {1.5, 0.5, 1.5},
                            {1.5, -0.5, 0.5}}) {
    oc::FioOperator op(mu, al, be, 12);
    for (int n = 0; n <= 10; ++n)
      CHECK(rel_inf_diff(op.column(n), oracle::fio_column(mu, al, be, n)) < 1e-12);
  }
}

TEST_CASE("endpoint consistency of cached columns") {
  // row-of-ones times column j equals the scaled endpoint integral
  const double mu = 1.5, al = -0.5, be = 0.5;
  oc::FioOperator op(mu, al, be, 40);
  const double scale = std::pow(2.0, -al) / special::gamma(mu);
  for (int j : {0, 1, 2, 3, 7, 19, 40}) {
    const double want = scale * quad::boundary_phi(j, mu, al, be);
    CHECK(op.column_sum(j) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("grow is exact and lazy") {
  oc::FioOperator small(0.5, 0.0, 0.5, 50);
  const auto copy = small;  // keep the original
  const auto grown = oc::grow(small, 100);
  oc::FioOperator fresh(0.5, 0.0, 0.5, 100);
  for (int j = 0; j <= 100; ++j) {
    const auto& a = grown.column(j);
    const auto& b = fresh.column(j);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);  // bit identical
  }
  const auto noop = oc::grow(copy, 50);
  CHECK(noop.max_column() == copy.max_column());
}

TEST_CASE("deterministic rebuild") {
  oc::FioOperator a(1.5, 0.5, 1.5, 80), b(1.5, 0.5, 1.5, 80);
  for (int j = 0; j <= 80; ++j) {
    const auto& ca = a.column(j);
    const auto& cb = b.column(j);
    for (size_t i = 0; i < ca.size(); ++i) CHECK(ca[i] == cb[i]);
  }
}

TEST_CASE("parallel and serial construction agree bit for bit") {
  oc::FioOperator par(0.5, 0.0, 0.5, 120, {true});
  oc::FioOperator ser(0.5, 0.0, 0.5, 120, {false});
  for (int j = 0; j <= 120; ++j) {
    const auto& a = par.column(j);
    const auto& b = ser.column(j);
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("semigroup property at beta = 1/4") {
  const int n = 64;
  oc::FioOperator quarter(0.25, 0.0, 0.25, n + 4);
  oc::FioOperator half(0.5, 0.0, 0.25, n + 4);
  for (int j = 0; j + 2 <= n; ++j) {
    std::vector<double> e(static_cast<size_t>(j) + 1, 0.0);
    e[static_cast<size_t>(j)] = 1.0;
    const auto once = quarter.apply(e);
    const auto twice = quarter.apply(once);
    const auto direct = half.column(j);
    double m = 0.0, s = 0.0;
    for (size_t i = 0; i < direct.size() && i < static_cast<size_t>(n - 2); ++i) {
      m = std::max(m, std::abs(twice[i] - direct[i]));
      s = std::max(s, std::abs(direct[i]));
    }
    CHECK(m <= 1e-10 * s);
  }
}

TEST_CASE("apply matches explicit column combination") {
  oc::FioOperator op(0.5, 0.0, 0.5, 12);
  std::vector<double> x{0.3, -1.2, 0.07, 2.0};
  const auto y = op.apply(x);
  CHECK(y.size() == x.size() + static_cast<size_t>(op.power_k()));
  std::vector<double> want(y.size(), 0.0);
  for (size_t j = 0; j < x.size(); ++j) {
    const auto& col = op.column(static_cast<int>(j));
    for (size_t i = 0; i < col.size(); ++i) want[i] += col[i] * x[j];
  }
  for (size_t i = 0; i < y.size(); ++i) CHECK(y[i] == doctest::Approx(want[i]).epsilon(1e-15));
}

TEST_CASE("grow cost is dominated by the new columns") {
  using clock = std::chrono::steady_clock;
  const int n = 700;
  const auto t0 = clock::now();
  oc::FioOperator op(0.5, 0.0, 0.5, n);
  const auto t1 = clock::now();
  op.ensure_columns(2 * n);
  const auto t2 = clock::now();
  const double build = std::chrono::duration<double>(t1 - t0).count();
  const double extend = std::chrono::duration<double>(t2 - t1).count();
  // quadratic increments: extending to 2N costs about 3x the initial build
  CHECK(extend > 1.2 * build);
  CHECK(extend < 8.0 * build);
}

TEST_CASE("memory instrumentation") {
  oc::FioOperator a(0.5, 0.0, 0.5, 512);
  oc::FioOperator b(0.5, 0.0, 0.5, 1024);
  CHECK(b.cached_column_bytes() > 3 * a.cached_column_bytes());  // quadratic cache
  CHECK(b.overhead_bytes() < 3 * a.overhead_bytes());            // linear overhead
  CHECK(b.overhead_bytes() <
        1000 + 24 * sizeof(double) * 1025 * static_cast<size_t>(b.power_k() + 1));
}

TEST_CASE("csv and json export") {
  oc::FioOperator op(0.5, 0.0, 0.5, 6);
  std::ostringstream csv;
  oc::write_operator_csv(op, 4, csv);
  const std::string text = csv.str();
  CHECK(text.find("schema 1") != std::string::npos);
  CHECK(text.find("0.797884560802865") != std::string::npos);

  std::ostringstream js;
  oc::write_operator_json(op, 4, js);
  const auto parsed = nlohmann::json::parse(js.str());
  CHECK(parsed.at("N").get<int>() == 4);
  CHECK(parsed.at("columns").size() == 4);
  CHECK(parsed.at("columns")[0][0].get<double>() ==
        doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-15));
}
