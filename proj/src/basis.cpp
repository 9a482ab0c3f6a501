#include "fracspec/basis.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace fracspec::basis {

double eval_jfp(const JfpBasis& basis, int n, double x) {
  if (n < 0) throw std::invalid_argument("eval_jfp: negative degree");
  if (x == -1.0 && basis.alpha < 0.0)
    throw std::domain_error("eval_jfp: weight singular at x = -1 for alpha < 0");
  // Long-double angle keeps the trig form of T_n accurate to ~1e-15 even for
  // degrees in the thousands.
  const long double w = 0.5L * (1.0L + (long double)x);
  long double y = 2.0L * powl(w, (long double)basis.beta) - 1.0L;
  if (y > 1.0L) y = 1.0L;
  if (y < -1.0L) y = -1.0L;
  const long double tn = cosl((long double)n * acosl(y));
  const long double wt = basis.alpha == 0.0 ? 1.0L : powl(w, (long double)basis.alpha);
  return static_cast<double>(wt * tn);
}

std::vector<double> mapped_grid(const JfpBasis& basis, int n) {
  if (n < 2) throw std::invalid_argument("mapped_grid: need at least two points");
  std::vector<double> g(static_cast<size_t>(n));
  g[0] = 1.0;
  g[static_cast<size_t>(n - 1)] = -1.0;
  for (int j = 1; j < n - 1; ++j) {
    // sin form is symmetric and hits 0 exactly at the midpoint
    const double y = std::sin(M_PI * (n - 1 - 2 * j) / (2.0 * (n - 1)));
    g[static_cast<size_t>(j)] = basis.unmap(y);
  }
  return g;
}

namespace {

// FFTW planning is not thread-safe; guard a small per-size plan cache.
std::mutex g_fftw_mutex;

void fftw_redft00(const double* in, double* out, int n) {
  static std::map<int, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(g_fftw_mutex);
  auto it = plans.find(n);
  if (it == plans.end()) {
    std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
    fftw_plan p = fftw_plan_r2r_1d(n, a.data(), b.data(), FFTW_REDFT00, FFTW_ESTIMATE);
    it = plans.emplace(n, p).first;
  }
  std::vector<double> a(in, in + n), b(static_cast<size_t>(n));
  fftw_execute_r2r(it->second, a.data(), b.data());
  for (int i = 0; i < n; ++i) out[i] = b[static_cast<size_t>(i)];
}

// X_k = f_0 + (-1)^k f_{n-1} + 2 sum_{j=1}^{n-2} f_j cos(pi j k / (n-1)).
// The phase index j*k is reduced modulo the period in integer arithmetic;
// feeding cos() angles of size ~n^2 would smear a rounded step across them.
void redft00_direct(const double* f, double* x, int n) {
  const long period = 2L * (n - 1);
  for (int k = 0; k < n; ++k) {
    double acc = f[0] + (k % 2 == 0 ? f[n - 1] : -f[n - 1]);
    for (int j = 1; j < n - 1; ++j) {
      const long m = (static_cast<long>(j) * k) % period;
      acc += 2.0 * f[j] * std::cos(M_PI * m / (n - 1));
    }
    x[k] = acc;
  }
}

void redft00(const double* in, double* out, int n, TransformPath path) {
  if (path == TransformPath::kFast)
    fftw_redft00(in, out, n);
  else
    redft00_direct(in, out, n);
}

}  // namespace

std::vector<double> dct1_values_to_coeffs(const std::vector<double>& values,
                                          TransformPath path) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw std::invalid_argument("values_to_coeffs: need at least two samples");
  std::vector<double> x(static_cast<size_t>(n));
  redft00(values.data(), x.data(), n, path);
  for (int k = 0; k < n; ++k) {
    const double norm = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    x[static_cast<size_t>(k)] *= norm / (n - 1);
  }
  return x;
}

std::vector<double> dct1_coeffs_to_values(const std::vector<double>& coeffs, int n,
                                          TransformPath path) {
  const int len = static_cast<int>(coeffs.size());
  if (n < len) throw std::invalid_argument("coeffs_to_values: n below coefficient count");
  if (n < 2) throw std::invalid_argument("coeffs_to_values: need at least two points");
  std::vector<double> half(static_cast<size_t>(n), 0.0);
  for (int k = 0; k < len; ++k)
    half[static_cast<size_t>(k)] = (k == 0 || k == n - 1) ? coeffs[static_cast<size_t>(k)]
                                                          : 0.5 * coeffs[static_cast<size_t>(k)];
  std::vector<double> out(static_cast<size_t>(n));
  redft00(half.data(), out.data(), n, path);
  return out;
}

template <>
CoeffVec<double> values_to_coeffs(const JfpBasis& basis, const std::vector<double>& values,
                                  TransformPath path) {
  return {basis, dct1_values_to_coeffs(values, path)};
}

template <>
CoeffVec<Complex> values_to_coeffs(const JfpBasis& basis, const std::vector<Complex>& values,
                                   TransformPath path) {
  const size_t n = values.size();
  std::vector<double> re(n), im(n);
  for (size_t i = 0; i < n; ++i) {
    re[i] = values[i].real();
    im[i] = values[i].imag();
  }
  const auto cre = dct1_values_to_coeffs(re, path);
  const auto cim = dct1_values_to_coeffs(im, path);
  std::vector<Complex> c(n);
  for (size_t i = 0; i < n; ++i) c[i] = Complex(cre[i], cim[i]);
  return {basis, std::move(c)};
}

template <>
std::vector<double> coeffs_to_values(const CoeffVec<double>& u, int n, TransformPath path) {
  return dct1_coeffs_to_values(u.coeffs, n, path);
}

template <>
std::vector<Complex> coeffs_to_values(const CoeffVec<Complex>& u, int n, TransformPath path) {
  const size_t len = u.coeffs.size();
  std::vector<double> re(len), im(len);
  for (size_t i = 0; i < len; ++i) {
    re[i] = u.coeffs[i].real();
    im[i] = u.coeffs[i].imag();
  }
  const auto vre = dct1_coeffs_to_values(re, n, path);
  const auto vim = dct1_coeffs_to_values(im, n, path);
  std::vector<Complex> v(static_cast<size_t>(n));
  for (size_t i = 0; i < v.size(); ++i) v[i] = Complex(vre[i], vim[i]);
  return v;
}

}  // namespace fracspec::basis
