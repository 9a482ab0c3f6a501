#include "fracspec/quad.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "fracspec/runtime.hpp"
#include "fracspec/special.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fracspec::quad {

namespace {

constexpr double kLn2 = 0.6931471805599453094;

std::shared_ptr<const DeRule> make_rule(int num_points, double half_width) {
  if (num_points < 2) throw std::invalid_argument("DeRule: need at least two points");
  auto rule = std::make_shared<DeRule>();
  rule->num_points = num_points;
  rule->half_width = half_width;
  rule->nodes.resize(static_cast<size_t>(num_points));
  rule->weights.resize(static_cast<size_t>(num_points));
  rule->log_weights.resize(static_cast<size_t>(num_points));
  rule->om_half.resize(static_cast<size_t>(num_points));
  rule->log_om.resize(static_cast<size_t>(num_points));
  rule->log_op.resize(static_cast<size_t>(num_points));
  const double h = 2.0 * half_width / (num_points - 1);
  const double log_pref = std::log(0.5 * M_PI * h);
  for (int i = 0; i < num_points; ++i) {
    const size_t ii = static_cast<size_t>(i);
    const double tau = -half_width + h * i;
    // sinh and cosh from a single expm1
    const double em = std::expm1(tau);
    const double sinh_t = 0.5 * (em + em / (1.0 + em));
    const double cosh_t = 0.5 * ((1.0 + em) + 1.0 / (1.0 + em));
    const double w = 0.5 * M_PI * sinh_t;
    const double q = std::exp(-2.0 * std::abs(w));  // e^{-2|w|} in (0, 1]
    const double l1q = std::log1p(q);
    // 1 -/+ s = 2 e^{-2w} / (1 + e^{-2w}) on the near side, 2 / (1 + e^{-2|w|})
    // on the far side.
    double log_om, log_op;
    if (w >= 0.0) {
      log_om = kLn2 - 2.0 * w - l1q;
      log_op = kLn2 - l1q;
    } else {
      log_om = kLn2 - l1q;
      log_op = kLn2 + 2.0 * w - l1q;
    }
    const double s = w >= 0.0 ? (1.0 - q) / (1.0 + q) : -(1.0 - q) / (1.0 + q);
    const double om_half = w >= 0.0 ? q / (1.0 + q) : 1.0 / (1.0 + q);
    // log of trapezoid weight times ds/dtau; endpoints halved
    double log_wt = log_pref + std::log(cosh_t) + kLn2 * 2.0 - 2.0 * std::abs(w) - 2.0 * l1q;
    if (i == 0 || i == num_points - 1) log_wt -= kLn2;
    rule->nodes[ii] = s;
    rule->om_half[ii] = om_half;
    rule->log_weights[ii] = log_wt;
    rule->weights[ii] = std::exp(log_wt);
    rule->log_om[ii] = log_om;
    rule->log_op[ii] = log_op;
  }
  return rule;
}

// Bounded cache; per-degree rule sizes would otherwise accumulate O(N^2)
// node storage over a full operator sweep.
constexpr size_t kRuleCacheCap = 8;
std::mutex g_rule_mutex;
std::deque<std::shared_ptr<const DeRule>> g_rule_cache;

}  // namespace

std::shared_ptr<const DeRule> DeRule::get(int num_points, double half_width) {
  {
    std::lock_guard<std::mutex> lock(g_rule_mutex);
    for (const auto& r : g_rule_cache)
      if (r->num_points == num_points && r->half_width == half_width) return r;
  }
  auto rule = make_rule(num_points, half_width);
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  g_rule_cache.push_back(rule);
  if (g_rule_cache.size() > kRuleCacheCap) g_rule_cache.pop_front();
  return rule;
}

double moment_h(int n, double mu, double alpha, double beta) {
  if (!(mu > 0.0)) throw std::invalid_argument("moment_h: mu must be positive");
  const double p = 1.0 + alpha + n * beta;
  if (!(p > 0.0)) throw std::invalid_argument("moment_h: 1 + alpha + n*beta must be positive");
  return std::exp((mu + alpha + n * beta) * kLn2 + special::lgamma_pos(mu) +
                  special::lgamma_pos(p) - special::lgamma_pos(mu + p));
}

double de_half_width(double mu, double alpha) {
  // The window truncation error decays like exp(-pi sinh(H) r) with
  // r = min(mu, 1+alpha); H = 4 only suffices for r >= 1/2.
  const double r = std::min(1.0, std::min(mu, 1.0 + alpha));
  return std::max(4.0, std::asinh(44.0 / (M_PI * r)));
}

namespace {

enum class MapKind { kSqrt, kLinear, kThreeHalves, kGeneral };

MapKind map_kind(double beta) {
  if (beta == 0.5) return MapKind::kSqrt;
  if (beta == 1.0) return MapKind::kLinear;
  if (beta == 1.5) return MapKind::kThreeHalves;
  return MapKind::kGeneral;
}

// Mapped abscissa y = 2((1-s)/2)^beta - 1 with cheap paths for the common
// half-integer maps.
inline double mapped_y(MapKind kind, double om_half, double log_om, double beta) {
  double y;
  switch (kind) {
    case MapKind::kSqrt:
      y = 2.0 * std::sqrt(om_half) - 1.0;
      break;
    case MapKind::kLinear:
      y = 2.0 * om_half - 1.0;
      break;
    case MapKind::kThreeHalves:
      y = 2.0 * om_half * std::sqrt(om_half) - 1.0;
      break;
    default:
      y = 2.0 * std::exp(beta * (log_om - kLn2)) - 1.0;
      break;
  }
  return y > 1.0 ? 1.0 : (y < -1.0 ? -1.0 : y);
}

// One quadrature point of the endpoint integral. The envelope is a single
// log-space exponential: the weight underflows double exactly where the
// endpoint factors overflow, so a factorwise product would manufacture
// inf * 0.
inline double phi_point(MapKind kind, double nd, double mu, double alpha, double beta,
                        double log_wt, double log_om, double log_op, double om_half) {
  const double env = std::exp(log_wt + alpha * log_om + (mu - 1.0) * log_op);
  const double y = mapped_y(kind, om_half, log_om, beta);
  return env * std::cos(nd * std::acos(y));
}

}  // namespace

double boundary_phi(int n1, double mu, double alpha, double beta, double half_width) {
  if (n1 < 0) throw std::invalid_argument("boundary_phi: negative index");
  if (half_width <= 0.0) half_width = de_half_width(mu, alpha);
  const int pts = std::max(8 * n1, 80);
  const MapKind kind = map_kind(beta);
  const double nd = static_cast<double>(n1);
  double acc = 0.0;

  // Small rules are kept in the shared cache (they are the ones that see
  // reuse); a large rule is consumed once per degree, so its nodes are
  // streamed without being materialized. Both branches evaluate node data
  // with the same arithmetic.
  if (pts <= 320) {
    const auto rule = DeRule::get(pts, half_width);
    for (int i = 0; i < pts; ++i) {
      const size_t ii = static_cast<size_t>(i);
      const double v = phi_point(kind, nd, mu, alpha, beta, rule->log_weights[ii],
                                 rule->log_om[ii], rule->log_op[ii], rule->om_half[ii]);
      if (std::isnan(v)) throw std::runtime_error("boundary_phi: NaN in integrand");
      acc += v;
    }
    return acc;
  }

  const double h = 2.0 * half_width / (pts - 1);
  const double log_pref = std::log(0.5 * M_PI * h);
  for (int i = 0; i < pts; ++i) {
    const double tau = -half_width + h * i;
    const double em = std::expm1(tau);
    const double sinh_t = 0.5 * (em + em / (1.0 + em));
    const double cosh_t = 0.5 * ((1.0 + em) + 1.0 / (1.0 + em));
    const double w = 0.5 * M_PI * sinh_t;
    const double q = std::exp(-2.0 * std::abs(w));
    const double l1q = std::log1p(q);
    double log_om, log_op, om_half;
    if (w >= 0.0) {
      log_om = kLn2 - 2.0 * w - l1q;
      log_op = kLn2 - l1q;
      om_half = q / (1.0 + q);
    } else {
      log_om = kLn2 - l1q;
      log_op = kLn2 + 2.0 * w - l1q;
      om_half = 1.0 / (1.0 + q);
    }
    double log_wt = log_pref + std::log(cosh_t) + kLn2 * 2.0 - 2.0 * std::abs(w) - 2.0 * l1q;
    if (i == 0 || i == pts - 1) log_wt -= kLn2;
    const double v = phi_point(kind, nd, mu, alpha, beta, log_wt, log_om, log_op, om_half);
    if (std::isnan(v)) throw std::runtime_error("boundary_phi: NaN in integrand");
    acc += v;
  }
  return acc;
}

void boundary_phi_batch(int n1_lo, int n1_hi, double mu, double alpha, double beta,
                        double* out, bool parallel) {
  if (n1_hi < n1_lo) return;
  const int count = n1_hi - n1_lo + 1;
  const int threads = parallel ? runtime::max_threads() : 1;
  if (threads > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int i = 0; i < count; ++i)
      out[i] = boundary_phi(n1_lo + i, mu, alpha, beta);
#else
    for (int i = 0; i < count; ++i)
      out[i] = boundary_phi(n1_lo + i, mu, alpha, beta);
#endif
  } else {
    for (int i = 0; i < count; ++i)
      out[i] = boundary_phi(n1_lo + i, mu, alpha, beta);
  }
}

}  // namespace fracspec::quad
