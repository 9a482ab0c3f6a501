#include "fracspec/feq.hpp"

#include <chrono>
#include <cmath>

#include "fracspec/io.hpp"
#include "fracspec/special.hpp"

namespace fracspec::feq {

namespace {

constexpr double kCoeffTail = 1e-14;

int snapped_multiple(double mu, double beta) {
  const int k = static_cast<int>(std::lround(mu / beta));
  if (k < 1 || std::abs(mu - k * beta) > 1e-12 * k) return -1;
  return k;
}

}  // namespace

Multiplier<double> multiplier_from_function(const basis::JfpBasis& basis,
                                            const std::function<double(double)>& f) {
  for (int n = 16; n <= 4096; n *= 2) {
    // Sample against 1+x computed straight from the map; recovering it from
    // a rounded grid point loses all relative accuracy where the grid
    // clusters at the left endpoint.
    std::vector<double> vals(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double y = j == 0 ? 1.0
                              : (j == n - 1 ? -1.0
                                            : std::sin(M_PI * (n - 1 - 2 * j) / (2.0 * (n - 1))));
      vals[static_cast<size_t>(j)] = f(2.0 * std::pow(0.5 * (1.0 + y), 1.0 / basis.beta));
    }
    auto c = basis::dct1_values_to_coeffs(vals);
    double cmax = 0.0;
    for (double v : c) cmax = std::max(cmax, std::abs(v));
    double tail = 0.0;
    for (size_t i = c.size() - c.size() / 4; i < c.size(); ++i)
      tail = std::max(tail, std::abs(c[i]));
    if (cmax == 0.0) return Multiplier<double>::constant(0.0);
    if (tail < kCoeffTail * cmax) {
      size_t keep = c.size();
      while (keep > 1 && std::abs(c[keep - 1]) < kCoeffTail * cmax) --keep;
      c.resize(keep);
      return Multiplier<double>::from_series(std::move(c));
    }
  }
  throw std::invalid_argument("multiplier_from_function: expansion tail did not settle");
}

template <class S>
FeqSystem<S>::FeqSystem(FieProblem<S> p) : p_(std::move(p)) {
  if (!(p_.rhs.basis == p_.basis))
    throw std::invalid_argument("FeqSystem: rhs basis mismatch");
  term_op_.resize(p_.terms.size(), -1);
  std::vector<double> mus;
  for (size_t t = 0; t < p_.terms.size(); ++t) {
    const auto& term = p_.terms[t];
    int band = term.a.degree() + term.b.degree();
    if (term.mu != 0.0) {
      const int k = snapped_multiple(term.mu, p_.basis.beta);
      if (k < 0)
        throw std::invalid_argument("FeqSystem: fractional order is not a multiple of beta");
      band += k;
      size_t oi = 0;
      for (; oi < mus.size(); ++oi)
        if (mus[oi] == term.mu) break;
      if (oi == mus.size()) {
        mus.push_back(term.mu);
        ops_.push_back(std::make_shared<opcore::FioOperator>(term.mu, p_.basis.alpha,
                                                             p_.basis.beta, 2));
      }
      term_op_[t] = static_cast<int>(oi);
    }
    op_band_ = std::max(op_band_, band);
  }
  const int d = dense_rows();
  const int naux = aux_count();
  int off = d + op_band_ - naux;
  for (int j = 0; j < naux; ++j) {
    const int last_row = d + static_cast<int>(p_.aux[static_cast<size_t>(j)].op.size()) - 1;
    off = std::max(off, last_row - j);
  }
  offset_ = std::max(off, 0);
}

template <class S>
void FeqSystem<S>::ensure(int assembled_col) {
  const int c = assembled_col - aux_count();
  if (c < 0) return;
  for (size_t t = 0; t < p_.terms.size(); ++t) {
    if (term_op_[t] < 0) continue;
    const int need = c + p_.terms[t].b.degree();
    auto& op = ops_[static_cast<size_t>(term_op_[t])];
    if (op->max_column() < need) op->ensure_columns(std::max(need, 2 * op->max_column()));
  }
}

template <class S>
void FeqSystem<S>::operator_column(int c, std::vector<S>& out) const {
  out.assign(static_cast<size_t>(c + op_band_ + 1), S(0));
  // Banded entry of the multiplication matrix (Toeplitz plus Hankel with a
  // zeroed first Hankel row), valid for any scalar field.
  auto mul_entry = [](const Multiplier<S>& m, int i, int j) -> S {
    const int k = m.degree();
    if (i < 0 || j < 0 || std::abs(i - j) > k) return S(0);
    const S toep = (i == j) ? S(2.0) * m.coeffs[0] : m.coeffs[static_cast<size_t>(std::abs(i - j))];
    const S hank = (i >= 1 && i + j <= k) ? m.coeffs[static_cast<size_t>(i + j)] : S(0);
    return S(0.5) * (toep + hank);
  };

  std::vector<S> v1, v2, v3;
  for (size_t t = 0; t < p_.terms.size(); ++t) {
    const auto& term = p_.terms[t];
    const int da = term.a.degree(), db = term.b.degree();
    if (term_op_[t] < 0) {
      for (int i = std::max(0, c - da); i <= c + da && i < static_cast<int>(out.size()); ++i)
        out[static_cast<size_t>(i)] += mul_entry(term.a, i, c);
      continue;
    }
    const auto& op = *ops_[static_cast<size_t>(term_op_[t])];
    // v1 = M[b] e_c (densely indexed from row 0)
    const int len1 = c + db + 1;
    v1.assign(static_cast<size_t>(len1), S(0));
    if (term.b.is_one()) {
      v1[static_cast<size_t>(c)] = S(1);
    } else {
      for (int i = std::max(0, c - db); i < len1; ++i)
        v1[static_cast<size_t>(i)] = mul_entry(term.b, i, c);
    }
    // v2 = S v1
    const int len2 = len1 + op.power_k();
    v2.assign(static_cast<size_t>(len2), S(0));
    for (int l = 0; l < len1; ++l) {
      const S w = v1[static_cast<size_t>(l)];
      if (w == S(0)) continue;
      const auto& col = op.column(l);
      for (size_t i = 0; i < col.size(); ++i) v2[i] += S(col[i]) * w;
    }
    // v3 = M[a] v2
    if (term.a.is_one()) {
      for (int i = 0; i < len2 && i < static_cast<int>(out.size()); ++i)
        out[static_cast<size_t>(i)] += v2[static_cast<size_t>(i)];
    } else {
      const int len3 = len2 + da;
      v3.assign(static_cast<size_t>(len3), S(0));
      for (int i = 0; i < len3; ++i) {
        S acc(0);
        for (int j = std::max(0, i - da); j <= std::min(len2 - 1, i + da); ++j)
          acc += mul_entry(term.a, i, j) * v2[static_cast<size_t>(j)];
        v3[static_cast<size_t>(i)] = acc;
      }
      for (int i = 0; i < len3 && i < static_cast<int>(out.size()); ++i)
        out[static_cast<size_t>(i)] += v3[static_cast<size_t>(i)];
    }
  }
}

template <class S>
void FeqSystem<S>::assembled_column(int j, std::vector<S>& out) const {
  const int d = dense_rows();
  const int naux = aux_count();
  std::fill(out.begin(), out.end(), S(0));
  if (j < naux) {
    const auto& aux = p_.aux[static_cast<size_t>(j)];
    for (size_t r = 0; r < aux.top.size() && r < out.size(); ++r) out[r] = aux.top[r];
    for (size_t r = 0; r < aux.op.size(); ++r) {
      const size_t i = r + static_cast<size_t>(d);
      if (i < out.size()) out[i] = aux.op[r];
    }
    return;
  }
  const int c = j - naux;
  std::vector<S> col;
  operator_column(c, col);
  for (int r = 0; r < d; ++r)
    if (static_cast<size_t>(r) < out.size()) out[static_cast<size_t>(r)] = p_.extra_rows[static_cast<size_t>(r)].entry(c);
  for (size_t i = 0; i < col.size(); ++i) {
    const size_t r = i + static_cast<size_t>(d);
    if (r < out.size()) out[r] = col[i];
  }
}

template <class S>
S FeqSystem<S>::assembled_rhs(int i) const {
  const int d = dense_rows();
  if (i < d) return p_.extra_rows[static_cast<size_t>(i)].value;
  const int r = i - d;
  if (r < static_cast<int>(p_.rhs.coeffs.size())) return p_.rhs.coeffs[static_cast<size_t>(r)];
  return S(0);
}

template <class S>
int FeqSystem<S>::rhs_support() const {
  return dense_rows() + static_cast<int>(p_.rhs.coeffs.size());
}

template <class S>
linalg::StreamedLowerBanded<S> FeqSystem<S>::stream() {
  linalg::StreamedLowerBanded<S> sys;
  sys.offset = offset_;
  sys.column = [this](int j, std::vector<S>& out) { assembled_column(j, out); };
  sys.rhs = [this](int i) { return assembled_rhs(i); };
  sys.rhs_support = rhs_support();
  sys.ensure = [this](int j) { ensure(j); };
  return sys;
}

template <class S>
const opcore::FioOperator& FeqSystem<S>::op_for_term(size_t term) const {
  if (term >= term_op_.size() || term_op_[term] < 0)
    throw std::invalid_argument("FeqSystem::op_for_term: identity term");
  return *ops_[static_cast<size_t>(term_op_[term])];
}

template <class S>
std::vector<S> FeqSystem<S>::apply_truncated(const std::vector<S>& x, int rows) const {
  std::vector<S> y(static_cast<size_t>(rows), S(0));
  std::vector<S> col(static_cast<size_t>(rows + offset_ + 1), S(0));
  for (int j = 0; j < static_cast<int>(x.size()); ++j) {
    col.assign(static_cast<size_t>(j + offset_ + 1), S(0));
    assembled_column(j, col);
    const S xj = x[static_cast<size_t>(j)];
    for (int i = 0; i < rows && i < static_cast<int>(col.size()); ++i)
      y[static_cast<size_t>(i)] += col[static_cast<size_t>(i)] * xj;
  }
  return y;
}

template <class S>
SolveReport<S> solve(const FieProblem<S>& problem, double tol, int n_max) {
  const auto t0 = std::chrono::steady_clock::now();
  FeqSystem<S> sys(problem);
  linalg::AdaptiveQrOptions opts;
  opts.tol = tol;
  opts.n_max = n_max;
  opts.aux = sys.aux_count();
  auto stream = sys.stream();
  auto qr = linalg::adaptive_qr_solve(stream, opts);

  SolveReport<S> rep{basis::CoeffVec<S>{problem.basis, {}}, {}, 0, 0.0, {}, 0.0};
  rep.aux_values.assign(qr.solution.begin(), qr.solution.begin() + sys.aux_count());
  rep.solution.coeffs.assign(qr.solution.begin() + sys.aux_count(), qr.solution.end());
  rep.n_used = qr.n_used;
  rep.residual = qr.residual;
  rep.residual_history = std::move(qr.residual_history);
  rep.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

template class FeqSystem<double>;
template class FeqSystem<Complex>;
template SolveReport<double> solve(const FieProblem<double>&, double, int);
template SolveReport<Complex> solve(const FieProblem<Complex>&, double, int);

// ---- showcases -------------------------------------------------------------

FieProblem<double> abel_problem(double lambda) {
  basis::JfpBasis b(0.0, 0.5);
  FieProblem<double> p{b, {}, {b, {1.0}}, {}, {}};
  p.terms.push_back({0.0, Multiplier<double>::constant(1.0), {}});
  p.terms.push_back({0.5, Multiplier<double>::constant(lambda * lambda), {}});
  return p;
}

SolveReport<double> solve_abel(double lambda, double tol, int n_max) {
  return solve(abel_problem(lambda), tol, n_max);
}

double abel_exact(double lambda, double x) {
  return special::erfcx(lambda * lambda * std::sqrt(1.0 + x));
}

FieProblem<double> var_problem() {
  basis::JfpBasis b(0.0, 1.0 / 6.0);
  FieProblem<double> p{b, {}, {b, {}}, {}, {}};
  p.terms.push_back({0.0, Multiplier<double>::constant(1.0), {}});
  // sqrt(1+x) = sqrt(2) ((1+x)/2)^{3 beta}
  p.terms.push_back({1.0 / 3.0, Multiplier<double>::monomial(3, std::sqrt(2.0)), {}});
  // (1+x)^{1/3} = 2^{1/3} ((1+x)/2)^{2 beta} as the inner multiplier
  p.terms.push_back({0.5, {}, Multiplier<double>::monomial(2, std::cbrt(2.0))});

  const double c = special::gamma(2.5) / special::gamma(17.0 / 6.0) +
                   special::gamma(17.0 / 6.0) / special::gamma(10.0 / 3.0);
  auto rhs1 = Multiplier<double>::monomial(9, std::pow(2.0, 1.5));
  auto rhs2 = Multiplier<double>::monomial(14, c * std::pow(2.0, 7.0 / 3.0));
  std::vector<double> rhs(rhs2.coeffs.size(), 0.0);
  for (size_t i = 0; i < rhs1.coeffs.size(); ++i) rhs[i] += rhs1.coeffs[i];
  for (size_t i = 0; i < rhs2.coeffs.size(); ++i) rhs[i] += rhs2.coeffs[i];
  p.rhs.coeffs = std::move(rhs);
  return p;
}

SolveReport<double> solve_var(double tol, int n_max) { return solve(var_problem(), tol, n_max); }

double var_exact(double x) { return std::pow(1.0 + x, 1.5); }

BboReport solve_bbo(double tol, int n_max) {
  basis::JfpBasis b(0.0, 0.5);
  FieProblem<double> p{b, {}, {b, {-1.0}}, {}, {}};
  p.terms.push_back({0.0, Multiplier<double>::constant(1.0), {}});
  p.terms.push_back({0.5, {}, {}});
  p.terms.push_back({1.0, {}, {}});
  BboReport rep{solve(p, tol, n_max), {b, {}}, };

  // v = I^1 u + 1
  opcore::FioOperator i1(1.0, 0.0, 0.5, static_cast<int>(rep.u.solution.coeffs.size()));
  auto v = i1.apply(rep.u.solution.coeffs);
  if (v.empty()) v.push_back(0.0);
  v[0] += 1.0;
  rep.v.coeffs = std::move(v);
  return rep;
}

double BboReport::eval_v(double t) const {
  const double x = t - 1.0;
  return basis::eval_series(v, {x})[0];
}

double BboReport::exact_v(double t) const {
  if (t <= 0.0) return 1.0;
  const Complex arg = Complex(-0.5, 0.5 * std::sqrt(3.0)) * std::sqrt(t);
  const auto ml = special::mittag_leffler(0.5, 0.5, arg, 1e-15);
  const Complex w = Complex(0.5, std::sqrt(3.0) / 6.0) * ml.value;
  return (1.0 / std::sqrt(M_PI) - 2.0 * w.real()) / std::sqrt(t);
}

namespace {

// Chebyshev-in-y coefficients of x(1+x) expressed against the weight
// ((1+x)/2)^{-1/2}, all exact finite expansions for beta = 1/2.
std::vector<double> airy_x_times_1px_coeffs() {
  const std::vector<double> xc{-0.25, 1.0, 0.25};          // x
  const std::vector<double> oc{0.75, 1.0, 0.25};           // 1 + x
  const std::vector<double> sc{0.5, 0.5};                  // ((1+x)/2)^{1/2}
  return opcore::cheb_product(opcore::cheb_product(xc, oc), sc);
}

}  // namespace

AiryReport solve_airy(double eps, double plateau_tol, int n_max) {
  basis::JfpBasis b(-0.5, 0.5);
  const Complex eihalf = eps * Complex(-1.0, 1.0) / std::sqrt(2.0);  // eps * i^{3/2}

  // The bordered system as displayed has an exact null pair: v0 a pure
  // multiple of the first basis function with I^{3/2} v0 = -(1+x), a0 = 1,
  // annihilating both block rows for every eps. The leading coefficient of
  // v is therefore pure gauge; columns below start at coefficient 1, which
  // pins it to zero and restores a unique, well-conditioned solve.
  auto op = std::make_shared<opcore::FioOperator>(1.5, b.alpha, b.beta, 8);
  const opcore::MulOp minus_x(std::vector<double>{0.25, -1.0, -0.25});

  // g = eps i^{3/2} (1+x)^{-1/2} / Gamma(1/2) - x(1+x), expanded exactly.
  const auto xpx = airy_x_times_1px_coeffs();
  std::vector<Complex> g(std::max<size_t>(xpx.size(), 1), Complex(0.0));
  for (size_t i = 0; i < xpx.size(); ++i) g[i] = Complex(-xpx[i], 0.0);
  g[0] += eihalf / (std::sqrt(2.0) * special::gamma(0.5));

  const int band = op->power_k() + minus_x.bandwidth();  // operator block
  const int offset = band + 1;                           // one dense row, one aux column

  linalg::StreamedLowerBanded<Complex> stream;
  stream.offset = offset;
  stream.rhs = [](int i) { return i == 0 ? Complex(1.0, 0.0) : Complex(0.0, 0.0); };
  stream.rhs_support = static_cast<int>(g.size()) + 1;
  stream.ensure = [op](int col) {
    if (op->max_column() < col) op->ensure_columns(std::max(col, 2 * op->max_column()));
  };
  stream.column = [&, op](int j, std::vector<Complex>& out) {
    std::fill(out.begin(), out.end(), Complex(0.0));
    if (j == 0) {
      out[0] = Complex(2.0, 0.0);
      for (size_t i = 0; i < g.size() && i + 1 < out.size(); ++i) out[i + 1] = g[i];
      return;
    }
    const int c = j;  // gauge: column j carries coefficient index j, j >= 1
    out[0] = Complex(op->column_sum(c), 0.0);
    const auto ms = minus_x.apply(op->column(c));
    for (size_t i = 0; i < ms.size() && i + 1 < out.size(); ++i) out[i + 1] = Complex(ms[i], 0.0);
    if (static_cast<size_t>(c) + 1 < out.size()) out[static_cast<size_t>(c) + 1] += eihalf;
  };

  // Sample points for the Cauchy error (interior; x = -1 is structural).
  std::vector<double> controls(256);
  for (int q = 0; q < 256; ++q) controls[static_cast<size_t>(q)] = std::cos(M_PI * q / 256.0);

  AiryReport rep{{b, {}}, {b, {}}, Complex(0.0), 0, {}, false, 0.0};
  std::vector<Complex> prev_vals;
  int below = 0;
  for (int n = 128; n <= n_max; n *= 2) {
    linalg::AdaptiveQrOptions opts;
    opts.force_n = n + 1;  // aux column plus n coefficients
    opts.aux = 1;
    opts.tol = 0.0;  // keep every coefficient so the Cauchy error is honest
    auto qr = linalg::adaptive_qr_solve(stream, opts);
    rep.a = qr.solution[0];
    std::vector<Complex> vh(static_cast<size_t>(n) + 1, Complex(0.0));
    for (int i = 1; i <= n; ++i) vh[static_cast<size_t>(i)] = qr.solution[static_cast<size_t>(i)];
    rep.vhat = {b, std::move(vh)};
    rep.integral = {b, op->apply(rep.vhat.coeffs)};
    rep.n_final = n;

    std::vector<Complex> vals(controls.size());
    for (size_t i = 0; i < controls.size(); ++i) vals[i] = rep.eval_u(controls[i]);
    if (!prev_vals.empty()) {
      double cerr = 0.0;
      for (size_t i = 0; i < vals.size(); ++i)
        cerr = std::max(cerr, std::abs(vals[i] - prev_vals[i]));
      rep.cauchy_history.emplace_back(n, cerr);
      below = cerr <= plateau_tol ? below + 1 : 0;
    }
    prev_vals = std::move(vals);
    if (below >= 2) {
      rep.plateaued = true;
      break;
    }
  }

  Complex u1(0.0);
  for (const auto& c : rep.integral.coeffs) u1 += c;
  u1 += 2.0 * rep.a;
  rep.boundary_right_error = std::abs(u1 - 1.0);
  return rep;
}

Complex AiryReport::eval_u(double x) const {
  if (x == -1.0) return Complex(0.0);
  const Complex base = basis::eval_series(integral, {x})[0];
  return base + a * (1.0 + x);
}

// ---- problem files ----------------------------------------------------------

namespace {

std::vector<Complex> coeff_spec(const nlohmann::json& j, bool* all_real) {
  std::vector<Complex> out;
  if (j.contains("constant")) {
    out.push_back(Complex(j.at("constant").get<double>(), 0.0));
  } else if (j.contains("coeffs")) {
    for (const auto& e : j.at("coeffs")) {
      if (e.is_array()) {
        out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        if (e.at(1).get<double>() != 0.0) *all_real = false;
      } else {
        out.emplace_back(e.get<double>(), 0.0);
      }
    }
  } else if (j.contains("monomials")) {
    for (const auto& e : j.at("monomials")) {
      const auto m = Multiplier<double>::monomial(e.at("k").get<int>(),
                                                  e.at("scale").get<double>());
      if (m.coeffs.size() > out.size()) out.resize(m.coeffs.size(), Complex(0.0));
      for (size_t i = 0; i < m.coeffs.size(); ++i) out[i] += m.coeffs[i];
    }
  } else if (j.contains("grid_values")) {
    std::vector<double> vals = j.at("grid_values").get<std::vector<double>>();
    auto c = basis::dct1_values_to_coeffs(vals);
    for (double v : c) out.emplace_back(v, 0.0);
  } else {
    throw std::invalid_argument("coefficient spec: expected constant/coeffs/monomials/grid_values");
  }
  return out;
}

}  // namespace

ProblemFile problem_from_json(const nlohmann::json& j) {
  for (const auto& [key, val] : j.items()) {
    (void)val;
    if (key != "schema_version" && key != "alpha" && key != "beta" && key != "terms" &&
        key != "rhs" && key != "bcs" && key != "tol" && key != "n_max")
      throw std::invalid_argument("problem file: unknown key '" + key + "'");
  }
  basis::JfpBasis b(j.at("alpha").get<double>(), j.at("beta").get<double>());
  ProblemFile pf{FieProblem<Complex>{b, {}, {b, {}}, {}, {}}, 1e-13, 8192, true};
  if (j.contains("tol")) pf.tol = j.at("tol").get<double>();
  if (j.contains("n_max")) pf.n_max = j.at("n_max").get<int>();

  for (const auto& tj : j.at("terms")) {
    FieTerm<Complex> term;
    term.mu = tj.value("mu", 0.0);
    if (tj.contains("a"))
      term.a = Multiplier<Complex>::from_series(coeff_spec(tj.at("a"), &pf.all_real));
    if (tj.contains("b"))
      term.b = Multiplier<Complex>::from_series(coeff_spec(tj.at("b"), &pf.all_real));
    pf.problem.terms.push_back(std::move(term));
  }
  pf.problem.rhs.coeffs = coeff_spec(j.at("rhs"), &pf.all_real);

  if (j.contains("bcs")) {
    for (const auto& bc : j.at("bcs")) {
      const std::string kind = bc.at("kind").get<std::string>();
      if (kind != "right_value")
        throw std::invalid_argument("problem file: unsupported bc kind '" + kind + "'");
      typename FieProblem<Complex>::ExtraRow row;
      row.entry = [](int) { return Complex(1.0, 0.0); };
      row.value = Complex(bc.at("value").get<double>(), 0.0);
      pf.problem.extra_rows.push_back(std::move(row));
    }
  }
  return pf;
}

namespace {

nlohmann::json scalar_json(double v) { return v; }
nlohmann::json scalar_json(const Complex& v) {
  if (v.imag() == 0.0) return v.real();
  return nlohmann::json::array({v.real(), v.imag()});
}

}  // namespace

template <class S>
nlohmann::json report_to_json(const SolveReport<S>& report, const std::vector<double>& xs) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["alpha"] = report.solution.basis.alpha;
  j["beta"] = report.solution.basis.beta;
  auto coeffs = nlohmann::json::array();
  for (const auto& c : report.solution.coeffs) coeffs.push_back(scalar_json(c));
  j["coeffs"] = std::move(coeffs);
  auto aux = nlohmann::json::array();
  for (const auto& c : report.aux_values) aux.push_back(scalar_json(c));
  j["aux"] = std::move(aux);
  j["n_used"] = report.n_used;
  j["residual"] = report.residual;
  auto hist = nlohmann::json::array();
  for (const auto& [n, r] : report.residual_history) hist.push_back(nlohmann::json::array({n, r}));
  j["residual_history"] = std::move(hist);
  j["wall_time_ms"] = report.wall_ms;
  if (!xs.empty()) {
    auto vals = basis::eval_series(report.solution, xs);
    nlohmann::json vj;
    vj["x"] = xs;
    auto uj = nlohmann::json::array();
    for (const auto& v : vals) uj.push_back(scalar_json(v));
    vj["u"] = std::move(uj);
    j["values"] = std::move(vj);
  }
  return j;
}

template nlohmann::json report_to_json(const SolveReport<double>&, const std::vector<double>&);
template nlohmann::json report_to_json(const SolveReport<Complex>&, const std::vector<double>&);

}  // namespace fracspec::feq
