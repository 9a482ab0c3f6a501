#include "fracspec/opcore.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "fracspec/io.hpp"
#include "fracspec/quad.hpp"
#include "fracspec/special.hpp"

namespace fracspec::opcore {

linalg::BandedMatrix<double> diff_matrix(int n) {
  linalg::BandedMatrix<double> d(n + 1, n + 2, 0, 2);
  for (int m = 0; m <= n; ++m) {
    d.at(m, m) = 0.5 * m;
    if (m + 1 <= n + 1) d.at(m, m + 1) = m + 1.0;
    if (m + 2 <= n + 1) d.at(m, m + 2) = 0.5 * (m + 2);
  }
  return d;
}

linalg::BandedMatrix<double> conv_matrix(int n) {
  linalg::BandedMatrix<double> c(n + 1, n + 2, 0, 2);
  for (int m = 0; m <= n; ++m) {
    c.at(m, m) = m == 0 ? 1.0 : 0.5;
    if (m + 2 <= n + 1) c.at(m, m + 2) = -0.5;
  }
  return c;
}

std::vector<double> cheb_product(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) {
      const double half = 0.5 * a[i] * b[j];
      out[i + j] += half;
      out[static_cast<size_t>(std::abs(static_cast<long>(i) - static_cast<long>(j)))] += half;
    }
  return out;
}

std::vector<double> power_multiplier_coeffs(int k) {
  if (k < 0) throw std::invalid_argument("power_multiplier_coeffs: negative power");
  std::vector<double> c{1.0};
  const std::vector<double> lin{0.5, 0.5};  // (1+y)/2
  for (int i = 0; i < k; ++i) c = cheb_product(c, lin);
  return c;
}

MulOp::MulOp(std::vector<double> c) : c_(std::move(c)) {
  if (c_.empty()) throw std::invalid_argument("MulOp: empty coefficient list");
  k_ = static_cast<int>(c_.size()) - 1;
}

double MulOp::entry(int i, int j) const {
  if (i < 0 || j < 0 || std::abs(i - j) > k_) return 0.0;
  const double toep = (i == j) ? 2.0 * c_[0] : c_[static_cast<size_t>(std::abs(i - j))];
  const double hank = (i >= 1 && i + j <= k_) ? c_[static_cast<size_t>(i + j)] : 0.0;
  return 0.5 * (toep + hank);
}

InitialColumns initial_columns(double mu, double alpha, double beta) {
  const double h0 = quad::moment_h(0, mu, alpha, beta);
  const double h1 = quad::moment_h(1, mu, alpha, beta);
  const double h2 = quad::moment_h(2, mu, alpha, beta);
  const double p1 = h1 / std::pow(2.0, beta);
  const double p2 = h2 / std::pow(2.0, 2.0 * beta);
  InitialColumns cols;
  cols.r0 = {h0};
  cols.r1 = {p1 - h0, p1};
  cols.r2 = {3.0 * p2 - 4.0 * p1 + h0, 4.0 * (p2 - p1), p2};
  return cols;
}

std::vector<double> recurse_column(int n, const std::vector<double>& r_nm1,
                                   const std::vector<double>& r_n, double bc_value,
                                   double* min_pivot) {
  if (n < 1) throw std::invalid_argument("recurse_column: n must be >= 1");
  if (static_cast<int>(r_n.size()) != n + 1 || static_cast<int>(r_nm1.size()) != n)
    throw std::invalid_argument("recurse_column: column length mismatch");

  const auto d = diff_matrix(n);
  const auto c = conv_matrix(n);

  std::vector<double> rn_pad(static_cast<size_t>(n + 2), 0.0);
  std::vector<double> rm_pad(static_cast<size_t>(n + 2), 0.0);
  std::copy(r_n.begin(), r_n.end(), rn_pad.begin());
  std::copy(r_nm1.begin(), r_nm1.end(), rm_pad.begin());

  const auto c_rn = c.apply(rn_pad);
  const auto c_rm = c.apply(rm_pad);
  std::vector<double> g(static_cast<size_t>(n + 1), 0.0);
  for (int i = 0; i <= n; ++i)
    g[static_cast<size_t>(i)] = 2.0 * c_rn[static_cast<size_t>(i)] + c_rm[static_cast<size_t>(i)];
  if (n > 1) {
    const auto d_rm = d.apply(rm_pad);
    for (int i = 0; i <= n; ++i)
      g[static_cast<size_t>(i)] += d_rm[static_cast<size_t>(i)] / (n - 1);
  }
  // At n = 1 the previous column is constant and its weighted derivative
  // vanishes; the 1/(n-1) factor multiplies an exact zero.

  linalg::BandedMatrix<double> a(n + 1, n + 2, 0, 2);
  const double inv = 1.0 / (n + 1);
  for (int m = 0; m <= n; ++m) {
    a.at(m, m) = d.get(m, m) * inv - c.get(m, m);
    if (m + 1 <= n + 1) a.at(m, m + 1) = d.get(m, m + 1) * inv;
    if (m + 2 <= n + 1) a.at(m, m + 2) = d.get(m, m + 2) * inv + 0.5;
  }

  std::vector<std::vector<double>> top{std::vector<double>(static_cast<size_t>(n + 2), 1.0)};
  std::vector<double> rhs(static_cast<size_t>(n + 2), 0.0);
  rhs[0] = bc_value;
  std::copy(g.begin(), g.end(), rhs.begin() + 1);

  try {
    return linalg::solve_almost_banded(top, a, rhs, min_pivot);
  } catch (const SingularSystemError& e) {
    throw ConstructionError(std::string("recurse_column: ") + e.what(), n + 1);
  }
}

FioOperator::FioOperator(double mu, double alpha, double beta, int n_cols, BuildOptions opts)
    : mu_(mu),
      alpha_(alpha),
      beta_(beta),
      k_(0),
      basis_(alpha, beta),
      scale_(0.0),
      mul_(std::vector<double>{1.0}),
      opts_(opts) {
  if (!(mu > 0.0)) throw std::invalid_argument("FioOperator: mu must be positive");
  const double ratio = mu / beta;
  const int k = static_cast<int>(std::lround(ratio));
  if (k < 1 || std::abs(mu - k * beta) > 1e-12 * k)
    throw std::invalid_argument("mu must be an integer multiple of beta");
  k_ = k;
  if (k_ > 64)
    std::fprintf(stderr, "fracspec: warning: mu/beta = %d makes the operator band wide\n", k_);
  scale_ = std::pow(2.0, -alpha_) / special::gamma(mu_);
  mul_ = MulOp(power_multiplier_coeffs(k_));

  const auto init = initial_columns(mu_, alpha_, beta_);
  push_column(init.r0);
  push_column(init.r1);
  push_column(init.r2);
  r_prev_ = init.r1;
  r_last_ = init.r2;
  r_index_ = 2;
  ensure_columns(n_cols);
}

void FioOperator::push_column(const std::vector<double>& r) {
  auto col = mul_.apply(r);
  for (auto& v : col) v *= scale_;
  s_bytes_ += col.size() * sizeof(double);
  s_cols_.push_back(std::move(col));
}

void FioOperator::ensure_columns(int n) {
  const int have = max_column();
  if (n <= have) return;
  // Endpoint values for the incoming columns are independent of each other;
  // the recursion sweep itself is sequential.
  std::vector<double> bc(static_cast<size_t>(n - have), 0.0);
  quad::boundary_phi_batch(have + 1, n, mu_, alpha_, beta_, bc.data(), opts_.parallel);
  for (int j = have + 1; j <= n; ++j) {
    double piv = 0.0;
    auto r_next = recurse_column(j - 1, r_prev_, r_last_, bc[static_cast<size_t>(j - have - 1)], &piv);
    if (piv < min_pivot_) {
      min_pivot_ = piv;
      min_pivot_col_ = j;
    }
    push_column(r_next);
    r_prev_ = std::move(r_last_);
    r_last_ = std::move(r_next);
    ++r_index_;
  }
}

const std::vector<double>& FioOperator::column(int j) const {
  if (j < 0 || j > max_column())
    throw std::invalid_argument("FioOperator::column: index out of range");
  return s_cols_[static_cast<size_t>(j)];
}

double FioOperator::column_sum(int j) const {
  const auto& col = column(j);
  long double acc = 0.0L;
  for (double v : col) acc += v;
  return static_cast<double>(acc);
}

std::size_t FioOperator::overhead_bytes() const {
  return sizeof(*this) + (r_prev_.capacity() + r_last_.capacity() + mul_.coeffs().size()) * sizeof(double);
}

void write_operator_csv(const FioOperator& op, int n, std::ostream& out) {
  out << "# fracspec operator csv schema 1\n";
  out << "# mu=" << io::format_double(op.mu()) << " alpha=" << io::format_double(op.alpha())
      << " beta=" << io::format_double(op.beta()) << " n=" << n << "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto& col = op.column(j);
      const double v = i < static_cast<int>(col.size()) ? col[static_cast<size_t>(i)] : 0.0;
      if (j) out << ',';
      out << io::format_double(v);
    }
    out << '\n';
  }
}

void write_operator_json(const FioOperator& op, int n, std::ostream& out) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["mu"] = op.mu();
  j["alpha"] = op.alpha();
  j["beta"] = op.beta();
  j["N"] = n;
  auto cols = nlohmann::json::array();
  for (int c = 0; c < n; ++c) cols.push_back(op.column(c));
  j["columns"] = std::move(cols);
  out << j.dump() << '\n';
}

}  // namespace fracspec::opcore
