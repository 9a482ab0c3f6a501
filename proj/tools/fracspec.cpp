// Command-line front end: build and export fractional integral operators,
// solve problem files, run the bundled showcases, and benchmark the
// construction kernels.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "fracspec/eig.hpp"
#include "fracspec/feq.hpp"
#include "fracspec/io.hpp"
#include "fracspec/opcore.hpp"
#include "fracspec/runtime.hpp"
#include "fracspec/sdc.hpp"
#include "fracspec/special.hpp"

namespace {

using namespace fracspec;

constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitIo = 4;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::ios_base::failure("cannot open output file: " + path);
  return file;
}

std::string fmt(double v) { return io::format_double(v); }

void apply_config_defaults(CLI::App* cmd, const nlohmann::json& cfg) {
  for (const auto& [key, val] : cfg.items()) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (!opt) throw CLI::ValidationError("config", "unknown key '" + key + "'");
    if (!opt->count()) {
      std::string s = val.is_string() ? val.get<std::string>() : val.dump();
      opt->add_result(s);
      opt->run_callback();
    }
  }
}

// ---- build -----------------------------------------------------------------

struct BuildArgs {
  double mu = 0.5, alpha = 0.0, beta = 0.5;
  int n = 16;
  std::string out;
  std::string format = "csv";
};

int cmd_build(const BuildArgs& a) {
  const double t0 = now_seconds();
  opcore::FioOperator op(a.mu, a.alpha, a.beta, a.n - 1 + 2);
  const double secs = now_seconds() - t0;
  std::ofstream file;
  auto& out = open_out(file, a.out);
  if (a.format == "csv")
    opcore::write_operator_csv(op, a.n, out);
  else
    opcore::write_operator_json(op, a.n, out);
  std::cout << "built " << a.n << "x" << a.n << " operator (mu=" << fmt(a.mu)
            << ", alpha=" << fmt(a.alpha) << ", beta=" << fmt(a.beta) << ") in "
            << fmt(secs) << " s\n";
  return 0;
}

// ---- solve -----------------------------------------------------------------

int cmd_solve(const std::string& problem_path, std::optional<double> tol_override,
              const std::string& out_path) {
  std::ifstream in(problem_path);
  if (!in) throw std::ios_base::failure("cannot open problem file: " + problem_path);
  nlohmann::json pj = nlohmann::json::parse(in);
  auto pf = feq::problem_from_json(pj);
  const double tol = tol_override.value_or(pf.tol);

  // Sample on interior mapped points for the report.
  auto grid = basis::mapped_grid(pf.problem.basis, 513);
  if (pf.problem.basis.alpha < 0.0) grid.pop_back();

  nlohmann::json rj;
  int n_used = 0;
  double residual = 0.0;
  try {
    if (pf.all_real) {
      feq::FieProblem<double> rp{pf.problem.basis, {}, {pf.problem.basis, {}}, {}, {}};
      for (const auto& t : pf.problem.terms) {
        feq::FieTerm<double> rt;
        rt.mu = t.mu;
        rt.a.coeffs.clear();
        for (const auto& c : t.a.coeffs) rt.a.coeffs.push_back(c.real());
        rt.b.coeffs.clear();
        for (const auto& c : t.b.coeffs) rt.b.coeffs.push_back(c.real());
        rp.terms.push_back(std::move(rt));
      }
      for (const auto& c : pf.problem.rhs.coeffs) rp.rhs.coeffs.push_back(c.real());
      for (const auto& row : pf.problem.extra_rows) {
        auto entry = row.entry;
        rp.extra_rows.push_back({[entry](int c) { return entry(c).real(); }, row.value.real()});
      }
      auto rep = feq::solve(rp, tol, pf.n_max);
      rj = feq::report_to_json(rep, grid);
      n_used = rep.n_used;
      residual = rep.residual;
    } else {
      auto rep = feq::solve(pf.problem, tol, pf.n_max);
      rj = feq::report_to_json(rep, grid);
      n_used = rep.n_used;
      residual = rep.residual;
    }
  } catch (const NonConvergenceError& e) {
    // Leave the residual history behind for diagnosis.
    nlohmann::json fail;
    fail["schema_version"] = 1;
    fail["converged"] = false;
    fail["error"] = e.what();
    fail["residual_history"] = e.residual_history;
    std::ofstream file;
    auto& out = open_out(file, out_path);
    out << fail.dump(2) << '\n';
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  }

  std::ofstream file;
  auto& out = open_out(file, out_path);
  out << rj.dump(2) << '\n';
  std::cout << "n_used " << n_used << ", residual " << fmt(residual) << "\n";
  return 0;
}

// ---- showcases ---------------------------------------------------------------

void csv_header(std::ostream& out, const std::string& kind, const std::string& cols) {
  out << "# fracspec " << kind << " csv schema 1\n" << cols << "\n";
}

int showcase_abel(double lambda, double tol, int n_max, std::ostream& out) {
  auto rep = feq::solve_abel(lambda, tol, n_max);
  const auto xs = basis::mapped_grid(rep.solution.basis, 1001);
  const auto us = feq::sample_solution(rep, xs);
  csv_header(out, "showcase-abel", "x,u,exact,error");
  double emax = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double ex = feq::abel_exact(lambda, xs[i]);
    const double err = std::abs(us[i] - ex);
    emax = std::max(emax, err);
    out << fmt(xs[i]) << ',' << fmt(us[i]) << ',' << fmt(ex) << ',' << fmt(err) << '\n';
  }
  std::cout << "abel lambda=" << fmt(lambda) << ": n_used " << rep.n_used
            << ", max error " << fmt(emax) << "\n";
  return 0;
}

int showcase_var(double tol, int n_max, std::ostream& out) {
  auto rep = feq::solve_var(tol, n_max);
  const auto xs = basis::mapped_grid(rep.solution.basis, 513);
  const auto us = feq::sample_solution(rep, xs);
  csv_header(out, "showcase-var", "x,u,exact,error");
  double emax = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double ex = feq::var_exact(xs[i]);
    const double err = std::abs(us[i] - ex);
    emax = std::max(emax, err);
    out << fmt(xs[i]) << ',' << fmt(us[i]) << ',' << fmt(ex) << ',' << fmt(err) << '\n';
  }
  std::cout << "var: n_used " << rep.n_used << ", max error " << fmt(emax) << "\n";
  return 0;
}

int showcase_bbo(double tol, int n_max, std::ostream& out) {
  auto rep = feq::solve_bbo(tol, n_max);
  csv_header(out, "showcase-bbo", "t,v,exact,error");
  double emax = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double t = 0.01 + (2.0 - 0.01) * i / 500.0;
    const double v = rep.eval_v(t);
    const double ex = rep.exact_v(t);
    const double err = std::abs(v - ex);
    emax = std::max(emax, err);
    out << fmt(t) << ',' << fmt(v) << ',' << fmt(ex) << ',' << fmt(err) << '\n';
  }
  std::cout << "bbo: n_used " << rep.u.n_used << ", max error on [0.01,2] " << fmt(emax)
            << "\n";
  return 0;
}

int showcase_airy(double eps, int n_max, std::ostream& out) {
  auto rep = feq::solve_airy(eps, 1e-12, n_max);
  csv_header(out, "showcase-airy", "x,re_u,im_u");
  for (int i = 0; i <= 800; ++i) {
    const double x = -1.0 + 2.0 * i / 800.0;
    const Complex u = rep.eval_u(x);
    out << fmt(x) << ',' << fmt(u.real()) << ',' << fmt(u.imag()) << '\n';
  }
  const Complex u_left = rep.eval_u(-1.0);
  std::cout << "airy eps=" << fmt(eps) << ": N " << rep.n_final << ", |u(-1)| "
            << fmt(std::abs(u_left)) << ", |u(1)-1| " << fmt(rep.boundary_right_error)
            << ", plateau " << (rep.plateaued ? "yes" : "no") << "\n";
  if (!rep.cauchy_history.empty()) {
    std::cout << "cauchy:";
    for (auto& [n, e] : rep.cauchy_history) std::cout << " (" << n << ", " << fmt(e) << ")";
    std::cout << "\n";
  }
  return rep.plateaued ? 0 : kExitNoConvergence;
}

int showcase_sdc(int n, double tol, int max_sweeps, std::ostream& out) {
  sdc::SdcProblem p{0.5, 0.0, nullptr, nullptr, basis::JfpBasis(0.0, 0.5), n, tol, max_sweeps};
  auto rhs = sdc::lookup_rhs("linear");
  p.f = rhs.f;
  p.f_u = rhs.f_u;
  auto res = sdc::sdc_solve(p);
  csv_header(out, "showcase-sdc", "t,u,exact,error");
  double emax = 0.0;
  for (size_t i = 0; i < res.t.size(); ++i) {
    const double ex = rhs.exact(res.t[i]);
    const double err = std::abs(res.u[i] - ex);
    emax = std::max(emax, err);
    out << fmt(res.t[i]) << ',' << fmt(res.u[i]) << ',' << fmt(ex) << ',' << fmt(err) << '\n';
  }
  std::cout << "sdc: sweeps " << res.sweeps << ", max error " << fmt(emax) << "\n";
  return 0;
}

int run_eig(const eig::EigProblem& p, const std::string& format, std::ostream& out) {
  auto rep = eig::eig_solve(p);
  if (format == "json") {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["n_final"] = rep.n_final;
    auto arr = nlohmann::json::array();
    for (size_t i = 0; i < rep.eigenvalues.size(); ++i) {
      nlohmann::json e;
      e["lambda"] = {rep.eigenvalues[i].real(), rep.eigenvalues[i].imag()};
      e["ml_residual"] = rep.ml_residuals[i];
      e["ml_trusted"] = static_cast<bool>(rep.ml_trusted[i]);
      e["eigen_residual"] = rep.eigen_residuals[i];
      arr.push_back(std::move(e));
    }
    j["eigenvalues"] = std::move(arr);
    out << j.dump(2) << '\n';
  } else {
    csv_header(out, "eig", "index,re_lambda,im_lambda,residual,residual_kind");
    for (size_t i = 0; i < rep.eigenvalues.size(); ++i) {
      const bool t = rep.ml_trusted[i];
      out << (i + 1) << ',' << fmt(rep.eigenvalues[i].real()) << ','
          << fmt(rep.eigenvalues[i].imag()) << ','
          << fmt(t ? rep.ml_residuals[i] : rep.eigen_residuals[i]) << ','
          << (t ? "ml_zero" : "eigen_residual") << '\n';
    }
  }
  std::cout << "index  eigenvalue                                   residual\n";
  for (size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    const auto& l = rep.eigenvalues[i];
    std::ostringstream v;
    v << fmt(l.real());
    if (l.imag() != 0.0) v << (l.imag() > 0 ? "+" : "-") << fmt(std::abs(l.imag())) << "i";
    const bool t = rep.ml_trusted[i];
    std::ostringstream r;
    r << fmt(t ? rep.ml_residuals[i] : rep.eigen_residuals[i])
      << (t ? " (ML zero)" : " (eigen residual; ML series untrusted)");
    std::cout << (i + 1) << "      " << v.str();
    for (size_t pad = v.str().size(); pad < 45; ++pad) std::cout << ' ';
    std::cout << r.str() << "\n";
  }
  return 0;
}

// ---- bench -------------------------------------------------------------------

int cmd_bench(std::vector<int> sizes, int reps, bool compare_serial, std::ostream& out) {
  if (sizes.empty()) throw CLI::ValidationError("bench", "need at least one size");
  if (!std::is_sorted(sizes.begin(), sizes.end()))
    throw CLI::ValidationError("bench", "sizes must be ascending");
  csv_header(out, "bench", compare_serial ? "n,seconds,serial_seconds" : "n,seconds");
  std::vector<double> logs_n, logs_t;
  for (int n : sizes) {
    auto time_build = [&](bool parallel) {
      std::vector<double> ts;
      for (int r = 0; r < reps; ++r) {
        const double t0 = now_seconds();
        opcore::FioOperator op(0.5, 0.0, 0.5, n, {parallel});
        ts.push_back(now_seconds() - t0);
      }
      std::sort(ts.begin(), ts.end());
      return ts[ts.size() / 2];
    };
    const double tp = time_build(true);
    out << n << ',' << fmt(tp);
    if (compare_serial) out << ',' << fmt(time_build(false));
    out << '\n';
    out.flush();
    logs_n.push_back(std::log(static_cast<double>(n)));
    logs_t.push_back(std::log(std::max(tp, 1e-9)));
  }
  if (sizes.size() < 2) {
    std::cout << "slope: n/a (single size)\n";
    return 0;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(sizes.size());
  for (size_t i = 0; i < logs_n.size(); ++i) {
    sx += logs_n[i];
    sy += logs_t[i];
    sxx += logs_n[i] * logs_n[i];
    sxy += logs_n[i] * logs_t[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  std::cout << "slope: " << fmt(slope) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral fractional-integral operators and solvers"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with option defaults");

  BuildArgs build;
  auto* cb = app.add_subcommand("build", "Construct and export an operator truncation");
  cb->add_option("--mu", build.mu, "fractional order");
  cb->add_option("--alpha", build.alpha, "basis weight exponent");
  cb->add_option("--beta", build.beta, "basis map exponent");
  cb->add_option("--n", build.n, "truncation size")->check(CLI::PositiveNumber);
  cb->add_option("--out", build.out, "output path (default stdout)");
  cb->add_option("--format", build.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string solve_path, solve_out;
  double solve_tol = -1.0;
  auto* cs = app.add_subcommand("solve", "Solve a problem file");
  cs->add_option("problem", solve_path, "problem JSON path")->required();
  cs->add_option("--tol", solve_tol, "override file tolerance");
  cs->add_option("--out", solve_out, "report path (default stdout)");

  std::string sc_name, sc_out;
  double sc_lambda = 2.0, sc_eps = 1e-3, sc_tol = 1e-13;
  int sc_nmax = 8192, sc_n = 10, sc_sweeps = 200;
  bool paper_scale = false;
  auto* cw = app.add_subcommand("showcase", "Run a bundled example");
  cw->add_option("name", sc_name, "abel|var|bbo|airy|sdc|eig")->required();
  cw->add_option("--lambda", sc_lambda, "abel parameter");
  cw->add_option("--epsilon", sc_eps, "airy parameter");
  cw->add_option("--tol", sc_tol, "solver tolerance");
  cw->add_option("--n-max", sc_nmax, "truncation cap");
  cw->add_option("--n", sc_n, "sdc grid size");
  cw->add_option("--max-sweeps", sc_sweeps, "sdc sweep cap");
  cw->add_flag("--paper-scale", paper_scale, "airy: eps=1e-7 with N up to 50000 (long)");
  cw->add_option("--out", sc_out, "CSV path (default stdout)");

  eig::EigProblem ep;
  std::string eig_out, eig_format = "csv";
  auto* ce = app.add_subcommand("eig", "Fractional eigenvalue problem");
  ce->add_option("--mu1", ep.mu1, "derivative order");
  ce->add_option("--mu2", ep.mu2, "boundary operator order");
  double eig_alpha = 0.5, eig_beta = 1.5;
  ce->add_option("--alpha", eig_alpha, "basis weight exponent");
  ce->add_option("--beta", eig_beta, "basis map exponent");
  ce->add_option("--count", ep.count, "eigenvalue count");
  ce->add_option("--n-cap", ep.n_cap, "truncation cap");
  ce->add_option("--out", eig_out, "output path (default stdout)");
  ce->add_option("--format", eig_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::vector<int> bench_sizes{1024, 2048, 4096};
  int bench_reps = 3;
  bool bench_serial = false;
  std::string bench_out;
  auto* cn = app.add_subcommand("bench", "Time operator construction");
  cn->add_option("--sizes", bench_sizes, "ascending truncation sizes")->delimiter(',');
  cn->add_option("--reps", bench_reps, "repetitions per size (median)");
  cn->add_flag("--compare-serial", bench_serial, "also time the serial reference");
  cn->add_option("--out", bench_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
    if (!config_path.empty()) {
      std::ifstream cf(config_path);
      if (!cf) throw std::ios_base::failure("cannot open config file: " + config_path);
      const auto cfg = nlohmann::json::parse(cf);
      for (auto* sub : {cb, cs, cw, ce, cn})
        if (sub->parsed()) apply_config_defaults(sub, cfg);
    }

    if (cb->parsed()) return cmd_build(build);
    if (cs->parsed())
      return cmd_solve(solve_path,
                       solve_tol > 0 ? std::optional<double>(solve_tol) : std::nullopt,
                       solve_out);
    if (cw->parsed()) {
      std::ofstream file;
      auto& out = open_out(file, sc_out);
      if (sc_name == "abel") return showcase_abel(sc_lambda, sc_tol, sc_nmax, out);
      if (sc_name == "var") return showcase_var(sc_tol, sc_nmax, out);
      if (sc_name == "bbo") return showcase_bbo(sc_tol, sc_nmax, out);
      if (sc_name == "airy") {
        if (paper_scale) {
          sc_eps = 1e-7;
          sc_nmax = 50000;
        }
        return showcase_airy(sc_eps, sc_nmax, out);
      }
      if (sc_name == "sdc") return showcase_sdc(sc_n, sc_tol, sc_sweeps, out);
      if (sc_name == "eig") return run_eig(ep, "csv", out);
      std::cerr << "unknown showcase '" << sc_name << "'\n";
      return kExitUsage;
    }
    if (ce->parsed()) {
      ep.basis = basis::JfpBasis(eig_alpha, eig_beta);
      std::ofstream file;
      auto& out = open_out(file, eig_out);
      return run_eig(ep, eig_format, out);
    }
    if (cn->parsed()) {
      std::ofstream file;
      auto& out = open_out(file, bench_out);
      return cmd_bench(bench_sizes, bench_reps, bench_serial, out);
    }
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
