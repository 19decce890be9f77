#include "lshinv/analysis.hpp"

#include <cmath>
#include <cstdio>

#include "lshinv/errors.hpp"

namespace lshinv {

namespace {

void require_c(double c) {
  if (!(c > 1.0)) throw InputError("approximation factor c must be > 1");
}

}  // namespace

double alrw_exponent(double c) {
  require_c(c);
  double c2 = c * c;
  return (2.0 * c2 - 1.0) / (c2 * c2);
}

double rho_q_from(double rho_u, double c) {
  require_c(c);
  double c2 = c * c;
  double bound = (2.0 * c2 - 1.0) / ((c2 - 1.0) * (c2 - 1.0));
  if (rho_u < 0.0 || rho_u > bound)
    throw InputError("rho_u outside [0, (2c^2-1)/(c^2-1)^2], radical would be negative");
  double root = std::sqrt(2.0 * c2 - 1.0) - (c2 - 1.0) * std::sqrt(rho_u);
  double v = root / c2;
  return v * v;
}

double optimal_rho_u(double c) {
  require_c(c);
  double c2 = c * c;
  double c4 = c2 * c2;
  double root = std::sqrt(2.0 * c2 - 1.0) * (c2 - 1.0) / (4.0 * c4 + (c2 - 1.0) * (c2 - 1.0));
  return root * root;
}

double alpha(double c) {
  require_c(c);
  double c2 = c * c;
  double c4 = c2 * c2;
  double sq = (c2 - 1.0) * (c2 - 1.0);
  return (2.0 * c2 - 1.0) / c4 * (1.0 - sq / (4.0 * c4 + sq));
}

double alpha_manhattan(double c) {
  require_c(c);
  double c2 = c * c;
  double sq = (c - 1.0) * (c - 1.0);
  return (2.0 * c - 1.0) / c2 * (1.0 - sq / (4.0 * c2 + sq));
}

double alpha_by_minimization(double c, double tol) {
  require_c(c);
  double c2 = c * c;
  double hi = (2.0 * c2 - 1.0) / ((c2 - 1.0) * (c2 - 1.0));
  // The objective is unimodal in sqrt(rho_u); golden-section on rho_u works
  // on the feasible interval directly.
  auto objective = [&](double rho_u) { return rho_q_from(rho_u, c) + 4.0 * rho_u; };
  const double gr = 0.6180339887498948482;
  double a = 0.0, b = hi;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = objective(x2);
    }
  }
  return objective(0.5 * (a + b));
}

ExponentReport exponent_report(double c) {
  ExponentReport r;
  r.c = c;
  r.alrw = alrw_exponent(c);
  r.rho_u_star = optimal_rho_u(c);
  r.rho_q_star = rho_q_from(r.rho_u_star, c);
  r.alpha = alpha(c);
  r.preproc = 1.0 + r.rho_u_star / (1.0 + r.rho_u_star);
  r.alpha_manhattan = alpha_manhattan(c);
  r.blackbox = 4.0 / (c * c);
  r.alpha_tight = (r.rho_q_star + 4.0 * r.rho_u_star) / (1.0 + r.rho_u_star);
  return r;
}

std::vector<ExponentReport> report_table(const std::vector<double>& cs) {
  std::vector<ExponentReport> out;
  out.reserve(cs.size());
  for (double c : cs) out.push_back(exponent_report(c));
  return out;
}

std::vector<double> table2_cs() { return {1.05, 1.5, 1.79, 2.0, 3.0, 10.0}; }

namespace {

std::string row_fmt(const char* fmt, const ExponentReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, r.c, r.alpha, r.alrw, r.preproc, r.rho_u_star,
                r.rho_q_star, r.alpha_manhattan, r.blackbox, r.alpha_tight);
  return buf;
}

}  // namespace

std::string format_report_text(const std::vector<ExponentReport>& rows) {
  std::string out =
      "     c   alpha    alrw  preproc   rho_u    rho_q  alpha_l1  blackbox  "
      "alpha_tight\n";
  for (const auto& r : rows)
    out += row_fmt("%6.2f  %6.3f  %6.3f  %7.3f  %6.4f  %7.4f  %8.3f  %8.3f  %11.4f\n",
                   r);
  return out;
}

std::string format_report_csv(const std::vector<ExponentReport>& rows) {
  std::string out =
      "c,alpha,alrw,preproc,rho_u,rho_q,alpha_manhattan,blackbox,alpha_tight\n";
  for (const auto& r : rows)
    out += row_fmt("%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", r);
  return out;
}

}  // namespace lshinv
