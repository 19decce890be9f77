#pragma once

#include <string>
#include <vector>

namespace lshinv {

/// Query/space exponents of the near-linear-space Euclidean ANN structures at
/// approximation factor c. All exponents bound n^x quantities.
struct ExponentReport {
  double c = 0;
  double alpha = 0;           // our query exponent
  double alrw = 0;            // prior state of the art, (2c^2-1)/c^4
  double preproc = 0;         // preprocessing exponent, 1 + rho_u/(1+rho_u)
  double rho_u_star = 0;      // optimal space exponent fed to the tradeoff
  double rho_q_star = 0;      // matching query exponent at rho_u_star
  double alpha_manhattan = 0; // l1 variant of alpha
  double blackbox = 0;        // 4/c^2: the generic reduction over a rho=1/c^2 family
  double alpha_tight = 0;     // informational: (rho_q + 4 rho_u)/(1 + rho_u)
};

/// (2c^2 - 1)/c^4. Requires c > 1.
double alrw_exponent(double c);

/// Query exponent for a given space exponent on the tradeoff curve
/// c^2 sqrt(rho_q) + (c^2-1) sqrt(rho_u) = sqrt(2c^2 - 1):
/// rho_q = ((sqrt(2c^2-1) - (c^2-1) sqrt(rho_u)) / c^2)^2.
/// Requires c > 1 and 0 <= rho_u <= (2c^2-1)/(c^2-1)^2.
double rho_q_from(double rho_u, double c);

/// The rho_u minimizing rho_q(rho_u) + 4 rho_u:
/// sqrt(rho_u) = sqrt(2c^2-1) (c^2-1) / (4c^4 + (c^2-1)^2), squared.
double optimal_rho_u(double c);

/// alrw_exponent(c) * (1 - (c^2-1)^2 / (4c^4 + (c^2-1)^2)); equals
/// rho_q_from(optimal_rho_u(c), c) + 4 * optimal_rho_u(c).
double alpha(double c);

/// (2c-1)/c^2 * (1 - (c-1)^2 / (4c^2 + (c-1)^2)).
double alpha_manhattan(double c);

ExponentReport exponent_report(double c);

std::vector<ExponentReport> report_table(const std::vector<double>& cs);

/// The six preset rows: c in {1.05, 1.5, 1.79, 2, 3, 10}.
std::vector<double> table2_cs();

std::string format_report_text(const std::vector<ExponentReport>& rows);
std::string format_report_csv(const std::vector<ExponentReport>& rows);

/// Independent numeric route for alpha: golden-section minimization of
/// rho_q(rho_u) + 4 rho_u over the feasible rho_u range, to `tol`.
double alpha_by_minimization(double c, double tol = 1e-12);

}  // namespace lshinv
