#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndas/assimilation.hpp"
#include "ndas/dynamics.hpp"

namespace ndas {

/// Everything the convergence conditions depend on. `lambda_m1` is
/// lambda_{m+1} for a modal interpolant and absent for volume averages.
struct TheoryInput {
  double nu = 1.0;
  double lambda1 = 1.0;
  double f_norm = 0.0;
  double mu = 0.0;
  double kappa = 0.0;
  double tau = 0.0;
  InterpolantKind interp_kind = InterpolantKind::modal;
  std::optional<double> lambda_m1;
  double h = 0.0;
  double c0 = 1.0;
  double c1 = 1.0;
  double absolute_c = 1.0;
};

/// Builds the input from a run configuration: ||f|| from the configured
/// forcing on this grid, lambda_{m+1} from the grid's shell table.
TheoryInput theory_input(const GridPtr& grid, const SolverParams& params, const AssimilationConfig& cfg,
                         double absolute_c = 1.0);

struct Condition {
  std::string theorem;   // "l2" or "h1"
  std::string name;
  double lhs = 0.0;
  std::string relation;  // ">=", ">", "<=", "<"
  double rhs = 0.0;
  bool satisfied = false;
  /// False when the condition cannot be evaluated for this configuration
  /// (non-modal interpolant for the L2 theorem, D <= 0 for the H1 kappa bound).
  bool applicable = true;
};

struct NormBounds {
  double M0 = 0.0;
  double M1 = 0.0;
  double M2 = 0.0;
};

struct TheoryReport {
  double G = 0.0;
  double M0 = 0.0, M1 = 0.0, M2 = 0.0;
  double R = 0.0, R1 = 0.0;
  double K = 0.0;
  double K1 = 0.0, K2 = 0.0;
  double theta = 0.0;
  double sigma = 0.0;
  double theta_h1 = 0.0;
  double D = 0.0;
  double absolute_c = 1.0;
  double c0 = 0.0, c1 = 0.0;
  /// Interpolant length scale used in the H1 h-condition (lambda_{m+1}^{-1/2}
  /// for modal observations, with c0 = 1).
  double h_eff = 0.0;
  double c0_eff = 0.0;
  std::vector<Condition> conditions;

  bool all_satisfied(const std::string& theorem) const;
};

/// Standing assumptions printed at the top of every serialized report.
const std::vector<std::string>& report_assumptions();

double grashof(double f_norm, double nu, double lambda1);
/// M0 = 2 nu^2 G^2, M1 = 2 nu^2 lambda1 G^2, M2 = C nu^2 lambda1^2 G^4.
NormBounds norm_bounds(double G, double nu, double lambda1, double absolute_c);
/// K = c (1 + M0 M1 / (nu^2 lambda1^{1/2}) + R^2 / nu^2 + mu^2 / (nu^2 lambda1^2)), R = 2 M0.
double decay_constant_l2(const NormBounds& b, double nu, double lambda1, double mu, double absolute_c);
/// theta = exp(-mu tau / 2) + K mu tau (1 - exp(-mu tau / 2)).
double theta_l2(double mu, double tau, double K);
/// sigma = theta exp(c M1^2 kappa / nu).
double sigma_l2(double theta, double M1, double nu, double kappa, double absolute_c);

struct H1Constants {
  double K1 = 0.0;
  double K2 = 0.0;
  double D = 0.0;
};
H1Constants h1_constants(const NormBounds& b, double nu, double lambda1, double mu, double absolute_c);
/// (e^{-mu tau/2} + 2 mu tau K1 (1 - e^{-mu tau/2})) e^{K2 kappa}.
double theta_h1(double mu, double tau, double kappa, const H1Constants& k);
/// Smaller root (3K2^2/2 + mu^2 K1 - sqrt(D)) / K2^3, evaluated in the
/// cancellation-free form 2 K2 / (3K2^2/2 + mu^2 K1 + sqrt(D)). NaN if D <= 0.
double h1_kappa_root(double mu, const H1Constants& k);

/// Fills G, M*, K, theta, sigma (and the H1 constants) and both condition lists.
TheoryReport theory_report(const TheoryInput& in);
std::vector<Condition> check_l2_theorem(const TheoryInput& in, const TheoryReport& partial);
std::vector<Condition> check_h1_theorem(const TheoryInput& in, const TheoryReport& partial);

/// Flat key=value block, assumptions as leading comment lines.
std::string to_key_value(const TheoryReport& report);
/// One row per condition: theorem,name,lhs,relation,rhs,satisfied,applicable.
std::string to_csv(const TheoryReport& report);

}  // namespace ndas
