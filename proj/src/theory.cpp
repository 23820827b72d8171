#include "ndas/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ndas/spectral_ops.hpp"

namespace ndas {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// c / x with c / 0 = +inf (bounds that disappear when mu = 0).
double ratio(double num, double den) { return den == 0.0 ? inf : num / den; }

Condition make(const std::string& theorem, const std::string& name, double lhs, const std::string& rel,
               double rhs) {
  Condition c{theorem, name, lhs, rel, rhs, false, true};
  if (rel == ">=") c.satisfied = lhs >= rhs;
  else if (rel == ">") c.satisfied = lhs > rhs;
  else if (rel == "<=") c.satisfied = lhs <= rhs;
  else c.satisfied = lhs < rhs;
  return c;
}

Condition unavailable(const std::string& theorem, const std::string& name, double lhs, const std::string& rel) {
  return Condition{theorem, name, lhs, rel, nan, false, false};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& report_assumptions() {
  static const std::vector<std::string> notes = {
      "M0, M1, M2 bound the reference solution only after an unquantified absorbing time; the report cannot "
      "certify when they apply",
      "a single absolute_c stands in for every absolute constant c and C of both theorems",
      "the L2 conditions are stated for modal observations P_m; modal observations enter the H1 conditions "
      "through c0 h^2 = 1 / lambda_{m+1}",
      "the conditions are sufficient, not necessary; runs may converge with failing conditions",
  };
  return notes;
}

double grashof(double f_norm, double nu, double lambda1) { return f_norm / (nu * nu * lambda1); }

NormBounds norm_bounds(double G, double nu, double lambda1, double absolute_c) {
  const double nu2 = nu * nu;
  const double g2 = G * G;
  return {2.0 * nu2 * g2, 2.0 * nu2 * lambda1 * g2, absolute_c * nu2 * lambda1 * lambda1 * g2 * g2};
}

double decay_constant_l2(const NormBounds& b, double nu, double lambda1, double mu, double absolute_c) {
  const double R = 2.0 * b.M0;
  const double nu2 = nu * nu;
  return absolute_c * (1.0 + b.M0 * b.M1 / (nu2 * std::sqrt(lambda1)) + R * R / nu2 +
                       mu * mu / (nu2 * lambda1 * lambda1));
}

double theta_l2(double mu, double tau, double K) {
  const double x = 0.5 * mu * tau;
  return std::exp(-x) + K * mu * tau * -std::expm1(-x);
}

double sigma_l2(double theta, double M1, double nu, double kappa, double absolute_c) {
  return theta * std::exp(absolute_c * M1 * M1 * kappa / nu);
}

H1Constants h1_constants(const NormBounds& b, double nu, double lambda1, double mu, double absolute_c) {
  const double c = absolute_c;
  const double nu3 = nu * nu * nu;
  const double sl = std::sqrt(lambda1);
  const double R1 = 2.0 * b.M1;
  const double m0m1_sq = b.M0 * b.M0 * b.M1 * b.M1;
  H1Constants k;
  k.K2 = c * b.M1 * b.M2 / (nu * sl) + c * m0m1_sq / nu3;
  k.K1 = c * (5.0 * nu + b.M1 * b.M2 / (nu * lambda1 * sl) + m0m1_sq / (nu3 * sl) +
              std::pow(R1, 4) / (nu3 * lambda1 * sl) + mu * mu / (nu * lambda1 * lambda1) + mu / (4.0 * lambda1));
  const double a = 1.5 * k.K2 * k.K2 + mu * mu * k.K1;
  k.D = a * a - 2.0 * std::pow(k.K2, 4);
  return k;
}

double theta_h1(double mu, double tau, double kappa, const H1Constants& k) {
  const double x = 0.5 * mu * tau;
  return (std::exp(-x) + 2.0 * mu * tau * k.K1 * -std::expm1(-x)) * std::exp(k.K2 * kappa);
}

double h1_kappa_root(double mu, const H1Constants& k) {
  if (!(k.D > 0.0)) return nan;
  const double a = 1.5 * k.K2 * k.K2 + mu * mu * k.K1;
  return 2.0 * k.K2 / (a + std::sqrt(k.D));
}

std::vector<Condition> check_l2_theorem(const TheoryInput& in, const TheoryReport& r) {
  const double C = in.absolute_c;
  const double nu = in.nu;
  const double mu = in.mu;
  const double l1 = in.lambda1;
  std::vector<Condition> out;
  if (in.interp_kind != InterpolantKind::modal || !in.lambda_m1) {
    for (const char* name : {"eigenvalue_gap", "mu_lower", "sigma", "kappa"})
      out.push_back(unavailable("l2", name, nan, "n/a"));
    return out;
  }
  out.push_back(make("l2", "eigenvalue_gap", *in.lambda_m1, ">=", 6.0 * mu / nu));
  out.push_back(make("l2", "mu_lower", mu, ">=", C * r.M1 * r.M1 / nu));
  out.push_back(make("l2", "sigma", r.sigma, "<", 1.0));
  const double m0m1 = r.M0 * r.M1;
  const double terms[] = {
      1.0,
      ratio(nu, r.R),
      ratio(nu * nu, r.R * r.R),
      ratio(std::pow(nu, 1.5) * std::sqrt(mu), m0m1),
      ratio(nu * nu * std::sqrt(l1), m0m1),
      ratio(std::sqrt(nu * l1), std::sqrt(mu)),
      ratio(nu * nu * l1 * l1, mu * mu),
      ratio(nu * mu, r.M1 * r.M1),
  };
  const double bound = ratio(C, mu) * *std::min_element(std::begin(terms), std::end(terms));
  out.push_back(make("l2", "kappa", in.kappa, "<=", bound));
  return out;
}

std::vector<Condition> check_h1_theorem(const TheoryInput& in, const TheoryReport& r) {
  const double C = in.absolute_c;
  const double nu = in.nu;
  const double mu = in.mu;
  const double l1 = in.lambda1;
  const double sl = std::sqrt(l1);
  const double nu3 = nu * nu * nu;
  std::vector<Condition> out;
  const double a1 = C * r.M1 * r.M2 / (nu * sl);
  const double a2 = C * r.M0 * r.M0 * r.M1 * r.M1 / nu3;
  const double a3 = a1 + C * std::pow(r.M1, 4) / (nu3 * l1);
  out.push_back(make("h1", "mu_lower", mu, ">", std::max({a1, a2, a3, 4.0 * r.K2})));
  out.push_back(make("h1", "h_bound", r.h_eff, "<", 0.5 * std::sqrt(ratio(nu, r.c0_eff * mu))));
  out.push_back(make("h1", "discriminant", r.D, ">", 0.0));
  const H1Constants k{r.K1, r.K2, r.D};
  const double root = h1_kappa_root(mu, k);
  if (std::isnan(root)) {
    out.push_back(unavailable("h1", "kappa", in.kappa, "<"));
  } else {
    const double b1 = ratio(std::exp(-r.K2), 4.0 * C * mu * mu * r.K1);
    const double b2 = ratio(C * sl * std::sqrt(nu), std::pow(mu, 1.5));
    out.push_back(make("h1", "kappa", in.kappa, "<", std::min({b1, b2, root})));
  }
  out.push_back(make("h1", "mu_tau", mu * in.tau, ">=", 4.0 * r.K2 * in.kappa));
  out.push_back(make("h1", "theta_h1", r.theta_h1, "<", 1.0));
  return out;
}

TheoryReport theory_report(const TheoryInput& in) {
  TheoryReport r;
  r.absolute_c = in.absolute_c;
  r.c0 = in.c0;
  r.c1 = in.c1;
  r.G = grashof(in.f_norm, in.nu, in.lambda1);
  const NormBounds b = norm_bounds(r.G, in.nu, in.lambda1, in.absolute_c);
  r.M0 = b.M0;
  r.M1 = b.M1;
  r.M2 = b.M2;
  r.R = 2.0 * b.M0;
  r.R1 = 2.0 * b.M1;
  r.K = decay_constant_l2(b, in.nu, in.lambda1, in.mu, in.absolute_c);
  r.theta = theta_l2(in.mu, in.tau, r.K);
  r.sigma = sigma_l2(r.theta, b.M1, in.nu, in.kappa, in.absolute_c);
  const H1Constants k = h1_constants(b, in.nu, in.lambda1, in.mu, in.absolute_c);
  r.K1 = k.K1;
  r.K2 = k.K2;
  r.D = k.D;
  r.theta_h1 = theta_h1(in.mu, in.tau, in.kappa, k);
  if (in.interp_kind == InterpolantKind::modal && in.lambda_m1) {
    r.h_eff = 1.0 / std::sqrt(*in.lambda_m1);
    r.c0_eff = 1.0;
  } else {
    r.h_eff = in.h;
    r.c0_eff = in.c0;
  }
  r.conditions = check_l2_theorem(in, r);
  for (auto& c : check_h1_theorem(in, r)) r.conditions.push_back(std::move(c));
  return r;
}

bool TheoryReport::all_satisfied(const std::string& theorem) const {
  bool any = false;
  for (const auto& c : conditions) {
    if (c.theorem != theorem) continue;
    any = true;
    if (!c.applicable || !c.satisfied) return false;
  }
  return any;
}

TheoryInput theory_input(const GridPtr& grid, const SolverParams& params, const AssimilationConfig& cfg,
                         double absolute_c) {
  TheoryInput in;
  in.nu = params.nu;
  in.lambda1 = grid->lambda1();
  in.f_norm = params.forcing == ForcingKind::taylor_green ? std::sqrt(l2_norm_sq(taylor_green_forcing(grid))) : 0.0;
  in.mu = cfg.scheme == Scheme::nudge_window ? cfg.mu : 0.0;
  in.kappa = cfg.kappa;
  in.tau = cfg.scheme == Scheme::nudge_window ? cfg.tau : 0.0;
  in.interp_kind = cfg.interpolant.kind;
  if (cfg.interpolant.kind == InterpolantKind::modal) in.lambda_m1 = grid->lambda_of(cfg.interpolant.m + 1);
  in.h = cfg.interpolant.h;
  in.c0 = cfg.interpolant.c0;
  in.c1 = cfg.interpolant.c1;
  in.absolute_c = absolute_c;
  return in;
}

std::string to_key_value(const TheoryReport& r) {
  std::ostringstream out;
  for (const auto& note : report_assumptions()) out << "# assumption: " << note << '\n';
  const std::pair<const char*, double> scalars[] = {
      {"G", r.G},         {"M0", r.M0},       {"M1", r.M1},     {"M2", r.M2},
      {"R", r.R},         {"R1", r.R1},       {"K", r.K},       {"K1", r.K1},
      {"K2", r.K2},       {"theta", r.theta}, {"sigma", r.sigma}, {"theta_h1", r.theta_h1},
      {"D", r.D},         {"absolute_c", r.absolute_c}, {"c0", r.c0}, {"c1", r.c1},
      {"h_eff", r.h_eff}, {"c0_eff", r.c0_eff},
  };
  for (const auto& [key, value] : scalars) out << key << '=' << fmt(value) << '\n';
  for (const auto& c : r.conditions) {
    const std::string p = "condition." + c.theorem + "." + c.name + ".";
    out << p << "lhs=" << fmt(c.lhs) << '\n'
        << p << "relation=" << c.relation << '\n'
        << p << "rhs=" << fmt(c.rhs) << '\n'
        << p << "satisfied=" << (c.satisfied ? 1 : 0) << '\n'
        << p << "applicable=" << (c.applicable ? 1 : 0) << '\n';
  }
  out << "l2.all_satisfied=" << (r.all_satisfied("l2") ? 1 : 0) << '\n';
  out << "h1.all_satisfied=" << (r.all_satisfied("h1") ? 1 : 0) << '\n';
  return out.str();
}

std::string to_csv(const TheoryReport& r) {
  std::ostringstream out;
  out << "theorem,name,lhs,relation,rhs,satisfied,applicable\n";
  for (const auto& c : r.conditions) {
    out << c.theorem << ',' << c.name << ',' << fmt(c.lhs) << ',' << c.relation << ',' << fmt(c.rhs) << ','
        << (c.satisfied ? 1 : 0) << ',' << (c.applicable ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace ndas
