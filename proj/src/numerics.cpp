#include "brwss/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "brwss/errors.hpp"

namespace brwss {

namespace {

constexpr double kE = 2.718281828459045;
constexpr double kLog2 = 0.6931471805599453;

double sign_of(double v) { return (v > 0) - (v < 0); }

// Bracketed refinement: Illinois false position with a bisection step
// whenever the bracket fails to halve. Requires f(lo) < 0 < f(hi) or the
// reverse. Stops when the bracket is no wider than tol(x).
template <class F, class Tol>
double refine_bracket(F&& f, double lo, double hi, double f_lo, double f_hi, Tol&& tol,
                      int max_iterations) {
  int stuck_side = 0;
  double checkpoint = hi - lo;
  for (int it = 0; it < max_iterations; ++it) {
    bool bisect = false;
    if (it % 2 == 1) {
      bisect = (hi - lo) > 0.5 * checkpoint;
      checkpoint = hi - lo;
    }
    double c = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (bisect || !(c > lo && c < hi)) c = 0.5 * (lo + hi);
    const double f_c = f(c);
    if (f_c == 0.0) return c;
    if (sign_of(f_c) == sign_of(f_hi)) {
      hi = c;
      f_hi = f_c;
      if (stuck_side == -1) f_lo *= 0.5;
      stuck_side = -1;
    } else {
      lo = c;
      f_lo = f_c;
      if (stuck_side == 1) f_hi *= 0.5;
      stuck_side = 1;
    }
    if (hi - lo <= tol(0.5 * (lo + hi))) return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  }
  throw NumericError("root refinement exceeded its iteration budget");
}

void require_target_distance(const ModelParams& p, int m) {
  if (m < 0 || m > p.d) throw DomainError("target distance m outside [0, d]");
}

// x log rho + log((1 + (b-1) e^{-b x/(b-1)}) / b); vanishes at 0 and x0.
double x0_equation(int b, double log_rho, double x) {
  const double c = b / (b - 1.0);
  return x * log_rho + std::log1p((b - 1.0) / b * std::expm1(-c * x));
}

double solve_x0(int b, double log_rho) {
  // Near 0 the equation behaves like (log rho - 1) x + x^2 / (2 (b-1)).
  double lo = std::min(1.0, (b - 1.0) * (1.0 - log_rho));
  while (x0_equation(b, log_rho, lo) >= 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) throw NumericError("x0: no negative value of the defining equation");
  }
  double hi = 2.0 * lo;
  while (x0_equation(b, log_rho, hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericError("x0: no positive value of the defining equation");
  }
  auto f = [&](double x) { return x0_equation(b, log_rho, x); };
  auto tol = [](double x) { return 4.0 * std::numeric_limits<double>::epsilon() * x; };
  return refine_bracket(f, lo, hi, f(lo), f(hi), tol, 2000);
}

void add_window_warnings(FptPrediction& out, const ModelParams& p, int m, double L) {
  if (m > p.d / L) {
    std::ostringstream msg;
    msg << "m=" << m << " exceeds d/L1=" << p.d / L;
    out.warnings.push_back(msg.str());
  }
}

}  // namespace

double first_moment_residual(const ModelParams& p, int m, double t) {
  require_target_distance(p, m);
  if (!(t > 0.0)) throw DomainError("first_moment_residual: t must be > 0");
  const double b = p.b;
  const double x = b * t / ((b - 1.0) * p.d);
  double phi = t * p.log_rho() + p.d * std::log1p((b - 1.0) / b * std::expm1(-x));
  if (m > 0) phi += m * (std::log(-std::expm1(-x)) - std::log1p((b - 1.0) * std::exp(-x)));
  return phi;
}

RootResult solve_first_moment(const ModelParams& p, int m, const SolverConfig& cfg) {
  p.validate();
  require_target_distance(p, m);
  const ModelParams q = p.rescaled();
  const double L = q.log_rho();
  const double d = q.d;
  const double log_b = std::log(static_cast<double>(q.b));

  RootResult result;
  double t_lo = 0.0;
  if (L < 1.0) {
    // No root below x0 d: phi(t) <= d * (x0 equation at t/d) < 0 there.
    const double x0 = solve_x0(q.b, L);
    if (m == 0) {
      result.t = x0 * d;
      result.residual = first_moment_residual(q, 0, result.t);
      result.sign_changes = 1;
      result.window_lo = result.window_hi = result.t;
      return result;
    }
    t_lo = x0 * d;
    result.window_hi = 4.0 * d * log_b / L + 4.0 * d;
  } else {
    t_lo = 1e-6;
    result.window_hi = 4.0 * d * log_b / std::max(L - 1.0, 1e-6) + 4.0 * d;
  }
  result.window_lo = t_lo;

  auto phi = [&](double t) { return first_moment_residual(q, m, t); };

  double start_phi = phi(t_lo);
  for (int step = 0; start_phi >= 0.0 && step < cfg.max_scan_steps; ++step) {
    // Rounding can lift phi(x0 d) above zero when the m term is tiny.
    t_lo /= cfg.scan_ratio;
    start_phi = phi(t_lo);
  }
  result.window_lo = t_lo;

  double prev_t = t_lo;
  double prev_phi = start_phi;
  const double phi_lo = prev_phi;
  std::optional<std::pair<double, double>> bracket;
  std::pair<double, double> bracket_phi;
  for (int step = 0; step < cfg.max_scan_steps && prev_t < result.window_hi; ++step) {
    const double t = std::min(prev_t * cfg.scan_ratio, result.window_hi);
    const double v = phi(t);
    if (sign_of(v) != sign_of(prev_phi) && prev_phi != 0.0) {
      ++result.sign_changes;
      if (!bracket && prev_phi < 0.0) {
        bracket = {prev_t, t};
        bracket_phi = {prev_phi, v};
      }
    }
    prev_t = t;
    prev_phi = v;
  }
  if (!bracket) throw NoRootError(t_lo, result.window_hi, phi_lo, prev_phi);

  auto tol = [&](double t) { return cfg.root_abs_tol * std::max(1.0, t); };
  result.t = bracket_phi.second == 0.0
                 ? bracket->second
                 : refine_bracket(phi, bracket->first, bracket->second, bracket_phi.first,
                                  bracket_phi.second, tol, cfg.max_refine_iterations);
  result.residual = phi(result.t);
  return result;
}

RegimeConstants regime_constants_from_log_rho(int b, double log_rho) {
  if (b < 2) throw DomainError("regime_constants: b must be >= 2");
  if (!(log_rho > 0.0 && log_rho < 1.0))
    throw RegimeError("regime_constants: rho must lie in (1, e)");
  RegimeConstants k;
  k.x0 = solve_x0(b, log_rho);
  const double c = b / (b - 1.0);
  k.alpha = std::exp(-c * k.x0);
  const double numerator =
      std::log1p((b - 1.0) * k.alpha) - std::log(-std::expm1(-c * k.x0));
  const double denominator = log_rho - b * k.alpha / ((b - 1.0) * k.alpha + 1.0);
  if (!(denominator > 0.0)) throw NumericError("regime_constants: non-positive denominator for r");
  k.r = numerator / denominator;
  k.x0_residual = x0_equation(b, log_rho, k.x0);
  k.r_residual = k.r * log_rho - numerator - b * k.r / (b - 1.0 + std::exp(c * k.x0));
  return k;
}

RegimeConstants regime_constants(int b, double rho, const SolverConfig& cfg) {
  if (!(rho >= 1.0 + cfg.rho_guard && rho <= kE - cfg.rho_guard)) {
    std::ostringstream msg;
    msg << "regime_constants: rho=" << rho << " outside the slow regime (1, e)";
    throw RegimeError(msg.str());
  }
  return regime_constants_from_log_rho(b, std::log(rho));
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::SlowConstantRho: return "slow";
    case Regime::FastConstantRho: return "fast";
    case Regime::UltraSlow: return "ultraslow";
  }
  return "unknown";
}

double FptPrediction::term(const std::string& label) const {
  for (const auto& [name, value] : decomposition)
    if (name == label) return value;
  return 0.0;
}

double FptPrediction::decomposition_sum() const {
  double sum = 0.0;
  for (const auto& entry : decomposition) sum += entry.second;
  return sum;
}

Regime classify_regime(const ModelParams& p) {
  const double L = p.log_rho();
  if (L < 1.0) return Regime::SlowConstantRho;
  if (L > 1.0) return Regime::FastConstantRho;
  throw RegimeError("rho = e is the critical case; no predictor is available");
}

FptPrediction predict_slow(const ModelParams& p, int m, const SolverConfig& cfg) {
  p.validate();
  require_target_distance(p, m);
  const double L = p.log_rho();
  if (!(L < 1.0)) throw RegimeError("predict_slow requires rho in (1, e)");
  const RegimeConstants k = regime_constants_from_log_rho(p.b, L);

  FptPrediction out;
  out.regime = Regime::SlowConstantRho;
  out.m = m;
  out.decomposition = {{"x0*d", k.x0 * p.d}, {"r*m", k.r * m}};
  out.t_predicted = k.x0 * p.d + k.r * m;
  out.root = solve_first_moment(p, m, cfg);
  out.t_first_moment = out.root->t;
  add_window_warnings(out, p, m, cfg.L1);
  if (out.root->multiple_roots()) out.warnings.push_back("first-moment equation has several roots");
  return out;
}

FptPrediction predict_fast(const ModelParams& p, int m, const SolverConfig& cfg) {
  p.validate();
  require_target_distance(p, m);
  const double L = p.log_rho();
  if (!(L > 1.0)) throw RegimeError("predict_fast requires rho > e");

  FptPrediction out;
  out.regime = Regime::FastConstantRho;
  out.m = m;
  double t = 0.0;
  if (m > 0) {
    const double argument = (L - 1.0) * (p.b - 1.0) * p.d / m;
    t = m * lambert_w0(argument, cfg) / (L - 1.0);
  }
  out.t_predicted = t;
  out.decomposition = {{"lambert", t}};
  if (m > 0) {
    try {
      out.root = solve_first_moment(p, m, cfg);
      out.t_first_moment = out.root->t;
      if (out.root->multiple_roots())
        out.warnings.push_back("first-moment equation has several roots");
    } catch (const NoRootError&) {
      out.warnings.push_back("first-moment equation has no root in the scan window");
    }
  }
  add_window_warnings(out, p, m, cfg.L1);
  return out;
}

double bar_t(const ModelParams& p, int m, const SolverConfig& cfg) {
  p.validate();
  const double L = p.log_rho();
  if (!(L > 1.0)) throw RegimeError("bar_t requires rho > e");
  if (m < 1) throw DomainError("bar_t requires m >= 1");
  const double root_m = std::exp(std::log(static_cast<double>(m)) / m);
  const double argument = (L - 1.0) * (p.b - 1.0) * p.d * root_m / m;
  return m * lambert_w0(argument, cfg) / (L - 1.0);
}

FptPrediction predict_ultraslow(const LogRhoSchedule& schedule, int d, int m,
                                const SolverConfig& cfg) {
  const double L = schedule(d);
  const ModelParams p = ModelParams::from_log_rho(2, d, L);
  require_target_distance(p, m);
  if (!(L < 1.0)) throw RegimeError("predict_ultraslow requires rho(d) in (1, e)");

  FptPrediction out;
  out.regime = Regime::UltraSlow;
  out.m = m;
  out.root = solve_first_moment(p, m, cfg);
  out.t_first_moment = out.root->t;
  const double leading = d * kLog2 / L;
  const double correction = std::log(L) / L;  // = -(-log log rho) / log rho < 0
  out.decomposition = {
      {"d*log2/log(rho)", leading},
      {"root-remainder", out.root->t - leading},
      {"correction", correction}};
  out.t_predicted = out.root->t + correction;
  if (L < cfg.L2 / d) {
    std::ostringstream msg;
    msg << "log(rho)=" << L << " below L2/d=" << cfg.L2 / d;
    out.warnings.push_back(msg.str());
  }
  if (m > d / cfg.L3) {
    std::ostringstream msg;
    msg << "m=" << m << " exceeds d/L3=" << d / cfg.L3;
    out.warnings.push_back(msg.str());
  }
  return out;
}

double mutation_delay_coefficient(int b, double lambda1, double lambda2, double lambda2p,
                                  const SolverConfig& cfg) {
  if (!(lambda1 > 0.0 && lambda1 < lambda2 && lambda2 < lambda2p))
    throw DomainError("mutation_delay_coefficient requires 0 < lambda1 < lambda2 < lambda2p");
  const double x0 = regime_constants(b, std::exp(lambda1 / lambda2), cfg).x0;
  const double x0p = regime_constants(b, std::exp(lambda1 / lambda2p), cfg).x0;
  return x0p / lambda2p - x0 / lambda2;
}

}  // namespace brwss
