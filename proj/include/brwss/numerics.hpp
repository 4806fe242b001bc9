#pragma once

// First-moment equation rho^t q_m(t) = 1, the slow-regime constants x0 and r,
// and the three first-passage-time predictors. All times are rescaled
// (mutation rate 1, branching rate log rho).

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "brwss/hypercube.hpp"

namespace brwss {

struct SolverConfig {
  // "Large enough" constants of the asymptotic statements. Leaving their
  // windows only raises a warning on the prediction.
  double L1 = 32.0;  // m <= d / L1 for slow/fast expansions
  double L2 = 64.0;  // log rho(d) >= L2 / d for the ultra-slow regime
  double L3 = 64.0;  // m <= d / L3 for the ultra-slow regime

  double root_abs_tol = 1e-9;  // scaled by max(1, t)
  double scan_ratio = 1.25;    // geometric bracket scan
  int max_scan_steps = 4000;
  int max_refine_iterations = 400;
  int lambert_max_iterations = 50;

  // Admissible rho for regime_constants: [1 + guard, e - guard].
  double rho_guard = 1e-6;
};

double lambert_w0(double x, const SolverConfig& cfg = {});

// phi(t) = t log rho - d log b + (d - m) log(1 + (b-1) u) + m log(1 - u),
// u = exp(-b t / ((b-1) d)); phi(t) = 0 iff rho^t q_m(t) = 1.
double first_moment_residual(const ModelParams& p, int m, double t);

struct RootResult {
  double t = 0.0;           // smallest positive root found
  double residual = 0.0;    // phi(t)
  int sign_changes = 0;     // over the whole scan window
  double window_lo = 0.0;
  double window_hi = 0.0;

  bool multiple_roots() const { return sign_changes > 1; }
};

// Smallest strictly positive root of phi. For m = 0 and rho < e the root is
// x0 d. Throws NoRootError when the scan window holds no sign change.
RootResult solve_first_moment(const ModelParams& p, int m, const SolverConfig& cfg = {});

struct RegimeConstants {
  double x0 = 0.0;
  double r = 0.0;
  double alpha = 0.0;  // exp(-b x0 / (b-1))
  double x0_residual = 0.0;
  double r_residual = 0.0;
};

// Requires rho in [1 + guard, e - guard]; RegimeError otherwise.
RegimeConstants regime_constants(int b, double rho, const SolverConfig& cfg = {});

// Same constants from log rho, without the guard band (log_rho in (0, 1)).
RegimeConstants regime_constants_from_log_rho(int b, double log_rho);

enum class Regime { SlowConstantRho, FastConstantRho, UltraSlow };

std::string to_string(Regime regime);

struct FptPrediction {
  Regime regime = Regime::SlowConstantRho;
  int m = 0;
  std::optional<double> t_first_moment;
  double t_predicted = 0.0;
  // Labelled terms; they sum to t_predicted.
  std::vector<std::pair<std::string, double>> decomposition;
  // Hypotheses of the underlying asymptotic statement that do not hold.
  std::vector<std::string> warnings;
  std::optional<RootResult> root;

  double term(const std::string& label) const;
  double decomposition_sum() const;
};

// Slow regime, rho in (1, e): t_predicted = x0 d + r m.
FptPrediction predict_slow(const ModelParams& p, int m, const SolverConfig& cfg = {});

// Fast regime, rho > e: t solves (rho/e)^t (t / ((b-1) d))^m = 1.
FptPrediction predict_fast(const ModelParams& p, int m, const SolverConfig& cfg = {});

// Fast regime: solves (rho/e)^t (t / ((b-1) d))^m = m.
double bar_t(const ModelParams& p, int m, const SolverConfig& cfg = {});

// d -> log rho(d).
using LogRhoSchedule = std::function<double(int)>;

// Ultra-slow regime, b = 2: t_predicted = t_root - (-log log rho) / log rho.
FptPrediction predict_ultraslow(const LogRhoSchedule& schedule, int d, int m,
                                const SolverConfig& cfg = {});

// Leading-order change, per unit of d and in original time units, of the
// first passage time when the mutation rate goes from lambda2 to lambda2p.
double mutation_delay_coefficient(int b, double lambda1, double lambda2, double lambda2p,
                                  const SolverConfig& cfg = {});

// Slow when rho < e, fast when rho > e; RegimeError at rho == e.
Regime classify_regime(const ModelParams& p);

}  // namespace brwss
