#include <cmath>
#include <limits>

#include "brwss/errors.hpp"
#include "brwss/numerics.hpp"

namespace brwss {

namespace {

constexpr double kE = 2.718281828459045;

double initial_guess(double x) {
  if (x < 0.25) return x * (1.0 - x * (1.0 - 1.5 * x));  // series about 0
  if (x <= kE) {
    const double l = std::log1p(x);
    return l * (1.0 - std::log1p(l) / (2.0 + l));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x, const SolverConfig& cfg) {
  if (std::isnan(x) || x < 0.0) throw DomainError("lambert_w0: argument must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w = initial_guess(x);
  for (int it = 0; it < cfg.lambert_max_iterations; ++it) {
    // Halley step on f(w) = w e^w - x, written with f / e^w to avoid overflow.
    const double f = w - x * std::exp(-w);
    const double wp1 = w + 1.0;
    const double step = f / (wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w)))
      return w;
  }
  throw NumericError("lambert_w0: Halley iteration did not converge");
}

}  // namespace brwss
