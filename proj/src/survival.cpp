#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "brwss/errors.hpp"
#include "brwss/simulator.hpp"

namespace brwss {

namespace {

// Below this survival probability the hazard is frozen; reaching it has
// probability below 1e-200 per particle.
constexpr double kMinSurvival = 1e-200;

}  // namespace

SurvivalTable::SurvivalTable(const ModelParams& p, double horizon, double step)
    : d_(p.d), horizon_(horizon), step_(step) {
  p.validate();
  if (!(horizon > 0.0) || !(step > 0.0)) throw DomainError("SurvivalTable: horizon and step must be > 0");
  points_ = static_cast<std::size_t>(std::ceil(horizon / step)) + 1;
  const auto width = static_cast<std::size_t>(d_) + 1;
  hazard_.assign(points_ * width, 0.0);
  derivative_.assign(points_ * width, 0.0);

  std::vector<double> down(width), up(width);
  for (int k = 0; k <= d_; ++k) {
    const ProjectedRates r = projected_rates(p, k);
    down[k] = r.down;
    up[k] = r.up;
  }
  const double lambda1 = p.lambda1;
  using State = std::vector<double>;
  auto rhs = [&](const State& w, State& dw, double) {
    dw[0] = 0.0;
    for (int k = 1; k <= d_; ++k) {
      double v = lambda1 * w[k] * (1.0 - w[k]) + down[k] * (w[k - 1] - w[k]);
      if (k < d_) v += up[k] * (w[k + 1] - w[k]);
      dw[k] = v;
    }
  };

  State w(width, 0.0);
  w[0] = 1.0;
  std::size_t index = 0;
  auto record = [&](const State& x, double) {
    State dx(width);
    rhs(x, dx, 0.0);
    double* h = &hazard_[index * width];
    double* dh = &derivative_[index * width];
    for (std::size_t k = 1; k < width; ++k) {
      const double u = 1.0 - x[k];
      if (u > kMinSurvival) {
        h[k] = -std::log1p(-x[k]);
        dh[k] = dx[k] / u;
      } else {
        h[k] = -std::log(kMinSurvival);
        dh[k] = 0.0;
      }
    }
    ++index;
  };
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_dense_output(1e-13, 1e-11, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_n_steps(stepper, rhs, w, 0.0, step_, points_ - 1, record);
  if (index != points_) throw NumericError("SurvivalTable: integration stopped early");
  for (std::size_t k = 1; k < width; ++k)
    for (std::size_t i = 1; i < points_; ++i)
      hazard_[i * width + k] = std::max(hazard_[i * width + k], hazard_[(i - 1) * width + k]);
}

double SurvivalTable::total_hazard(std::span<const std::uint64_t> counts, std::size_t cell,
                                   double s) const {
  const auto width = static_cast<std::size_t>(d_) + 1;
  const double tau = (s - static_cast<double>(cell) * step_) / step_;
  const double t2 = tau * tau, t3 = t2 * tau;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + tau;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double* a = &hazard_[cell * width];
  const double* da = &derivative_[cell * width];
  const double* b = a + width;
  const double* db = da + width;
  double total = 0.0;
  for (std::size_t k = 1; k < width && k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    const double value = h00 * a[k] + h10 * step_ * da[k] + h01 * b[k] + h11 * step_ * db[k];
    total += static_cast<double>(counts[k]) * value;
  }
  return total;
}

double SurvivalTable::cumulative_hazard(int k, double s) const {
  if (k < 0 || k > d_) throw DimensionError("SurvivalTable: level outside [0, d]");
  if (!(s >= 0.0) || s > horizon_) throw DomainError("SurvivalTable: time outside [0, horizon]");
  if (k == 0) return s > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  std::vector<std::uint64_t> unit(static_cast<std::size_t>(d_) + 1, 0);
  unit[k] = 1;
  const std::size_t cell = std::min(static_cast<std::size_t>(s / step_), points_ - 2);
  return total_hazard(unit, cell, s);
}

std::optional<double> SurvivalTable::sample_remaining(std::span<const std::uint64_t> counts,
                                                      double limit, Rng& rng) const {
  if (!counts.empty() && counts[0] > 0) return 0.0;
  limit = std::min(limit, horizon_);
  if (!(limit > 0.0)) return std::nullopt;
  const double target = exponential(rng, 1.0);
  const auto width = static_cast<std::size_t>(d_) + 1;
  auto grid_total = [&](std::size_t i) {
    double total = 0.0;
    for (std::size_t k = 1; k < width && k < counts.size(); ++k)
      total += static_cast<double>(counts[k]) * hazard_[i * width + k];
    return total;
  };
  const std::size_t last_cell = std::min(static_cast<std::size_t>(limit / step_), points_ - 2);
  if (total_hazard(counts, last_cell, limit) < target) return std::nullopt;

  // Largest grid index with total hazard below the target, then bisect.
  std::size_t lo = 0, hi = last_cell + 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (grid_total(mid) < target ? lo : hi) = mid;
  }
  double a = static_cast<double>(lo) * step_;
  double b = std::min(a + step_, limit);
  for (int i = 0; i < 60 && b - a > 1e-13 * std::max(1.0, b); ++i) {
    const double mid = 0.5 * (a + b);
    (total_hazard(counts, lo, mid) < target ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace brwss
