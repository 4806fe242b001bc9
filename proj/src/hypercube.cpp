#include "brwss/hypercube.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "brwss/errors.hpp"

namespace brwss {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_distance(int d, int m, const char* what) {
  if (m < 0 || m > d) {
    std::ostringstream msg;
    msg << what << ": distance " << m << " outside [0, " << d << "]";
    throw DomainError(msg.str());
  }
}

// log(1 + (b-1)/b * expm1(-x)) = log((1 + (b-1) e^{-x}) / b)
double log_mixed_fraction(int b, double x) {
  const double bm1_over_b = static_cast<double>(b - 1) / b;
  return std::log1p(bm1_over_b * std::expm1(-x));
}

BigInt power(int base, int exponent) {
  if (exponent < 0) return 0;
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

// n / 2 when n is even and non-negative, otherwise -1 (an empty binomial).
int half_or_invalid(int n) { return (n >= 0 && n % 2 == 0) ? n / 2 : -1; }

}  // namespace

void ModelParams::validate() const {
  if (b < 2) throw DomainError("alphabet size b must be >= 2");
  if (d < 1) throw DomainError("genome length d must be >= 1");
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1))
    throw DomainError("branching rate lambda1 must be positive and finite");
  if (!(lambda2 > 0.0) || !std::isfinite(lambda2))
    throw DomainError("mutation rate lambda2 must be positive and finite");
}

double ModelParams::rho() const { return std::exp(log_rho()); }

ModelParams ModelParams::rescaled() const {
  return ModelParams{b, d, lambda1 / lambda2, 1.0};
}

ModelParams ModelParams::from_rho(int b, int d, double rho) {
  if (!(rho > 1.0)) throw DomainError("rho must be > 1");
  return from_log_rho(b, d, std::log(rho));
}

ModelParams ModelParams::from_log_rho(int b, int d, double log_rho) {
  ModelParams p{b, d, log_rho, 1.0};
  p.validate();
  return p;
}

double LogProb::linear() const { return std::exp(value); }

Genotype Genotype::at_distance(const Genotype& target, int b, int m) {
  require_distance(target.size(), m, "Genotype::at_distance");
  std::vector<std::uint32_t> symbols(target.symbols_);
  for (int i = 0; i < m; ++i) symbols[i] = (symbols[i] + 1) % static_cast<std::uint32_t>(b);
  return Genotype(std::move(symbols));
}

void Genotype::validate(const ModelParams& p) const {
  if (size() != p.d) throw DomainError("genotype length differs from d");
  for (auto s : symbols_)
    if (s >= static_cast<std::uint32_t>(p.b)) throw DomainError("genotype symbol >= b");
}

int hamming_distance(const Genotype& x, const Genotype& y) {
  if (x.size() != y.size()) throw DimensionError("hamming_distance: length mismatch");
  int distance = 0;
  for (int i = 0; i < x.size(); ++i) distance += (x[i] != y[i]);
  return distance;
}

BigInt binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

double log_binomial(double n, double k) {
  if (k < 0 || k > n) return kNegInf;
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

BigInt sphere_size(int d, int b, int m) {
  require_distance(d, m, "sphere_size");
  return binomial(d, m) * power(b - 1, m);
}

double log_sphere_size(int d, int b, int m) {
  require_distance(d, m, "log_sphere_size");
  return log_binomial(d, m) + (m == 0 ? 0.0 : m * std::log(static_cast<double>(b - 1)));
}

LogProb transition_log_prob(const ModelParams& p, int m, double t) {
  require_distance(p.d, m, "transition_log_prob");
  if (!(t >= 0.0)) throw DomainError("transition_log_prob: negative time");
  const double b = p.b;
  const double x = b * t / ((b - 1.0) * p.d);
  double value = (p.d - m) * log_mixed_fraction(p.b, x);
  if (m > 0) {
    if (t == 0.0) return LogProb{kNegInf};
    value += m * (std::log(-std::expm1(-x)) - std::log(b));
  }
  return LogProb{value};
}

LogProb expected_particles_log(const ModelParams& p, int m, double t) {
  const LogProb q = transition_log_prob(p, m, t);
  if (q.is_zero()) return q;
  return LogProb{t * p.log_rho() + q.value};
}

double expected_occupation_time(const ModelParams& p, int m, double t) {
  require_distance(p.d, m, "expected_occupation_time");
  if (!(t >= 0.0)) throw DomainError("expected_occupation_time: negative time");
  if (t == 0.0) return 0.0;

  // Integrate exp(log f - shift) so the integrand stays O(1) at its peak.
  double shift = kNegInf;
  constexpr int kProbe = 256;
  for (int i = 1; i <= kProbe; ++i)
    shift = std::max(shift, expected_particles_log(p, m, t * i / kProbe).value);
  if (shift == kNegInf) return 0.0;

  auto integrand = [&](double s) {
    const LogProb v = expected_particles_log(p, m, s);
    return v.is_zero() ? 0.0 : std::exp(v.value - shift);
  };

  // 15-point Kronrod rule, at most 2^15 panels (~10^6 evaluations).
  constexpr unsigned kMaxDepth = 15;
  constexpr double kRelTol = 1e-8;
  double error = 0.0;
  double l1 = 0.0;
  const double scaled = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, 0.0, t, kMaxDepth, kRelTol, &error, &l1);
  if (!std::isfinite(scaled) || error > kRelTol * std::max(l1, 1e-300) * 10.0) {
    std::ostringstream msg;
    msg << "expected_occupation_time: quadrature did not converge (estimate " << scaled
        << ", error " << error << ", L1 " << l1 << ", shift " << shift << ")";
    throw NumericError(msg.str());
  }
  return scaled * std::exp(shift);
}

ProjectedRates projected_rates(const ModelParams& p, int k) {
  require_distance(p.d, k, "projected_rates");
  const double bm1 = p.b - 1.0;
  const double d = p.d;
  ProjectedRates rates;
  rates.down = p.lambda2 * k / (bm1 * d);
  rates.lateral = p.lambda2 * k * (p.b - 2.0) / (bm1 * d);
  rates.up = p.lambda2 * (d - k) / d;
  return rates;
}

Genotype mutate(const Genotype& g, const ModelParams& p, Rng& rng) {
  Genotype out = g;
  const auto i = uniform_index(rng, static_cast<std::uint64_t>(g.size()));
  const auto shift = 1 + uniform_index(rng, static_cast<std::uint64_t>(p.b - 1));
  out.symbols_[i] = static_cast<std::uint32_t>((g.symbols_[i] + shift) % p.b);
  return out;
}

BigInt count_at_distance_pair(int d, int b, int m, int ell, int ell_prime) {
  if (b < 2) throw DomainError("count_at_distance_pair: b must be >= 2");
  require_distance(d, m, "count_at_distance_pair");
  require_distance(d, ell, "count_at_distance_pair");
  require_distance(d, ell_prime, "count_at_distance_pair");
  // i: coordinates among the m non-zero ones of x where y agrees with x.
  BigInt total = 0;
  for (int i = 0; i <= m; ++i) {
    const int other = ell_prime - ell + m - 2 * i;  // differs from x, non-zero
    const int fresh = i + ell - m;                  // non-zero where x is zero
    if (other < 0 || fresh < 0) continue;
    total += binomial(m, i) * binomial(m - i, i + ell - ell_prime) * binomial(d - m, fresh) *
             power(b - 2, other) * power(b - 1, fresh);
  }
  return total;
}

BigInt count_triples(int d, int m, int ell1, int ell2, int ell3, int k, int k_prime) {
  for (int v : {m, ell1, ell2, ell3, k, k_prime}) require_distance(d, v, "count_triples");
  BigInt total = 0;
  for (int ell = 0; ell <= d; ++ell) {
    const int a1 = half_or_invalid(m + ell1 - ell);
    const int a2 = half_or_invalid(ell + ell1 - m);
    const int a3 = half_or_invalid(ell + ell2 - k);
    const int a4 = half_or_invalid(ell2 + k - ell);
    const int a5 = half_or_invalid(ell + ell3 - k_prime);
    const int a6 = half_or_invalid(ell3 + k_prime - ell);
    if (std::min({a1, a2, a3, a4, a5, a6}) < 0) continue;
    total += binomial(m, a1) * binomial(d - m, a2) * binomial(ell, a3) * binomial(d - ell, a4) *
             binomial(ell, a5) * binomial(d - ell, a6);
  }
  return total;
}

}  // namespace brwss
