#include "bits/priors.hpp"

#include <cmath>
#include <limits>

#include "bits/errors.hpp"

namespace bits {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
}  // namespace

void Prior::validate() const {
  if (family == PriorFamily::Gamma) {
    if (a <= 0.0 || b <= 0.0)
      throw DomainError("Gamma prior '" + name + "' needs positive concentration and rate");
  } else {
    if (!(a < b)) throw DomainError("Uniform prior '" + name + "' needs low < high");
  }
}

bool Prior::in_support(double theta) const {
  if (family == PriorFamily::Gamma) return theta > 0.0;
  return theta > a && theta < b;
}

double Prior::log_pdf(double theta) const {
  if (!in_support(theta)) return kNegInf;
  if (family == PriorFamily::Gamma)
    return (a - 1.0) * std::log(theta) - b * theta + a * std::log(b) - std::lgamma(a);
  return -std::log(b - a);
}

double Prior::to_unconstrained(double theta) const {
  if (family == PriorFamily::Gamma) return std::log(theta);
  const double p = (theta - a) / (b - a);
  return std::log(p) - std::log1p(-p);
}

double Prior::to_constrained(double u) const {
  if (family == PriorFamily::Gamma) return std::exp(u);
  return a + (b - a) * logistic(u);
}

double Prior::log_jacobian(double u) const {
  if (family == PriorFamily::Gamma) return u;  // d e^u / du = e^u
  const double s = logistic(u);
  return std::log(b - a) + std::log(s) + std::log1p(-s);
}

double Prior::sample(std::mt19937_64& rng) const {
  if (family == PriorFamily::Gamma) {
    std::gamma_distribution<double> dist(a, 1.0 / b);
    return dist(rng);
  }
  std::uniform_real_distribution<double> dist(a, b);
  return dist(rng);
}

PriorSpec case_study_priors() {
  return {
      {"kernel_variance", PriorFamily::Gamma, 2.0, 1.0},
      {"molefrac_lengthscale", PriorFamily::Uniform, 0.1, 50.0},
      {"temperature_lengthscale", PriorFamily::Gamma, 4.0, 2.0},
  };
}

}  // namespace bits
