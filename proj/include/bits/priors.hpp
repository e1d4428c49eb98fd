#pragma once

#include <random>
#include <string>
#include <vector>

namespace bits {

enum class PriorFamily { Gamma, Uniform };

// Prior for one hyperparameter, together with the bijection that maps its
// support onto the real line (log for Gamma, affine-logistic for Uniform).
struct Prior {
  std::string name;
  PriorFamily family = PriorFamily::Gamma;
  double a = 1.0;  // Gamma concentration / Uniform low
  double b = 1.0;  // Gamma rate / Uniform high

  void validate() const;
  double log_pdf(double theta) const;      // -inf outside support
  bool in_support(double theta) const;

  double to_unconstrained(double theta) const;
  double to_constrained(double u) const;
  // log |d theta / d u|, the Jacobian correction for densities in u-space
  double log_jacobian(double u) const;

  double sample(std::mt19937_64& rng) const;
};

using PriorSpec = std::vector<Prior>;

// Table-of-priors used by the case study: kernel variance ~ Gamma(2,1),
// mole fraction length scale ~ Uniform(0.1, 50), temperature length
// scale ~ Gamma(4,2).
PriorSpec case_study_priors();

}  // namespace bits
