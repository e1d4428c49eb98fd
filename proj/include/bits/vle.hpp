#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bits {

// Antoine correlation log10(P[Pa]) = A - B / (T[K] + C).
struct AntoineCoeffs {
  double A = 0.0, B = 0.0, C = 0.0;
  double t_min = 0.0, t_max = 0.0;  // declared validity range, K
};

// Binary system, component 1 = PrOH (light key), component 2 = H2O.
// Wilson interaction Lambda_ij = (Vj / Vi) exp(-lambda_ij / (R T)).
struct BinarySystem {
  double pressure = 101325.0;  // Pa
  AntoineCoeffs antoine1, antoine2;
  double v1 = 0.0, v2 = 0.0;            // molar volumes, m^3/mol
  double lambda12 = 0.0, lambda21 = 0.0;  // interaction energies, J/mol

  std::pair<double, double> wilson_lambdas(double temperature) const;
};

BinarySystem load_system(const std::string& path);

// Wilson activity coefficients (gamma1, gamma2) at liquid composition z1.
std::pair<double, double> wilson_gamma(double z1, double temperature, const BinarySystem& sys);

// Pure-component vapor pressure in Pa; component is 1 or 2.
double vapor_pressure(double temperature, int component, const BinarySystem& sys);

// ln(gamma1) tabulated on a strictly increasing z1 grid at fixed temperature.
struct GammaCurve {
  std::vector<double> z1;
  std::vector<double> ln_gamma1;
  double temperature = 0.0;
};

// Gibbs-Duhem closure: ln gamma2(z1) = -integral_0^z1 z/(1-z) d ln gamma1,
// trapezoidal over the grid, singular limit truncated at 1 - eps.
std::vector<double> gibbs_duhem_gamma2(const GammaCurve& curve, double eps = 1e-4);

// Maps (z1, T) to (gamma1, gamma2).
using GammaProvider = std::function<std::pair<double, double>(double, double)>;

GammaProvider wilson_provider(const BinarySystem& sys);
GammaProvider ideal_provider();

struct BubblePoint {
  double temperature = 0.0;  // K
  double y1 = 0.0;           // vapor mole fraction of component 1
};

struct DewPoint {
  double temperature = 0.0;
  double x1 = 0.0;  // liquid mole fraction of component 1
};

// Bisection on [340, 380] K for z1 g1 P1* + z2 g2 P2* = P, |dT| < 1e-6 K.
BubblePoint bubble_point(double z1, double pressure, const GammaProvider& gamma,
                         const BinarySystem& sys);

// Outer bisection on T, inner damped fixed point on x1.
DewPoint dew_point(double y1, double pressure, const GammaProvider& gamma,
                   const BinarySystem& sys);

struct PhaseRow {
  double x = 0.0;  // liquid mole fraction
  double t = 0.0;  // bubble temperature, K
  double y = 0.0;  // vapor mole fraction
};

// Bubble-point rows for each grid composition (OpenMP across rows).
std::vector<PhaseRow> phase_table(const std::vector<double>& z1_grid,
                                  const GammaProvider& gamma, const BinarySystem& sys);

}  // namespace bits
