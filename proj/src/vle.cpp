#include "bits/vle.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "bits/errors.hpp"

namespace bits {

namespace {
constexpr double kGasConstant = 8.31446261815324;  // J/(mol K)
constexpr double kBracketLo = 340.0;
constexpr double kBracketHi = 380.0;
}  // namespace

std::pair<double, double> BinarySystem::wilson_lambdas(double temperature) const {
  const double l12 = (v2 / v1) * std::exp(-lambda12 / (kGasConstant * temperature));
  const double l21 = (v1 / v2) * std::exp(-lambda21 / (kGasConstant * temperature));
  return {l12, l21};
}

BinarySystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open system file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("cannot parse system file " + path + ": " + e.what());
  }
  auto antoine = [](const nlohmann::json& a) {
    return AntoineCoeffs{a.at("A"), a.at("B"), a.at("C"), a.at("t_min"), a.at("t_max")};
  };
  try {
    BinarySystem sys;
    sys.pressure = j.at("pressure_pa");
    sys.antoine1 = antoine(j.at("antoine").at("PrOH"));
    sys.antoine2 = antoine(j.at("antoine").at("H2O"));
    const auto& w = j.at("wilson");
    sys.v1 = w.at("v1_m3_per_mol");
    sys.v2 = w.at("v2_m3_per_mol");
    sys.lambda12 = w.at("lambda12_j_per_mol");
    sys.lambda21 = w.at("lambda21_j_per_mol");
    return sys;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("system file " + path + " missing fields: " + e.what());
  }
}

std::pair<double, double> wilson_gamma(double z1, double temperature, const BinarySystem& sys) {
  if (z1 < 0.0 || z1 > 1.0) throw InputError("mole fraction outside [0, 1]");
  const auto [l12, l21] = sys.wilson_lambdas(temperature);
  const double z2 = 1.0 - z1;
  const double s1 = z1 + l12 * z2;
  const double s2 = z2 + l21 * z1;
  const double common = l12 / s1 - l21 / s2;
  const double ln_g1 = -std::log(s1) + z2 * common;
  const double ln_g2 = -std::log(s2) - z1 * common;
  return {std::exp(ln_g1), std::exp(ln_g2)};
}

double vapor_pressure(double temperature, int component, const BinarySystem& sys) {
  const AntoineCoeffs& a = component == 1 ? sys.antoine1 : sys.antoine2;
  if (component != 1 && component != 2) throw InputError("component index must be 1 or 2");
  if (temperature < a.t_min || temperature > a.t_max)
    throw DomainError("temperature " + std::to_string(temperature) +
                      " K outside Antoine validity range [" + std::to_string(a.t_min) +
                      ", " + std::to_string(a.t_max) + "] K");
  return std::pow(10.0, a.A - a.B / (temperature + a.C));
}

std::vector<double> gibbs_duhem_gamma2(const GammaCurve& curve, double eps) {
  const std::size_t n = curve.z1.size();
  if (n < 2 || curve.ln_gamma1.size() != n)
    throw InputError("Gibbs-Duhem integration needs a grid of at least two matched points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(curve.z1[i] > curve.z1[i - 1]))
      throw InputError("Gibbs-Duhem grid must be strictly increasing");
  if (curve.z1.back() > 1.0 - eps)
    throw InputError("Gibbs-Duhem grid reaches the z1 -> 1 singularity; truncate at 1 - eps");

  std::vector<double> ln_g2(n, 0.0);
  double acc = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double dlng1 = curve.ln_gamma1[i] - curve.ln_gamma1[i - 1];
    const double w_prev = curve.z1[i - 1] / (1.0 - curve.z1[i - 1]);
    const double w_curr = curve.z1[i] / (1.0 - curve.z1[i]);
    acc -= 0.5 * (w_prev + w_curr) * dlng1;
    ln_g2[i] = acc;
  }
  return ln_g2;
}

GammaProvider wilson_provider(const BinarySystem& sys) {
  return [sys](double z1, double t) { return wilson_gamma(z1, t, sys); };
}

GammaProvider ideal_provider() {
  return [](double, double) { return std::pair<double, double>{1.0, 1.0}; };
}

BubblePoint bubble_point(double z1, double pressure, const GammaProvider& gamma,
                         const BinarySystem& sys) {
  if (z1 < 0.0 || z1 > 1.0) throw InputError("mole fraction outside [0, 1]");
  const double z2 = 1.0 - z1;
  const auto residual = [&](double t) {
    const auto [g1, g2] = gamma(z1, t);
    return z1 * g1 * vapor_pressure(t, 1, sys) + z2 * g2 * vapor_pressure(t, 2, sys) - pressure;
  };
  double lo = kBracketLo, hi = kBracketHi;
  double rlo = residual(lo), rhi = residual(hi);
  if (rlo * rhi > 0.0)
    throw NumericalError("bubble-point bracket [340, 380] K has no sign change; residuals " +
                         std::to_string(rlo) + " / " + std::to_string(rhi));
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const double rm = residual(mid);
    if (rlo * rm <= 0.0) {
      hi = mid;
      rhi = rm;
    } else {
      lo = mid;
      rlo = rm;
    }
  }
  BubblePoint bp;
  bp.temperature = 0.5 * (lo + hi);
  const auto [g1, g2] = gamma(z1, bp.temperature);
  bp.y1 = z1 * g1 * vapor_pressure(bp.temperature, 1, sys) / pressure;
  if (bp.y1 < 0.0 || bp.y1 > 1.0 + 1e-9)
    throw NumericalError("bubble-point vapor fraction outside [0, 1]: " + std::to_string(bp.y1));
  bp.y1 = std::min(bp.y1, 1.0);
  return bp;
}

DewPoint dew_point(double y1, double pressure, const GammaProvider& gamma,
                   const BinarySystem& sys) {
  if (y1 < 0.0 || y1 > 1.0) throw InputError("mole fraction outside [0, 1]");
  const double y2 = 1.0 - y1;

  // For fixed T, relax x1 to consistency and return (sum of x_b) - 1.
  const auto solve_x = [&](double t, double x_init) {
    double x1 = x_init;
    double sum = 0.0;
    for (int it = 0; it < 200; ++it) {
      const auto [g1, g2] = gamma(x1, t);
      const double x1_raw = y1 * pressure / (g1 * vapor_pressure(t, 1, sys));
      const double x2_raw = y2 * pressure / (g2 * vapor_pressure(t, 2, sys));
      sum = x1_raw + x2_raw;
      const double x1_next = std::clamp(x1_raw / sum, 0.0, 1.0);
      const double step = x1_next - x1;
      x1 += 0.5 * step;  // damped
      if (std::abs(step) < 1e-12) break;
    }
    return std::pair<double, double>{sum - 1.0, x1};
  };

  double lo = kBracketLo, hi = kBracketHi;
  double x_guess = y1;
  auto [rlo, xlo] = solve_x(lo, x_guess);
  auto [rhi, xhi] = solve_x(hi, x_guess);
  if (rlo * rhi > 0.0)
    throw NumericalError("dew-point bracket [340, 380] K has no sign change; residuals " +
                         std::to_string(rlo) + " / " + std::to_string(rhi));
  double rmid = rlo;
  double xmid = xlo;
  while (hi - lo > 1e-8 * 380.0) {
    const double mid = 0.5 * (lo + hi);
    std::tie(rmid, xmid) = solve_x(mid, x_guess);
    x_guess = xmid;
    if (rlo * rmid <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      rlo = rmid;
    }
  }
  DewPoint dp;
  dp.temperature = 0.5 * (lo + hi);
  dp.x1 = xmid;
  return dp;
}

std::vector<PhaseRow> phase_table(const std::vector<double>& z1_grid,
                                  const GammaProvider& gamma, const BinarySystem& sys) {
  std::vector<PhaseRow> rows(z1_grid.size());
  std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::size_t i = 0; i < z1_grid.size(); ++i) {
    try {
      const BubblePoint bp = bubble_point(z1_grid[i], sys.pressure, gamma, sys);
      rows[i] = {z1_grid[i], bp.temperature, bp.y1};
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace bits
