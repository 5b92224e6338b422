#include "fpsi/viscosity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fpsi {

void validate(const ViscosityModel& model) {
  if (model.law == ViscosityLaw::Newtonian) {
    if (!(model.nu0 > 0)) throw std::invalid_argument("viscosity: nu0 must be positive");
    return;
  }
  if (!(model.K > 0)) throw std::invalid_argument("viscosity: K must be positive");
  if (!(model.r > 1.0 && model.r < 2.0))
    throw std::invalid_argument("viscosity: r must lie in (1,2)");
  if (model.law == ViscosityLaw::PowerLaw) {
    if (!(model.m_c > 0)) throw std::invalid_argument("viscosity: m_c must be positive");
    return;
  }
  if (!(model.nu_inf >= 0 && model.nu_inf < model.nu0))
    throw std::invalid_argument("viscosity: need 0 <= nu_inf < nu0");
}

double nu_fluid(const ViscosityModel& model, double d) {
  switch (model.law) {
    case ViscosityLaw::Newtonian:
      return model.nu0;
    case ViscosityLaw::Carreau:
      return model.nu_inf + (model.nu0 - model.nu_inf) /
                                std::pow(1.0 + model.K * d * d, 0.5 * (2.0 - model.r));
    case ViscosityLaw::Cross:
      return model.nu_inf +
             (model.nu0 - model.nu_inf) / (1.0 + model.K * std::pow(d, 2.0 - model.r));
    case ViscosityLaw::PowerLaw:
      if (d == 0.0) return std::numeric_limits<double>::infinity();
      return model.K * std::pow(d, model.r - 2.0);
  }
  return model.nu0;
}

double nu_darcy(const ViscosityModel& model, double u, double kappa) {
  switch (model.law) {
    case ViscosityLaw::Newtonian:
      return model.nu0;
    case ViscosityLaw::Carreau:
      return model.nu_inf + (model.nu0 - model.nu_inf) /
                                std::pow(1.0 + model.K * u * u, 0.5 * (2.0 - model.r));
    case ViscosityLaw::Cross:
      return model.nu_inf +
             (model.nu0 - model.nu_inf) / (1.0 + model.K * std::pow(u, 2.0 - model.r));
    case ViscosityLaw::PowerLaw: {
      if (!(kappa > 0)) throw std::invalid_argument("nu_darcy: kappa must be positive");
      if (u == 0.0) return std::numeric_limits<double>::infinity();
      return model.K * std::pow(u / (std::sqrt(kappa) * model.m_c), model.r - 2.0);
    }
  }
  return model.nu0;
}

double nu_interface(const ViscosityModel& model, double s) {
  return nu_darcy(model, s, 1.0);
}

std::uint64_t SampleRng::next() {
  // splitmix64; fixed so sampled checks reproduce across platforms
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double SampleRng::uniform(double lo, double hi) {
  double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

MonotonicityReport check_monotonicity(const ViscosityModel& model, int n_samples,
                                      std::uint64_t rng_seed, ViscosityRole role,
                                      double scale) {
  if (n_samples < 1) throw std::invalid_argument("check_monotonicity: n_samples >= 1");

  auto g = [&](double mag) {
    switch (role) {
      case ViscosityRole::Fluid: return nu_fluid(model, mag);
      case ViscosityRole::Darcy: return nu_darcy(model, mag, 1.0);
      case ViscosityRole::Interface: return nu_interface(model, mag);
    }
    return nu_fluid(model, mag);
  };
  auto G = [&](const Vec2& x) -> Vec2 {
    double mag = x.norm();
    if (mag == 0.0) return Vec2::Zero(); // G(0) = 0 by convention
    return g(mag) * x;
  };

  const double c = model.law == ViscosityLaw::PowerLaw ? 0.0 : 1.0;
  const double q = 2.0 - model.r;

  MonotonicityReport report;
  report.min_quotient_A1 = std::numeric_limits<double>::infinity();
  report.min_quotient_B1 = std::numeric_limits<double>::infinity();

  SampleRng rng(rng_seed);
  for (int i = 0; i < n_samples; ++i) {
    Vec2 x(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
    Vec2 h(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
    double h2 = h.squaredNorm();
    if (h2 == 0.0) continue;
    Vec2 diff = G(x + h) - G(x);
    double weight = model.law == ViscosityLaw::Newtonian
                        ? 1.0
                        : c + std::pow(x.norm(), q) + std::pow((x + h).norm(), q);
    double a1 = diff.dot(h) / h2;
    report.min_quotient_A1 = std::min(report.min_quotient_A1, a1);
    report.min_quotient_B1 = std::min(report.min_quotient_B1, a1 * weight);
    double a2 = diff.norm() / std::sqrt(h2);
    report.max_ratio_A2 = std::max(report.max_ratio_A2, a2);
    report.max_ratio_B2 = std::max(report.max_ratio_B2, a2 * weight);
  }
  return report;
}

} // namespace fpsi
