#pragma once

#include <cstdint>

#include "fpsi/types.hpp"

namespace fpsi {

enum class ViscosityLaw { Carreau, Cross, PowerLaw, Newtonian };

/// Shear-dependent viscosity law. The nonlinear laws require
/// 0 <= nu_inf < nu0, K > 0 and 1 < r < 2. m_c enters only the power-law
/// effective viscosity in the porous region.
struct ViscosityModel {
  ViscosityLaw law = ViscosityLaw::Newtonian;
  double nu0 = 1.0;
  double nu_inf = 0.0;
  double K = 1.0;
  double r = 1.5;
  double m_c = 1.0;
};

void validate(const ViscosityModel& model);

/// Fluid viscosity as a function of the magnitude of the deformation tensor.
/// The power law returns +inf at d = 0; assembly regularizes the argument.
double nu_fluid(const ViscosityModel& model, double d);

/// Effective Darcy viscosity as a function of |u_p|; kappa enters the power
/// law through the argument scaling |u_p| / (sqrt(kappa) m_c).
double nu_darcy(const ViscosityModel& model, double u, double kappa = 1.0);

/// Interface viscosity as a function of the tangential slip magnitude.
double nu_interface(const ViscosityModel& model, double s);

/// Randomized verification of the monotonicity/continuity structure of
/// G(x) = g(|x|) x. Samples x, h componentwise uniform in [-scale, scale]^2
/// and reports extremes of
///   A1: (G(x+h)-G(x)).h / |h|^2
///   B1: (G(x+h)-G(x)).h (c + |x|^{2-r} + |x+h|^{2-r}) / |h|^2
///   A2: |G(x+h)-G(x)| / |h|
///   B2: |G(x+h)-G(x)| (c + |x|^{2-r} + |x+h|^{2-r}) / |h|
/// with c = 1 for Carreau/Cross and c = 0 for the power law.
struct MonotonicityReport {
  double min_quotient_A1 = 0;
  double min_quotient_B1 = 0;
  double max_ratio_A2 = 0;
  double max_ratio_B2 = 0;
};

enum class ViscosityRole { Fluid, Darcy, Interface };

MonotonicityReport check_monotonicity(const ViscosityModel& model, int n_samples,
                                      std::uint64_t rng_seed,
                                      ViscosityRole role = ViscosityRole::Fluid,
                                      double scale = 10.0);

/// Deterministic, platform-independent uniform generator used by the
/// property checks.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double uniform(double lo, double hi);

 private:
  std::uint64_t next();
  std::uint64_t state_;
};

} // namespace fpsi
