#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fpsi/elements.hpp"
#include "fpsi/mesh.hpp"
#include "fpsi/types.hpp"
#include "fpsi/viscosity.hpp"

namespace fpsi {

enum class BjsNonlinearity { Frozen, Constant };

using ScalarField = std::function<double(const Vec2&, double)>;
using VectorField = std::function<Vec2(const Vec2&, double)>;

/// Physical constants, constitutive models, sources and data for one run.
struct ProblemConfig {
  double lambda_p = 1.0; // Lame first parameter
  double mu_p = 1.0;     // Lame shear modulus
  double s0 = 1.0;       // storage coefficient
  double alpha_p = 1.0;  // Biot-Willis coefficient
  double alpha_bjs = 1.0;
  Vec2 kappa{1.0, 1.0}; // diagonal permeability

  ViscosityModel fluid_viscosity{ViscosityLaw::Newtonian, 1.0};
  ViscosityModel darcy_viscosity{ViscosityLaw::Newtonian, 1.0};
  ViscosityModel interface_viscosity{ViscosityLaw::Newtonian, 1.0};
  BjsNonlinearity bjs_nonlinearity = BjsNonlinearity::Constant;
  double power_law_eps = 1e-8; // magnitude floor for the singular power law

  VectorField f_f; // fluid body force
  VectorField f_p; // structure body force
  ScalarField q_f; // fluid mass source
  ScalarField q_p; // porous mass source

  double p_in = 0.0;  // inlet pressure on InletF
  double p_out = 0.0; // outlet pressure on OutletP

  ScalarField p_p0;  // initial Darcy pressure
  VectorField eta_p0; // initial displacement
};

void validate(const ProblemConfig& config);

/// Meshes, interface pairing, spaces and dof maps for one mesh pair, plus the
/// block offsets of the reduced (free-dof) linear system. Immutable after
/// construction and shareable across threads.
struct Discretization {
  SubMesh fluid, porous;
  InterfaceGeometry gamma;
  Space uf, pf, up, pp, eta, lam;
  DofMap uf_map, pf_map, up_map, pp_map, eta_map, lam_map;
  std::array<int, 7> offset{}; // free-dof block offsets, offset[6] = total

  int n_free() const { return offset[6]; }
};

Discretization make_discretization(SubMesh fluid, SubMesh porous,
                                   double pair_tol = 1e-10,
                                   const EssentialRules& rules = {});

/// Coefficient vectors of all six fields at one time level. Vectors are
/// full-length (essential dofs carry their prescribed values).
struct SolutionState {
  VecX uf, pf, up, pp, eta, lam;
  double time = 0;
};

SolutionState zero_state(const Discretization& disc);
VecX pack_free(const Discretization& disc, const SolutionState& state);
SolutionState unpack_free(const Discretization& disc, const VecX& x, double time);
double state_norm(const SolutionState& state);
double state_increment(const SolutionState& a, const SolutionState& b);

/// One Backward-Euler / Picard linear system over the free dofs, blocks
/// ordered (uf, pf, up, pp, eta, lam).
///
/// Row/column convention (test space x trial space), with d_t the backward
/// difference (x^n - x^{n-1})/tau and all viscosities frozen at the lagged
/// iterate:
///   v_f : a_f + a_BJS(uf,uf)  b_f   .     .      -a_BJS(uf,eta)/tau  <vf.nf, mu>
///   w_f : -b_f^T              .     .     .      .                   .
///   v_p : .                   .     a_pd  b_p    .                   <vp.np, mu>
///   w_p : .                   .    -b_p^T s0/tau M  (alpha_p/tau)(div eta, w)  .
///   xi  : -a_BJS(eta,uf)      .     .     alpha_p b_p  a_pe + a_BJS(eta,eta)/tau  <xi.np, mu>
///   mu  : <uf.nf, mu>         .     <up.np, mu>  .     (1/tau)<eta.np, mu>   .
/// where b_*(v, w) = -(div v, w). Known time-lag terms and natural boundary
/// pressures are moved to the right-hand side.
struct CoupledSystem {
  SpMat matrix;
  VecX rhs;
  std::array<int, 7> offset{};

  int rows() const { return static_cast<int>(matrix.rows()); }
};

/// Assembly scratch accumulating triplets before compression.
struct SystemBuilder {
  const Discretization* disc = nullptr;
  std::vector<Triplet> triplets;
  VecX rhs;

  explicit SystemBuilder(const Discretization& d)
      : disc(&d), rhs(VecX::Zero(d.n_free())) {}

  CoupledSystem finish() const;
};

// Individual forms of the coupled scheme. Each adds its block entries (and
// any induced right-hand-side terms) into the builder.
void assemble_af(SystemBuilder& builder, const ProblemConfig& config,
                 const SolutionState& lagged);
void assemble_apd(SystemBuilder& builder, const ProblemConfig& config,
                  const SolutionState& lagged);
void assemble_ape(SystemBuilder& builder, const ProblemConfig& config);
void assemble_abjs(SystemBuilder& builder, const ProblemConfig& config,
                   const SolutionState& lagged, const SolutionState& prev_time,
                   double tau);
void assemble_bf(SystemBuilder& builder);
void assemble_bp(SystemBuilder& builder, double alpha_p);
void assemble_bgamma(SystemBuilder& builder, const SolutionState& prev_time, double tau);
void assemble_time_mass(SystemBuilder& builder, const ProblemConfig& config,
                        const SolutionState& prev_time, double tau);
void assemble_sources(SystemBuilder& builder, const ProblemConfig& config, double t_new);

/// Full Backward-Euler step matrix for one Picard iterate.
CoupledSystem assemble_system(const Discretization& disc, const ProblemConfig& config,
                              const SolutionState& prev_time, const SolutionState& lagged,
                              double t_new, double tau);

/// Effective assembly parallelism (FPSI_THREADS, clamped to >= 1).
int assembly_threads();

} // namespace fpsi
