#pragma once

// Energy, tension, Jacobi operator and the second variation.
//
// Sign conventions.  With lambda^2 = 4/(1 + |u|^2)^2 the round metric on S^2,
//   tau(phi)  = (4/lambda^2) D_zbar d phi/dz
//   J(v)      = -tr D^2 v - tr R(v, dphi) dphi = -(d/dt) tau(phi_t) at t = 0
// and the complex form of J used here is
//   jacobi_complex(v)   = -D_zbar D_z v + R(d phi/dzbar, v) d phi/dz
//   jacobi_conjugate(v) = -D_z D_zbar v + R(d phi/dz, v) d phi/dzbar
// so that J(v) = (2/lambda^2)(jacobi_complex + jacobi_conjugate) and
// jacobi_complex(v) + linearized_tension = 0 for any family tangent to v.

#include <functional>
#include <vector>

#include "hjlab/parallel.hpp"
#include "hjlab/pullback.hpp"

namespace hjlab {

// D_zbar d phi/dz.
FieldGerm tension_complex(const MapGerm& p);
// (4/lambda^2) tension_complex, the metric-normalized tension.
FieldGerm tension_normalized(const MapGerm& p, const DomainPoint& dp);
// Trace form (1/lambda^2)(D_x phi_x + D_y phi_y) built from real derivatives.
FieldGerm tension_real(const MapGerm& p, const DomainPoint& dp);

FieldGerm jacobi_complex(const MapGerm& p, const FieldGerm& v);
FieldGerm jacobi_conjugate(const MapGerm& p, const FieldGerm& v);
FieldGerm jacobi_real(const MapGerm& p, const FieldGerm& v, const DomainPoint& dp);

// (D/dt) D_zbar d phi_t/dz at t = 0.
FieldGerm linearized_tension(const MapGerm& family);

// |dphi|^2 / 2 as a jet.
Jet energy_density(const MapGerm& p, const DomainPoint& dp);

struct EnergyReport {
  double energy = 0.0;
  std::vector<double> density;
};

EnergyReport energy(const MapSpec& phi, const QuadratureGrid& grid, const Executor& ex = Executor::from_env());

struct FirstVariation {
  double dE_dt = 0.0;
  double minus_tau_v = 0.0;  // -integral <tau, v>
};

FirstVariation first_variation(const MapSpec& family, const QuadratureGrid& grid,
                               const Executor& ex = Executor::from_env());

struct HessianValue {
  double value = 0.0;
  std::vector<double> integrand;
};

// H(v, w) = integral <J(v), w>; v, w are the variation fields of the two
// families at t = 0.
HessianValue hessian(const MapSpec& family_v, const MapSpec& family_w, const QuadratureGrid& grid,
                     const Executor& ex = Executor::from_env());
// d^2/dt^2 E(phi_t) at t = 0 from second-order t-jets.
double energy_second_derivative(const MapSpec& family, const QuadratureGrid& grid,
                                const Executor& ex = Executor::from_env());

}  // namespace hjlab
