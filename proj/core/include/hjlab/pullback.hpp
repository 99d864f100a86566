#pragma once

// The complexified pullback bundle phi^{-1} T^C N along a map S^2 -> N.

#include <functional>
#include <memory>
#include <vector>

#include "hjlab/domain.hpp"
#include "hjlab/target.hpp"

namespace hjlab {

// Jets of phi at one domain point.
struct MapGerm {
  const TargetModel* target = nullptr;
  Chart chart = Chart::kNorth;
  JetVec comps;

  JetOrder order() const { return common_order(comps); }
  cplx base() const { return comps.empty() ? cplx{} : comps.front().base(); }
  // Constraint residual |c|p|^2 - 1| for embedded spheres, 0 otherwise.
  double constraint_residual() const;
};

enum class FieldType { kRealSection, kHolomorphicPart, kComplexified };

struct FieldGerm {
  JetVec comps;
  FieldType type = FieldType::kComplexified;
};

// A map S^2 -> N (optionally depending on t) given by its jet at any domain
// point.  The components follow the target's layout.
using MapFunction = std::function<JetVec(const DomainPoint&)>;

struct MapSpec {
  std::shared_ptr<const TargetModel> target;
  MapFunction fn;
};

MapGerm evaluate(const MapSpec& spec, const DomainPoint& dp);
MapGerm evaluate(const MapSpec& spec, Chart chart, cplx u0, JetOrder order);

// The t = 0 slice of a family germ.
MapGerm at_t0(const MapGerm& family);

FieldGerm d_z(const MapGerm& p);
FieldGerm d_zbar(const MapGerm& p);
// v = d phi_t / dt at t = 0.  On embedded spheres the result is checked for
// tangency.
FieldGerm t_derivative(const MapGerm& family);

enum class Direction { kZ, kZbar, kT };

// D V / d(dir) = d V/d(dir) + Gamma(d phi/d(dir), V).
FieldGerm cov_D(Direction dir, const MapGerm& p, const FieldGerm& V);
// D^{k-1}/dz^{k-1} of d^C phi/dz; k >= 1.
FieldGerm iterated_D(const MapGerm& p, int k);
// k-fold covariant derivative of V in one direction.
FieldGerm cov_D_power(Direction dir, const MapGerm& p, const FieldGerm& V, int k);

enum class PairingKind { kBilinear, kHermitian };

Jet pairing(const MapGerm& p, const FieldGerm& a, const FieldGerm& b, PairingKind kind);
FieldGerm conjugate(const MapGerm& p, const FieldGerm& v);
// (1,0) part on a Kahler target.
FieldGerm holomorphic_part(const MapGerm& p, const FieldGerm& v);
// R(X,Y)Z along p.
FieldGerm curvature_along(const MapGerm& p, const FieldGerm& X, const FieldGerm& Y, const FieldGerm& Z);

// Hermitian length of the order-0 value of v.
double field_norm(const MapGerm& p, const FieldGerm& v);
FieldGerm field_add(const FieldGerm& a, const FieldGerm& b);
FieldGerm field_sub(const FieldGerm& a, const FieldGerm& b);
FieldGerm field_scale(const FieldGerm& a, const Jet& s);
FieldGerm field_scale(const FieldGerm& a, cplx s);
FieldGerm at_t0(const FieldGerm& v);

// Named wrappers over the target model.
std::vector<Jet> metric_at(const TargetModel& model, const MapGerm& p);
std::vector<Jet> christoffels_at(const TargetModel& model, const MapGerm& p);

}  // namespace hjlab
