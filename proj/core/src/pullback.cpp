#include "hjlab/pullback.hpp"

#include <cmath>

namespace hjlab {

namespace {

const TargetModel& target_of(const MapGerm& p) {
  if (p.target == nullptr) throw Error(ErrorKind::kRejectedInput, "map germ without target");
  return *p.target;
}

JetVec map_jets(const JetVec& v, Jet (Jet::*f)() const) {
  JetVec out;
  out.reserve(v.size());
  for (const Jet& j : v) out.push_back((j.*f)());
  return out;
}

}  // namespace

double MapGerm::constraint_residual() const {
  if (target == nullptr || target->kind() != TargetKind::kSpaceFormEmbedded) return 0.0;
  cplx r2 = 0.0;
  for (const Jet& j : comps) r2 += j.value() * j.value();
  return std::abs(target->curvature_constant() * r2 - 1.0);
}

MapGerm evaluate(const MapSpec& spec, const DomainPoint& dp) {
  MapGerm g;
  g.target = spec.target.get();
  g.chart = dp.chart;
  g.comps = spec.fn(dp);
  spec.target->require_in_domain(g.comps);
  return g;
}

MapGerm evaluate(const MapSpec& spec, Chart chart, cplx u0, JetOrder order) {
  return evaluate(spec, make_domain_point(chart, u0, order));
}

MapGerm at_t0(const MapGerm& family) {
  MapGerm g = family;
  for (Jet& j : g.comps) j = j.at_t0();
  return g;
}

FieldGerm at_t0(const FieldGerm& v) {
  FieldGerm out = v;
  for (Jet& j : out.comps) j = j.at_t0();
  return out;
}

FieldGerm d_z(const MapGerm& p) { return {map_jets(p.comps, &Jet::d_z), FieldType::kComplexified}; }
FieldGerm d_zbar(const MapGerm& p) { return {map_jets(p.comps, &Jet::d_zbar), FieldType::kComplexified}; }

FieldGerm t_derivative(const MapGerm& family) {
  FieldGerm v{map_jets(family.comps, &Jet::d_t), FieldType::kRealSection};
  for (Jet& j : v.comps) j = j.at_t0();
  const TargetModel& m = target_of(family);
  if (m.kind() == TargetKind::kSpaceFormEmbedded) {
    const Jet s = dot(v.comps, at_t0(family).comps);
    const double scale = 1.0 + max_abs_value(v.comps);
    if (std::abs(s.value()) > 1e-10 * scale) {
      throw Error(ErrorKind::kPreconditionViolation,
                  "variation field is not tangent to the sphere: <v,phi> = " + std::to_string(std::abs(s.value())));
    }
  }
  return v;
}

FieldGerm cov_D(Direction dir, const MapGerm& p, const FieldGerm& V) {
  const TargetModel& m = target_of(p);
  Jet (Jet::*f)() const = dir == Direction::kZ ? &Jet::d_z : dir == Direction::kZbar ? &Jet::d_zbar : &Jet::d_t;
  const JetVec dV = map_jets(V.comps, f);
  const JetVec dp = map_jets(p.comps, f);
  FieldGerm out{vec_add(dV, m.connection_term(p.comps, dp, V.comps)), V.type};
  if (out.type == FieldType::kRealSection) out.type = FieldType::kComplexified;
  return out;
}

FieldGerm cov_D_power(Direction dir, const MapGerm& p, const FieldGerm& V, int k) {
  if (k < 0) throw Error(ErrorKind::kRejectedInput, "negative derivative count");
  FieldGerm out = V;
  for (int i = 0; i < k; ++i) out = cov_D(dir, p, out);
  return out;
}

FieldGerm iterated_D(const MapGerm& p, int k) {
  if (k < 1) throw Error(ErrorKind::kRejectedInput, "iterated_D needs k >= 1");
  return cov_D_power(Direction::kZ, p, d_z(p), k - 1);
}

Jet pairing(const MapGerm& p, const FieldGerm& a, const FieldGerm& b, PairingKind kind) {
  const TargetModel& m = target_of(p);
  if (kind == PairingKind::kBilinear) return m.pair(p.comps, a.comps, b.comps);
  return m.pair(p.comps, a.comps, m.conjugate(b.comps));
}

FieldGerm conjugate(const MapGerm& p, const FieldGerm& v) { return {target_of(p).conjugate(v.comps), v.type}; }

FieldGerm holomorphic_part(const MapGerm& p, const FieldGerm& v) {
  return {target_of(p).holomorphic_part(v.comps), FieldType::kHolomorphicPart};
}

FieldGerm curvature_along(const MapGerm& p, const FieldGerm& X, const FieldGerm& Y, const FieldGerm& Z) {
  return {target_of(p).curvature(p.comps, X.comps, Y.comps, Z.comps), FieldType::kComplexified};
}

double field_norm(const MapGerm& p, const FieldGerm& v) {
  const TargetModel& m = target_of(p);
  std::vector<cplx> x, a, b;
  for (const Jet& j : p.comps) x.push_back(j.value());
  for (const Jet& j : v.comps) a.push_back(j.value());
  if (m.kind() == TargetKind::kComplexSpaceFormFS) {
    const std::size_t n = a.size() / 2;
    for (std::size_t i = 0; i < n; ++i) b.push_back(std::conj(a[n + i]));
    for (std::size_t i = 0; i < n; ++i) b.push_back(std::conj(a[i]));
  } else {
    for (const cplx& c : a) b.push_back(std::conj(c));
  }
  return std::sqrt(std::abs(m.pair_value(x, a, b)));
}

FieldGerm field_add(const FieldGerm& a, const FieldGerm& b) {
  return {vec_add(a.comps, b.comps), a.type == b.type ? a.type : FieldType::kComplexified};
}
FieldGerm field_sub(const FieldGerm& a, const FieldGerm& b) {
  return {vec_sub(a.comps, b.comps), a.type == b.type ? a.type : FieldType::kComplexified};
}
FieldGerm field_scale(const FieldGerm& a, const Jet& s) { return {vec_scale(a.comps, s), FieldType::kComplexified}; }
FieldGerm field_scale(const FieldGerm& a, cplx s) { return {vec_scale(a.comps, s), FieldType::kComplexified}; }

std::vector<Jet> metric_at(const TargetModel& model, const MapGerm& p) { return model.metric(p.comps); }
std::vector<Jet> christoffels_at(const TargetModel& model, const MapGerm& p) { return model.christoffels(p.comps); }

}  // namespace hjlab
