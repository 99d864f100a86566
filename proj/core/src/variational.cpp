#include "hjlab/variational.hpp"

namespace hjlab {

namespace {

constexpr cplx kI(0.0, 1.0);

template <class F>
double integrate(const QuadratureGrid& grid, const Executor& ex, std::vector<double>& samples, F&& f) {
  samples.assign(grid.nodes.size(), 0.0);
  ex.for_each(grid.nodes.size(), [&](std::size_t i) { samples[i] = f(grid.nodes[i]); });
  std::vector<double> weighted(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) weighted[i] = samples[i] * grid.nodes[i].weight;
  return pairwise_sum(weighted);
}

}  // namespace

FieldGerm tension_complex(const MapGerm& p) { return cov_D(Direction::kZbar, p, d_z(p)); }

FieldGerm tension_normalized(const MapGerm& p, const DomainPoint& dp) {
  return field_scale(tension_complex(p), inverse_conformal_factor(dp));
}

FieldGerm tension_real(const MapGerm& p, const DomainPoint& dp) {
  const FieldGerm pz = d_z(p), pzb = d_zbar(p);
  const FieldGerm px = field_add(pz, pzb);
  const FieldGerm py = field_scale(field_sub(pz, pzb), kI);
  const FieldGerm dxx = field_add(cov_D(Direction::kZ, p, px), cov_D(Direction::kZbar, p, px));
  const FieldGerm dyy = field_scale(field_sub(cov_D(Direction::kZ, p, py), cov_D(Direction::kZbar, p, py)), kI);
  return field_scale(field_add(dxx, dyy), inverse_conformal_factor(dp) * 0.25);
}

FieldGerm jacobi_complex(const MapGerm& p, const FieldGerm& v) {
  const FieldGerm lap = cov_D(Direction::kZbar, p, cov_D(Direction::kZ, p, v));
  const FieldGerm curv = curvature_along(p, d_zbar(p), v, d_z(p));
  return field_sub(curv, lap);
}

FieldGerm jacobi_conjugate(const MapGerm& p, const FieldGerm& v) {
  const FieldGerm lap = cov_D(Direction::kZ, p, cov_D(Direction::kZbar, p, v));
  const FieldGerm curv = curvature_along(p, d_z(p), v, d_zbar(p));
  return field_sub(curv, lap);
}

FieldGerm jacobi_real(const MapGerm& p, const FieldGerm& v, const DomainPoint& dp) {
  const FieldGerm sum = field_add(jacobi_complex(p, v), jacobi_conjugate(p, v));
  return field_scale(sum, inverse_conformal_factor(dp) * 0.5);
}

FieldGerm linearized_tension(const MapGerm& family) {
  if (family.order().t < 1) throw Error(ErrorKind::kOrderExhausted, "linearized tension needs t-order >= 1");
  return at_t0(cov_D(Direction::kT, family, tension_complex(family)));
}

Jet energy_density(const MapGerm& p, const DomainPoint& dp) {
  const Jet e = pairing(p, d_z(p), d_zbar(p), PairingKind::kBilinear);
  return mul_truncated(e, inverse_conformal_factor(dp)) * 0.5;
}

EnergyReport energy(const MapSpec& phi, const QuadratureGrid& grid, const Executor& ex) {
  EnergyReport r;
  r.energy = integrate(grid, ex, r.density, [&](const GridNode& n) {
    const DomainPoint dp = make_domain_point(n.chart, n.u, {1, 1, 0});
    return energy_density(evaluate(phi, dp), dp).value().real();
  });
  return r;
}

FirstVariation first_variation(const MapSpec& family, const QuadratureGrid& grid, const Executor& ex) {
  FirstVariation fv;
  std::vector<double> de(grid.nodes.size()), tv(grid.nodes.size());
  ex.for_each(grid.nodes.size(), [&](std::size_t i) {
    const GridNode& n = grid.nodes[i];
    const DomainPoint dp = make_domain_point(n.chart, n.u, {1, 1, 1});
    const MapGerm f = evaluate(family, dp);
    de[i] = energy_density(f, dp).coeff(0, 0, 1).real() * n.weight;
    const MapGerm p = at_t0(f);
    const FieldGerm tau = at_t0(tension_normalized(f, dp));
    const FieldGerm v = t_derivative(f);
    tv[i] = -pairing(p, tau, v, PairingKind::kBilinear).value().real() * n.weight;
  });
  fv.dE_dt = pairwise_sum(de);
  fv.minus_tau_v = pairwise_sum(tv);
  return fv;
}

HessianValue hessian(const MapSpec& family_v, const MapSpec& family_w, const QuadratureGrid& grid,
                     const Executor& ex) {
  HessianValue h;
  h.value = integrate(grid, ex, h.integrand, [&](const GridNode& n) {
    const DomainPoint dp = make_domain_point(n.chart, n.u, {1, 1, 1});
    const MapGerm fv = evaluate(family_v, dp);
    const MapGerm p = at_t0(fv);
    const FieldGerm jv = jacobi_real(p, t_derivative(fv), dp);
    const DomainPoint dp0 = make_domain_point(n.chart, n.u, {0, 0, 1});
    const FieldGerm w = t_derivative(evaluate(family_w, dp0));
    return pairing(p, jv, w, PairingKind::kBilinear).value().real();
  });
  return h;
}

double energy_second_derivative(const MapSpec& family, const QuadratureGrid& grid, const Executor& ex) {
  std::vector<double> samples;
  return integrate(grid, ex, samples, [&](const GridNode& n) {
    const DomainPoint dp = make_domain_point(n.chart, n.u, {1, 1, 2});
    return 2.0 * energy_density(evaluate(family, dp), dp).coeff(0, 0, 2).real();
  });
}

}  // namespace hjlab
