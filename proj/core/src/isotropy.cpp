#include "hjlab/isotropy.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace hjlab {

namespace {

void require_kahler(const MapGerm& p, const char* what) {
  if (p.target == nullptr || !p.target->is_kahler()) {
    throw Error(ErrorKind::kUnsupportedTarget, std::string(what) + " needs a Kahler target");
  }
}

cplx coeff_or_zero(const Jet& j, int a, int b, int c) {
  return j.order().contains(a, b, c) ? j.coeff(a, b, c) : cplx{};
}

void check_index(int r, int s, std::size_t n1, std::size_t n2) {
  if (r < 1 || s < 1) throw Error(ErrorKind::kRejectedInput, "isotropy indices start at 1");
  if (static_cast<std::size_t>(r) > n1 || static_cast<std::size_t>(s) > n2) {
    throw Error(ErrorKind::kOrderExhausted, "derivative chain too short for (r, s)");
  }
}

}  // namespace

DifferentialSample sample_of(const Jet& eta, double scale, int k) {
  DifferentialSample s;
  s.k = k;
  s.value = eta.value();
  s.dbar_residual = coeff_or_zero(eta, 0, 1, 0);
  s.dt_value = coeff_or_zero(eta, 0, 0, 1);
  s.dbar_dt = coeff_or_zero(eta, 0, 1, 1);
  s.scale = scale;
  return s;
}

std::vector<FieldGerm> dz_chain(const MapGerm& p, int kmax) {
  std::vector<FieldGerm> out;
  if (kmax < 1) return out;
  out.push_back(d_z(p));
  for (int k = 2; k <= kmax; ++k) out.push_back(cov_D(Direction::kZ, p, out.back()));
  return out;
}

std::vector<FieldGerm> field_chain(Direction dir, const MapGerm& p, const FieldGerm& v, int kmax) {
  std::vector<FieldGerm> out{v};
  for (int k = 1; k <= kmax; ++k) out.push_back(cov_D(dir, p, out.back()));
  return out;
}

std::vector<FieldGerm> dz_hol_chain(const MapGerm& p, int kmax) {
  require_kahler(p, "complex isotropy");
  std::vector<FieldGerm> out;
  if (kmax < 1) return out;
  out.push_back(holomorphic_part(p, d_z(p)));
  for (int k = 2; k <= kmax; ++k) out.push_back(cov_D(Direction::kZ, p, out.back()));
  return out;
}

std::vector<FieldGerm> dzbar_hol_chain(const MapGerm& p, int kmax) {
  require_kahler(p, "complex isotropy");
  std::vector<FieldGerm> out;
  if (kmax < 1) return out;
  out.push_back(holomorphic_part(p, d_zbar(p)));
  for (int k = 2; k <= kmax; ++k) out.push_back(cov_D(Direction::kZbar, p, out.back()));
  return out;
}

DifferentialSample eta_real(const MapGerm& p) { return eta_real_rs(p, 1, 1); }

DifferentialSample eta_real_rs(const MapGerm& p, int r, int s) {
  return eta_real_rs(dz_chain(p, std::max(r, s)), p, r, s);
}

DifferentialSample eta_real_rs(const std::vector<FieldGerm>& chain, const MapGerm& p, int r, int s) {
  check_index(r, s, chain.size(), chain.size());
  const FieldGerm& a = chain[static_cast<std::size_t>(r - 1)];
  const FieldGerm& b = chain[static_cast<std::size_t>(s - 1)];
  const Jet eta = pairing(p, a, b, PairingKind::kBilinear);
  return sample_of(eta, field_norm(p, a) * field_norm(p, b), r + s);
}

DifferentialSample j_real_rs(const MapGerm& p, const FieldGerm& v, int r, int s) {
  const int k = std::max(r, s);
  return j_real_rs(dz_chain(p, k), field_chain(Direction::kZ, p, v, k), p, r, s);
}

DifferentialSample j_real_rs(const std::vector<FieldGerm>& chain, const std::vector<FieldGerm>& vchain,
                             const MapGerm& p, int r, int s) {
  check_index(r, s, chain.size(), chain.size());
  if (static_cast<std::size_t>(std::max(r, s)) >= vchain.size()) {
    throw Error(ErrorKind::kOrderExhausted, "field chain too short for (r, s)");
  }
  const FieldGerm& vr = vchain[static_cast<std::size_t>(r)];
  const FieldGerm& vs = vchain[static_cast<std::size_t>(s)];
  const FieldGerm& a = chain[static_cast<std::size_t>(r - 1)];
  const FieldGerm& b = chain[static_cast<std::size_t>(s - 1)];
  const Jet j = add_truncated(pairing(p, vr, b, PairingKind::kBilinear), pairing(p, a, vs, PairingKind::kBilinear));
  const double scale = field_norm(p, vr) * field_norm(p, b) + field_norm(p, a) * field_norm(p, vs);
  return sample_of(j, scale, r + s);
}

DifferentialSample eta_cx_rs(const MapGerm& p, int r, int s) {
  return eta_cx_rs(dz_hol_chain(p, r), dzbar_hol_chain(p, s), p, r, s);
}

DifferentialSample eta_cx_rs(const std::vector<FieldGerm>& zchain, const std::vector<FieldGerm>& zbchain,
                             const MapGerm& p, int r, int s) {
  require_kahler(p, "eta^C");
  check_index(r, s, zchain.size(), zbchain.size());
  const FieldGerm& a = zchain[static_cast<std::size_t>(r - 1)];
  const FieldGerm& b = zbchain[static_cast<std::size_t>(s - 1)];
  const Jet eta = pairing(p, a, b, PairingKind::kHermitian);
  return sample_of(eta, field_norm(p, a) * field_norm(p, b), r + s);
}

DifferentialSample j_cx_rs(const MapGerm& p, const FieldGerm& v, int r, int s) {
  return j_cx_rs(dz_hol_chain(p, r), dzbar_hol_chain(p, s), field_chain(Direction::kZ, p, v, r),
                 field_chain(Direction::kZbar, p, v, s), p, r, s);
}

DifferentialSample j_cx_rs(const std::vector<FieldGerm>& zchain, const std::vector<FieldGerm>& zbchain,
                           const std::vector<FieldGerm>& vz, const std::vector<FieldGerm>& vzb,
                           const MapGerm& p, int r, int s) {
  require_kahler(p, "j^C");
  check_index(r, s, zchain.size(), zbchain.size());
  if (static_cast<std::size_t>(r) >= vz.size() || static_cast<std::size_t>(s) >= vzb.size()) {
    throw Error(ErrorKind::kOrderExhausted, "field chain too short for (r, s)");
  }
  const FieldGerm& vr = vz[static_cast<std::size_t>(r)];
  const FieldGerm& vs = vzb[static_cast<std::size_t>(s)];
  const FieldGerm& a = zchain[static_cast<std::size_t>(r - 1)];
  const FieldGerm& b = zbchain[static_cast<std::size_t>(s - 1)];
  const Jet j = add_truncated(pairing(p, vr, b, PairingKind::kHermitian), pairing(p, a, vs, PairingKind::kHermitian));
  const double scale = field_norm(p, vr) * field_norm(p, b) + field_norm(p, a) * field_norm(p, vs);
  return sample_of(j, scale, r + s);
}

DifferentialSample conformal_field_test(const MapGerm& p, const FieldGerm& v) {
  const FieldGerm dv = cov_D(Direction::kZ, p, v);
  const FieldGerm pz = d_z(p);
  return sample_of(pairing(p, dv, pz, PairingKind::kBilinear), field_norm(p, dv) * field_norm(p, pz), 2);
}

FieldGerm holomorphic_field_residual(const MapGerm& p, const FieldGerm& v) {
  require_kahler(p, "holomorphic field residual");
  return cov_D(Direction::kZbar, p, holomorphic_part(p, v));
}

DifferentialSample dbar_of_eta(const MapGerm& p, int r, int s, EtaKind kind) {
  if (p.order().zbar < 1) throw Error(ErrorKind::kOrderExhausted, "dbar of eta needs zbar-order >= 1");
  if (kind == EtaKind::kReal) return eta_real_rs(p, r, s);
  return eta_cx_rs(p, r, s);
}

SpanResidual span_residual(const MapGerm& p, const FieldGerm& target, const std::vector<FieldGerm>& basis) {
  const TargetModel& m = *p.target;
  const int n = m.dim();
  const JetOrder o0{0, 0, 0};
  JetVec p0;
  for (const Jet& j : p.comps) p0.push_back(j.truncated(o0));
  // K_AB = herm(e_B, e_A), so |V|^2 = V^* K V.
  Eigen::MatrixXcd K(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      JetVec ea(static_cast<std::size_t>(n), Jet(o0, p.base())), eb = ea;
      ea[static_cast<std::size_t>(a)] += cplx(1.0);
      eb[static_cast<std::size_t>(b)] += cplx(1.0);
      K(a, b) = m.pair(p0, eb, m.conjugate(ea)).value();
    }
  K = 0.5 * (K + K.adjoint()).eval();
  Eigen::LLT<Eigen::MatrixXcd> llt(K);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::kDegenerateMetric, "Hermitian metric not positive definite");
  const Eigen::MatrixXcd W = llt.matrixU();  // K = W^* W

  auto values = [&](const FieldGerm& f) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = f.comps[static_cast<std::size_t>(i)].value();
    return v;
  };
  const Eigen::VectorXcd t = W * values(target);
  SpanResidual out;
  out.scale = t.norm();
  if (basis.empty()) {
    out.residual = out.scale;
    return out;
  }
  Eigen::MatrixXcd B(n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) B.col(static_cast<Eigen::Index>(j)) = W * values(basis[j]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(B);
  qr.setThreshold(1e-12);
  out.rank = static_cast<int>(qr.rank());
  if (out.rank == 0) {
    out.residual = out.scale;
    return out;
  }
  const Eigen::VectorXcd coef = qr.solve(t);
  out.residual = (t - B * coef).norm();
  return out;
}

SpanResidual lemma45_decompose(const MapGerm& p, const FieldGerm& X, int k) {
  if (p.target == nullptr || !p.target->is_complex_space_form()) {
    throw Error(ErrorKind::kUnsupportedTarget, "span decomposition needs a complex space form");
  }
  if (k < 1) throw Error(ErrorKind::kRejectedInput, "k >= 1 required");
  const std::vector<FieldGerm> zc = dz_hol_chain(p, k);
  const std::vector<FieldGerm> zbc = dzbar_hol_chain(p, 1);
  const FieldGerm& a = zc.front();
  const FieldGerm& dk = zc.back();
  const FieldGerm value = curvature_along(p, X, d_z(p), dk);
  const cplx eta = pairing(p, dk, zbc.front(), PairingKind::kHermitian).value();
  const FieldGerm xh = field_scale(holomorphic_part(p, X), eta);
  return span_residual(p, value, {a, dk, xh});
}

SpanResidual theta_span_check(const MapGerm& family, int k) {
  if (family.target == nullptr || !family.target->is_space_form()) {
    throw Error(ErrorKind::kUnsupportedTarget, "theta-span check needs a space form target");
  }
  if (k < 1) throw Error(ErrorKind::kRejectedInput, "k >= 1 required");
  if (family.order().t < 1) throw Error(ErrorKind::kOrderExhausted, "theta-span check needs t-order >= 1");
  const MapGerm p = at_t0(family);
  const FieldGerm dt = at_t0(cov_D(Direction::kT, family, iterated_D(family, k)));
  const FieldGerm v = t_derivative(family);
  const FieldGerm dkv = cov_D_power(Direction::kZ, p, v, k);
  const FieldGerm diff = field_sub(dt, dkv);
  const std::vector<FieldGerm> basis = dz_chain(p, k - 1);
  return span_residual(p, diff, basis);
}

}  // namespace hjlab
