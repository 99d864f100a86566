#include "hjlab/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "hjlab/isotropy.hpp"
#include "hjlab/variational.hpp"

namespace hjlab {

namespace {

struct EvalPoint {
  int node = 0;
  Chart chart = Chart::kNorth;
  cplx u;
};

Chart other(Chart c) { return c == Chart::kNorth ? Chart::kSouth : Chart::kNorth; }

// Grid nodes in their own chart; with both_charts, overlap nodes once more in
// the other chart.
std::vector<EvalPoint> eval_points(const QuadratureGrid& g, bool both_charts = false) {
  std::vector<EvalPoint> pts;
  for (const GridNode& n : g.nodes) pts.push_back({n.index, n.chart, n.u});
  if (both_charts && !g.patch) {
    for (const GridNode& n : g.nodes)
      if (n.overlap) pts.push_back({n.index, other(n.chart), chart_coordinate(other(n.chart), n.z)});
  }
  return pts;
}

std::vector<EvalPoint> overlap_points(const QuadratureGrid& g) {
  std::vector<EvalPoint> pts;
  if (g.patch) return pts;
  for (const GridNode& n : g.nodes)
    if (n.overlap) pts.push_back({n.index, Chart::kNorth, n.z});
  return pts;
}

using PointFn = std::function<void(const EvalPoint&, double*)>;

// Per-point values of `ncomp` residuals, indexed [component][point].
std::vector<std::vector<double>> sweep(const CaseContext& cx, const std::vector<EvalPoint>& pts, std::size_t ncomp,
                                       const PointFn& f) {
  std::vector<double> buf(pts.size() * ncomp, 0.0);
  cx.ex->for_each(pts.size(), [&](std::size_t i) { f(pts[i], buf.data() + i * ncomp); });
  std::vector<std::vector<double>> out(ncomp, std::vector<double>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t c = 0; c < ncomp; ++c) out[c][i] = buf[i * ncomp + c];
  return out;
}

DomainPoint at(const EvalPoint& e, JetOrder o) { return make_domain_point(e.chart, e.u, o); }


Status judge(ComponentKind kind, double value, double threshold, bool finite) {
  if (!finite) return Status::kFail;
  if (kind == ComponentKind::kVanishing) return value <= threshold ? Status::kPass : Status::kFail;
  return value >= threshold ? Status::kPass : Status::kFail;
}

Component point_component(const std::string& name, ComponentKind kind, double threshold, std::vector<double> vals,
                          const std::vector<EvalPoint>& pts, bool keep) {
  Component c;
  c.name = name;
  c.kind = kind;
  c.threshold = threshold;
  bool finite = true;
  std::size_t worst = 0;
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    double v = vals[i];
    if (!std::isfinite(v)) {
      finite = false;
      v = std::numeric_limits<double>::infinity();
    }
    if (v > m) {
      m = v;
      worst = i;
    }
  }
  c.grid_max = vals.empty() ? 0.0 : m;
  c.mean = vals.empty() ? 0.0 : pairwise_sum(vals) / static_cast<double>(vals.size());
  if (!vals.empty()) c.worst = {pts[worst].node, pts[worst].chart, pts[worst].u};
  c.status = judge(kind, c.grid_max, threshold, finite);
  if (keep) c.per_node = std::move(vals);
  return c;
}

Component scalar_component(const std::string& name, ComponentKind kind, double threshold, double value) {
  Component c;
  c.name = name;
  c.kind = kind;
  c.threshold = threshold;
  c.grid_max = std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
  c.mean = c.grid_max;
  c.status = judge(kind, c.grid_max, threshold, std::isfinite(value));
  return c;
}

// Pointwise maximum over several residual series.
std::vector<double> pointwise_max(const std::vector<std::vector<double>>& v, std::size_t from, std::size_t to) {
  std::vector<double> out(v.empty() ? 0 : v[from].size(), 0.0);
  for (std::size_t c = from; c < to; ++c)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], v[c][i]);
  return out;
}

void finalize(CheckResult& r) {
  if (r.components.empty()) {
    r.status = Status::kSkip;
    if (r.reason.empty()) r.reason = "no applicable components";
    return;
  }
  r.status = Status::kPass;
  double worst_ratio = -1.0;
  for (const Component& c : r.components) {
    if (c.status == Status::kFail) r.status = Status::kFail;
    double ratio;
    if (c.kind == ComponentKind::kVanishing) {
      ratio = c.grid_max / c.threshold;
    } else {
      ratio = c.grid_max > 0.0 ? c.threshold / c.grid_max : std::numeric_limits<double>::infinity();
    }
    if (std::isnan(ratio)) ratio = std::numeric_limits<double>::infinity();
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      r.grid_max = c.grid_max;
      r.mean = c.mean;
      r.worst = c.worst;
      r.tolerance = c.threshold;
    }
  }
}

std::string gate_reason(const CaseContext& cx) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "base map not harmonic: grid-max |tau| = %.3g exceeds gate %.3g", cx.harmonic_gate,
                cx.t("harmonic_gate"));
  return buf;
}

using CheckFn = void (*)(const CaseContext&, bool, CheckResult&);

// -- tension ---------------------------------------------------------------

void check_tension(const CaseContext& cx, bool co, CheckResult& r) {
  const bool control = cx.c.is_control_for("tension");
  if (co && !control) return;
  const auto pts = eval_points(cx.grid);
  auto v = sweep(cx, pts, 2, [&](const EvalPoint& e, double* out) {
    const DomainPoint dp = at(e, {2, 2, 0});
    const MapGerm p = evaluate(cx.c.map, dp);
    const FieldGerm tn = tension_normalized(p, dp);
    out[0] = field_norm(p, tn);
    out[1] = co ? 0.0 : field_norm(p, field_sub(tension_real(p, dp), tn)) / (1.0 + out[0]);
  });
  if (cx.c.manifest.harmonic) {
    r.components.push_back(point_component("tension", ComponentKind::kVanishing, cx.t("tension"), v[0], pts, cx.per_node));
  } else if (control) {
    r.components.push_back(
        point_component("tension", ComponentKind::kExpectedNonzero, cx.t("tension_control"), v[0], pts, cx.per_node));
  }
  if (!co) {
    r.components.push_back(
        point_component("trace-form", ComponentKind::kVanishing, cx.t("tension_trace"), v[1], pts, cx.per_node));
  }
}

// -- jacobi ----------------------------------------------------------------

void check_jacobi(const CaseContext& cx, bool co, CheckResult& r) {
  if (!cx.harmonic_ok) {
    r.reason = gate_reason(cx);
    return;
  }
  std::vector<const Family*> fams;
  for (const Family& f : cx.c.families)
    if (!co || f.tag == FamilyTag::kNonJacobi) fams.push_back(&f);
  if (fams.empty()) {
    r.reason = co ? "no designed control" : "case has no families";
    return;
  }
  const auto pts = eval_points(cx.grid);
  const std::size_t nf = fams.size();
  auto v = sweep(cx, pts, 2 * nf, [&](const EvalPoint& e, double* out) {
    const DomainPoint dp = at(e, {1, 1, 1});
    for (std::size_t k = 0; k < nf; ++k) {
      const MapGerm fam = evaluate(fams[k]->spec, dp);
      const MapGerm p = at_t0(fam);
      const FieldGerm vf = t_derivative(fam);
      const FieldGerm jc = jacobi_complex(p, vf);
      const FieldGerm jcc = jacobi_conjugate(p, vf);
      const FieldGerm J = field_scale(field_add(jc, jcc), inverse_conformal_factor(dp) * 0.5);
      out[k] = field_norm(p, J);
      out[nf + k] = field_norm(p, field_sub(jc, jcc)) / (1.0 + field_norm(p, jc));
    }
  });
  for (std::size_t k = 0; k < nf; ++k) {
    const Family& f = *fams[k];
    if (is_jacobi(f)) {
      r.components.push_back(
          point_component("J[" + f.name + "]", ComponentKind::kVanishing, cx.t("jacobi"), v[k], pts, cx.per_node));
    } else if (f.tag == FamilyTag::kNonJacobi) {
      r.components.push_back(point_component("J[" + f.name + "]", ComponentKind::kExpectedNonzero,
                                             cx.t("jacobi_control"), v[k], pts, cx.per_node));
    }
  }
  if (co) return;
  r.components.push_back(point_component("bianchi", ComponentKind::kVanishing, cx.t("bianchi"),
                                         pointwise_max(v, nf, 2 * nf), pts, cx.per_node));
  const double e0 = energy(cx.c.map, cx.grid, *cx.ex).energy;
  for (const Family* f : fams) {
    if (!f->at_parameter) continue;
    double worst = 0.0;
    for (double t0 : {-0.1, 0.1}) {
      const double et = energy(f->at_parameter(t0), cx.grid, *cx.ex).energy;
      worst = std::max(worst, std::abs(et - e0) / (1.0 + std::abs(e0)));
    }
    r.components.push_back(scalar_component("energy-invariance[" + f->name + "]", ComponentKind::kVanishing,
                                            cx.t("energy_invariance"), worst));
  }
}

// -- linearization ---------------------------------------------------------

constexpr int kRandomFields = 10;

void check_linearization(const CaseContext& cx, bool co, CheckResult& r) {
  if (co) return;
  if (!cx.harmonic_ok) {
    r.reason = gate_reason(cx);
    return;
  }
  std::vector<Family> fams = cx.c.families;
  const std::size_t ncase = fams.size();
  for (int i = 0; i < kRandomFields; ++i) fams.push_back(make_chart_linear_family(cx.c, cx.seed, i));
  const auto pts = eval_points(cx.grid);
  auto v = sweep(cx, pts, fams.size(), [&](const EvalPoint& e, double* out) {
    const DomainPoint dp = at(e, {1, 1, 1});
    for (std::size_t k = 0; k < fams.size(); ++k) {
      const MapGerm fam = evaluate(fams[k].spec, dp);
      const MapGerm p = at_t0(fam);
      const FieldGerm jc = jacobi_complex(p, t_derivative(fam));
      out[k] = field_norm(p, field_add(jc, linearized_tension(fam)));
    }
  });
  for (std::size_t k = 0; k < ncase; ++k) {
    r.components.push_back(point_component("identity[" + fams[k].name + "]", ComponentKind::kVanishing,
                                           cx.t("linearization"), v[k], pts, cx.per_node));
  }
  r.components.push_back(point_component("identity[chart-linear x" + std::to_string(kRandomFields) + "]",
                                         ComponentKind::kVanishing, cx.t("linearization"),
                                         pointwise_max(v, ncase, fams.size()), pts, cx.per_node));
}

// -- first variation -------------------------------------------------------

void check_first_variation(const CaseContext& cx, bool co, CheckResult& r) {
  if (co) return;
  if (cx.grid.patch) {
    r.reason = "patch case: boundary terms break the closed-surface formula";
    return;
  }
  std::vector<Family> fams = cx.c.families;
  fams.push_back(make_chart_linear_family(cx.c, cx.seed, 0));
  for (const Family& f : fams) {
    const FirstVariation fv = first_variation(f.spec, cx.grid, *cx.ex);
    r.components.push_back(scalar_component("formula[" + f.name + "]", ComponentKind::kVanishing,
                                            cx.t("first_variation"), std::abs(fv.dE_dt - fv.minus_tau_v)));
  }
}

// -- hessian ---------------------------------------------------------------

void check_hessian(const CaseContext& cx, bool co, CheckResult& r) {
  if (co) return;
  if (cx.grid.patch) {
    r.reason = "patch case: the second variation needs the closed sphere";
    return;
  }
  if (!cx.harmonic_ok) {
    r.reason = gate_reason(cx);
    return;
  }
  const double tol = cx.t("hessian");
  std::vector<Family> cl;
  for (int i = 0; i < 3; ++i) cl.push_back(make_chart_linear_family(cx.c, cx.seed, i));
  double H[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) H[i][j] = hessian(cl[static_cast<std::size_t>(i)].spec, cl[static_cast<std::size_t>(j)].spec, cx.grid, *cx.ex).value;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      r.components.push_back(scalar_component("symmetry[" + std::to_string(i) + "," + std::to_string(j) + "]",
                                              ComponentKind::kVanishing, tol, std::abs(H[i][j] - H[j][i])));
    }
  for (const Family& f : cx.c.families) {
    if (!is_jacobi(f)) continue;
    r.components.push_back(scalar_component("H(v,v)[" + f.name + "]", ComponentKind::kVanishing, tol,
                                            std::abs(hessian(f.spec, f.spec, cx.grid, *cx.ex).value)));
  }
  for (int i = 0; i < 3; ++i) {
    const double e2 = energy_second_derivative(cl[static_cast<std::size_t>(i)].spec, cx.grid, *cx.ex);
    r.components.push_back(scalar_component("second-variation[" + cl[static_cast<std::size_t>(i)].name + "]",
                                            ComponentKind::kVanishing, tol, std::abs(e2 - H[i][i])));
  }
}

// -- conformality ----------------------------------------------------------

void check_conformality(const CaseContext& cx, bool co, CheckResult& r) {
  const bool assert_prop = cx.c.manifest.conformal && cx.c.manifest.harmonic && cx.harmonic_ok && !cx.grid.patch;
  std::vector<const Family*> fams;
  for (const Family& f : cx.c.families)
    if (!co || (assert_prop && f.tag == FamilyTag::kNonJacobi)) fams.push_back(&f);
  if (fams.empty()) {
    r.reason = co ? "no designed control" : "case has no families";
    return;
  }
  const auto pts = eval_points(cx.grid);
  const std::size_t nf = fams.size();
  auto v = sweep(cx, pts, 2 * nf, [&](const EvalPoint& e, double* out) {
    const DomainPoint dp = at(e, {1, 0, 1});
    for (std::size_t k = 0; k < nf; ++k) {
      const MapGerm fam = evaluate(fams[k]->spec, dp);
      const MapGerm p = at_t0(fam);
      const DifferentialSample ct = conformal_field_test(p, t_derivative(fam));
      const FieldGerm pz = d_z(fam);
      const cplx deta = pairing(fam, pz, pz, PairingKind::kBilinear).coeff(0, 0, 1);
      out[k] = std::abs(ct.value);
      out[nf + k] = std::abs(2.0 * ct.value - deta);
    }
  });
  for (std::size_t k = 0; k < nf; ++k) {
    const Family& f = *fams[k];
    if (!assert_prop) break;
    if (is_jacobi(f)) {
      r.components.push_back(point_component("pairing[" + f.name + "]", ComponentKind::kVanishing, cx.t("conformal"),
                                             v[k], pts, cx.per_node));
    } else if (f.tag == FamilyTag::kNonJacobi) {
      r.components.push_back(point_component("pairing[" + f.name + "]", ComponentKind::kExpectedNonzero,
                                             cx.t("conformal_control"), v[k], pts, cx.per_node));
    }
  }
  if (!co) {
    r.components.push_back(point_component("cross-identity", ComponentKind::kVanishing, cx.t("conformal_cross"),
                                           pointwise_max(v, nf, 2 * nf), pts, cx.per_node));
  }
}

// -- real isotropy ---------------------------------------------------------

void check_real_isotropy(const CaseContext& cx, bool co, CheckResult& r) {
  const bool control = cx.c.is_control_for("real-isotropy");
  const bool assert_iso = cx.c.manifest.real_isotropic && cx.harmonic_ok;
  if (co && !control) return;
  if (!assert_iso && !control) {
    r.reason = cx.c.manifest.real_isotropic ? gate_reason(cx) : "case is not claimed real isotropic";
    return;
  }
  const int K = cx.rmax - 1;
  const int rmax = cx.rmax;
  const auto pts = eval_points(cx.grid);
  auto v = sweep(cx, pts, 1, [&](const EvalPoint& e, double* out) {
    const MapGerm p = evaluate(cx.c.map, at(e, {K, 0, 0}));
    const auto chain = dz_chain(p, K);
    double m = 0.0;
    for (int a = 1; a <= K; ++a)
      for (int b = a; a + b <= rmax; ++b) {
        const DifferentialSample s = eta_real_rs(chain, p, a, b);
        m = std::max(m, std::abs(s.value));
      }
    out[0] = m;
  });
  if (assert_iso) {
    r.components.push_back(point_component("eta", ComponentKind::kVanishing, cx.t("eta_real"), v[0], pts, cx.per_node));
  } else {
    const double thr = cx.c.target->kind() == TargetKind::kFlat ? cx.t("isotropy_control_flat") : cx.t("isotropy_control");
    r.components.push_back(point_component("eta", ComponentKind::kExpectedNonzero, thr, v[0], pts, cx.per_node));
  }
  if (co || !assert_iso || !cx.c.target->is_space_form() || cx.c.families.empty()) return;
  const auto& fams = cx.c.families;
  const std::size_t nf = fams.size();
  auto w = sweep(cx, pts, 2 * nf, [&](const EvalPoint& e, double* out) {
    const DomainPoint dp = at(e, {K, 0, 1});
    for (std::size_t k = 0; k < nf; ++k) {
      const MapGerm fam = evaluate(fams[k].spec, dp);
      const MapGerm p = at_t0(fam);
      const auto chain_t = dz_chain(fam, K);
      std::vector<FieldGerm> chain;
      for (const FieldGerm& g : chain_t) chain.push_back(at_t0(g));
      const auto vchain = field_chain(Direction::kZ, p, t_derivative(fam), K);
      double mj = 0.0, ml = 0.0;
      for (int a = 1; a <= K; ++a)
        for (int b = a; a + b <= rmax; ++b) {
          const DifferentialSample j = j_real_rs(chain, vchain, p, a, b);
          const DifferentialSample et = eta_real_rs(chain_t, fam, a, b);
          mj = std::max(mj, std::abs(j.value));
          ml = std::max(ml, std::abs(j.value - et.dt_value));
        }
      out[k] = mj;
      out[nf + k] = ml;
    }
  });
  for (std::size_t k = 0; k < nf; ++k) {
    if (!is_jacobi(fams[k])) continue;
    r.components.push_back(point_component("j[" + fams[k].name + "]", ComponentKind::kVanishing, cx.t("j_real"), w[k],
                                           pts, cx.per_node));
  }
  for (std::size_t k = 0; k < nf; ++k) {
    r.components.push_back(point_component("cross-identity[" + fams[k].name + "]", ComponentKind::kVanishing,
                                           cx.t("real_cross"), w[nf + k], pts, cx.per_node));
  }
}

// -- complex isotropy ------------------------------------------------------

void check_complex_isotropy(const CaseContext& cx, bool co, CheckResult& r) {
  if (!cx.c.target->is_kahler()) {
    r.reason = "target is not Kahler";
    return;
  }
  const bool control = cx.c.is_control_for("complex-isotropy");
  const bool assert_iso = cx.c.manifest.complex_isotropic && cx.harmonic_ok;
  if (co && !control) return;
  if (!assert_iso && !control) {
    r.reason = cx.c.manifest.complex_isotropic ? gate_reason(cx) : "case is not claimed complex isotropic";
    return;
  }
  const int K = cx.rmax - 1;
  const int rmax = cx.rmax;
  const auto pts = eval_points(cx.grid);
  auto v = sweep(cx, pts, 1, [&](const EvalPoint& e, double* out) {
    const MapGerm pz = evaluate(cx.c.map, at(e, {K, 0, 0}));
    const MapGerm pzb = evaluate(cx.c.map, at(e, {0, K, 0}));
    const auto zc = dz_hol_chain(pz, K);
    const auto zbc = dzbar_hol_chain(pzb, K);
    double m = 0.0;
    for (int a = 1; a <= K; ++a)
      for (int b = 1; a + b <= rmax; ++b) {
        const DifferentialSample s = eta_cx_rs(zc, zbc, pz, a, b);
        m = std::max(m, std::abs(s.value));
      }
    out[0] = m;
  });
  if (assert_iso) {
    r.components.push_back(point_component("eta", ComponentKind::kVanishing, cx.t("eta_complex"), v[0], pts, cx.per_node));
  } else {
    r.components.push_back(
        point_component("eta", ComponentKind::kExpectedNonzero, cx.t("isotropy_control"), v[0], pts, cx.per_node));
  }
  if (co || !assert_iso || cx.c.families.empty()) return;
  const auto& fams = cx.c.families;
  const std::size_t nf = fams.size();
  auto w = sweep(cx, pts, 2 * nf, [&](const EvalPoint& e, double* out) {
    const DomainPoint dz = at(e, {K, 0, 1});
    const DomainPoint dzb = at(e, {0, K, 1});
    for (std::size_t k = 0; k < nf; ++k) {
      const MapGerm fz = evaluate(fams[k].spec, dz);
      const MapGerm fzb = evaluate(fams[k].spec, dzb);
      const auto zc_t = dz_hol_chain(fz, K);
      const auto zbc_t = dzbar_hol_chain(fzb, K);
      std::vector<FieldGerm> zc, zbc;
      for (const FieldGerm& g : zc_t) zc.push_back(at_t0(g));
      for (const FieldGerm& g : zbc_t) zbc.push_back(at_t0(g));
      const MapGerm p = at_t0(fz);
      const MapGerm pb = at_t0(fzb);
      const auto vz = field_chain(Direction::kZ, p, t_derivative(fz), K);
      const auto vzb = field_chain(Direction::kZbar, pb, t_derivative(fzb), K);
      double mj = 0.0, ml = 0.0;
      for (int a = 1; a <= K; ++a)
        for (int b = 1; a + b <= rmax; ++b) {
          const DifferentialSample j = j_cx_rs(zc, zbc, vz, vzb, p, a, b);
          const DifferentialSample et = eta_cx_rs(zc_t, zbc_t, fz, a, b);
          mj = std::max(mj, std::abs(j.value));
          ml = std::max(ml, std::abs(j.value - et.dt_value));
        }
      out[k] = mj;
      out[nf + k] = ml;
    }
  });
  for (std::size_t k = 0; k < nf; ++k) {
    if (!is_jacobi(fams[k])) continue;
    r.components.push_back(point_component("j[" + fams[k].name + "]", ComponentKind::kVanishing, cx.t("j_complex"), w[k],
                                           pts, cx.per_node));
  }
  for (std::size_t k = 0; k < nf; ++k) {
    r.components.push_back(point_component("cross-identity[" + fams[k].name + "]", ComponentKind::kVanishing,
                                           cx.t("complex_cross"), w[nf + k], pts, cx.per_node));
  }
}

// -- holomorphic fields ----------------------------------------------------

void check_holomorphic_field(const CaseContext& cx, bool co, CheckResult& r) {
  if (!cx.c.target->is_kahler()) {
    r.reason = "target is not Kahler";
    return;
  }
  if (!cx.c.manifest.holomorphic) {
    r.reason = "case is not claimed holomorphic";
    return;
  }
  if (!cx.harmonic_ok) {
    r.reason = gate_reason(cx);
    return;
  }
  std::vector<const Family*> fams;
  for (const Family& f : cx.c.families)
    if (!co || f.tag == FamilyTag::kNonJacobi) fams.push_back(&f);
  if (co && fams.empty()) return;
  const auto pts = eval_points(cx.grid);
  const std::size_t nf = fams.size();
  auto v = sweep(cx, pts, nf + 1, [&](const EvalPoint& e, double* out) {
    const DomainPoint dp = at(e, {1, 1, 1});
    if (!co) {
      const MapGerm p = evaluate(cx.c.map, at(e, {1, 1, 0}));
      out[nf] = field_norm(p, holomorphic_field_residual(p, d_z(p)));
    }
    for (std::size_t k = 0; k < nf; ++k) {
      const MapGerm fam = evaluate(fams[k]->spec, dp);
      const MapGerm p = at_t0(fam);
      out[k] = field_norm(p, holomorphic_field_residual(p, t_derivative(fam)));
    }
  });
  if (!co) {
    r.components.push_back(
        point_component("map-differential", ComponentKind::kVanishing, cx.t("holomorphic_map"), v[nf], pts, cx.per_node));
  }
  for (std::size_t k = 0; k < nf; ++k) {
    const Family& f = *fams[k];
    if (is_jacobi(f)) {
      r.components.push_back(point_component("field[" + f.name + "]", ComponentKind::kVanishing, cx.t("holomorphic_field"),
                                             v[k], pts, cx.per_node));
    } else if (f.tag == FamilyTag::kNonJacobi) {
      r.components.push_back(point_component("field[" + f.name + "]", ComponentKind::kExpectedNonzero,
                                             cx.t("holomorphic_control"), v[k], pts, cx.per_node));
    }
  }
}

// -- dbar holomorphicity ---------------------------------------------------

void check_dbar(const CaseContext& cx, bool co, CheckResult& r) {
  const bool control = cx.c.is_control_for("dbar-holomorphicity");
  const bool assert_h = cx.c.manifest.harmonic && cx.c.manifest.real_isotropic && cx.harmonic_ok;
  if (co && !control) return;
  const int K = cx.rmax - 1;
  const int rmax = cx.rmax;
  const auto pts = eval_points(cx.grid, true);
  if (assert_h || control) {
    auto v = sweep(cx, pts, 1, [&](const EvalPoint& e, double* out) {
      const MapGerm p = evaluate(cx.c.map, at(e, {K, 1, 0}));
      const auto chain = dz_chain(p, K);
      double m = 0.0;
      for (int a = 1; a <= K; ++a)
        for (int b = a; a + b <= rmax; ++b) {
          const DifferentialSample s = eta_real_rs(chain, p, a, b);
          m = std::max(m, std::abs(s.dbar_residual));
        }
      out[0] = m;
    });
    if (assert_h) {
      r.components.push_back(point_component("dbar-eta", ComponentKind::kVanishing, cx.t("dbar"), v[0], pts, cx.per_node));
    } else {
      r.components.push_back(
          point_component("dbar-eta", ComponentKind::kExpectedNonzero, cx.t("dbar_control"), v[0], pts, cx.per_node));
    }
  }
  if (co) return;
  if (assert_h) {
    std::vector<const Family*> fams;
    for (const Family& f : cx.c.families)
      if (is_jacobi(f)) fams.push_back(&f);
    const std::size_t nf = fams.size();
    if (nf > 0) {
      auto w = sweep(cx, pts, nf, [&](const EvalPoint& e, double* out) {
        const DomainPoint dp = at(e, {K, 1, 1});
        for (std::size_t k = 0; k < nf; ++k) {
          const MapGerm fam = evaluate(fams[k]->spec, dp);
          const auto chain = dz_chain(fam, K);
          double m = 0.0;
          for (int a = 1; a <= K; ++a)
            for (int b = a; a + b <= rmax; ++b) {
              const DifferentialSample s = eta_real_rs(chain, fam, a, b);
              m = std::max(m, std::abs(s.dbar_dt));
            }
          out[k] = m;
        }
      });
      for (std::size_t k = 0; k < nf; ++k) {
        r.components.push_back(point_component("dbar-dt-eta[" + fams[k]->name + "]", ComponentKind::kVanishing,
                                               cx.t("dbar"), w[k], pts, cx.per_node));
      }
    }
  }
  // eta_{1,1} dz^2 is a quadratic differential: eta_N = eta_S (dzeta/dz)^2.
  const auto ov = overlap_points(cx.grid);
  if (ov.empty()) return;
  const Family f0 = make_chart_linear_family(cx.c, cx.seed, 0);
  const Family f1 = make_chart_linear_family(cx.c, cx.seed, 1);
  auto w = sweep(cx, ov, 1, [&](const EvalPoint& e, double* out) {
    const cplx z = e.u;
    const cplx jac = transition_derivative(z);
    const cplx zeta = chart_coordinate(Chart::kSouth, z);
    auto eta11 = [&](const MapSpec& spec, Chart ch, cplx u) {
      const MapGerm fam = evaluate(spec, ch, u, {1, 0, 1});
      const FieldGerm pz = d_z(fam);
      return std::make_pair(pairing(fam, pz, pz, PairingKind::kBilinear), field_norm(fam, pz));
    };
    double m = 0.0;
    for (const MapSpec* spec : {&f0.spec, &f1.spec}) {
      const auto [en, sn] = eta11(*spec, Chart::kNorth, z);
      const auto [es, ss] = eta11(*spec, Chart::kSouth, zeta);
      (void)ss;
      m = std::max(m, std::abs(en.value() - es.value() * jac * jac) / (1.0 + sn * sn));
      m = std::max(m, std::abs(en.coeff(0, 0, 1) - es.coeff(0, 0, 1) * jac * jac) / (1.0 + sn * sn));
    }
    out[0] = m;
  });
  r.components.push_back(
      point_component("chart-transition", ComponentKind::kVanishing, cx.t("chart_transition"), w[0], ov, cx.per_node));
}

// -- curvature decomposition on complex space forms ------------------------

FieldGerm random_real_section(const TargetModel& m, std::mt19937_64& rng, cplx base) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const JetOrder o0{0, 0, 0};
  FieldGerm X;
  X.type = FieldType::kRealSection;
  if (m.kind() == TargetKind::kComplexSpaceFormFS) {
    const int n = m.complex_dim();
    std::vector<cplx> xi;
    for (int i = 0; i < n; ++i) {
      const double re = u(rng);
      xi.push_back(cplx(re, u(rng)));
    }
    for (int i = 0; i < n; ++i) X.comps.push_back(Jet::constant(o0, base, xi[static_cast<std::size_t>(i)]));
    for (int i = 0; i < n; ++i) X.comps.push_back(Jet::constant(o0, base, std::conj(xi[static_cast<std::size_t>(i)])));
  } else {
    for (int i = 0; i < m.dim(); ++i) X.comps.push_back(Jet::constant(o0, base, u(rng)));
  }
  return X;
}

void check_lemma45(const CaseContext& cx, bool co, CheckResult& r) {
  if (co) return;
  if (!cx.c.target->is_complex_space_form()) {
    r.reason = "target is not a complex space form";
    return;
  }
  const int K = std::min(3, cx.rmax - 1);
  const auto pts = eval_points(cx.grid);
  auto v = sweep(cx, pts, static_cast<std::size_t>(K), [&](const EvalPoint& e, double* out) {
    const MapGerm p = evaluate(cx.c.map, at(e, {K, 1, 0}));
    const std::uint64_t key =
        static_cast<std::uint64_t>(e.node) * 2 + (e.chart == Chart::kSouth ? 1 : 0);
    std::mt19937_64 rng(splitmix64(cx.seed ^ splitmix64(key)));
    const FieldGerm X = random_real_section(*cx.c.target, rng, p.base());
    for (int k = 1; k <= K; ++k) {
      const SpanResidual s = lemma45_decompose(p, X, k);
      out[k - 1] = s.residual;
    }
  });
  for (int k = 1; k <= K; ++k) {
    r.components.push_back(point_component("span[k=" + std::to_string(k) + "]", ComponentKind::kVanishing,
                                           cx.t("lemma45"), v[static_cast<std::size_t>(k - 1)], pts, cx.per_node));
  }
}

// -- theta span ------------------------------------------------------------

void check_theta_span(const CaseContext& cx, bool co, CheckResult& r) {
  if (!cx.c.target->is_space_form()) {
    r.reason = "target is not a space form";
    return;
  }
  const bool control = cx.c.is_control_for("theta-span");
  const bool assert_t = cx.c.manifest.harmonic && cx.c.manifest.real_isotropic && cx.harmonic_ok;
  if (co && !control) return;
  std::vector<Family> fams;
  if (assert_t && !co) {
    for (const Family& f : cx.c.families)
      if (is_jacobi(f)) fams.push_back(f);
  }
  const std::size_t nj = fams.size();
  if (control) fams.push_back(make_chart_linear_family(cx.c, cx.seed, 0));
  if (fams.empty()) {
    r.reason = assert_t ? "case has no Jacobi families" : "case is not harmonic and real isotropic";
    return;
  }
  const auto pts = eval_points(cx.grid);
  auto v = sweep(cx, pts, fams.size(), [&](const EvalPoint& e, double* out) {
    const DomainPoint dp = at(e, {3, 0, 1});
    for (std::size_t k = 0; k < fams.size(); ++k) {
      const MapGerm fam = evaluate(fams[k].spec, dp);
      if (k < nj) {
        double m = 0.0;
        for (int kk = 1; kk <= 3; ++kk) {
          const SpanResidual s = theta_span_check(fam, kk);
          m = std::max(m, s.residual);
        }
        out[k] = m;
      } else {
        const SpanResidual s = theta_span_check(fam, 2);
        out[k] = s.residual;
      }
    }
  });
  for (std::size_t k = 0; k < fams.size(); ++k) {
    if (k < nj) {
      r.components.push_back(point_component("residual[" + fams[k].name + "]", ComponentKind::kVanishing,
                                             cx.t("theta_span"), v[k], pts, cx.per_node));
    } else {
      r.components.push_back(point_component("residual[" + fams[k].name + ",k=2]", ComponentKind::kExpectedNonzero,
                                             cx.t("theta_control"), v[k], pts, cx.per_node));
    }
  }
}

// -- curvature oracle ------------------------------------------------------

constexpr int kCurvatureProbes = 200;

double max_abs_diff(const JetVec& a, const JetVec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i].value() - b[i].value()));
  return m;
}

void check_curvature_oracle(const CaseContext& cx, bool co, CheckResult& r) {
  if (co) return;
  const TargetModel& t = *cx.c.target;
  std::shared_ptr<const TargetModel> model;
  switch (t.kind()) {
    case TargetKind::kComplexSpaceFormFS:
    case TargetKind::kSpaceFormChart:
    case TargetKind::kGeneralChart: model = cx.c.target; break;
    case TargetKind::kSpaceFormEmbedded:
      // Same space form in stereographic coordinates, where the metric is explicit.
      model = std::make_shared<const TargetModel>(TargetModel::space_form_chart(t.dim() - 1, t.curvature_constant()));
      break;
    case TargetKind::kFlat: r.reason = "flat target"; return;
  }
  const TargetModel& m = *model;
  const bool fs = m.kind() == TargetKind::kComplexSpaceFormFS;
  const int dim = m.dim();
  std::mt19937_64 rng(splitmix64(cx.seed ^ name_hash("curvature-oracle:" + cx.c.name)));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const JetOrder o0{0, 0, 0};
  std::vector<EvalPoint> probes;
  std::vector<double> curv, bianchi, chris, mixed;
  for (int i = 0; i < kCurvatureProbes; ++i) {
    JetVec p;
    if (fs) {
      const int n = m.complex_dim();
      std::vector<cplx> w;
      for (int k = 0; k < n; ++k) {
        const double re = 0.7 * u(rng);
        w.push_back(cplx(re, 0.7 * u(rng)));
      }
      for (int k = 0; k < n; ++k) p.push_back(Jet::constant(o0, 0.0, w[static_cast<std::size_t>(k)]));
      for (int k = 0; k < n; ++k) p.push_back(Jet::constant(o0, 0.0, std::conj(w[static_cast<std::size_t>(k)])));
    } else {
      for (int k = 0; k < dim; ++k) p.push_back(Jet::constant(o0, 0.0, 0.5 * u(rng)));
    }
    const JetVec X = random_real_section(m, rng, 0.0).comps;
    const JetVec Y = random_real_section(m, rng, 0.0).comps;
    const JetVec Z = random_real_section(m, rng, 0.0).comps;
    const JetVec rc = m.curvature(p, X, Y, Z);
    curv.push_back(max_abs_diff(rc, m.curvature_numeric(p, X, Y, Z)));
    const JetVec cyc = vec_add(vec_add(rc, m.curvature(p, Y, Z, X)), m.curvature(p, Z, X, Y));
    bianchi.push_back(max_abs_value(cyc));
    const std::vector<Jet> gc = m.christoffels(p), gn = m.christoffels_numeric(p);
    double cm = 0.0, cscale = 0.0, mx = 0.0;
    for (std::size_t k = 0; k < gc.size(); ++k) {
      cm = std::max(cm, std::abs(gc[k].value() - gn[k].value()));
      cscale = std::max(cscale, std::abs(gc[k].value()));
    }
    chris.push_back(cm / (1.0 + cscale));
    if (fs) {
      const int n = m.complex_dim();
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          for (int c = 0; c < dim; ++c) {
            const bool ta = a < n, tb = b < n, tc = c < n;
            if (ta == tb && tb == tc) continue;
            mx = std::max(mx, std::abs(gn[static_cast<std::size_t>((a * dim + b) * dim + c)].value()));
          }
      mixed.push_back(mx / (1.0 + cscale));
    }
    probes.push_back({i, Chart::kNorth, p.front().value()});
  }
  r.components.push_back(point_component("closed-vs-numeric", ComponentKind::kVanishing, cx.t("curvature"), curv, probes,
                                         cx.per_node));
  r.components.push_back(
      point_component("bianchi", ComponentKind::kVanishing, cx.t("bianchi_first"), bianchi, probes, cx.per_node));
  r.components.push_back(
      point_component("christoffel", ComponentKind::kVanishing, cx.t("christoffel"), chris, probes, cx.per_node));
  if (fs) {
    r.components.push_back(
        point_component("mixed-christoffel", ComponentKind::kVanishing, cx.t("christoffel"), mixed, probes, cx.per_node));
  }
}

// -- negative controls -----------------------------------------------------

void check_negative_controls(const CaseContext& cx, bool co, CheckResult& r);

struct CheckEntry {
  const char* name;
  CheckFn fn;
  const char* description;
};

const std::vector<CheckEntry>& registry() {
  static const std::vector<CheckEntry> entries = {
      {"tension", check_tension,
       "harmonic cases have vanishing tension; trace and complex forms of the tension agree"},
      {"jacobi", check_jacobi,
       "variation fields of families through harmonic maps solve the Jacobi equation; the two complex forms agree; "
       "isometry flows preserve energy"},
      {"linearization", check_linearization,
       "the Jacobi operator is minus the linearized tension, for atlas and random families"},
      {"first-variation", check_first_variation, "dE/dt equals minus the L2 pairing of tension and variation field"},
      {"hessian-symmetry", check_hessian,
       "the Hessian is symmetric, vanishes on Jacobi fields and matches the second derivative of the energy"},
      {"conformality", check_conformality,
       "Jacobi fields along harmonic spheres are conformal; twice the conformality pairing is the t-derivative of the "
       "Hopf differential"},
      {"real-isotropy", check_real_isotropy,
       "harmonic spheres in space forms are real isotropic and Jacobi fields preserve real isotropy to first order"},
      {"complex-isotropy", check_complex_isotropy,
       "harmonic spheres in complex space forms are complex isotropic and Jacobi fields preserve it to first order"},
      {"holomorphic-field", check_holomorphic_field, "Jacobi fields along holomorphic spheres are holomorphic"},
      {"dbar-holomorphicity", check_dbar,
       "isotropy differentials and their first variations are holomorphic; eta_11 transforms as a quadratic "
       "differential between charts"},
      {"lemma45", check_lemma45,
       "on a complex space form R(X, phi_z) D^{k-1} phi_z' lies in span{phi_z', D^{k-1} phi_z', eta^C_{k,1} X'}"},
      {"theta-span", check_theta_span,
       "D_t D^{k-1} phi_z - D^k v lies in the span of lower z-derivatives along isotropic maps into space forms"},
      {"curvature-oracle", check_curvature_oracle,
       "closed-form curvature and Christoffel symbols match the ones differentiated from the metric; first Bianchi "
       "identity"},
      {"negative-controls", check_negative_controls,
       "designed non-examples produce residuals above their thresholds"},
  };
  return entries;
}

void check_negative_controls(const CaseContext& cx, bool co, CheckResult& r) {
  if (co) return;
  for (const CheckEntry& e : registry()) {
    const std::string name = e.name;
    if (name == "negative-controls") continue;
    CheckResult sub = run_check(name, cx, true);
    for (Component& c : sub.components) {
      if (c.kind != ComponentKind::kExpectedNonzero) continue;
      c.name = name + "/" + c.name;
      r.components.push_back(std::move(c));
    }
  }
  if (r.components.empty()) r.reason = "case has no designed controls";
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const CheckEntry& e : registry()) v.push_back(e.name);
    return v;
  }();
  return names;
}

const char* check_description(const std::string& check) {
  for (const CheckEntry& e : registry())
    if (check == e.name) return e.description;
  throw Error(ErrorKind::kUnknownName, "unknown check '" + check + "'");
}

Tolerances default_tolerances() {
  return {
      {"harmonic_gate", 1e-8},
      {"tension", 1e-9},
      {"tension_trace", 1e-10},
      {"tension_control", 1e-2},
      {"jacobi", 1e-8},
      {"jacobi_control", 1e-3},
      {"bianchi", 1e-9},
      {"energy_invariance", 1e-8},
      {"linearization", 1e-9},
      {"first_variation", 1e-5},
      {"hessian", 1e-6},
      {"conformal", 1e-8},
      {"conformal_control", 1e-3},
      {"conformal_cross", 1e-10},
      {"eta_real", 1e-8},
      {"j_real", 1e-7},
      {"real_cross", 1e-9},
      {"isotropy_control", 1e-3},
      {"isotropy_control_flat", 1e-2},
      {"eta_complex", 1e-8},
      {"j_complex", 1e-7},
      {"complex_cross", 1e-9},
      {"holomorphic_map", 1e-9},
      {"holomorphic_field", 1e-8},
      {"holomorphic_control", 1e-3},
      {"dbar", 1e-7},
      {"dbar_control", 1e-3},
      {"chart_transition", 1e-9},
      {"lemma45", 1e-9},
      {"theta_span", 1e-8},
      {"theta_control", 1e-3},
      {"curvature", 1e-9},
      {"bianchi_first", 1e-10},
      {"christoffel", 1e-12},
  };
}

double CaseContext::t(const std::string& name) const {
  const auto it = tol.find(name);
  if (it == tol.end()) throw Error(ErrorKind::kUnknownName, "unknown tolerance '" + name + "'");
  return it->second;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kSkip: return "precondition-skip";
  }
  return "?";
}

const char* to_string(ComponentKind k) {
  return k == ComponentKind::kVanishing ? "vanishing" : "expected-nonzero";
}

void Scenario::validate() const {
  if (rmax < 2 || rmax > 6) throw Error(ErrorKind::kRejectedInput, "rmax must lie in [2, 6]");
  if (n_theta < 8 || n_phi < 16) throw Error(ErrorKind::kRejectedInput, "resolution must be at least 8x16");
  for (const std::string& c : cases)
    if (std::find(case_names().begin(), case_names().end(), c) == case_names().end()) {
      throw Error(ErrorKind::kUnknownName, "unknown case '" + c + "'");
    }
  for (const std::string& c : checks)
    if (std::find(check_names().begin(), check_names().end(), c) == check_names().end()) {
      throw Error(ErrorKind::kUnknownName, "unknown check '" + c + "'");
    }
  const Tolerances defaults = default_tolerances();
  for (const auto& [k, v] : tolerances) {
    if (defaults.find(k) == defaults.end()) throw Error(ErrorKind::kUnknownName, "unknown tolerance '" + k + "'");
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::kRejectedInput, "tolerance '" + k + "' must be positive");
  }
}

bool Report::pass() const {
  return std::none_of(results.begin(), results.end(), [](const CheckResult& r) { return r.status == Status::kFail; });
}

CaseContext prepare_case(const std::string& name, const Scenario& s, const Executor& ex) {
  CaseContext cx;
  cx.c = make_case(name);
  cx.grid = cx.c.patch ? make_patch_grid(s.n_theta, s.n_phi) : make_sphere_grid(s.n_theta, s.n_phi);
  cx.rmax = s.rmax;
  cx.seed = s.seed;
  cx.tol = default_tolerances();
  for (const auto& [k, v] : s.tolerances) cx.tol[k] = v;
  cx.ex = &ex;
  cx.per_node = s.per_node;
  validate_case(cx.c, cx.grid);
  const auto pts = eval_points(cx.grid);
  const auto v = sweep(cx, pts, 1, [&](const EvalPoint& e, double* out) {
    const DomainPoint dp = at(e, {1, 1, 0});
    const MapGerm p = evaluate(cx.c.map, dp);
    out[0] = field_norm(p, tension_normalized(p, dp));
  });
  double m = 0.0;
  for (double x : v[0]) m = std::isfinite(x) ? std::max(m, x) : std::numeric_limits<double>::infinity();
  cx.harmonic_gate = m;
  cx.harmonic_ok = m <= cx.t("harmonic_gate");
  return cx;
}

CheckResult run_check(const std::string& check, const CaseContext& cx, bool controls_only) {
  for (const CheckEntry& e : registry()) {
    if (check != e.name) continue;
    CheckResult r;
    r.check = check;
    r.case_name = cx.c.name;
    e.fn(cx, controls_only, r);
    finalize(r);
    return r;
  }
  throw Error(ErrorKind::kUnknownName, "unknown check '" + check + "'");
}

Report run_scenario(const Scenario& s, const Executor& ex) {
  s.validate();
  Report rep;
  rep.scenario = s;
  if (s.checks.empty() || s.cases.empty()) return rep;
  std::vector<CaseContext> cases;
  for (const std::string& name : s.cases) cases.push_back(prepare_case(name, s, ex));
  for (const std::string& check : s.checks) {
    for (const CaseContext& cx : cases) {
      const auto t0 = std::chrono::steady_clock::now();
      CheckResult r = run_check(check, cx);
      if (s.timing) r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rep.results.push_back(std::move(r));
    }
  }
  return rep;
}

}  // namespace hjlab
