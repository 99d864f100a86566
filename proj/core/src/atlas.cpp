#include "hjlab/atlas.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "hjlab/variational.hpp"

namespace hjlab {

namespace {

constexpr cplx kI(0.0, 1.0);
constexpr double kChartMargin = 0.05;

// Copies j into a jet of a larger order; the new coefficients are zero.
Jet lift(const Jet& j, const JetOrder& o) {
  Jet out(o, j.base());
  const JetOrder& s = j.order();
  for (int a = 0; a <= std::min(s.z, o.z); ++a)
    for (int b = 0; b <= std::min(s.zbar, o.zbar); ++b)
      for (int c = 0; c <= std::min(s.t, o.t); ++c) out.coeff(a, b, c) = j.coeff(a, b, c);
  return out;
}

void require_north(const DomainPoint& dp, const char* name) {
  if (dp.chart != Chart::kNorth) {
    throw Error(ErrorKind::kChartDomain, std::string(name) + " is defined on the north patch only");
  }
}

JetVec flat_real_coords(const Jet& w, const Jet& wbar) {
  return {(w + wbar) * 0.5, (w - wbar) * (-0.5 * kI)};
}

// sum_j M_ij(t) P_j with M(t) = I + tA + t^2 A^2 / 2.
JetVec apply_flow_block(const Generator& A, const JetVec& P, const Jet& t) {
  const std::size_t n = A.size();
  Generator A2(n, std::vector<cplx>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) A2[i][j] += A[i][k] * A[k][j];
  const Jet t2 = t * t * 0.5;
  JetVec out;
  for (std::size_t i = 0; i < n; ++i) {
    Jet acc = P[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (A[i][j] != cplx{}) acc += t * P[j] * A[i][j];
      if (A2[i][j] != cplx{}) acc += t2 * P[j] * A2[i][j];
    }
    out.push_back(acc);
  }
  return out;
}

Generator conj(const Generator& A) {
  Generator out = A;
  for (auto& row : out)
    for (auto& v : row) v = std::conj(v);
  return out;
}

JetVec first_half(const JetVec& v) { return JetVec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2)); }
JetVec second_half(const JetVec& v) { return JetVec(v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end()); }

JetVec concat(JetVec a, const JetVec& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Acts on ambient coordinates, or on (P, Pbar) for homogeneous coordinates.
JetVec apply_flow(const Generator& A, const JetVec& P, const Jet& t) {
  if (P.size() == A.size()) return apply_flow_block(A, P, t);
  return concat(apply_flow_block(A, first_half(P), t), apply_flow_block(conj(A), second_half(P), t));
}

JetVec apply_matrix_block(const Eigen::MatrixXcd& M, const JetVec& P) {
  JetVec out;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Jet acc = P[0] * M(i, 0);
    for (Eigen::Index j = 1; j < M.cols(); ++j) acc += P[static_cast<std::size_t>(j)] * M(i, j);
    out.push_back(acc);
  }
  return out;
}

JetVec apply_matrix(const Eigen::MatrixXcd& M, const JetVec& P) {
  if (static_cast<Eigen::Index>(P.size()) == M.rows()) return apply_matrix_block(M, P);
  return concat(apply_matrix_block(M, first_half(P)), apply_matrix_block(M.conjugate(), second_half(P)));
}

Eigen::MatrixXcd to_eigen(const Generator& A) {
  const auto n = static_cast<Eigen::Index>(A.size());
  Eigen::MatrixXcd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return M;
}

Generator real_generator(std::initializer_list<std::initializer_list<double>> rows) {
  Generator g;
  for (const auto& r : rows) {
    g.emplace_back();
    for (double v : r) g.back().push_back(v);
  }
  return g;
}

// Skew 5x5 generator from its strict upper triangle.
Generator skew5(const std::array<double, 10>& up) {
  Generator g(5, std::vector<cplx>(5));
  std::size_t k = 0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      g[i][j] = up[k];
      g[j][i] = -up[k];
      ++k;
    }
  return g;
}

// Monomials of degree <= 2 in the three ambient coordinates of S^2.
std::array<Jet, 10> ambient_monomials(const DomainPoint& dp) {
  const auto& x = dp.x;
  return {x[0] * 0.0 + 1.0, x[0], x[1], x[2], x[0] * x[0], x[0] * x[1], x[0] * x[2], x[1] * x[1], x[1] * x[2],
          x[2] * x[2]};
}

Jet poly_eval(const std::array<Jet, 10>& mono, const std::vector<cplx>& c) {
  Jet acc = mono[0] * c[0];
  for (std::size_t k = 1; k < mono.size(); ++k) acc += mono[k] * c[k];
  return acc;
}

std::vector<Family> isometry_families(const AtlasCase& c, const std::vector<std::pair<std::string, Generator>>& gens) {
  std::vector<Family> out;
  for (const auto& [name, g] : gens) out.push_back(make_isometry_variation(c, g, name));
  return out;
}

AtlasCase identity_s2() {
  AtlasCase c;
  c.name = "identity-s2";
  c.description = "identity map of the unit sphere; harmonic, conformal, real isotropic";
  c.target = std::make_shared<const TargetModel>(TargetModel::space_form_embedded(3, 1.0));
  c.map = {c.target, [](const DomainPoint& dp) { return JetVec{dp.x[0], dp.x[1], dp.x[2]}; }};
  c.manifest = {true, true, true, false, false};
  c.families = isometry_families(c, {
      {"rotation-e3", real_generator({{0, -1, 0}, {1, 0, 0}, {0, 0, 0}})},
      {"rotation-generic", real_generator({{0, 0.3, -0.7}, {-0.3, 0, 0.5}, {0.7, -0.5, 0}})},
  });
  c.families.push_back(make_dilation_family(c));
  return c;
}

JetVec veronese_s4_ambient(const DomainPoint& dp) {
  const auto& x = dp.x;
  const double r3 = std::sqrt(3.0);
  return {x[0] * x[1] * r3,
          x[0] * x[2] * r3,
          x[1] * x[2] * r3,
          (x[0] * x[0] - x[1] * x[1]) * (0.5 * r3),
          (x[2] * x[2] * 2.0 - x[0] * x[0] - x[1] * x[1]) * 0.5};
}

AtlasCase rational_case(const std::string& name, const std::string& description, const CurveSpec& curve) {
  AtlasCase c = make_rational_map(curve, name);
  c.description = description;
  return c;
}

CurveSpec curve(int n, int dz, int dzb, std::initializer_list<std::tuple<int, int, int, cplx>> terms) {
  CurveSpec s(n, dz, dzb, -1);
  for (const auto& [k, p, q, v] : terms) s.at(k, p, q) = v;
  return s;
}

Family coefficient_family(const CurveSpec& base, std::initializer_list<std::tuple<int, int, int, cplx>> dterms,
                          const std::string& name) {
  CurveSpec dir(base.n, base.deg_z, base.deg_zbar, base.denominator);
  for (const auto& [k, p, q, v] : dterms) dir.at(k, p, q) = v;
  return make_coefficient_variation(base, dir, name);
}

Generator cp1_diag() { return {{kI, 0.0}, {0.0, -kI}}; }
Generator cp1_generic() { return {{0.5 * kI, cplx(0.3, 0.2)}, {cplx(-0.3, 0.2), -0.1 * kI}}; }
Generator cp2_diag() { return {{kI, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, -kI}}; }
Generator cp2_generic() {
  return {{0.2 * kI, cplx(0.4, 0.1), cplx(-0.2, 0.3)},
          {cplx(-0.4, 0.1), -0.5 * kI, cplx(0.1, -0.6)},
          {cplx(0.2, 0.3), cplx(-0.1, -0.6), 0.3 * kI}};
}

void add_unitary_families(AtlasCase& c) {
  if (c.target->complex_dim() == 1) {
    c.families.push_back(make_isometry_variation(c, cp1_diag(), "unitary-diag"));
    c.families.push_back(make_isometry_variation(c, cp1_generic(), "unitary-generic"));
  } else {
    c.families.push_back(make_isometry_variation(c, cp2_diag(), "unitary-diag"));
    c.families.push_back(make_isometry_variation(c, cp2_generic(), "unitary-generic"));
  }
}

AtlasCase rational_d1_cp1() {
  const CurveSpec s = curve(1, 1, 0, {{0, 0, 0, 1.0}, {1, 1, 0, 1.0}});
  AtlasCase c = rational_case("rational-d1-cp1", "w = z into CP^1; holomorphic", s);
  add_unitary_families(c);
  c.families.push_back(coefficient_family(s, {{1, 0, 0, 1.0}}, "translate"));
  c.families.push_back(make_dilation_family(c));
  return c;
}

AtlasCase rational_d2_cp1() {
  const CurveSpec s = curve(1, 2, 0, {{0, 0, 0, 1.0}, {1, 2, 0, 1.0}});
  AtlasCase c = rational_case("rational-d2-cp1", "w = z^2 into CP^1; holomorphic of degree 2", s);
  add_unitary_families(c);
  c.families.push_back(coefficient_family(s, {{1, 0, 0, 1.0}}, "shift"));
  c.families.push_back(coefficient_family(s, {{1, 2, 0, 1.0}}, "scale"));
  c.families.push_back(make_dilation_family(c));
  // w = z^2 + t zbar, homogenized with bidegree (2, 1).
  CurveSpec anti = curve(1, 2, 1, {{0, 0, 0, 1.0}, {1, 2, 0, 1.0}});
  anti.at(1, 0, 1, 1) = 1.0;
  Family f = make_coefficient_variation(anti, CurveSpec(1, 2, 1, -1), "antiholomorphic");
  f.tag = FamilyTag::kNonJacobi;
  c.families.push_back(f);
  return c;
}

AtlasCase rational_d3_cp1() {
  const CurveSpec s = curve(1, 3, 0, {{0, 0, 0, 1.0}, {1, 3, 0, 1.0}, {1, 1, 0, 0.5}});
  AtlasCase c = rational_case("rational-d3-cp1", "w = z^3 + z/2 into CP^1; holomorphic of degree 3", s);
  add_unitary_families(c);
  c.families.push_back(coefficient_family(s, {{1, 1, 0, 1.0}}, "linear-term"));
  c.families.push_back(make_dilation_family(c));
  return c;
}

AtlasCase veronese_cp2() {
  const CurveSpec s = curve(2, 2, 0, {{0, 0, 0, 1.0}, {1, 1, 0, std::sqrt(2.0)}, {2, 2, 0, 1.0}});
  AtlasCase c = rational_case("veronese-cp2", "[1 : sqrt2 z : z^2] into CP^2; holomorphic, full", s);
  add_unitary_families(c);
  c.families.push_back(coefficient_family(s, {{1, 0, 0, 1.0}}, "shift"));
  c.families.push_back(make_dilation_family(c));
  return c;
}

AtlasCase rational_d3_cp2() {
  const CurveSpec s = curve(2, 3, 0, {{0, 0, 0, 1.0}, {1, 1, 0, 1.0}, {1, 2, 0, 2.0}, {2, 3, 0, 1.0}});
  AtlasCase c = rational_case("rational-d3-cp2", "[1 : z + 2z^2 : z^3] into CP^2; holomorphic of degree 3", s);
  add_unitary_families(c);
  c.families.push_back(coefficient_family(s, {{2, 2, 0, 1.0}}, "quadratic-term"));
  c.families.push_back(make_dilation_family(c));
  return c;
}

AtlasCase veronese_sequence_cp2() {
  const double r2 = std::sqrt(2.0);
  const CurveSpec s =
      curve(2, 1, 1, {{0, 0, 1, -r2}, {1, 0, 0, 1.0}, {1, 1, 1, -1.0}, {2, 1, 0, r2}});
  AtlasCase c = make_rational_map(s, "veronese-sequence-cp2");
  c.description = "[-sqrt2 zbar : 1 - |z|^2 : sqrt2 z] into CP^2; harmonic, neither holomorphic nor antiholomorphic";
  c.manifest = {true, true, true, true, false};
  add_unitary_families(c);
  c.families.push_back(make_dilation_family(c));
  return c;
}

AtlasCase flat_nonharmonic() {
  AtlasCase c;
  c.name = "flat-nonharmonic";
  c.description = "w = z + z^2 zbar / 10 into the flat plane; not harmonic (control)";
  c.target = std::make_shared<const TargetModel>(TargetModel::flat(2));
  c.map = {c.target, [](const DomainPoint& dp) {
             require_north(dp, "flat-nonharmonic");
             const Jet w = dp.u + dp.u * dp.u * dp.ubar * 0.1;
             const Jet wb = dp.ubar + dp.ubar * dp.ubar * dp.u * 0.1;
             return flat_real_coords(w, wb);
           }};
  c.patch = true;
  c.controls = {"tension", "dbar-holomorphicity"};
  return c;
}

AtlasCase flat_nonisotropic() {
  AtlasCase c;
  c.name = "flat-nonisotropic";
  c.description = "(Re z^2, Im z^2 + 0.3 Re z) into the flat plane; harmonic, not conformal (control)";
  c.target = std::make_shared<const TargetModel>(TargetModel::flat(2));
  c.map = {c.target, [](const DomainPoint& dp) {
             require_north(dp, "flat-nonisotropic");
             const Jet w = dp.u * dp.u, wb = dp.ubar * dp.ubar;
             JetVec r = flat_real_coords(w, wb);
             r[1] += (dp.u + dp.ubar) * 0.15;
             return r;
           }};
  c.manifest = {true, false, false, false, false};
  c.patch = true;
  c.controls = {"real-isotropy"};
  c.families.push_back(make_dilation_family(c));
  return c;
}

JetVec squash_map(const TargetModel& m, const DomainPoint& dp) {
  return embed_project(m, JetVec{dp.x[0], dp.x[1], dp.x[2] * 2.0});
}

AtlasCase squash_s2() {
  AtlasCase c;
  c.name = "squash-s2";
  c.description = "normalize(x1, x2, 2 x3) on the unit sphere; not harmonic, not conformal (control)";
  c.target = std::make_shared<const TargetModel>(TargetModel::space_form_embedded(3, 1.0));
  auto target = c.target;
  c.map = {c.target, [target](const DomainPoint& dp) { return squash_map(*target, dp); }};
  c.controls = {"tension", "real-isotropy", "theta-span"};
  // phi + t tau(phi), projected back to the sphere.
  Family descent;
  descent.name = "tension-descent";
  descent.tag = FamilyTag::kNonJacobi;
  descent.spec = {c.target, [target](const DomainPoint& dp) {
                    const JetOrder o = dp.u.order();
                    const JetOrder hi{o.z + 1, o.zbar + 1, 0};
                    const DomainPoint dq = make_domain_point(dp.chart, dp.u.value(), hi);
                    const MapGerm p{target.get(), dp.chart, squash_map(*target, dq)};
                    const FieldGerm tau = tension_normalized(p, dq);
                    const JetVec phi = squash_map(*target, dp);
                    JetVec out;
                    for (std::size_t i = 0; i < phi.size(); ++i) {
                      const Jet ti = lift(tau.comps[i].truncated({o.z, o.zbar, 0}), o);
                      out.push_back(phi[i] + dp.t * ti);
                    }
                    return embed_project(*target, out);
                  }};
  c.families.push_back(descent);
  return c;
}

AtlasCase mixed_cp2() {
  const CurveSpec s = curve(2, 1, 1, {{0, 0, 0, 1.0}, {0, 1, 1, 1.0}, {1, 1, 0, 1.0}, {2, 0, 1, 1.0}});
  AtlasCase c = make_rational_map(s, "mixed-cp2");
  c.description = "[1 + |z|^2 : z : zbar] into CP^2; not harmonic, not complex isotropic (control)";
  c.manifest = {};
  c.controls = {"tension", "complex-isotropy"};
  return c;
}

}  // namespace

const char* to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::kJacobi: return "jacobi";
    case FamilyTag::kNonJacobi: return "non-jacobi";
    case FamilyTag::kReparametrization: return "reparametrization";
    case FamilyTag::kChartLinear: return "chart-linear";
  }
  return "?";
}

bool is_jacobi(const Family& f) { return f.tag == FamilyTag::kJacobi || f.tag == FamilyTag::kReparametrization; }

bool AtlasCase::is_control_for(const std::string& check) const {
  return std::find(controls.begin(), controls.end(), check) != controls.end();
}

CurveSpec::CurveSpec(int n_, int dz, int dzb, int den)
    : n(n_), deg_z(dz), deg_zbar(dzb), denominator(den),
      coef(static_cast<std::size_t>((n_ + 1) * (dz + 1) * (dzb + 1))) {
  if (n_ < 1 || dz < 0 || dzb < 0 || den < -1 || den > n_) {
    throw Error(ErrorKind::kRejectedInput, "invalid curve shape");
  }
}

cplx& CurveSpec::at(int k, int p, int q, int j) {
  if (k < 0 || k > n || p < 0 || p > deg_z || q < 0 || q > deg_zbar || j < 0 || j > 2) {
    throw Error(ErrorKind::kRejectedInput, "curve coefficient index out of range");
  }
  return coef[static_cast<std::size_t>((k * (deg_z + 1) + p) * (deg_zbar + 1) + q)][static_cast<std::size_t>(j)];
}

cplx CurveSpec::at(int k, int p, int q, int j) const { return const_cast<CurveSpec*>(this)->at(k, p, q, j); }

JetVec curve_homogeneous(const CurveSpec& c, const DomainPoint& dp) {
  const bool north = dp.chart == Chart::kNorth;
  const int dmax = std::max(c.deg_z, c.deg_zbar);
  std::vector<Jet> up{dp.u * 0.0 + 1.0}, ubp{dp.u * 0.0 + 1.0};
  for (int p = 1; p <= dmax; ++p) {
    up.push_back(up.back() * dp.u);
    ubp.push_back(ubp.back() * dp.ubar);
  }
  const Jet t2 = dp.t * dp.t;
  JetVec P, Pbar;
  for (int k = 0; k <= c.n; ++k) {
    Jet acc = dp.u * 0.0, accbar = acc;
    for (int p = 0; p <= c.deg_z; ++p)
      for (int q = 0; q <= c.deg_zbar; ++q) {
        const cplx c0 = c.at(k, p, q, 0), c1 = c.at(k, p, q, 1), c2 = c.at(k, p, q, 2);
        if (c0 == cplx{} && c1 == cplx{} && c2 == cplx{}) continue;
        const auto a = static_cast<std::size_t>(north ? p : c.deg_z - p);
        const auto b = static_cast<std::size_t>(north ? q : c.deg_zbar - q);
        Jet coeff = dp.t * c1 + c0;
        Jet coeffbar = dp.t * std::conj(c1) + std::conj(c0);
        if (c2 != cplx{}) {
          coeff += t2 * c2;
          coeffbar += t2 * std::conj(c2);
        }
        acc += up[a] * ubp[b] * coeff;
        accbar += ubp[a] * up[b] * coeffbar;
      }
    P.push_back(acc);
    Pbar.push_back(accbar);
  }
  return concat(P, Pbar);
}

int affine_chart_index(const JetVec& PP) {
  const std::size_t m = PP.size() / 2;
  std::size_t best = 0;
  for (std::size_t k = 1; k < m; ++k)
    if (std::abs(PP[k].value()) > std::abs(PP[best].value())) best = k;
  return static_cast<int>(best);
}

JetVec dehomogenize(const JetVec& PP, int denominator) {
  const std::size_t m = PP.size() / 2;
  const auto d = static_cast<std::size_t>(denominator < 0 ? affine_chart_index(PP) : denominator);
  const Jet inv = reciprocal(PP[d]);
  const Jet invbar = reciprocal(PP[m + d]);
  JetVec w, wbar;
  for (std::size_t k = 0; k < m; ++k) {
    if (k == d) continue;
    w.push_back(PP[k] * inv);
    wbar.push_back(PP[m + k] * invbar);
  }
  return concat(w, wbar);
}

AtlasCase make_rational_map(const CurveSpec& curve, const std::string& name) {
  AtlasCase c;
  c.name = name;
  c.description = "rational curve into CP^" + std::to_string(curve.n);
  c.target = std::make_shared<const TargetModel>(TargetModel::complex_space_form_fs(curve.n));
  c.homogeneous = [curve](const DomainPoint& dp) { return curve_homogeneous(curve, dp); };
  c.denominator = curve.denominator;
  c.deg_z = curve.deg_z;
  c.deg_zbar = curve.deg_zbar;
  const int den = curve.denominator;
  c.map = {c.target, [curve, den](const DomainPoint& dp) { return dehomogenize(curve_homogeneous(curve, dp), den); }};
  c.manifest = {true, true, true, true, true};
  return c;
}

AtlasCase make_veronese_s4() {
  AtlasCase c;
  c.name = "veronese-s4";
  c.description = "degree-2 Veronese immersion of S^2 into the unit S^4; harmonic, real isotropic";
  c.target = std::make_shared<const TargetModel>(TargetModel::space_form_embedded(5, 1.0));
  auto target = c.target;
  c.map = {c.target, [target](const DomainPoint& dp) { return embed_project(*target, veronese_s4_ambient(dp)); }};
  c.manifest = {true, true, true, false, false};
  c.families = isometry_families(c, {
      {"rotation-12", skew5({1, 0, 0, 0, 0, 0, 0, 0, 0, 0})},
      {"rotation-generic", skew5({0.3, -0.5, 0.2, 0.7, 0.1, -0.4, 0.6, 0.25, -0.35, 0.45})},
  });
  c.families.push_back(make_dilation_family(c));
  // Bump-localized field along e1.
  Family bump;
  bump.name = "bump";
  bump.tag = FamilyTag::kNonJacobi;
  bump.spec = {c.target, [target](const DomainPoint& dp) {
                 const double x0[3] = {0.6, 0.0, 0.8};
                 Jet r2 = dp.x[0] * 0.0;
                 for (int i = 0; i < 3; ++i) {
                   const Jet d = dp.x[static_cast<std::size_t>(i)] - x0[i];
                   r2 += d * d;
                 }
                 JetVec phi = embed_project(*target, veronese_s4_ambient(dp));
                 phi[0] += dp.t * exp(r2 * -4.0);
                 return embed_project(*target, phi);
               }};
  c.families.push_back(bump);

  // Transcription guard: the formula must be harmonic.
  const QuadratureGrid g = make_sphere_grid(8, 16);
  double worst = 0.0;
  for (const GridNode& n : g.nodes) {
    const DomainPoint dp = make_domain_point(n.chart, n.u, {1, 1, 0});
    const MapGerm p = evaluate(c.map, dp);
    worst = std::max(worst, field_norm(p, tension_normalized(p, dp)));
  }
  if (!(worst <= 1e-9)) {
    throw Error(ErrorKind::kPreconditionViolation, "veronese-s4 self-check failed: tension " + std::to_string(worst));
  }
  return c;
}

Family make_isometry_variation(const AtlasCase& c, const Generator& A, const std::string& name) {
  const TargetModel& m = *c.target;
  const std::size_t n = A.size();
  for (const auto& row : A)
    if (row.size() != n) throw Error(ErrorKind::kRejectedInput, "generator must be square");
  double norm = 0.0;
  for (const auto& row : A)
    for (cplx v : row) norm = std::max(norm, std::abs(v));
  const double tol = 1e-14 * std::max(1.0, norm);
  Family f;
  f.name = name;
  f.tag = FamilyTag::kJacobi;
  if (m.kind() == TargetKind::kSpaceFormEmbedded) {
    if (n != static_cast<std::size_t>(m.dim())) throw Error(ErrorKind::kRejectedInput, "generator size mismatch");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(A[i][j].imag()) > tol || std::abs(A[i][j] + A[j][i]) > tol) {
          throw Error(ErrorKind::kRejectedInput, "generator is not skew-symmetric");
        }
    const MapSpec base = c.map;
    f.spec = {c.target, [base, A](const DomainPoint& dp) { return apply_flow(A, base.fn(dp), dp.t); }};
    const Eigen::MatrixXcd G = to_eigen(A);
    f.at_parameter = [base, G](double t0) {
      const Eigen::MatrixXcd M = (G * t0).exp();
      return MapSpec{base.target, [base, M](const DomainPoint& dp) { return apply_matrix(M, base.fn(dp)); }};
    };
    return f;
  }
  if (m.kind() == TargetKind::kComplexSpaceFormFS) {
    if (n != static_cast<std::size_t>(m.complex_dim() + 1) || !c.homogeneous) {
      throw Error(ErrorKind::kRejectedInput, "generator size mismatch");
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(A[i][j] + std::conj(A[j][i])) > tol) {
          throw Error(ErrorKind::kRejectedInput, "generator is not skew-Hermitian");
        }
    const HomogeneousFn hom = c.homogeneous;
    const int den = c.denominator;
    f.spec = {c.target, [hom, den, A](const DomainPoint& dp) { return dehomogenize(apply_flow(A, hom(dp), dp.t), den); }};
    const Eigen::MatrixXcd G = to_eigen(A);
    auto target = c.target;
    f.at_parameter = [target, hom, den, G](double t0) {
      const Eigen::MatrixXcd M = (G * t0).exp();
      return MapSpec{target, [hom, den, M](const DomainPoint& dp) { return dehomogenize(apply_matrix(M, hom(dp)), den); }};
    };
    return f;
  }
  throw Error(ErrorKind::kUnsupportedTarget, "isometry variations need a sphere or CP^n target");
}

Family make_coefficient_variation(const CurveSpec& base, const CurveSpec& direction, const std::string& name) {
  if (base.n != direction.n || base.deg_z != direction.deg_z || base.deg_zbar != direction.deg_zbar) {
    throw Error(ErrorKind::kRejectedInput, "coefficient direction shape mismatch");
  }
  CurveSpec s = base;
  for (std::size_t i = 0; i < s.coef.size(); ++i) s.coef[i][1] += direction.coef[i][0];
  Family f;
  f.name = name;
  f.tag = FamilyTag::kJacobi;
  auto target = std::make_shared<const TargetModel>(TargetModel::complex_space_form_fs(s.n));
  const int den = s.denominator;
  f.spec = {target, [s, den](const DomainPoint& dp) { return dehomogenize(curve_homogeneous(s, dp), den); }};
  return f;
}

Family make_dilation_family(const AtlasCase& c) {
  Family f;
  f.name = "dilation";
  f.tag = FamilyTag::kReparametrization;
  const MapSpec base = c.map;
  f.spec = {c.target, [base](const DomainPoint& dp) {
              DomainPoint q = dp;
              const double s = dp.chart == Chart::kNorth ? 1.0 : -1.0;
              const Jet e = exp(dp.t * s);
              q.u = dp.u * e;
              q.ubar = dp.ubar * e;
              refresh_ambient(q);
              return base.fn(q);
            }};
  return f;
}

Family make_chart_linear_family(const AtlasCase& c, std::uint64_t seed, int index) {
  const TargetModel& m = *c.target;
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(name_hash(c.name) + static_cast<std::uint64_t>(index))));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  // CP^n perturbs the homogeneous coordinates, so the field is smooth on all of S^2.
  const bool homogeneous = static_cast<bool>(c.homogeneous);
  const int ncomp = homogeneous ? m.complex_dim() + 1 : m.dim();
  std::vector<std::vector<cplx>> coef(static_cast<std::size_t>(ncomp), std::vector<cplx>(10));
  for (auto& row : coef)
    for (auto& v : row) {
      const double re = u(rng);
      const double im = homogeneous ? u(rng) : 0.0;
      v = 0.5 * cplx(re, im);
    }
  Family f;
  f.name = "chart-linear-" + std::to_string(index);
  f.tag = FamilyTag::kChartLinear;
  const MapSpec base = c.map;
  const HomogeneousFn hom = c.homogeneous;
  const int den = c.denominator;
  const int dz = c.deg_z, dzb = c.deg_zbar;
  f.spec = {c.target, [base, hom, den, dz, dzb, coef](const DomainPoint& dp) {
              const auto mono = ambient_monomials(dp);
              const std::size_t n = coef.size();
              if (hom) {
                // The south-chart lift is zeta^dz zetabar^dzb times the north one.
                Jet h = dp.t, hbar = dp.t;
                if (dp.chart == Chart::kSouth) {
                  for (int a = 0; a < dz; ++a) {
                    h = h * dp.u;
                    hbar = hbar * dp.ubar;
                  }
                  for (int b = 0; b < dzb; ++b) {
                    h = h * dp.ubar;
                    hbar = hbar * dp.u;
                  }
                }
                JetVec PP = hom(dp);
                for (std::size_t i = 0; i < n; ++i) {
                  std::vector<cplx> cc = coef[i];
                  for (auto& v : cc) v = std::conj(v);
                  PP[i] += poly_eval(mono, coef[i]) * h;
                  PP[n + i] += poly_eval(mono, cc) * hbar;
                }
                return dehomogenize(PP, den);
              }
              JetVec phi = base.fn(dp);
              for (std::size_t i = 0; i < n; ++i) phi[i] += poly_eval(mono, coef[i]) * dp.t;
              if (base.target->kind() == TargetKind::kSpaceFormEmbedded) return embed_project(*base.target, phi);
              return phi;
            }};
  return f;
}

std::vector<ControlSpec> make_negative_controls() {
  return {
      {"veronese-s4", "bump", "jacobi"},
      {"rational-d2-cp1", "antiholomorphic", "holomorphic-field"},
      {"flat-nonharmonic", "", "tension"},
      {"flat-nonharmonic", "", "dbar-holomorphicity"},
      {"flat-nonisotropic", "", "real-isotropy"},
      {"squash-s2", "", "tension"},
      {"squash-s2", "", "real-isotropy"},
      {"squash-s2", "chart-linear", "theta-span"},
      {"mixed-cp2", "", "tension"},
      {"mixed-cp2", "", "complex-isotropy"},
  };
}

const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names = {
      "identity-s2",     "veronese-s4",           "rational-d1-cp1",  "rational-d2-cp1",
      "rational-d3-cp1", "veronese-cp2",          "rational-d3-cp2",  "veronese-sequence-cp2",
      "flat-nonharmonic", "flat-nonisotropic",    "squash-s2",        "mixed-cp2",
  };
  return names;
}

AtlasCase make_case(const std::string& name) {
  if (name == "identity-s2") return identity_s2();
  if (name == "veronese-s4") return make_veronese_s4();
  if (name == "rational-d1-cp1") return rational_d1_cp1();
  if (name == "rational-d2-cp1") return rational_d2_cp1();
  if (name == "rational-d3-cp1") return rational_d3_cp1();
  if (name == "veronese-cp2") return veronese_cp2();
  if (name == "rational-d3-cp2") return rational_d3_cp2();
  if (name == "veronese-sequence-cp2") return veronese_sequence_cp2();
  if (name == "flat-nonharmonic") return flat_nonharmonic();
  if (name == "flat-nonisotropic") return flat_nonisotropic();
  if (name == "squash-s2") return squash_s2();
  if (name == "mixed-cp2") return mixed_cp2();
  throw Error(ErrorKind::kUnknownName, "unknown case '" + name + "'");
}

void validate_case(const AtlasCase& c, const QuadratureGrid& grid) {
  for (const GridNode& n : grid.nodes) {
    const DomainPoint dp = make_domain_point(n.chart, n.u, {0, 0, 0});
    if (c.homogeneous) {
      const JetVec PP = c.homogeneous(dp);
      const JetVec P = first_half(PP);
      double norm = 0.0;
      for (const Jet& j : P) norm += std::norm(j.value());
      norm = std::sqrt(norm);
      const int k = c.denominator < 0 ? affine_chart_index(PP) : c.denominator;
      const double den = std::abs(P[static_cast<std::size_t>(k)].value());
      if (!(norm > 0.0) || !(den >= kChartMargin * norm)) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s: node %d (%s chart, u = %.6g%+.6gi) leaves the affine chart", c.name.c_str(),
                      n.index, to_string(n.chart), n.u.real(), n.u.imag());
        throw Error(ErrorKind::kChartDomain, buf);
      }
    }
    const MapGerm p = evaluate(c.map, dp);
    c.target->require_in_domain(p.comps);
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace hjlab
