#include <cmath>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "hjlab/atlas.hpp"
#include "hjlab/isotropy.hpp"

using namespace hjlab;

namespace {

const cplx I{0.0, 1.0};

std::vector<cplx> probe_points() { return {{0.15, 0.2}, {-0.6, 0.45}, {0.9, -0.3}, {0.0, -0.95}}; }

const Family& family(const AtlasCase& c, const std::string& name) {
  for (const Family& f : c.families)
    if (f.name == name) return f;
  throw std::runtime_error("no family " + name);
}

// Flat map given by a complex coordinate w(z, zbar) and its conjugate.
MapSpec flat_complex(std::function<Jet(const Jet&, const Jet&)> w) {
  auto t = std::make_shared<const TargetModel>(TargetModel::flat(2));
  return {t, [w](const DomainPoint& dp) {
            const Jet a = w(dp.u, dp.ubar);
            const Jet b = w(dp.ubar, dp.u);  // conj(w) for real coefficients
            return JetVec{(a + b) * 0.5, (a - b) * (-0.5 * I)};
          }};
}

// d/dz and d/dzbar by central differences in x and y.
template <class F>
std::pair<cplx, cplx> wirtinger_fd(F f, cplx z, double h) {
  const cplx fx = (f(z + h) - f(z - h)) / (2.0 * h);
  const cplx fy = (f(z + I * h) - f(z - I * h)) / (2.0 * h);
  return {0.5 * (fx - I * fy), 0.5 * (fx + I * fy)};
}

}  // namespace

TEST(EtaReal, ConformalAndHolomorphicMaps) {
  for (const char* name : {"identity-s2", "rational-d2-cp1", "veronese-cp2", "rational-d3-cp2"}) {
    const AtlasCase c = make_case(name);
    for (const Chart ch : {Chart::kNorth, Chart::kSouth})
      for (const cplx u : probe_points())
        EXPECT_LE(std::abs(eta_real(evaluate(c.map, ch, u, {1, 0, 0})).value), 1e-10) << name;
  }
}

TEST(EtaReal, FlatHandComputation) {
  // phi = (Re z, 2 Im z): phi_z = (1/2, -i), eta = 1/4 + (-i)^2 = -3/4.
  auto t = std::make_shared<const TargetModel>(TargetModel::flat(2));
  const MapSpec phi{t, [](const DomainPoint& dp) { return JetVec{(dp.u + dp.ubar) * 0.5, (dp.u - dp.ubar) * -I}; }};
  for (const cplx u : probe_points()) {
    EXPECT_EQ(eta_real(evaluate(phi, Chart::kNorth, u, {1, 0, 0})).value, cplx(-0.75));
    // Finite-difference oracle on the components.
    const auto [x_z, x_zb] = wirtinger_fd([](cplx z) { return cplx(z.real()); }, u, 1e-4);
    const auto [y_z, y_zb] = wirtinger_fd([](cplx z) { return cplx(2.0 * z.imag()); }, u, 1e-4);
    EXPECT_LE(std::abs(x_z * x_z + y_z * y_z + 0.75), 1e-8);
  }
}

TEST(EtaReal, FlatHigherOrder) {
  // w = z + zbar^2/2: in complex coordinates <a,b> = (a_w b_wbar + a_wbar b_w)/2,
  // phi_z = (1, z), phi_zz = (0, 1), so eta_{1,1} = z and eta_{1,2} = 1/2.
  const MapSpec phi = flat_complex([](const Jet& z, const Jet& zb) { return z + zb * zb * 0.5; });
  for (const cplx u : probe_points()) {
    const MapGerm p = evaluate(phi, Chart::kNorth, u, {3, 1, 0});
    EXPECT_LE(std::abs(eta_real_rs(p, 1, 1).value - u), 1e-15);
    EXPECT_LE(std::abs(eta_real_rs(p, 1, 2).value - 0.5), 1e-15);
    EXPECT_LE(std::abs(eta_real_rs(p, 2, 1).value - 0.5), 1e-15);
    EXPECT_EQ(eta_real_rs(p, 1, 1).value, eta_real(p).value);
  }
  const MapGerm p = evaluate(phi, Chart::kNorth, 0.1, {1, 0, 0});
  try {
    (void)eta_real_rs(p, 1, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOrderExhausted);
  }
}

TEST(EtaReal, VeroneseIsRealIsotropic) {
  const AtlasCase c = make_case("veronese-s4");
  for (const Chart ch : {Chart::kNorth, Chart::kSouth})
    for (const cplx u : probe_points()) {
      const MapGerm p = evaluate(c.map, ch, u, {6, 1, 0});
      const auto chain = dz_chain(p, 5);
      for (int r = 1; r <= 5; ++r)
        for (int s = 1; r + s <= 6; ++s) {
          const DifferentialSample e = eta_real_rs(chain, p, r, s);
          EXPECT_LE(std::abs(e.value), 1e-8) << r << "," << s;
          EXPECT_LE(std::abs(dbar_of_eta(p, r, s, EtaKind::kReal).dbar_residual), 1e-8);
        }
    }
}

TEST(JReal, JacobiFieldsPreserveIsotropy) {
  const AtlasCase c = make_case("veronese-s4");
  const Family& rot = family(c, "rotation-generic");
  for (const cplx u : probe_points()) {
    const MapGerm g = evaluate(rot.spec, Chart::kNorth, u, {6, 1, 1});
    const MapGerm p = at_t0(g);
    const FieldGerm v = t_derivative(g);
    for (int r = 1; r <= 5; ++r)
      for (int s = 1; r + s <= 6; ++s) EXPECT_LE(std::abs(j_real_rs(p, v, r, s).value), 1e-7);
    // Identity: j_{1,1} = 2 <Dv/dz, d phi/dz>.
    EXPECT_LE(std::abs(j_real_rs(p, v, 1, 1).value - 2.0 * conformal_field_test(p, v).value), 1e-14);
    FieldGerm zero{vec_zero_like(v.comps), FieldType::kRealSection};
    EXPECT_EQ(j_real_rs(p, zero, 2, 3).value, cplx(0.0));
    // d/dzbar d/dt eta along the family.
    for (int r = 1; r <= 3; ++r) EXPECT_LE(std::abs(dbar_of_eta(g, r, 1, EtaKind::kReal).dbar_dt), 1e-7);
  }
}

TEST(Conformal, JacobiReparametrizationAndBump) {
  const AtlasCase c = make_case("veronese-s4");
  for (const char* fam : {"rotation-12", "dilation"}) {
    for (const cplx u : probe_points()) {
      const MapGerm g = evaluate(family(c, fam).spec, Chart::kNorth, u, {1, 0, 1});
      EXPECT_LE(std::abs(conformal_field_test(at_t0(g), t_derivative(g)).value), 1e-9) << fam;
    }
  }
  double worst = 0.0;
  for (double x = 0.1; x < 0.6; x += 0.05) {
    const MapGerm g = evaluate(family(c, "bump").spec, Chart::kNorth, {x, 0.05}, {1, 0, 1});
    worst = std::max(worst, std::abs(conformal_field_test(at_t0(g), t_derivative(g)).value));
  }
  EXPECT_GE(worst, 1e-3);
}

TEST(EtaComplex, HolomorphicAndVeroneseSequence) {
  for (const char* name : {"rational-d3-cp1", "veronese-cp2", "veronese-sequence-cp2"}) {
    const AtlasCase c = make_case(name);
    for (const Chart ch : {Chart::kNorth, Chart::kSouth})
      for (const cplx u : probe_points()) {
        const MapGerm p = evaluate(c.map, ch, u, {5, 5, 0});
        const auto zc = dz_hol_chain(p, 5), zbc = dzbar_hol_chain(p, 5);
        for (int r = 1; r <= 5; ++r)
          for (int s = 1; r + s <= 6; ++s) EXPECT_LE(std::abs(eta_cx_rs(zc, zbc, p, r, s).value), 1e-8) << name;
      }
  }
  const AtlasCase mixed = make_case("mixed-cp2");
  EXPECT_GE(std::abs(eta_cx_rs(evaluate(mixed.map, Chart::kNorth, {0.5, 0.2}, {1, 1, 0}), 1, 1).value), 1e-3);
  EXPECT_THROW(eta_cx_rs(evaluate(make_case("identity-s2").map, Chart::kNorth, 0.1, {1, 1, 0}), 1, 1), Error);
}

TEST(JComplex, JacobiAlongHolomorphic) {
  const AtlasCase c = make_case("rational-d3-cp2");
  for (const Family& f : c.families) {
    if (!is_jacobi(f)) continue;
    for (const cplx u : probe_points()) {
      const MapGerm g = evaluate(f.spec, Chart::kNorth, u, {5, 5, 1});
      const MapGerm p = at_t0(g);
      const FieldGerm v = t_derivative(g);
      for (int r = 1; r <= 5; ++r)
        for (int s = 1; r + s <= 6; ++s) EXPECT_LE(std::abs(j_cx_rs(p, v, r, s).value), 1e-7) << f.name;
    }
  }
}

TEST(HolomorphicField, Examples) {
  const AtlasCase c = make_case("veronese-cp2");
  for (const cplx u : probe_points()) {
    const MapGerm p = evaluate(c.map, Chart::kNorth, u, {2, 2, 0});
    const FieldGerm dz = d_z(p);
    const FieldGerm v = field_add(dz, conjugate(p, dz));
    EXPECT_LE(max_abs_value(holomorphic_field_residual(p, v).comps), 1e-9);
  }
  for (const Family& f : c.families) {
    if (!is_jacobi(f)) continue;
    for (const cplx u : probe_points()) {
      const MapGerm g = evaluate(f.spec, Chart::kSouth, u, {1, 1, 1});
      EXPECT_LE(max_abs_value(holomorphic_field_residual(at_t0(g), t_derivative(g)).comps), 1e-8) << f.name;
    }
  }
  const AtlasCase d2 = make_case("rational-d2-cp1");
  double worst = 0.0;
  for (const cplx u : probe_points()) {
    const MapGerm g = evaluate(family(d2, "antiholomorphic").spec, Chart::kNorth, u, {1, 1, 1});
    worst = std::max(worst, max_abs_value(holomorphic_field_residual(at_t0(g), t_derivative(g)).comps));
  }
  EXPECT_GE(worst, 1e-3);
}

TEST(DbarEta, FlatFiniteDifference) {
  // w = z + z^2 zbar: eta = w_z wbar_z = (1 + 2|z|^2) zbar^2.
  const MapSpec phi = flat_complex([](const Jet& z, const Jet& zb) { return z + z * z * zb; });
  for (const cplx u : probe_points()) {
    const MapGerm p = evaluate(phi, Chart::kNorth, u, {1, 1, 0});
    const cplx d = dbar_of_eta(p, 1, 1, EtaKind::kReal).dbar_residual;
    const cplx zb = std::conj(u);
    EXPECT_LE(std::abs(d - (2.0 * u * zb * zb + (1.0 + 2.0 * std::norm(u)) * 2.0 * zb)), 1e-14);
    const auto eta_at = [&](cplx z) { return eta_real(evaluate(phi, Chart::kNorth, z, {1, 0, 0})).value; };
    EXPECT_LE(std::abs(d - wirtinger_fd(eta_at, u, 1e-4).second), 1e-6);
    EXPECT_GT(std::abs(d), 0.1);
  }
}

TEST(SpanDecomposition, ComplexSpaceForms) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (const char* name : {"rational-d2-cp1", "veronese-cp2", "veronese-sequence-cp2", "mixed-cp2"}) {
    const AtlasCase c = make_case(name);
    for (const cplx u : probe_points()) {
      const MapGerm p = evaluate(c.map, Chart::kNorth, u, {2, 1, 0});
      FieldGerm X;
      for (int i = 0; i < c.target->dim(); ++i)
        X.comps.push_back(Jet::constant(p.order(), p.base(), {d(rng), d(rng)}));
      for (int k = 1; k <= 2; ++k) EXPECT_LE(lemma45_decompose(p, X, k).residual, 1e-9) << name << " k=" << k;
      EXPECT_LE(lemma45_decompose(p, d_z(p), 2).residual, 1e-15);
    }
  }
  EXPECT_THROW(lemma45_decompose(evaluate(make_case("identity-s2").map, Chart::kNorth, 0.1, {2, 1, 0}),
                                 FieldGerm{}, 1),
               Error);
}

TEST(ThetaSpan, Induction) {
  const AtlasCase c = make_case("veronese-s4");
  for (const Family& f : c.families) {
    if (!is_jacobi(f)) continue;
    for (const cplx u : probe_points()) {
      const MapGerm g = evaluate(f.spec, Chart::kNorth, u, {3, 0, 1});
      EXPECT_EQ(theta_span_check(g, 1).residual, 0.0);
      for (int k = 2; k <= 3; ++k) EXPECT_LE(theta_span_check(g, k).residual, 1e-8) << f.name;
    }
  }
}

TEST(ChartTransition, QuadraticDifferential) {
  // eta^R_{1,1} dz^2 is a global quadratic differential: eta_south = eta_north (dz/dzeta)^2.
  const AtlasCase c = make_case("squash-s2");
  for (const cplx z : {cplx(0.8, 0.6), cplx(-1.2, 0.5), cplx(0.3, -0.9)}) {
    const cplx en = eta_real(evaluate(c.map, Chart::kNorth, z, {1, 0, 0})).value;
    const cplx es = eta_real(evaluate(c.map, Chart::kSouth, chart_coordinate(Chart::kSouth, z), {1, 0, 0})).value;
    const cplx dz_dzeta = 1.0 / transition_derivative(z);
    EXPECT_LE(std::abs(es - en * dz_dzeta * dz_dzeta), 1e-12 * (1.0 + std::abs(en)));
    EXPECT_GT(std::abs(en), 1e-3);
  }
}
