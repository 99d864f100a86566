#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hjlab/target.hpp"

using namespace hjlab;

namespace {

const JetOrder k0{0, 0, 0};

JetVec cvec(const std::vector<cplx>& v) {
  JetVec out;
  for (const cplx x : v) out.push_back(Jet::constant(k0, 0.0, x));
  return out;
}

std::vector<cplx> values(const JetVec& v) {
  std::vector<cplx> out;
  for (const Jet& j : v) out.push_back(j.value());
  return out;
}

double dist(const JetVec& a, const JetVec& b) { return max_abs_value(vec_sub(a, b)); }

std::vector<cplx> random_c(std::mt19937_64& rng, int n, double r = 1.0) {
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<cplx> v;
  for (int i = 0; i < n; ++i) v.emplace_back(u(rng), u(rng));
  return v;
}

std::vector<cplx> random_r(std::mt19937_64& rng, int n, double r = 1.0) {
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<cplx> v;
  for (int i = 0; i < n; ++i) v.emplace_back(u(rng), 0.0);
  return v;
}

// Chart point (w, wbar) of CP^n.
std::vector<cplx> fs_point(const std::vector<cplx>& w) {
  std::vector<cplx> p = w;
  for (const cplx x : w) p.push_back(std::conj(x));
  return p;
}

}  // namespace

TEST(Target, FubiniStudyMetricValues) {
  const TargetModel fs = TargetModel::complex_space_form_fs(1);
  // The |dw|^2 coefficient is twice the bilinear h(d/dw, d/dwbar).
  const std::vector<Jet> h0 = fs.metric(cvec(fs_point({0.0})));
  EXPECT_NEAR(2.0 * h0[1].value().real(), 1.0, 1e-15);
  EXPECT_EQ(h0[0].value(), cplx(0.0));
  const std::vector<Jet> h1 = fs.metric(cvec(fs_point({std::polar(1.0, 0.7)})));
  EXPECT_NEAR(2.0 * h1[1].value().real(), 0.25, 1e-15);
  EXPECT_NEAR(std::abs(h1[1].value() - h1[2].value()), 0.0, 1e-16);
  // Real unit vector d/dx at the origin.
  EXPECT_NEAR(std::abs(fs.pair_value(fs_point({0.0}), {1.0, 1.0}, {1.0, 1.0}) - 1.0), 0.0, 1e-15);
}

TEST(Target, FlatMetricAndChristoffels) {
  const TargetModel flat = TargetModel::flat(3);
  const JetVec p = cvec({0.3, -1.2, 4.0});
  const std::vector<Jet> h = flat.metric(p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(h[static_cast<std::size_t>(i * 3 + j)].value(), cplx(i == j ? 1.0 : 0.0));
  for (const Jet& g : flat.christoffels(p)) EXPECT_EQ(g.value(), cplx(0.0));
  const JetVec X = cvec({1.0, 2.0, 3.0}), Y = cvec({0.0, 1.0, -1.0});
  EXPECT_EQ(max_abs_value(flat.curvature(p, X, Y, X)), 0.0);
  EXPECT_THROW(flat.curvature_numeric(p, X, Y, X), Error);
}

TEST(Target, FubiniStudyChristoffels) {
  const TargetModel fs = TargetModel::complex_space_form_fs(1);
  for (const Jet& g : fs.christoffels(cvec(fs_point({0.0})))) EXPECT_LE(std::abs(g.value()), 1e-15);
  const JetVec p = cvec(fs_point({0.5}));
  const std::vector<Jet> a = fs.christoffels(p), b = fs.christoffels_numeric(p);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(std::abs(a[i].value() - b[i].value()), 1e-12) << i;
  // Closed form on CP^1: Gamma^w_ww = -2 wbar / (1 + |w|^2).
  EXPECT_NEAR(std::abs(a[0].value() - (-2.0 * 0.5 / 1.25)), 0.0, 1e-14);
}

TEST(Target, KahlerMixedChristoffelsVanish) {
  std::mt19937_64 rng(11);
  const TargetModel fs = TargetModel::complex_space_form_fs(2);
  const int d = fs.dim(), n = d / 2;
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<Jet> g = fs.christoffels_numeric(cvec(fs_point(random_c(rng, 2, 1.5))));
    for (int A = 0; A < d; ++A)
      for (int B = 0; B < d; ++B)
        for (int C = 0; C < d; ++C) {
          const bool same = (A < n) == (B < n) && (B < n) == (C < n);
          if (same) continue;
          EXPECT_LE(std::abs(g[static_cast<std::size_t>((A * d + B) * d + C)].value()), 1e-12);
        }
  }
}

TEST(Target, SpaceFormCurvatureExamples) {
  Pairing dot3 = [](const JetVec& a, const JetVec& b) { return dot(a, b); };
  const JetVec e1 = cvec({1.0, 0.0, 0.0}), e2 = cvec({0.0, 1.0, 0.0});
  EXPECT_EQ(dist(curvature_space_form(1.0, e1, e2, e2, dot3), e1), 0.0);
  std::mt19937_64 rng(12);
  const JetVec X = cvec(random_r(rng, 3)), Z = cvec(random_r(rng, 3));
  EXPECT_LE(max_abs_value(curvature_space_form(1.0, X, X, Z, dot3)), 1e-15);
  EXPECT_EQ(max_abs_value(curvature_space_form(0.0, X, e2, Z, dot3)), 0.0);
}

TEST(Target, HolomorphicSectionalCurvature) {
  std::mt19937_64 rng(13);
  for (const double c4 : {4.0, 1.5}) {
    const TargetModel fs = TargetModel::complex_space_form_fs(2, c4);
    for (int trial = 0; trial < 10; ++trial) {
      const JetVec p = cvec(fs_point(random_c(rng, 2)));
      const std::vector<cplx> a = random_c(rng, 2);
      const JetVec X = cvec(fs_point(a));  // real vector: (a, conj a)
      const JetVec JX = fs.complex_structure(X);
      const double xx = fs.pair(p, X, X).value().real();
      const double jj = fs.pair(p, JX, JX).value().real();
      const double xj = fs.pair(p, X, JX).value().real();
      const double num = fs.pair(p, fs.curvature(p, X, JX, JX), X).value().real();
      EXPECT_NEAR(num / (xx * jj - xj * xj), c4, 1e-12 * c4);
      EXPECT_LE(max_abs_value(fs.curvature(p, X, X, JX)), 1e-14);
    }
  }
}

TEST(Target, ComplexSpaceFormReducesOnCP1) {
  std::mt19937_64 rng(14);
  const TargetModel fs = TargetModel::complex_space_form_fs(1);
  for (int trial = 0; trial < 20; ++trial) {
    const JetVec p = cvec(fs_point(random_c(rng, 1, 2.0)));
    const JetVec X = cvec(random_c(rng, 2)), Y = cvec(random_c(rng, 2)), Z = cvec(random_c(rng, 2));
    const Pairing inner = [&](const JetVec& a, const JetVec& b) { return fs.pair(p, a, b); };
    const JetVec real_form = curvature_space_form(4.0, X, Y, Z, inner);
    EXPECT_LE(dist(fs.curvature(p, X, Y, Z), real_form), 1e-12);
  }
}

TEST(Target, ClosedFormMatchesNumeric) {
  std::mt19937_64 rng(15);
  const TargetModel sf = TargetModel::space_form_chart(2, 1.0);
  const TargetModel fs = TargetModel::complex_space_form_fs(2, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    const JetVec p = cvec(random_r(rng, 2));
    const JetVec X = cvec(random_c(rng, 2)), Y = cvec(random_c(rng, 2)), Z = cvec(random_c(rng, 2));
    EXPECT_LE(dist(sf.curvature(p, X, Y, Z), sf.curvature_numeric(p, X, Y, Z)), 1e-9);

    const JetVec q = cvec(fs_point(random_c(rng, 2)));
    const JetVec U = cvec(random_c(rng, 4)), V = cvec(random_c(rng, 4)), W = cvec(random_c(rng, 4));
    EXPECT_LE(dist(fs.curvature(q, U, V, W), fs.curvature_numeric(q, U, V, W)), 1e-9);
  }
}

TEST(Target, FirstBianchi) {
  std::mt19937_64 rng(16);
  const std::vector<TargetModel> models = {TargetModel::space_form_chart(3, 0.7),
                                           TargetModel::space_form_embedded(3, 1.0),
                                           TargetModel::complex_space_form_fs(1), TargetModel::complex_space_form_fs(2)};
  for (const TargetModel& m : models) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<cplx> pv;
      if (m.kind() == TargetKind::kComplexSpaceFormFS) {
        pv = fs_point(random_c(rng, m.complex_dim()));
      } else if (m.kind() == TargetKind::kSpaceFormEmbedded) {
        pv = random_r(rng, m.dim());
        double r = 0.0;
        for (const cplx x : pv) r += std::norm(x);
        for (cplx& x : pv) x /= std::sqrt(r);
      } else {
        pv = random_r(rng, m.dim());
      }
      const JetVec p = cvec(pv);
      const JetVec X = cvec(random_c(rng, m.dim())), Y = cvec(random_c(rng, m.dim())),
                   Z = cvec(random_c(rng, m.dim()));
      const JetVec s = vec_add(vec_add(m.curvature(p, X, Y, Z), m.curvature(p, Y, Z, X)), m.curvature(p, Z, X, Y));
      const double scale = max_abs_value(X) * max_abs_value(Y) * max_abs_value(Z);
      EXPECT_LE(max_abs_value(s), 1e-10 * scale) << m.label();
    }
  }
}

TEST(Target, EmbedAndFieldProject) {
  const TargetModel s2 = TargetModel::space_form_embedded(3, 1.0);
  EXPECT_EQ(dist(embed_project(s2, cvec({2.0, 0.0, 0.0})), cvec({1.0, 0.0, 0.0})), 0.0);
  const JetVec p = cvec({1.0, 0.0, 0.0});
  EXPECT_EQ(max_abs_value(field_project(s2, p, p)), 0.0);
  EXPECT_EQ(dist(field_project(s2, p, cvec({0.0, 1.0, 0.0})), cvec({0.0, 1.0, 0.0})), 0.0);
  EXPECT_THROW(embed_project(s2, cvec({0.0, 0.0, 0.0})), Error);
  EXPECT_THROW(s2.require_in_domain(cvec({2.0, 0.0, 0.0})), Error);
}

TEST(Target, PairingSymmetry) {
  std::mt19937_64 rng(17);
  const TargetModel fs = TargetModel::complex_space_form_fs(2);
  const std::vector<cplx> pv = fs_point(random_c(rng, 2));
  const std::vector<cplx> a = random_c(rng, 4), b = random_c(rng, 4);
  EXPECT_EQ(fs.pair_value(pv, a, b), fs.pair_value(pv, b, a));
  EXPECT_LE(std::abs(fs.pair_value(pv, a, b) - fs.pair(cvec(pv), cvec(a), cvec(b)).value()), 1e-15);
  EXPECT_EQ(values(fs.conjugate(cvec(a)))[0], std::conj(a[2]));
}

TEST(Target, Errors) {
  EXPECT_THROW(TargetModel::flat(0), Error);
  EXPECT_THROW(TargetModel::complex_space_form_fs(1, -1.0), Error);
  try {
    (void)TargetModel::flat(2).holomorphic_part(cvec({1.0, 2.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedTarget);
  }
}
