#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hjlab/jet.hpp"

using namespace hjlab;

namespace {

Jet random_jet(JetOrder o, cplx base, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Jet j(o, base);
  for (int a = 0; a <= o.z; ++a)
    for (int b = 0; b <= o.zbar; ++b)
      for (int c = 0; c <= o.t; ++c) j.coeff(a, b, c) = {u(rng), u(rng)};
  return j;
}

double max_diff(const Jet& a, const Jet& b) { return (a - b).max_abs(); }

}  // namespace

TEST(Jet, ProductOfLinearFactors) {
  const JetOrder o{1, 1, 0};
  const Jet z = Jet::z_variable(o, 0.0);
  const Jet zb = Jet::zbar_variable(o, 0.0);
  const Jet p = (1.0 + z) * (1.0 + zb);
  EXPECT_EQ(p.coeff(0, 0, 0), cplx(1.0));
  EXPECT_EQ(p.coeff(1, 0, 0), cplx(1.0));
  EXPECT_EQ(p.coeff(0, 1, 0), cplx(1.0));
  EXPECT_EQ(p.coeff(1, 1, 0), cplx(1.0));
}

TEST(Jet, MultiplicativeIdentity) {
  std::mt19937_64 rng(1);
  const JetOrder o{3, 2, 1};
  const Jet a = random_jet(o, {0.3, -0.2}, rng);
  EXPECT_EQ(max_diff(a * Jet::constant(o, a.base(), 1.0), a), 0.0);
}

TEST(Jet, BinomialSquare) {
  const JetOrder o{2, 2, 0};
  const Jet s = Jet::z_variable(o, 0.0) + Jet::zbar_variable(o, 0.0);
  const Jet q = s * s;
  EXPECT_EQ(q.coeff(2, 0, 0), cplx(1.0));
  EXPECT_EQ(q.coeff(1, 1, 0), cplx(2.0));
  EXPECT_EQ(q.coeff(0, 2, 0), cplx(1.0));
  EXPECT_EQ(q.coeff(1, 0, 0), cplx(0.0));
  EXPECT_EQ(q.value(), cplx(0.0));
}

TEST(Jet, ComposeSquare) {
  const JetOrder o{3, 0, 0};
  const Jet inner = 1.0 + Jet::z_variable(o, 0.0);
  // w^2 expanded at w = 1: 1 + 2(w-1) + (w-1)^2.
  const std::vector<cplx> outer{1.0, 2.0, 1.0};
  const Jet r = jet_compose(outer, inner);
  EXPECT_EQ(r.coeff(0, 0, 0), cplx(1.0));
  EXPECT_EQ(r.coeff(1, 0, 0), cplx(2.0));
  EXPECT_EQ(r.coeff(2, 0, 0), cplx(1.0));
  EXPECT_EQ(r.coeff(3, 0, 0), cplx(0.0));
}

TEST(Jet, ComposeGeometricSeries) {
  const JetOrder o{2, 0, 0};
  const std::vector<cplx> outer{1.0, -1.0, 1.0};
  const Jet r = jet_compose(outer, Jet::z_variable(o, 0.0));
  EXPECT_EQ(r.coeff(0, 0, 0), cplx(1.0));
  EXPECT_EQ(r.coeff(1, 0, 0), cplx(-1.0));
  EXPECT_EQ(r.coeff(2, 0, 0), cplx(1.0));
}

TEST(Jet, ComposeIdentity) {
  std::mt19937_64 rng(2);
  const Jet j = random_jet({2, 2, 1}, {0.1, 0.4}, rng);
  const std::vector<cplx> outer{j.value(), 1.0};
  EXPECT_LE(max_diff(jet_compose(outer, j), j), 1e-15);
}

TEST(Jet, Extract) {
  const JetOrder o{2, 1, 1};
  const cplx z0{0.4, -0.7};
  const Jet z = Jet::z_variable(o, z0);
  EXPECT_NEAR(std::abs(jet_extract(z * z, 2, 0, 0) - 2.0), 0.0, 1e-15);
  const Jet zzt = z * Jet::zbar_variable(o, z0) * Jet::t_variable(o, z0);
  EXPECT_NEAR(std::abs(jet_extract(zzt, 1, 1, 1) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(jet_extract(z * z, 0, 0, 0) - z0 * z0), 0.0, 1e-15);
  EXPECT_THROW(jet_extract(z, 3, 0, 0), Error);
}

TEST(Jet, Conjugate) {
  const JetOrder o{2, 2, 0};
  const cplx z0{0.2, 0.5};
  const Jet z = Jet::z_variable(o, z0);
  const Jet zb = Jet::zbar_variable(o, z0);
  EXPECT_EQ(max_diff(jet_conjugate(z), zb), 0.0);
  const cplx i{0.0, 1.0};
  EXPECT_LE(max_diff(jet_conjugate(i * z * zb), -i * z * zb), 1e-16);

  std::mt19937_64 rng(3);
  const Jet r = random_jet({3, 2, 1}, z0, rng);
  EXPECT_EQ(max_diff(jet_conjugate(jet_conjugate(r)), r), 0.0);
}

TEST(Jet, ConjugationIntertwinesExtraction) {
  std::mt19937_64 rng(4);
  const Jet j = random_jet({3, 3, 1}, {0.0, 0.0}, rng);
  const Jet c = jet_conjugate(j);
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      for (int t = 0; t <= 1; ++t) EXPECT_EQ(jet_extract(c, a, b, t), std::conj(jet_extract(j, b, a, t)));
}

TEST(Jet, RingAxioms) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const JetOrder o{4, 3, 1};
    const cplx base{0.1 * trial, -0.05 * trial};
    const Jet a = random_jet(o, base, rng), b = random_jet(o, base, rng), c = random_jet(o, base, rng);
    const double scale = 1.0 + (a * b * c).max_abs();
    EXPECT_LE(max_diff((a * b) * c, a * (b * c)), 1e-14 * scale);
    EXPECT_LE(max_diff(a * b, b * a), 1e-14 * scale);
    EXPECT_LE(max_diff(a * (b + c), a * b + a * c), 1e-14 * scale);
  }
}

TEST(Jet, DerivativeFidelity) {
  // f = exp(z + 2 zbar); d_z d_zbar f = (1/4) Laplacian in (x, y).
  const cplx z0{0.3, -0.2};
  const JetOrder o{4, 4, 0};
  const Jet f = exp(Jet::z_variable(o, z0) + 2.0 * Jet::zbar_variable(o, z0));
  auto fn = [](double x, double y) {
    const cplx z{x, y};
    return std::exp(z + 2.0 * std::conj(z));
  };
  const double h = 1e-4;
  const double x = z0.real(), y = z0.imag();
  const cplx lap = (fn(x + h, y) + fn(x - h, y) + fn(x, y + h) + fn(x, y - h) - 4.0 * fn(x, y)) / (h * h);
  EXPECT_LE(std::abs(jet_extract(f, 1, 1, 0) - 0.25 * lap), 1e-6);
  EXPECT_LE(std::abs(jet_extract(f, 1, 1, 0) - 2.0 * fn(x, y)), 1e-13);
}

TEST(Jet, ReciprocalMatchesSeries) {
  std::mt19937_64 rng(6);
  const JetOrder o{3, 3, 1};
  Jet j = random_jet(o, {0.2, 0.1}, rng);
  j.coeff(0, 0, 0) = {2.0, 0.5};
  const Jet r = reciprocal(j);
  EXPECT_LE(max_diff(r * j, Jet::constant(o, j.base(), 1.0)), 1e-14);
  // 1/(x0 + e) = sum_k (-e)^k / x0^{k+1}, e nilpotent.
  const cplx x0 = j.value();
  const Jet e = j - x0;
  Jet series = Jet::constant(o, j.base(), 0.0);
  Jet pw = Jet::constant(o, j.base(), 1.0);
  for (int k = 0; k <= nilpotency_degree(o); ++k) {
    series += pw * (std::pow(-1.0, k) / std::pow(x0, k + 1));
    pw *= e;
  }
  EXPECT_LE(max_diff(r, series), 1e-13);
}

TEST(Jet, SqrtExpInverseSqrt) {
  std::mt19937_64 rng(7);
  const JetOrder o{3, 2, 2};
  Jet j = random_jet(o, {0.0, 0.0}, rng);
  j.coeff(0, 0, 0) = {3.0, -1.0};
  const Jet s = sqrt(j);
  EXPECT_LE(max_diff(s * s, j), 1e-13);
  const Jet is = inverse_sqrt(j);
  EXPECT_LE(max_diff(is * s, Jet::constant(o, j.base(), 1.0)), 1e-13);
  const Jet e = exp(j);
  EXPECT_LE(max_diff(exp(-j) * e, Jet::constant(o, j.base(), 1.0)), 1e-12 * e.max_abs());
}

TEST(Jet, Derivatives) {
  const JetOrder o{3, 2, 1};
  const cplx z0{0.5, 0.5};
  const Jet z = Jet::z_variable(o, z0), zb = Jet::zbar_variable(o, z0), t = Jet::t_variable(o, z0);
  const Jet f = z * z * zb + t * z;
  // d_z f = 2 z zbar + t.
  EXPECT_LE(std::abs(f.d_z().value() - 2.0 * z0 * std::conj(z0)), 1e-15);
  EXPECT_LE(std::abs(f.d_zbar().value() - z0 * z0), 1e-15);
  EXPECT_LE(std::abs(f.d_t().value() - z0), 1e-15);
  EXPECT_EQ(f.d_z().order().z, 2);
}

TEST(Jet, Errors) {
  const JetOrder o{2, 2, 0};
  const Jet a = Jet::z_variable(o, 0.0);
  const Jet b = Jet::z_variable({2, 1, 0}, 0.0);
  const Jet c = Jet::z_variable(o, 1.0);
  EXPECT_THROW(a + b, Error);
  EXPECT_THROW(a * c, Error);
  EXPECT_NO_THROW(mul_truncated(a, b));
  try {
    (void)reciprocal(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularComposition);
  }
  try {
    (void)Jet::z_variable({2, 0, 0}, 0.0).d_zbar();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOrderExhausted);
  }
  EXPECT_THROW(Jet(JetOrder{9, 0, 0}, 0.0), Error);
}

TEST(Jet, RealValued) {
  const JetOrder o{2, 2, 1};
  const cplx z0{0.3, 0.8};
  const Jet z = Jet::z_variable(o, z0), zb = Jet::zbar_variable(o, z0);
  EXPECT_TRUE((z * zb + Jet::t_variable(o, z0)).is_real_valued(1e-15));
  EXPECT_FALSE((z * z).is_real_valued(1e-15));
}
