#pragma once

// Truncated Taylor arithmetic in (z, zbar, t).
//
// A Jet stores the coefficients c[a][b][c] of
//     sum c_abc (z - z0)^a (zbar - conj(z0))^b t^c
// for a <= order.z, b <= order.zbar, c <= order.t.  z and zbar are treated as
// independent variables (Wirtinger calculus); t is a real deformation
// parameter and never appears conjugated.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "hjlab/error.hpp"

namespace hjlab {

using cplx = std::complex<double>;

struct JetOrder {
  static constexpr int kMaxZ = 8;
  static constexpr int kMaxZbar = 8;
  static constexpr int kMaxT = 2;

  int z = 0;
  int zbar = 0;
  int t = 0;

  constexpr std::size_t size() const {
    return static_cast<std::size_t>(z + 1) * static_cast<std::size_t>(zbar + 1) *
           static_cast<std::size_t>(t + 1);
  }
  bool valid() const {
    return z >= 0 && zbar >= 0 && t >= 0 && z <= kMaxZ && zbar <= kMaxZbar && t <= kMaxT;
  }
  bool contains(int a, int b, int c) const {
    return a >= 0 && b >= 0 && c >= 0 && a <= z && b <= zbar && c <= t;
  }
  friend bool operator==(const JetOrder&, const JetOrder&) = default;
};

// Componentwise minimum; the order two truncated jets can be combined at.
JetOrder common_order(const JetOrder& a, const JetOrder& b);

class Jet {
 public:
  Jet() : coeffs_(1, cplx{}) {}
  Jet(JetOrder order, cplx base);

  static Jet constant(JetOrder order, cplx base, cplx value);
  // The coordinate function z itself: z0 + (z - z0).
  static Jet z_variable(JetOrder order, cplx base);
  // conj(z0) + (zbar - conj(z0)).
  static Jet zbar_variable(JetOrder order, cplx base);
  static Jet t_variable(JetOrder order, cplx base);

  const JetOrder& order() const { return order_; }
  cplx base() const { return base_; }
  std::span<const cplx> coeffs() const { return {coeffs_.data(), coeffs_.size()}; }

  cplx coeff(int a, int b, int c) const { return coeffs_[index(a, b, c)]; }
  cplx& coeff(int a, int b, int c) { return coeffs_[index(a, b, c)]; }
  cplx value() const { return coeffs_[0]; }

  // Same function, fewer retained monomials.  Every component of `order`
  // must be <= the current one.
  Jet truncated(const JetOrder& order) const;
  // Keeps only the t^0 slice, i.e. the jet of the function at t = 0.
  Jet at_t0() const;

  Jet d_z() const;
  Jet d_zbar() const;
  Jet d_t() const;

  // c_abc == conj(c_bac) for every index pair, within `tol` absolute.
  bool is_real_valued(double tol) const;
  double max_abs() const;
  bool is_zero() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator+=(cplx s) { coeffs_[0] += s; return *this; }
  Jet& operator-=(cplx s) { coeffs_[0] -= s; return *this; }
  Jet& operator*=(cplx s);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator-(Jet a) { return a *= -1.0; }

  friend Jet operator+(Jet a, cplx s) { return a += s; }
  friend Jet operator+(cplx s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, cplx s) { return a -= s; }
  friend Jet operator-(cplx s, Jet a) { a *= -1.0; return a += s; }
  friend Jet operator*(Jet a, cplx s) { return a *= s; }
  friend Jet operator*(cplx s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += cplx(s); }
  friend Jet operator+(double s, Jet a) { return a += cplx(s); }
  friend Jet operator-(Jet a, double s) { return a -= cplx(s); }
  friend Jet operator-(double s, Jet a) { a *= -1.0; return a += cplx(s); }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }

 private:
  std::size_t index(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * static_cast<std::size_t>(order_.zbar + 1) +
            static_cast<std::size_t>(b)) *
               static_cast<std::size_t>(order_.t + 1) +
           static_cast<std::size_t>(c);
  }
  void require_compatible(const Jet& o, const char* op) const {
    if (!(order_ == o.order_) || base_ != o.base_) incompatible(o, op);
  }
  [[noreturn]] void incompatible(const Jet& o, const char* op) const;

  JetOrder order_{};
  cplx base_{};
  // Orders up to (5,1,1) stay inline.
  boost::container::small_vector<cplx, 24> coeffs_;
};

Jet jet_add(const Jet& a, const Jet& b);
Jet jet_mul(const Jet& a, const Jet& b);

// Product after truncating both factors to their common order.
Jet mul_truncated(const Jet& a, const Jet& b);
Jet add_truncated(const Jet& a, const Jet& b);

// Evaluates sum_k outer[k] * (inner - inner.value())^k by Horner's rule.
// `outer` holds the Taylor coefficients of the outer function expanded at
// the constant term of `inner`.
Jet jet_compose(std::span<const cplx> outer, const Jet& inner);

// a! b! c! c_abc, i.e. the mixed partial d_z^a d_zbar^b d_t^c at the base point.
cplx jet_extract(const Jet& j, int a, int b, int c);

// Jet of conj(f): swaps the z/zbar indices and conjugates the coefficients.
Jet jet_conjugate(const Jet& j);

// Highest monomial degree a nilpotent increment of a jet of this order can
// produce; composition series need this many terms.
int nilpotency_degree(const JetOrder& order);

Jet reciprocal(const Jet& j);
Jet sqrt(const Jet& j);
Jet exp(const Jet& j);
Jet inverse_sqrt(const Jet& j);

inline cplx reciprocal(cplx x) {
  if (x == cplx{}) throw Error(ErrorKind::kSingularComposition, "reciprocal of zero");
  return 1.0 / x;
}

}  // namespace hjlab
