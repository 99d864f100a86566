#pragma once

// First-order forward-mode dual numbers over an arbitrary scalar ring.
// Nested as Dual<Dual<Jet>> they give the second coordinate derivatives of a
// metric needed for Christoffel derivatives.

#include "hjlab/jet.hpp"

namespace hjlab {

template <class T>
struct Dual {
  T v;
  T d;

  Dual() = default;
  Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v = v * o.v;
    return *this;
  }
  Dual& operator+=(cplx s) { v += s; return *this; }
  Dual& operator-=(cplx s) { v -= s; return *this; }
  Dual& operator*=(cplx s) { v *= s; d *= s; return *this; }
  Dual& operator*=(double s) { v *= s; d *= s; return *this; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator-(Dual a) { return a *= -1.0; }
  friend Dual operator+(Dual a, cplx s) { return a += s; }
  friend Dual operator+(cplx s, Dual a) { return a += s; }
  friend Dual operator-(Dual a, cplx s) { return a -= s; }
  friend Dual operator-(cplx s, Dual a) { a *= -1.0; return a += s; }
  friend Dual operator*(Dual a, cplx s) { return a *= s; }
  friend Dual operator*(cplx s, Dual a) { return a *= s; }
  friend Dual operator+(Dual a, double s) { return a += cplx(s); }
  friend Dual operator+(double s, Dual a) { return a += cplx(s); }
  friend Dual operator-(Dual a, double s) { return a -= cplx(s); }
  friend Dual operator-(double s, Dual a) { a *= -1.0; return a += cplx(s); }
  friend Dual operator*(Dual a, double s) { return a *= s; }
  friend Dual operator*(double s, Dual a) { return a *= s; }
};

template <class T>
Dual<T> reciprocal(const Dual<T>& x) {
  T r = reciprocal(x.v);
  T d = -(x.d * r * r);
  return {std::move(r), std::move(d)};
}

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  T s = sqrt(x.v);
  T d = x.d * reciprocal(s) * 0.5;
  return {std::move(s), std::move(d)};
}

template <class T>
Dual<T> exp(const Dual<T>& x) {
  T e = exp(x.v);
  T d = x.d * e;
  return {std::move(e), std::move(d)};
}

// Lifts a value to a constant of the dual ring (zero derivative).
template <class T>
Dual<T> dual_constant(const T& v) {
  return {v, v * 0.0};
}

}  // namespace hjlab
