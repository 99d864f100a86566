#include "hjlab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hjlab {

namespace {

std::string order_str(const JetOrder& o) {
  return "(" + std::to_string(o.z) + "," + std::to_string(o.zbar) + "," + std::to_string(o.t) + ")";
}

// Taylor coefficients of x^p at x0, p real.
std::vector<cplx> power_series(cplx x0, double p, int terms) {
  std::vector<cplx> out(static_cast<std::size_t>(terms) + 1);
  cplx binom = 1.0;
  for (int k = 0; k <= terms; ++k) {
    out[static_cast<std::size_t>(k)] = binom * std::pow(x0, p - k);
    binom *= (p - k) / static_cast<double>(k + 1);
  }
  return out;
}

}  // namespace

JetOrder common_order(const JetOrder& a, const JetOrder& b) {
  return {std::min(a.z, b.z), std::min(a.zbar, b.zbar), std::min(a.t, b.t)};
}

int nilpotency_degree(const JetOrder& order) { return order.z + order.zbar + order.t; }

Jet::Jet(JetOrder order, cplx base) : order_(order), base_(base) {
  if (!order.valid()) {
    throw Error(ErrorKind::kRejectedInput, "jet order " + order_str(order) + " outside ceilings (8,8,2)");
  }
  coeffs_.resize(order.size());
}

Jet Jet::constant(JetOrder order, cplx base, cplx value) {
  Jet j(order, base);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::z_variable(JetOrder order, cplx base) {
  Jet j(order, base);
  j.coeffs_[0] = base;
  if (order.z >= 1) j.coeff(1, 0, 0) = 1.0;
  return j;
}

Jet Jet::zbar_variable(JetOrder order, cplx base) {
  Jet j(order, base);
  j.coeffs_[0] = std::conj(base);
  if (order.zbar >= 1) j.coeff(0, 1, 0) = 1.0;
  return j;
}

Jet Jet::t_variable(JetOrder order, cplx base) {
  Jet j(order, base);
  if (order.t >= 1) j.coeff(0, 0, 1) = 1.0;
  return j;
}

void Jet::incompatible(const Jet& o, const char* op) const {
  if (!(order_ == o.order_)) {
    throw Error(ErrorKind::kRejectedInput, std::string(op) + ": order mismatch " + order_str(order_) +
                                               " vs " + order_str(o.order_));
  }
  throw Error(ErrorKind::kRejectedInput, std::string(op) + ": base point mismatch");
}

Jet Jet::truncated(const JetOrder& order) const {
  if (order == order_) return *this;
  if (order.z > order_.z || order.zbar > order_.zbar || order.t > order_.t) {
    throw Error(ErrorKind::kOrderExhausted,
                "cannot raise jet order " + order_str(order_) + " to " + order_str(order));
  }
  Jet out(order, base_);
  for (int a = 0; a <= order.z; ++a)
    for (int b = 0; b <= order.zbar; ++b)
      for (int c = 0; c <= order.t; ++c) out.coeff(a, b, c) = coeff(a, b, c);
  return out;
}

Jet Jet::at_t0() const { return truncated({order_.z, order_.zbar, 0}); }

Jet Jet::d_z() const {
  if (order_.z < 1) throw Error(ErrorKind::kOrderExhausted, "d/dz of a jet with z-order 0");
  Jet out({order_.z - 1, order_.zbar, order_.t}, base_);
  for (int a = 0; a < order_.z; ++a)
    for (int b = 0; b <= order_.zbar; ++b)
      for (int c = 0; c <= order_.t; ++c) out.coeff(a, b, c) = static_cast<double>(a + 1) * coeff(a + 1, b, c);
  return out;
}

Jet Jet::d_zbar() const {
  if (order_.zbar < 1) throw Error(ErrorKind::kOrderExhausted, "d/dzbar of a jet with zbar-order 0");
  Jet out({order_.z, order_.zbar - 1, order_.t}, base_);
  for (int a = 0; a <= order_.z; ++a)
    for (int b = 0; b < order_.zbar; ++b)
      for (int c = 0; c <= order_.t; ++c) out.coeff(a, b, c) = static_cast<double>(b + 1) * coeff(a, b + 1, c);
  return out;
}

Jet Jet::d_t() const {
  if (order_.t < 1) throw Error(ErrorKind::kOrderExhausted, "d/dt of a jet with t-order 0");
  Jet out({order_.z, order_.zbar, order_.t - 1}, base_);
  for (int a = 0; a <= order_.z; ++a)
    for (int b = 0; b <= order_.zbar; ++b)
      for (int c = 0; c < order_.t; ++c) out.coeff(a, b, c) = static_cast<double>(c + 1) * coeff(a, b, c + 1);
  return out;
}

bool Jet::is_real_valued(double tol) const {
  const int m = std::min(order_.z, order_.zbar);
  for (int a = 0; a <= order_.z; ++a)
    for (int b = 0; b <= order_.zbar; ++b)
      for (int c = 0; c <= order_.t; ++c) {
        if (a > m || b > m) {
          // The mirrored monomial is not stored; only meaningful when zero.
          continue;
        }
        if (std::abs(coeff(a, b, c) - std::conj(coeff(b, a, c))) > tol) return false;
      }
  return true;
}

double Jet::max_abs() const {
  double m = 0.0;
  for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool Jet::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const cplx& c) { return c == cplx{}; });
}

Jet& Jet::operator+=(const Jet& o) {
  require_compatible(o, "jet_add");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_compatible(o, "jet_sub");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  *this = *this * o;
  return *this;
}

Jet& Jet::operator*=(cplx s) {
  for (cplx& c : coeffs_) c *= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (cplx& c : coeffs_) c *= s;
  return *this;
}

Jet operator*(const Jet& x, const Jet& y) {
  x.require_compatible(y, "jet_mul");
  const JetOrder& o = x.order_;
  Jet r(o, x.base_);
  const std::size_t nb = static_cast<std::size_t>(o.zbar) + 1;
  const cplx* xc = x.coeffs_.data();
  const cplx* yc = y.coeffs_.data();
  cplx* rc = r.coeffs_.data();
  // The t-convolution is unrolled for t-order 0 and 1, the common cases.
  switch (o.t) {
    case 0:
      for (int a1 = 0; a1 <= o.z; ++a1)
        for (int b1 = 0; b1 <= o.zbar; ++b1) {
          const cplx xv = xc[static_cast<std::size_t>(a1) * nb + static_cast<std::size_t>(b1)];
          if (xv == cplx{}) continue;
          for (int a2 = 0; a2 <= o.z - a1; ++a2) {
            const cplx* yrow = yc + static_cast<std::size_t>(a2) * nb;
            cplx* rrow = rc + static_cast<std::size_t>(a1 + a2) * nb + static_cast<std::size_t>(b1);
            for (int b2 = 0; b2 <= o.zbar - b1; ++b2) rrow[b2] += xv * yrow[b2];
          }
        }
      return r;
    case 1:
      for (int a1 = 0; a1 <= o.z; ++a1)
        for (int b1 = 0; b1 <= o.zbar; ++b1) {
          const std::size_t xi = 2 * (static_cast<std::size_t>(a1) * nb + static_cast<std::size_t>(b1));
          const cplx x0 = xc[xi], x1 = xc[xi + 1];
          if (x0 == cplx{} && x1 == cplx{}) continue;
          for (int a2 = 0; a2 <= o.z - a1; ++a2) {
            const cplx* yrow = yc + 2 * static_cast<std::size_t>(a2) * nb;
            cplx* rrow = rc + 2 * (static_cast<std::size_t>(a1 + a2) * nb + static_cast<std::size_t>(b1));
            for (int b2 = 0; b2 <= o.zbar - b1; ++b2) {
              const cplx y0 = yrow[2 * b2], y1 = yrow[2 * b2 + 1];
              rrow[2 * b2] += x0 * y0;
              rrow[2 * b2 + 1] += x0 * y1 + x1 * y0;
            }
          }
        }
      return r;
    default: break;
  }
  const std::size_t nt = static_cast<std::size_t>(o.t) + 1;
  for (int a1 = 0; a1 <= o.z; ++a1) {
    for (int b1 = 0; b1 <= o.zbar; ++b1) {
      for (int c1 = 0; c1 <= o.t; ++c1) {
        const cplx xv = xc[(static_cast<std::size_t>(a1) * nb + static_cast<std::size_t>(b1)) * nt + static_cast<std::size_t>(c1)];
        if (xv == cplx{}) continue;
        for (int a2 = 0; a2 <= o.z - a1; ++a2) {
          for (int b2 = 0; b2 <= o.zbar - b1; ++b2) {
            const std::size_t ybase = (static_cast<std::size_t>(a2) * nb + static_cast<std::size_t>(b2)) * nt;
            const std::size_t rbase = (static_cast<std::size_t>(a1 + a2) * nb + static_cast<std::size_t>(b1 + b2)) * nt;
            for (int c2 = 0; c2 <= o.t - c1; ++c2) {
              rc[rbase + static_cast<std::size_t>(c1 + c2)] += xv * yc[ybase + static_cast<std::size_t>(c2)];
            }
          }
        }
      }
    }
  }
  return r;
}

Jet jet_add(const Jet& a, const Jet& b) { return a + b; }
Jet jet_mul(const Jet& a, const Jet& b) { return a * b; }

Jet mul_truncated(const Jet& a, const Jet& b) {
  if (a.order() == b.order()) return a * b;
  const JetOrder o = common_order(a.order(), b.order());
  return a.truncated(o) * b.truncated(o);
}

Jet add_truncated(const Jet& a, const Jet& b) {
  if (a.order() == b.order()) return a + b;
  const JetOrder o = common_order(a.order(), b.order());
  return a.truncated(o) + b.truncated(o);
}

Jet jet_compose(std::span<const cplx> outer, const Jet& inner) {
  if (outer.empty()) return Jet(inner.order(), inner.base());
  Jet dx = inner;
  dx.coeff(0, 0, 0) = 0.0;
  // Powers of dx beyond the nilpotency degree vanish identically.
  const std::size_t terms =
      std::min(outer.size(), static_cast<std::size_t>(nilpotency_degree(inner.order())) + 1);
  Jet acc = Jet::constant(inner.order(), inner.base(), outer[terms - 1]);
  for (std::size_t k = terms - 1; k-- > 0;) {
    acc = acc * dx;
    acc += outer[k];
  }
  return acc;
}

cplx jet_extract(const Jet& j, int a, int b, int c) {
  if (!j.order().contains(a, b, c)) {
    throw Error(ErrorKind::kRejectedInput, "extract index outside jet order");
  }
  double f = 1.0;
  for (int k = 2; k <= a; ++k) f *= k;
  for (int k = 2; k <= b; ++k) f *= k;
  for (int k = 2; k <= c; ++k) f *= k;
  return f * j.coeff(a, b, c);
}

Jet jet_conjugate(const Jet& j) {
  const JetOrder& o = j.order();
  Jet out({o.zbar, o.z, o.t}, j.base());
  for (int a = 0; a <= o.z; ++a)
    for (int b = 0; b <= o.zbar; ++b)
      for (int c = 0; c <= o.t; ++c) out.coeff(b, a, c) = std::conj(j.coeff(a, b, c));
  return out;
}

Jet reciprocal(const Jet& j) {
  const cplx x0 = j.value();
  if (std::abs(x0) == 0.0) throw Error(ErrorKind::kSingularComposition, "1/x expanded at x = 0");
  // Solve j * r = 1 coefficient by coefficient; lexicographic order visits
  // every r_{m-i} before r_m.
  const JetOrder& o = j.order();
  Jet r(o, j.base());
  const cplx inv = 1.0 / x0;
  for (int a = 0; a <= o.z; ++a)
    for (int b = 0; b <= o.zbar; ++b)
      for (int c = 0; c <= o.t; ++c) {
        cplx acc = (a == 0 && b == 0 && c == 0) ? cplx(1.0) : cplx{};
        for (int i = 0; i <= a; ++i)
          for (int k = 0; k <= b; ++k)
            for (int l = 0; l <= c; ++l) {
              if (i == 0 && k == 0 && l == 0) continue;
              acc -= j.coeff(i, k, l) * r.coeff(a - i, b - k, c - l);
            }
        r.coeff(a, b, c) = acc * inv;
      }
  return r;
}

Jet sqrt(const Jet& j) {
  const cplx x0 = j.value();
  if (std::abs(x0) == 0.0) throw Error(ErrorKind::kSingularComposition, "sqrt expanded at x = 0");
  return jet_compose(power_series(x0, 0.5, nilpotency_degree(j.order())), j);
}

Jet inverse_sqrt(const Jet& j) {
  const cplx x0 = j.value();
  if (std::abs(x0) == 0.0) throw Error(ErrorKind::kSingularComposition, "x^(-1/2) expanded at x = 0");
  return jet_compose(power_series(x0, -0.5, nilpotency_degree(j.order())), j);
}

Jet exp(const Jet& j) {
  const int n = nilpotency_degree(j.order());
  std::vector<cplx> series(static_cast<std::size_t>(n) + 1);
  cplx e = std::exp(j.value());
  for (int k = 0; k <= n; ++k) {
    series[static_cast<std::size_t>(k)] = e;
    e /= static_cast<double>(k + 1);
  }
  return jet_compose(series, j);
}

}  // namespace hjlab
