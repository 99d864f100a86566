#include "hjlab/target.hpp"

#include <algorithm>
#include <cmath>

namespace hjlab {

namespace {

JetOrder min_order(const JetOrder& a, const JetOrder& b) { return common_order(a, b); }

JetOrder order_of(std::initializer_list<const JetVec*> vs) {
  JetOrder o{JetOrder::kMaxZ, JetOrder::kMaxZbar, JetOrder::kMaxT};
  for (const JetVec* v : vs)
    for (const Jet& j : *v) o = min_order(o, j.order());
  return o;
}

Jet zero_jet(const JetOrder& o, cplx base) { return Jet(o, base); }

cplx base_of(const JetVec& v) { return v.empty() ? cplx{} : v.front().base(); }

bool all_at(const JetVec& v, const JetOrder& o) {
  return std::all_of(v.begin(), v.end(), [&](const Jet& j) { return j.order() == o; });
}

// v itself when already at order o, else its truncation held in `store`.
const JetVec& fit(const JetVec& v, const JetOrder& o, JetVec& store) {
  if (all_at(v, o)) return v;
  store = truncate_all(v, o);
  return store;
}

// Fubini-Study pairing with the conformal factor 1/(1 + w.wbar) computed once
// per point.
struct FsFrame {
  JetOrder o;
  JetVec x;
  Jet iq;
  double scale;
};

FsFrame fs_frame(const JetVec& p, const JetOrder& o, double c4) {
  JetVec ps;
  FsFrame f{o, fit(p, o, ps), Jet(o, base_of(p)), 2.0 / c4};
  const std::size_t n = p.size() / 2;
  Jet q = Jet(o, base_of(p)) + 1.0;
  for (std::size_t i = 0; i < n; ++i) q += f.x[i] * f.x[n + i];
  f.iq = reciprocal(q);
  return f;
}

Jet fs_pair(const FsFrame& f, const JetVec& a, const JetVec& b) {
  JetVec as, bs;
  const JetVec& av = fit(a, f.o, as);
  const JetVec& bv = fit(b, f.o, bs);
  const std::size_t n = f.x.size() / 2;
  const cplx base = f.iq.base();
  Jet ab(f.o, base), wa(f.o, base), wb(f.o, base), wab(f.o, base), wbb(f.o, base);
  for (std::size_t h = 0; h < n; ++h) {
    const std::size_t ah = n + h;
    ab += av[h] * bv[ah] + bv[h] * av[ah];
    wa += f.x[ah] * av[h];
    wb += f.x[ah] * bv[h];
    wab += f.x[h] * av[ah];
    wbb += f.x[h] * bv[ah];
  }
  return (ab - (wa * wbb + wb * wab) * f.iq) * f.iq * f.scale;
}

cplx lead(const Jet& j) { return j.value(); }
template <class T>
cplx lead(const Dual<T>& d) {
  return lead(d.v);
}

bool zero_like(const Jet& j) { return j.is_zero(); }
template <class T>
bool zero_like(const Dual<T>& d) {
  return zero_like(d.v) && zero_like(d.d);
}

// Gauss-Jordan inverse with partial pivoting on the order-0 values.
template <class T>
std::vector<T> invert(std::vector<T> a, int n) {
  const T zero = a[0] * 0.0;
  std::vector<T> inv(static_cast<std::size_t>(n * n), zero);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = zero + 1.0;
  double scale = 0.0;
  for (const T& x : a) scale = std::max(scale, std::abs(lead(x)));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(lead(a[static_cast<std::size_t>(r * n + col)])) >
          std::abs(lead(a[static_cast<std::size_t>(piv * n + col)])))
        piv = r;
    if (!(std::abs(lead(a[static_cast<std::size_t>(piv * n + col)])) > 1e-14 * scale)) {
      throw Error(ErrorKind::kDegenerateMetric, "metric matrix is singular at the queried point");
    }
    if (piv != col) {
      for (int k = 0; k < n; ++k) {
        std::swap(a[static_cast<std::size_t>(piv * n + k)], a[static_cast<std::size_t>(col * n + k)]);
        std::swap(inv[static_cast<std::size_t>(piv * n + k)], inv[static_cast<std::size_t>(col * n + k)]);
      }
    }
    const T r = reciprocal(a[static_cast<std::size_t>(col * n + col)]);
    for (int k = 0; k < n; ++k) {
      a[static_cast<std::size_t>(col * n + k)] = a[static_cast<std::size_t>(col * n + k)] * r;
      inv[static_cast<std::size_t>(col * n + k)] = inv[static_cast<std::size_t>(col * n + k)] * r;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const T f = a[static_cast<std::size_t>(row * n + col)];
      if (zero_like(f)) continue;
      for (int k = 0; k < n; ++k) {
        a[static_cast<std::size_t>(row * n + k)] -= f * a[static_cast<std::size_t>(col * n + k)];
        inv[static_cast<std::size_t>(row * n + k)] -= f * inv[static_cast<std::size_t>(col * n + k)];
      }
    }
  }
  return inv;
}

// Gamma^A_BC = 1/2 h^AD (d_B h_DC + d_C h_DB - d_D h_BC) from the evaluator.
template <class T>
std::vector<T> christoffel_generic(const MetricEvaluator& m, const std::vector<T>& x) {
  const int n = static_cast<int>(x.size());
  const T zero = x[0] * 0.0;
  const T one = zero + 1.0;
  std::vector<T> h;
  std::vector<T> dh(static_cast<std::size_t>(n * n * n), zero);  // [D][B][C]
  for (int d = 0; d < n; ++d) {
    std::vector<Dual<T>> xs;
    xs.reserve(x.size());
    for (int i = 0; i < n; ++i) xs.emplace_back(x[static_cast<std::size_t>(i)], i == d ? one : zero);
    std::vector<Dual<T>> r = m(xs);
    if (d == 0) {
      h.reserve(r.size());
      for (auto& e : r) h.push_back(e.v);
    }
    for (int k = 0; k < n * n; ++k) dh[static_cast<std::size_t>(d * n * n + k)] = r[static_cast<std::size_t>(k)].d;
  }
  const std::vector<T> hinv = invert(h, n);
  auto DH = [&](int d, int b, int c) -> const T& { return dh[static_cast<std::size_t>((d * n + b) * n + c)]; };
  std::vector<T> lower(static_cast<std::size_t>(n * n * n), zero);  // [D][B][C]
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        lower[static_cast<std::size_t>((d * n + b) * n + c)] = (DH(b, d, c) + DH(c, d, b) - DH(d, b, c)) * 0.5;
  std::vector<T> gamma(static_cast<std::size_t>(n * n * n), zero);
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d) {
      const T& hi = hinv[static_cast<std::size_t>(a * n + d)];
      if (zero_like(hi)) continue;
      for (int bc = 0; bc < n * n; ++bc)
        gamma[static_cast<std::size_t>(a * n * n + bc)] += hi * lower[static_cast<std::size_t>(d * n * n + bc)];
    }
  return gamma;
}

MetricEvaluator fs_evaluator(int n, double scale) {
  return MetricEvaluator([n, scale](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    const int d = 2 * n;
    const T zero = x[0] * 0.0;
    std::vector<T> h(static_cast<std::size_t>(d * d), zero);
    T q = zero + 1.0;
    for (int i = 0; i < n; ++i) q += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(n + i)];
    const T iq = reciprocal(q);
    const T iq2 = iq * iq;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        T g = zero - x[static_cast<std::size_t>(n + i)] * x[static_cast<std::size_t>(j)] * iq2;
        if (i == j) g += iq;
        g *= 0.5 * scale;
        h[static_cast<std::size_t>(i * d + n + j)] = g;
        h[static_cast<std::size_t>((n + j) * d + i)] = g;
      }
    return h;
  });
}

MetricEvaluator space_form_chart_evaluator(int dim, double c) {
  return MetricEvaluator([dim, c](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    const T zero = x[0] * 0.0;
    T q = zero + 1.0;
    for (int i = 0; i < dim; ++i) q += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)] * c;
    const T iq = reciprocal(q);
    const T f = iq * iq * 4.0;
    std::vector<T> h(static_cast<std::size_t>(dim * dim), zero);
    for (int i = 0; i < dim; ++i) h[static_cast<std::size_t>(i * dim + i)] = f;
    return h;
  });
}

}  // namespace

const char* to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::kFlat: return "flat";
    case TargetKind::kSpaceFormEmbedded: return "space-form-embedded";
    case TargetKind::kSpaceFormChart: return "space-form-chart";
    case TargetKind::kComplexSpaceFormFS: return "complex-space-form-fs";
    case TargetKind::kGeneralChart: return "general-chart";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// vector helpers

JetOrder common_order(const JetVec& v) { return order_of({&v}); }

JetVec truncate_all(const JetVec& v, const JetOrder& o) {
  JetVec out;
  out.reserve(v.size());
  for (const Jet& j : v) out.push_back(j.truncated(o));
  return out;
}

JetVec vec_add(const JetVec& a, const JetVec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::kRejectedInput, "vector length mismatch");
  JetVec out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(add_truncated(a[i], b[i]));
  return out;
}

JetVec vec_sub(const JetVec& a, const JetVec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::kRejectedInput, "vector length mismatch");
  JetVec out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(add_truncated(a[i], -b[i]));
  return out;
}

JetVec vec_scale(const JetVec& a, const Jet& s) {
  JetVec out;
  out.reserve(a.size());
  for (const Jet& j : a) out.push_back(mul_truncated(j, s));
  return out;
}

JetVec vec_scale(const JetVec& a, cplx s) {
  JetVec out = a;
  for (Jet& j : out) j *= s;
  return out;
}

JetVec vec_zero_like(const JetVec& a) {
  JetVec out;
  out.reserve(a.size());
  for (const Jet& j : a) out.emplace_back(j.order(), j.base());
  return out;
}

Jet dot(const JetVec& a, const JetVec& b) {
  if (a.size() != b.size() || a.empty()) throw Error(ErrorKind::kRejectedInput, "vector length mismatch");
  const JetOrder o = order_of({&a, &b});
  Jet acc(o, a[0].base());
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].truncated(o) * b[i].truncated(o);
  return acc;
}

double max_abs_value(const JetVec& v) {
  double m = 0.0;
  for (const Jet& j : v) m = std::max(m, std::abs(j.value()));
  return m;
}

// ---------------------------------------------------------------------------
// TargetModel

TargetModel TargetModel::flat(int dim) {
  if (dim < 1) throw Error(ErrorKind::kRejectedInput, "flat target needs dim >= 1");
  TargetModel m;
  m.kind_ = TargetKind::kFlat;
  m.dim_ = dim;
  m.label_ = "flat(" + std::to_string(dim) + ")";
  return m;
}

TargetModel TargetModel::space_form_embedded(int ambient_dim, double c) {
  if (ambient_dim < 2 || !(c > 0.0)) {
    throw Error(ErrorKind::kRejectedInput, "embedded space form needs ambient_dim >= 2 and c > 0");
  }
  TargetModel m;
  m.kind_ = TargetKind::kSpaceFormEmbedded;
  m.dim_ = ambient_dim;
  m.c_ = c;
  m.label_ = "sphere(" + std::to_string(ambient_dim - 1) + ")";
  return m;
}

TargetModel TargetModel::space_form_chart(int dim, double c) {
  if (dim < 1) throw Error(ErrorKind::kRejectedInput, "space form chart needs dim >= 1");
  TargetModel m;
  m.kind_ = TargetKind::kSpaceFormChart;
  m.dim_ = dim;
  m.c_ = c;
  m.label_ = "space-form-chart(" + std::to_string(dim) + ")";
  m.evaluator_ = std::make_shared<const MetricEvaluator>(space_form_chart_evaluator(dim, c));
  return m;
}

TargetModel TargetModel::complex_space_form_fs(int n, double c4) {
  if (n < 1 || !(c4 > 0.0)) throw Error(ErrorKind::kRejectedInput, "FS target needs n >= 1 and c4 > 0");
  TargetModel m;
  m.kind_ = TargetKind::kComplexSpaceFormFS;
  m.dim_ = 2 * n;
  m.c_ = c4;
  m.label_ = "CP" + std::to_string(n);
  m.evaluator_ = std::make_shared<const MetricEvaluator>(fs_evaluator(n, 4.0 / c4));
  return m;
}

TargetModel TargetModel::general_chart(int dim, MetricEvaluator metric, std::string label) {
  if (dim < 1) throw Error(ErrorKind::kRejectedInput, "general chart needs dim >= 1");
  TargetModel m;
  m.kind_ = TargetKind::kGeneralChart;
  m.dim_ = dim;
  m.label_ = std::move(label);
  m.evaluator_ = std::make_shared<const MetricEvaluator>(std::move(metric));
  return m;
}

bool TargetModel::is_space_form() const {
  switch (kind_) {
    case TargetKind::kFlat:
    case TargetKind::kSpaceFormEmbedded:
    case TargetKind::kSpaceFormChart: return true;
    case TargetKind::kComplexSpaceFormFS: return dim_ == 2;
    case TargetKind::kGeneralChart: return false;
  }
  return false;
}

void TargetModel::require_in_domain(const JetVec& p) const {
  if (static_cast<int>(p.size()) != dim_) {
    throw Error(ErrorKind::kRejectedInput, "point has " + std::to_string(p.size()) + " components, target " +
                                               label_ + " expects " + std::to_string(dim_));
  }
  for (const Jet& j : p) {
    if (!std::isfinite(j.value().real()) || !std::isfinite(j.value().imag())) {
      throw Error(ErrorKind::kChartDomain, "non-finite point on " + label_);
    }
  }
  if (kind_ == TargetKind::kSpaceFormEmbedded) {
    cplx r2 = 0.0;
    for (const Jet& j : p) r2 += j.value() * j.value();
    if (std::abs(c_ * r2 - 1.0) > tol_) {
      throw Error(ErrorKind::kChartDomain, "point off the sphere: c|p|^2 - 1 = " +
                                               std::to_string(std::abs(c_ * r2 - 1.0)));
    }
  }
  if (kind_ == TargetKind::kSpaceFormChart && c_ < 0.0) {
    cplx r2 = 0.0;
    for (const Jet& j : p) r2 += j.value() * j.value();
    if ((1.0 + c_ * r2).real() <= 0.0) throw Error(ErrorKind::kChartDomain, "point outside the ball model");
  }
}

std::vector<Jet> TargetModel::metric(const JetVec& p) const {
  require_in_domain(p);
  const JetOrder o = order_of({&p});
  const cplx b = base_of(p);
  const int d = dim_;
  switch (kind_) {
    case TargetKind::kFlat:
    case TargetKind::kSpaceFormEmbedded: {
      std::vector<Jet> h(static_cast<std::size_t>(d * d), zero_jet(o, b));
      for (int i = 0; i < d; ++i) h[static_cast<std::size_t>(i * d + i)] += cplx(1.0);
      return h;
    }
    default: return (*evaluator_)(truncate_all(p, o));
  }
}

std::vector<Jet> TargetModel::christoffels_numeric(const JetVec& p) const {
  if (!evaluator_) {
    throw Error(ErrorKind::kUnsupportedTarget, "target " + label_ + " has no metric evaluator");
  }
  require_in_domain(p);
  return christoffel_generic<Jet>(*evaluator_, truncate_all(p, order_of({&p})));
}

std::vector<Jet> TargetModel::christoffels(const JetVec& p) const {
  require_in_domain(p);
  const JetOrder o = order_of({&p});
  const JetVec x = truncate_all(p, o);
  const cplx b = base_of(p);
  const int d = dim_;
  auto idx = [d](int a, int i, int j) { return static_cast<std::size_t>((a * d + i) * d + j); };
  std::vector<Jet> g(static_cast<std::size_t>(d * d * d), zero_jet(o, b));
  switch (kind_) {
    case TargetKind::kFlat: return g;
    case TargetKind::kSpaceFormEmbedded:
      throw Error(ErrorKind::kUnsupportedTarget, "embedded sphere has no chart Christoffels");
    case TargetKind::kSpaceFormChart: {
      Jet q = zero_jet(o, b) + 1.0;
      for (const Jet& xi : x) q += xi * xi * c_;
      const Jet iq = reciprocal(q);
      JetVec f;
      for (const Jet& xi : x) f.push_back(xi * iq * (-2.0 * c_));
      for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i) {
          g[idx(k, k, i)] += f[static_cast<std::size_t>(i)];
          g[idx(k, i, k)] += f[static_cast<std::size_t>(i)];
          g[idx(k, i, i)] -= f[static_cast<std::size_t>(k)];
        }
      return g;
    }
    case TargetKind::kComplexSpaceFormFS: {
      const int n = d / 2;
      Jet q = zero_jet(o, b) + 1.0;
      for (int i = 0; i < n; ++i) q += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(n + i)];
      const Jet iq = reciprocal(q);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
          const Jet hb = x[static_cast<std::size_t>(n + i)] * iq;
          const Jet ab = x[static_cast<std::size_t>(i)] * iq;
          g[idx(k, k, i)] -= hb;
          g[idx(k, i, k)] -= hb;
          g[idx(n + k, n + k, n + i)] -= ab;
          g[idx(n + k, n + i, n + k)] -= ab;
        }
      return g;
    }
    case TargetKind::kGeneralChart: return christoffel_generic<Jet>(*evaluator_, x);
  }
  return g;
}

Jet TargetModel::pair(const JetVec& p, const JetVec& a, const JetVec& b) const {
  if (static_cast<int>(a.size()) != dim_ || static_cast<int>(b.size()) != dim_) {
    throw Error(ErrorKind::kRejectedInput, "pairing: vector length does not match target " + label_);
  }
  switch (kind_) {
    case TargetKind::kFlat:
    case TargetKind::kSpaceFormEmbedded: return dot(a, b);
    case TargetKind::kSpaceFormChart: {
      const JetOrder o = order_of({&p, &a, &b});
      Jet q(o, base_of(p));
      q += cplx(1.0);
      for (const Jet& xi : p) {
        const Jet t = xi.truncated(o);
        q += t * t * c_;
      }
      const Jet iq = reciprocal(q);
      return dot(truncate_all(a, o), truncate_all(b, o)) * iq * iq * 4.0;
    }
    case TargetKind::kComplexSpaceFormFS: {
      const JetOrder o = order_of({&p, &a, &b});
      return fs_pair(fs_frame(p, o, c_), a, b);
    }
    case TargetKind::kGeneralChart: {
      const JetOrder o = order_of({&p, &a, &b});
      const std::vector<Jet> h = (*evaluator_)(truncate_all(p, o));
      const JetVec A = truncate_all(a, o), B = truncate_all(b, o);
      Jet acc(o, base_of(p));
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
          acc += h[static_cast<std::size_t>(i * dim_ + j)] * A[static_cast<std::size_t>(i)] * B[static_cast<std::size_t>(j)];
      return acc;
    }
  }
  return Jet();
}

cplx TargetModel::pair_value(const std::vector<cplx>& p, const std::vector<cplx>& a,
                             const std::vector<cplx>& b) const {
  if (static_cast<int>(a.size()) != dim_ || static_cast<int>(b.size()) != dim_) {
    throw Error(ErrorKind::kRejectedInput, "pairing: vector length does not match target " + label_);
  }
  cplx ab = 0.0;
  switch (kind_) {
    case TargetKind::kFlat:
    case TargetKind::kSpaceFormEmbedded:
      for (int i = 0; i < dim_; ++i) ab += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
      return ab;
    case TargetKind::kSpaceFormChart: {
      cplx q = 1.0;
      for (int i = 0; i < dim_; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        q += c_ * p[k] * p[k];
        ab += a[k] * b[k];
      }
      return 4.0 * ab / (q * q);
    }
    case TargetKind::kComplexSpaceFormFS: {
      const std::size_t n = static_cast<std::size_t>(dim_ / 2);
      cplx q = 1.0, wa = 0.0, wb = 0.0, wab = 0.0, wbb = 0.0;
      for (std::size_t h = 0; h < n; ++h) {
        q += p[h] * p[n + h];
        ab += a[h] * b[n + h] + b[h] * a[n + h];
        wa += p[n + h] * a[h];
        wb += p[n + h] * b[h];
        wab += p[h] * a[n + h];
        wbb += p[h] * b[n + h];
      }
      return (ab / q - (wa * wbb + wb * wab) / (q * q)) * (2.0 / c_);
    }
    case TargetKind::kGeneralChart: {
      const JetOrder o0{0, 0, 0};
      auto lift = [&](const std::vector<cplx>& v) {
        JetVec out;
        for (const cplx& x : v) out.push_back(Jet::constant(o0, 0.0, x));
        return out;
      };
      return pair(lift(p), lift(a), lift(b)).value();
    }
  }
  return ab;
}

JetVec TargetModel::connection_term(const JetVec& p, const JetVec& dp, const JetVec& V) const {
  const JetOrder o = order_of({&p, &dp, &V});
  const cplx b = base_of(p);
  JetVec xs, Xs, Ws;
  const JetVec& x = fit(p, o, xs);
  const JetVec& X = fit(dp, o, Xs);
  const JetVec& W = fit(V, o, Ws);
  JetVec out(static_cast<std::size_t>(dim_), zero_jet(o, b));
  switch (kind_) {
    case TargetKind::kFlat: return out;
    case TargetKind::kSpaceFormEmbedded: {
      // P(dV) = dV - c<dV,p>p = dV + c<V,dp>p for V tangent.
      const Jet s = dot(W, X) * c_;
      for (int i = 0; i < dim_; ++i) out[static_cast<std::size_t>(i)] = s * x[static_cast<std::size_t>(i)];
      return out;
    }
    case TargetKind::kSpaceFormChart: {
      Jet q = zero_jet(o, b) + 1.0;
      for (const Jet& xi : x) q += xi * xi * c_;
      const Jet iq = reciprocal(q) * (-2.0 * c_);
      const Jet fv = dot(x, W) * iq, fx = dot(x, X) * iq, xv = dot(X, W);
      for (int k = 0; k < dim_; ++k) {
        const std::size_t kk = static_cast<std::size_t>(k);
        out[kk] = X[kk] * fv + W[kk] * fx - xv * iq * x[kk];
      }
      return out;
    }
    case TargetKind::kComplexSpaceFormFS: {
      const int n = dim_ / 2;
      Jet q = zero_jet(o, b) + 1.0;
      Jet wv(o, b), wx(o, b), wvb(o, b), wxb(o, b);
      for (int i = 0; i < n; ++i) {
        const std::size_t h = static_cast<std::size_t>(i), ah = static_cast<std::size_t>(n + i);
        q += x[h] * x[ah];
        wv += x[ah] * W[h];
        wx += x[ah] * X[h];
        wvb += x[h] * W[ah];
        wxb += x[h] * X[ah];
      }
      const Jet iq = reciprocal(q);
      wv *= iq;
      wx *= iq;
      wvb *= iq;
      wxb *= iq;
      for (int k = 0; k < n; ++k) {
        const std::size_t h = static_cast<std::size_t>(k), ah = static_cast<std::size_t>(n + k);
        out[h] = -(X[h] * wv + W[h] * wx);
        out[ah] = -(X[ah] * wvb + W[ah] * wxb);
      }
      return out;
    }
    case TargetKind::kGeneralChart: {
      const std::vector<Jet> g = christoffel_generic<Jet>(*evaluator_, x);
      for (int a = 0; a < dim_; ++a)
        for (int i = 0; i < dim_; ++i)
          for (int j = 0; j < dim_; ++j) {
            const Jet& gg = g[static_cast<std::size_t>((a * dim_ + i) * dim_ + j)];
            if (gg.is_zero()) continue;
            out[static_cast<std::size_t>(a)] += gg * X[static_cast<std::size_t>(i)] * W[static_cast<std::size_t>(j)];
          }
      return out;
    }
  }
  return out;
}

JetVec TargetModel::curvature(const JetVec& p, const JetVec& X, const JetVec& Y, const JetVec& Z) const {
  auto inner = [this, &p](const JetVec& a, const JetVec& b) { return pair(p, a, b); };
  switch (kind_) {
    case TargetKind::kFlat: {
      const JetOrder o = order_of({&p, &X, &Y, &Z});
      return JetVec(static_cast<std::size_t>(dim_), zero_jet(o, base_of(p)));
    }
    case TargetKind::kSpaceFormEmbedded:
    case TargetKind::kSpaceFormChart: return curvature_space_form(c_, X, Y, Z, inner);
    case TargetKind::kComplexSpaceFormFS: {
      const FsFrame f = fs_frame(p, order_of({&p, &X, &Y, &Z}), c_);
      return curvature_complex_space_form(
          c_, X, Y, Z, [&f](const JetVec& a, const JetVec& b) { return fs_pair(f, a, b); },
          [this](const JetVec& v) { return complex_structure(v); });
    }
    case TargetKind::kGeneralChart: return curvature_numeric(p, X, Y, Z);
  }
  return {};
}

JetVec TargetModel::curvature_numeric(const JetVec& p, const JetVec& X, const JetVec& Y, const JetVec& Z) const {
  if (!evaluator_) {
    throw Error(ErrorKind::kUnsupportedTarget, "target " + label_ + " has no metric evaluator");
  }
  require_in_domain(p);
  const JetOrder o = order_of({&p, &X, &Y, &Z});
  const cplx b = base_of(p);
  const int n = dim_;
  const JetVec x = truncate_all(p, o), Xv = truncate_all(X, o), Yv = truncate_all(Y, o), Zv = truncate_all(Z, o);
  const Jet zero = zero_jet(o, b);
  const Jet one = zero + 1.0;

  std::vector<Jet> gamma;
  // Directional derivatives of Gamma along X and along Y.
  std::vector<Jet> dgx(static_cast<std::size_t>(n * n * n), zero), dgy(dgx);
  for (int e = 0; e < n; ++e) {
    std::vector<Dual<Jet>> xs;
    for (int i = 0; i < n; ++i) xs.emplace_back(x[static_cast<std::size_t>(i)], i == e ? one : zero);
    const std::vector<Dual<Jet>> g = christoffel_generic<Dual<Jet>>(*evaluator_, xs);
    if (e == 0) {
      for (const auto& gi : g) gamma.push_back(gi.v);
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
      dgx[k] += g[k].d * Xv[static_cast<std::size_t>(e)];
      dgy[k] += g[k].d * Yv[static_cast<std::size_t>(e)];
    }
  }
  auto G = [&](const std::vector<Jet>& t, int a, int i, int j) -> const Jet& {
    return t[static_cast<std::size_t>((a * n + i) * n + j)];
  };
  // Gamma(U, W)^A = Gamma^A_ij U^i W^j.
  auto contract = [&](const std::vector<Jet>& t, const JetVec& U, const JetVec& W) {
    JetVec out(static_cast<std::size_t>(n), zero);
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Jet& g = G(t, a, i, j);
          if (g.is_zero()) continue;
          out[static_cast<std::size_t>(a)] += g * U[static_cast<std::size_t>(i)] * W[static_cast<std::size_t>(j)];
        }
    return out;
  };
  const JetVec t1 = contract(dgx, Yv, Zv);
  const JetVec t2 = contract(dgy, Xv, Zv);
  const JetVec t3 = contract(gamma, Xv, contract(gamma, Yv, Zv));
  const JetVec t4 = contract(gamma, Yv, contract(gamma, Xv, Zv));
  JetVec r(static_cast<std::size_t>(n), zero);
  for (int a = 0; a < n; ++a) {
    const std::size_t k = static_cast<std::size_t>(a);
    r[k] = t1[k] - t2[k] + t3[k] - t4[k];
  }
  return r;
}

JetVec TargetModel::conjugate(const JetVec& V) const {
  JetVec out;
  out.reserve(V.size());
  if (kind_ == TargetKind::kComplexSpaceFormFS) {
    const std::size_t n = V.size() / 2;
    for (std::size_t i = 0; i < n; ++i) out.push_back(jet_conjugate(V[n + i]));
    for (std::size_t i = 0; i < n; ++i) out.push_back(jet_conjugate(V[i]));
    return out;
  }
  for (const Jet& j : V) out.push_back(jet_conjugate(j));
  return out;
}

JetVec TargetModel::holomorphic_part(const JetVec& V) const {
  if (!is_kahler()) throw Error(ErrorKind::kUnsupportedTarget, "holomorphic part needs a Kahler target");
  JetVec out = V;
  const std::size_t n = V.size() / 2;
  for (std::size_t i = n; i < V.size(); ++i) out[i] = Jet(V[i].order(), V[i].base());
  return out;
}

JetVec TargetModel::complex_structure(const JetVec& V) const {
  if (!is_kahler()) throw Error(ErrorKind::kUnsupportedTarget, "complex structure needs a Kahler target");
  JetVec out = V;
  const std::size_t n = V.size() / 2;
  for (std::size_t i = 0; i < V.size(); ++i) out[i] *= (i < n ? cplx(0.0, 1.0) : cplx(0.0, -1.0));
  return out;
}

// ---------------------------------------------------------------------------
// closed-form curvature

JetVec curvature_space_form(double c, const JetVec& X, const JetVec& Y, const JetVec& Z, const Pairing& inner) {
  if (c == 0.0) {
    const JetOrder o = order_of({&X, &Y, &Z});
    return JetVec(X.size(), Jet(o, X.empty() ? cplx{} : X[0].base()));
  }
  const Jet yz = inner(Y, Z) * c;
  const Jet xz = inner(X, Z) * c;
  return vec_sub(vec_scale(X, yz), vec_scale(Y, xz));
}

JetVec curvature_complex_space_form(double c4, const JetVec& X, const JetVec& Y, const JetVec& Z,
                                    const Pairing& inner, const ComplexStructure& J) {
  const JetVec JX = J(X), JY = J(Y), JZ = J(Z);
  const double k = c4 / 4.0;
  JetVec r = vec_scale(X, inner(Y, Z) * k);
  r = vec_sub(r, vec_scale(Y, inner(X, Z) * k));
  r = vec_add(r, vec_scale(JX, inner(JY, Z) * k));
  r = vec_sub(r, vec_scale(JY, inner(JX, Z) * k));
  r = vec_add(r, vec_scale(JZ, inner(X, JY) * (2.0 * k)));
  return r;
}

// ---------------------------------------------------------------------------
// embedded sphere

JetVec embed_project(const TargetModel& model, const JetVec& ambient) {
  if (model.kind() != TargetKind::kSpaceFormEmbedded) {
    throw Error(ErrorKind::kUnsupportedTarget, "embed_project needs an embedded sphere");
  }
  if (static_cast<int>(ambient.size()) != model.dim()) {
    throw Error(ErrorKind::kRejectedInput, "ambient vector has the wrong length");
  }
  if (max_abs_value(ambient) == 0.0) throw Error(ErrorKind::kDegenerateInput, "zero ambient vector");
  const Jet r2 = dot(ambient, ambient) * model.curvature_constant();
  return vec_scale(truncate_all(ambient, r2.order()), inverse_sqrt(r2));
}

JetVec field_project(const TargetModel& model, const JetVec& p, const JetVec& ambient_field) {
  if (model.kind() != TargetKind::kSpaceFormEmbedded) {
    throw Error(ErrorKind::kUnsupportedTarget, "field_project needs an embedded sphere");
  }
  const Jet s = dot(ambient_field, p) * model.curvature_constant();
  return vec_sub(ambient_field, vec_scale(p, s));
}

}  // namespace hjlab
