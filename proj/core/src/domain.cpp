#include "hjlab/domain.hpp"

#include <cmath>
#include <numbers>

#include "hjlab/error.hpp"

namespace hjlab {

const char* to_string(Chart c) { return c == Chart::kNorth ? "north" : "south"; }

DomainPoint make_domain_point(Chart chart, cplx u0, JetOrder order) {
  DomainPoint dp;
  dp.chart = chart;
  dp.u = Jet::z_variable(order, u0);
  dp.ubar = Jet::zbar_variable(order, u0);
  dp.t = Jet::t_variable(order, u0);
  refresh_ambient(dp);
  return dp;
}

void refresh_ambient(DomainPoint& dp) {
  const Jet uu = dp.u * dp.ubar;
  const Jet inv = reciprocal(uu + 1.0);
  const cplx i(0.0, 1.0);
  const double s = dp.chart == Chart::kNorth ? 1.0 : -1.0;
  dp.x[0] = (dp.u + dp.ubar) * inv;
  dp.x[1] = (dp.u - dp.ubar) * inv * (-i * s);
  dp.x[2] = (1.0 - uu) * inv * s;
}

Jet inverse_conformal_factor(const DomainPoint& dp) {
  const Jet q = dp.u * dp.ubar + 1.0;
  return q * q;
}

cplx chart_coordinate(Chart chart, cplx z_north) {
  if (chart == Chart::kNorth) return z_north;
  if (z_north == cplx{}) throw Error(ErrorKind::kChartDomain, "north pole is outside the south chart");
  return 1.0 / z_north;
}

cplx north_coordinate(Chart chart, cplx u) { return chart_coordinate(chart, u); }

cplx transition_derivative(cplx z_north) {
  if (z_north == cplx{}) throw Error(ErrorKind::kChartDomain, "chart transition at z = 0");
  return -1.0 / (z_north * z_north);
}

double QuadratureGrid::total_weight() const {
  std::vector<double> w;
  w.reserve(nodes.size());
  for (const GridNode& n : nodes) w.push_back(n.weight);
  return pairwise_sum(w);
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw Error(ErrorKind::kRejectedInput, "Gauss-Legendre needs n >= 1");
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = xm - xl * z;
    x[static_cast<std::size_t>(n - 1 - i)] = xm + xl * z;
    w[static_cast<std::size_t>(i)] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
}

namespace {

QuadratureGrid build(int n_theta, int n_phi, bool patch) {
  if (n_theta < 2 || n_phi < 2) throw Error(ErrorKind::kRejectedInput, "grid resolution too small");
  QuadratureGrid g;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  g.patch = patch;
  std::vector<double> ct, wt;
  gauss_legendre(n_theta, -1.0, 1.0, ct, wt);
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double c = ct[static_cast<std::size_t>(i)];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double r = s / (1.0 + c);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = dphi * (j + 0.5);
      const cplx z = std::polar(r, phi);
      GridNode node;
      node.z = z;
      node.weight = wt[static_cast<std::size_t>(i)] * dphi;
      node.chart = c >= 0.0 ? Chart::kNorth : Chart::kSouth;
      if (patch && node.chart == Chart::kSouth) continue;
      node.u = chart_coordinate(node.chart, z);
      node.overlap = !patch && r >= 0.5 && r <= 2.0;
      node.index = static_cast<int>(g.nodes.size());
      g.nodes.push_back(node);
    }
  }
  return g;
}

}  // namespace

QuadratureGrid make_sphere_grid(int n_theta, int n_phi) { return build(n_theta, n_phi, false); }
QuadratureGrid make_patch_grid(int n_theta, int n_phi) { return build(n_theta, n_phi, true); }

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

}  // namespace hjlab
