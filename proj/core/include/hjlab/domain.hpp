#pragma once

// The domain S^2 with its two stereographic charts and the product
// quadrature used for integrals.
//
// North chart: z = (x + iy)/(1 + x3).  South chart: zeta = 1/z =
// (x - iy)/(1 - x3).  Both carry the round metric 4|du|^2/(1 + |u|^2)^2, so
// lambda^2 = 4/(1 + |u|^2)^2 in either chart.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "hjlab/jet.hpp"

namespace hjlab {

enum class Chart { kNorth, kSouth };

const char* to_string(Chart c);

// Jets of the chart coordinate, its conjugate, t and the ambient point at a
// domain point.
struct DomainPoint {
  Chart chart = Chart::kNorth;
  Jet u;
  Jet ubar;
  Jet t;
  std::array<Jet, 3> x;
};

DomainPoint make_domain_point(Chart chart, cplx u0, JetOrder order);
// Recomputes the ambient jets from (u, ubar), e.g. after a reparametrization
// substituted new jets for u and ubar.
void refresh_ambient(DomainPoint& dp);

// 4/lambda^2 = (1 + u ubar)^2 as a jet.
Jet inverse_conformal_factor(const DomainPoint& dp);

// Converts a point given by its north coordinate to the chart coordinate.
cplx chart_coordinate(Chart chart, cplx z_north);
cplx north_coordinate(Chart chart, cplx u);
// d(zeta)/dz = -1/z^2 at a north coordinate z.
cplx transition_derivative(cplx z_north);

struct GridNode {
  int index = 0;
  Chart chart = Chart::kNorth;
  cplx u;        // coordinate in `chart`
  cplx z;        // north coordinate of the same point
  double weight = 0.0;
  bool overlap = false;  // 1/2 <= |z| <= 2: also evaluated in the other chart
};

struct QuadratureGrid {
  int n_theta = 0;
  int n_phi = 0;
  bool patch = false;  // north patch |z| <= 1 only
  std::vector<GridNode> nodes;

  double total_weight() const;
};

// Gauss-Legendre in cos(theta) times the trapezoid rule in phi.  Nodes with
// |z| <= 1 are assigned to the north chart, the others to the south chart.
QuadratureGrid make_sphere_grid(int n_theta, int n_phi);
// The nodes of make_sphere_grid with |z| <= 1, all in the north chart.
QuadratureGrid make_patch_grid(int n_theta, int n_phi);

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

// Deterministic pairwise summation; result independent of how the values
// were produced.
double pairwise_sum(std::span<const double> v);

}  // namespace hjlab
