#pragma once

// Closed-form test corpus: harmonic maps, their variations, and designed
// non-examples.  Every case is built fresh by name and is immutable after
// construction.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hjlab/pullback.hpp"

namespace hjlab {

enum class FamilyTag { kJacobi, kNonJacobi, kReparametrization, kChartLinear };
const char* to_string(FamilyTag tag);

struct Family {
  std::string name;
  FamilyTag tag = FamilyTag::kJacobi;
  MapSpec spec;  // phi_t as a t-jet
  // phi_{t0} at a finite parameter, for isometry flows only.
  std::function<MapSpec(double)> at_parameter;
};

// Jacobi certificate: tagged jacobi or reparametrization.
bool is_jacobi(const Family& f);

struct Manifest {
  bool harmonic = false;
  bool conformal = false;
  bool real_isotropic = false;
  bool complex_isotropic = false;
  bool holomorphic = false;
};

// Homogeneous coordinates of a map into CP^n as polynomials in (z, zbar)
// with t-dependent coefficients.  In the south chart the monomial z^p zbar^q
// becomes zeta^{deg_z - p} zetabar^{deg_zbar - q}.
struct CurveSpec {
  int n = 1;
  int deg_z = 1;
  int deg_zbar = 0;
  // Homogeneous index used as the affine denominator; -1 picks, per domain
  // point, the component of largest modulus.  The Fubini-Study geometry is
  // unitary invariant, so every checked quantity is chart independent.
  int denominator = -1;
  std::vector<std::array<cplx, 3>> coef;

  CurveSpec() = default;
  CurveSpec(int n, int deg_z, int deg_zbar, int denominator);
  // Coefficient of t^j z^p zbar^q in component k.
  cplx& at(int k, int p, int q, int j = 0);
  cplx at(int k, int p, int q, int j = 0) const;
};

using HomogeneousFn = std::function<JetVec(const DomainPoint&)>;

struct AtlasCase {
  std::string name;
  std::string description;
  std::shared_ptr<const TargetModel> target;
  MapSpec map;
  Manifest manifest;
  bool patch = false;  // defined on the north patch |z| <= 1 only
  std::vector<Family> families;
  // Checks for which this case is a designed failure.
  std::vector<std::string> controls;
  // CP^n cases: homogeneous lift (P, Pbar) and the affine denominator index.
  HomogeneousFn homogeneous;
  int denominator = -1;
  int deg_z = 0;     // bidegree of the homogeneous lift
  int deg_zbar = 0;

  bool is_control_for(const std::string& check) const;
};

// (P, Pbar): the homogeneous components and their conjugates, both computed
// from (u, ubar) so that jets of any (z, zbar) order stay consistent.
JetVec curve_homogeneous(const CurveSpec& c, const DomainPoint& dp);
// Affine chart components (w, wbar) of (P, Pbar).
JetVec dehomogenize(const JetVec& PP, int denominator);
// Index of the largest |P_k| at the base point.
int affine_chart_index(const JetVec& PP);

AtlasCase make_rational_map(const CurveSpec& curve, const std::string& name = "rational");
AtlasCase make_veronese_s4();

// phi_t = exp(tA) phi for a skew (sphere) or skew-Hermitian (CP^n) generator,
// acting on ambient or homogeneous coordinates.
using Generator = std::vector<std::vector<cplx>>;
Family make_isometry_variation(const AtlasCase& c, const Generator& A, const std::string& name);

// Homogeneous coefficients C + t dC.
Family make_coefficient_variation(const CurveSpec& base, const CurveSpec& direction, const std::string& name);

// phi o psi_t with psi_t the dilation u -> e^t u (north), zeta -> e^{-t} zeta (south).
Family make_dilation_family(const AtlasCase& c);

// phi + t V(x) followed by the target's projection; V a random polynomial of
// degree <= 2 in the ambient coordinates of the domain.
Family make_chart_linear_family(const AtlasCase& c, std::uint64_t seed, int index);

struct ControlSpec {
  std::string case_name;
  std::string family;  // empty for map-level controls
  std::string check;
};
std::vector<ControlSpec> make_negative_controls();

const std::vector<std::string>& case_names();
AtlasCase make_case(const std::string& name);

// Setup validation on a grid: CP^n cases keep |P_den| / |P| >= 0.05 at every
// node (kChartDomain otherwise); embedded cases lie on the sphere.
void validate_case(const AtlasCase& c, const QuadratureGrid& grid);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t name_hash(const std::string& s);

}  // namespace hjlab
