#pragma once

// Target manifolds (N, h).
//
// A point of N is a vector of component jets: ambient coordinates for the
// embedded sphere, chart coordinates otherwise.  On the Fubini-Study chart of
// CP^n the 2n components are (w^1..w^n, wbar^1..wbar^n), with wbar carried as
// an independent jet so that complexified vectors split into their (1,0) and
// (0,1) blocks.  The metric is always used as a complex-bilinear form h_AB.
//
// Curvature convention: R(X,Y) = [D_X, D_Y] - D_[X,Y], so a space form of
// curvature c has R(X,Y)Z = c(<Y,Z>X - <X,Z>Y).

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hjlab/dual.hpp"
#include "hjlab/jet.hpp"

namespace hjlab {

using JetVec = std::vector<Jet>;

enum class TargetKind {
  kFlat,
  kSpaceFormEmbedded,
  kSpaceFormChart,
  kComplexSpaceFormFS,
  kGeneralChart,
};

const char* to_string(TargetKind kind);

// Coordinates -> row-major dim x dim bilinear metric.  Built from one generic
// callable so the same formula serves plain jets and the nested dual rings
// used for Christoffel derivatives.
class MetricEvaluator {
 public:
  template <class F>
  explicit MetricEvaluator(F f) : jet_(f), dual_(f), dual2_(f) {}

  std::vector<Jet> operator()(const std::vector<Jet>& x) const { return jet_(x); }
  std::vector<Dual<Jet>> operator()(const std::vector<Dual<Jet>>& x) const { return dual_(x); }
  std::vector<Dual<Dual<Jet>>> operator()(const std::vector<Dual<Dual<Jet>>>& x) const {
    return dual2_(x);
  }

 private:
  std::function<std::vector<Jet>(const std::vector<Jet>&)> jet_;
  std::function<std::vector<Dual<Jet>>(const std::vector<Dual<Jet>>&)> dual_;
  std::function<std::vector<Dual<Dual<Jet>>>(const std::vector<Dual<Dual<Jet>>>&)> dual2_;
};

class TargetModel {
 public:
  static TargetModel flat(int dim);
  // Sphere |p|^2 = 1/c in R^{ambient_dim}; connection by tangential projection.
  static TargetModel space_form_embedded(int ambient_dim, double c);
  // Stereographic chart: h = 4/(1 + c|x|^2)^2 delta.
  static TargetModel space_form_chart(int dim, double c);
  // CP^n, affine chart, holomorphic sectional curvature c4.
  static TargetModel complex_space_form_fs(int n, double c4 = 4.0);
  static TargetModel general_chart(int dim, MetricEvaluator metric, std::string label = "general");

  TargetKind kind() const { return kind_; }
  // Number of point components.
  int dim() const { return dim_; }
  int complex_dim() const { return kind_ == TargetKind::kComplexSpaceFormFS ? dim_ / 2 : 0; }
  // Sectional curvature c, or holomorphic sectional curvature for FS.
  double curvature_constant() const { return c_; }
  double tolerance() const { return tol_; }
  void set_tolerance(double tol) { tol_ = tol; }
  bool is_kahler() const { return kind_ == TargetKind::kComplexSpaceFormFS; }
  bool is_space_form() const;
  bool is_complex_space_form() const { return is_kahler(); }
  bool has_evaluator() const { return evaluator_ != nullptr; }
  const std::string& label() const { return label_; }

  // Metric components h_AB along p (dim*dim, row-major).
  std::vector<Jet> metric(const JetVec& p) const;
  // Gamma^A_BC along p, index (A*dim + B)*dim + C.  Closed form where one
  // exists; jet-derived from the metric evaluator for general charts.
  std::vector<Jet> christoffels(const JetVec& p) const;
  // Gamma from differentiating the metric evaluator, whatever the kind.
  std::vector<Jet> christoffels_numeric(const JetVec& p) const;

  // h(a, b) along p.
  Jet pair(const JetVec& p, const JetVec& a, const JetVec& b) const;
  // h(a, b) at a point, on plain values.
  cplx pair_value(const std::vector<cplx>& p, const std::vector<cplx>& a, const std::vector<cplx>& b) const;
  // Gamma(dp, V): the term added to the coordinate derivative of V.
  JetVec connection_term(const JetVec& p, const JetVec& dp, const JetVec& V) const;
  // Closed-form R(X,Y)Z (numeric for general charts).
  JetVec curvature(const JetVec& p, const JetVec& X, const JetVec& Y, const JetVec& Z) const;
  // R(X,Y)Z assembled from Christoffel jets and their coordinate derivatives.
  JetVec curvature_numeric(const JetVec& p, const JetVec& X, const JetVec& Y, const JetVec& Z) const;

  // Complex conjugation of a complexified vector.
  JetVec conjugate(const JetVec& V) const;
  // (1,0) block of V on a Kahler target.
  JetVec holomorphic_part(const JetVec& V) const;
  // Complex structure of the FS chart: i on (1,0), -i on (0,1).
  JetVec complex_structure(const JetVec& V) const;

  // Checks that p lies in the chart / on the sphere at order 0.
  void require_in_domain(const JetVec& p) const;

 private:
  TargetModel() = default;

  TargetKind kind_ = TargetKind::kFlat;
  int dim_ = 0;
  double c_ = 0.0;
  double tol_ = 1e-9;
  std::string label_;
  std::shared_ptr<const MetricEvaluator> evaluator_;
};

using Pairing = std::function<Jet(const JetVec&, const JetVec&)>;
using ComplexStructure = std::function<JetVec(const JetVec&)>;

JetVec curvature_space_form(double c, const JetVec& X, const JetVec& Y, const JetVec& Z,
                            const Pairing& inner);
JetVec curvature_complex_space_form(double c4, const JetVec& X, const JetVec& Y, const JetVec& Z,
                                    const Pairing& inner, const ComplexStructure& J);

// Radial normalization onto |p| = 1/sqrt(c).
JetVec embed_project(const TargetModel& model, const JetVec& ambient);
// Fiberwise projection onto p^perp.
JetVec field_project(const TargetModel& model, const JetVec& p, const JetVec& ambient_field);

// Vector helpers shared by the geometry modules.  All of them truncate their
// inputs to a common order first.
JetOrder common_order(const JetVec& v);
JetVec truncate_all(const JetVec& v, const JetOrder& o);
JetVec vec_add(const JetVec& a, const JetVec& b);
JetVec vec_sub(const JetVec& a, const JetVec& b);
JetVec vec_scale(const JetVec& a, const Jet& s);
JetVec vec_scale(const JetVec& a, cplx s);
JetVec vec_zero_like(const JetVec& a);
Jet dot(const JetVec& a, const JetVec& b);
double max_abs_value(const JetVec& v);

}  // namespace hjlab
