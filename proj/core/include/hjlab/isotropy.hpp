#pragma once

// Real and complex isotropy differentials and the first-order preservation
// quantities built from them.
//
//   eta^R_{r,s} = < D^{r-1} d^C phi/dz, D^{s-1} d^C phi/dz >            (bilinear)
//   j^R_{r,s}(v) = < D^r v, D^{s-1} d^C phi/dz > + < D^{r-1} d^C phi/dz, D^s v >
//   eta^C_{r,s} = < D^{r-1} d phi/dz, Dbar^{s-1} d phi/dzbar >^Herm
//   j^C_{r,s}(v) = < D^r v, Dbar^{s-1} d phi/dzbar >^Herm + < D^{r-1} d phi/dz, Dbar^s v >^Herm
//
// Here d phi/dz and d phi/dzbar are the (1,0) parts of d^C phi/dz and
// d^C phi/dzbar, D = D/dz and Dbar = D/dzbar.

#include <vector>

#include "hjlab/pullback.hpp"

namespace hjlab {

struct DifferentialSample {
  int k = 0;
  cplx value;          // eta at t = 0
  cplx dbar_residual;  // d/dzbar eta, when the jet carries zbar-order >= 1
  cplx dt_value;       // d/dt eta at t = 0, for families
  cplx dbar_dt;        // d/dzbar d/dt eta at t = 0
  double scale = 0.0;  // product of the Hermitian lengths of the pairing inputs
};

DifferentialSample sample_of(const Jet& eta, double scale, int k);

// [k-1] = D^{k-1} d^C phi/dz for k = 1..kmax.
std::vector<FieldGerm> dz_chain(const MapGerm& p, int kmax);
// [k] = D^k v in direction dir for k = 0..kmax.
std::vector<FieldGerm> field_chain(Direction dir, const MapGerm& p, const FieldGerm& v, int kmax);
// [k-1] = D^{k-1} d phi/dz, (1,0) part; Kahler targets.
std::vector<FieldGerm> dz_hol_chain(const MapGerm& p, int kmax);
// [k-1] = Dbar^{k-1} d phi/dzbar, (1,0) part; Kahler targets.
std::vector<FieldGerm> dzbar_hol_chain(const MapGerm& p, int kmax);

DifferentialSample eta_real(const MapGerm& p);
DifferentialSample eta_real_rs(const MapGerm& p, int r, int s);
DifferentialSample eta_real_rs(const std::vector<FieldGerm>& chain, const MapGerm& p, int r, int s);

// Value of j^R_{r,s}(v) together with its input scale.
DifferentialSample j_real_rs(const MapGerm& p, const FieldGerm& v, int r, int s);
DifferentialSample j_real_rs(const std::vector<FieldGerm>& chain, const std::vector<FieldGerm>& vchain,
                             const MapGerm& p, int r, int s);

DifferentialSample eta_cx_rs(const MapGerm& p, int r, int s);
DifferentialSample eta_cx_rs(const std::vector<FieldGerm>& zchain, const std::vector<FieldGerm>& zbchain,
                             const MapGerm& p, int r, int s);
DifferentialSample j_cx_rs(const MapGerm& p, const FieldGerm& v, int r, int s);
DifferentialSample j_cx_rs(const std::vector<FieldGerm>& zchain, const std::vector<FieldGerm>& zbchain,
                           const std::vector<FieldGerm>& vz, const std::vector<FieldGerm>& vzb,
                           const MapGerm& p, int r, int s);

// <Dv/dz, d^C phi/dz>.
DifferentialSample conformal_field_test(const MapGerm& p, const FieldGerm& v);

// D v'/dzbar.
FieldGerm holomorphic_field_residual(const MapGerm& p, const FieldGerm& v);

enum class EtaKind { kReal, kComplex };
// d/dzbar of eta_{r,s} and, when p carries t, d/dzbar d/dt at t = 0.
DifferentialSample dbar_of_eta(const MapGerm& p, int r, int s, EtaKind kind);

struct SpanResidual {
  double residual = 0.0;  // Hermitian length of the least-squares remainder
  double scale = 0.0;     // Hermitian length of the decomposed vector
  int rank = 0;
};

// Least-squares remainder of `target` against span(basis), measured in the
// Hermitian metric of the target at p.  Uses order-0 values.
SpanResidual span_residual(const MapGerm& p, const FieldGerm& target, const std::vector<FieldGerm>& basis);

// R(X, d^C phi/dz) D^{k-1} d phi/dz against span{d phi/dz, D^{k-1} d phi/dz,
// eta^C_{k,1} X'}.
SpanResidual lemma45_decompose(const MapGerm& p, const FieldGerm& X, int k);

// (D/dt) D^{k-1} d^C phi_t/dz - D^k v at t = 0 against
// theta_{k-1} = span{d^C phi/dz, ..., D^{k-2} d^C phi/dz}.
SpanResidual theta_span_check(const MapGerm& family, int k);

}  // namespace hjlab
