#pragma once

#include "fockfuse/model.hpp"
#include "fockfuse/rng.hpp"

namespace fockfuse {

// Element of the restricted orthogonal Lie algebra: a linear A with A* = -A
// and [alpha, A] = 0, carried together with its (a, a') split over L.  The
// linear part `a` is skew-Hermitian on L; the antilinear part `a_prime` acts
// as x -> a_prime * conj(x) in L coordinates and is antisymmetric.
struct OResElement {
    AOp A;          // on V
    Mat a;          // ell x ell, skew-Hermitian
    Mat a_prime;    // ell x ell, antisymmetric (a_prime^T = -a_prime)
};

inline Mat alpha_conjugate(const AOp& alpha, const Mat& a) {
  // alpha o A o alpha as a linear operator
  return alpha.mat * a.conjugate() * alpha.mat.conjugate();
}

struct DecomposeReport {
    double skew_residual = 0;
    double alpha_residual = 0;
    double a_skew_residual = 0;
    double a_prime_sym_residual = 0;
    double reconstruction_residual = 0;
};

inline Mat assemble_ores(const SpinorModel& m, const Mat& a, const Mat& a_prime) {
  return m.basis_L * a * m.basis_L.adjoint() + m.basis_L * a_prime * m.basis_aL.adjoint() +
         m.basis_aL * a_prime.conjugate() * m.basis_L.adjoint() +
         m.basis_aL * a.conjugate() * m.basis_aL.adjoint();
}

inline OResElement decompose(const AOp& A, const SpinorModel& m, double tol = kStructuralTol,
                             DecomposeReport* report = nullptr) {
  if (A.anti) throw std::invalid_argument("decompose: input must be linear");
  const double scale = std::max(1.0, A.mat.norm());
  DecomposeReport rep;
  rep.skew_residual = (A.mat + A.mat.adjoint()).norm();
  rep.alpha_residual = (A.mat - alpha_conjugate(m.alpha, A.mat)).norm();
  if (rep.skew_residual > tol * scale)
    throw std::invalid_argument("decompose: not skew-adjoint, residual " + std::to_string(rep.skew_residual));
  if (rep.alpha_residual > tol * scale)
    throw std::invalid_argument("decompose: does not commute with alpha, residual " +
                                std::to_string(rep.alpha_residual));

  OResElement el;
  el.A = A;
  el.a = m.basis_L.adjoint() * A.mat * m.basis_L;
  el.a_prime = m.basis_L.adjoint() * A.mat * m.basis_aL;
  rep.a_skew_residual = (el.a + el.a.adjoint()).norm();
  rep.a_prime_sym_residual = (el.a_prime + el.a_prime.transpose()).norm();
  rep.reconstruction_residual = (assemble_ores(m, el.a, el.a_prime) - A.mat).norm();
  if (report) *report = rep;
  return el;
}

inline OResElement make_ores(const SpinorModel& m, const Mat& a, const Mat& a_prime) {
  OResElement el;
  el.a = 0.5 * (a - a.adjoint().eval());
  el.a_prime = 0.5 * (a_prime - a_prime.transpose().eval());
  el.A = AOp(assemble_ores(m, el.a, el.a_prime));
  return el;
}

inline OResElement random_ores(const SpinorModel& m, Rng& rng, double target_norm = 0.4) {
  const int l = m.ell;
  Mat g(l, l), h(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      g(i, j) = rng.cgaussian();
      h(i, j) = rng.cgaussian();
    }
  OResElement el = make_ores(m, Mat(0.5 * (g - g.adjoint().eval())), Mat(0.5 * (h - h.transpose().eval())));
  double nrm = opnorm(el.A.mat);
  if (nrm > 0) {
    double f = target_norm / nrm;
    el.a *= f;
    el.a_prime *= f;
    el.A.mat *= f;
  }
  return el;
}

inline OResElement commutator(const SpinorModel& m, const OResElement& x, const OResElement& y) {
  AOp c(Mat(x.A.mat * y.A.mat - y.A.mat * x.A.mat));
  return decompose(c, m);
}

}  // namespace fockfuse
