#pragma once

#include "fockfuse/fock.hpp"

namespace fockfuse {

// A unitary on Fock space paired with the orthogonal operator it implements
// and the o_res generators it was assembled from.
struct Implementer {
    FockOp U;
    AOp g;
    std::vector<Mat> provenance;  // generators A_i on V, U = prod exp(A_i~)
};

// max over V-basis x of || U pi(x) - pi(g x) U ||_F, which bounds the
// operator-norm defect of U pi(x) U^* - pi(g x) for unitary U.
inline double implementation_residual(const FockOp& u, const AOp& g, const FockSpace& f) {
  double worst = 0;
  for (int i = 0; i < f.model.dim; ++i) {
    Vec x = Vec::Zero(f.model.dim);
    x(i) = 1.0;
    SpMat px = clifford_rep_sparse(f, x);
    SpMat pgx = clifford_rep_sparse(f, Vec(g.mat * x));
    Mat r = u.mat * Mat(px) - Mat(pgx) * u.mat;
    worst = std::max(worst, r.norm());
  }
  return worst;
}

inline Implementer sigma_lift(const OResElement& el, const FockSpace& f) {
  Implementer imp;
  imp.U = FockOp(expm_skew(tilde_lift(el, f).mat), false, Parity::even);
  imp.g = AOp(expm_skew(el.A.mat));
  imp.provenance.push_back(el.A.mat);
  return imp;
}

// Lift an orthogonal g by principal logarithm; if the logarithm fails
// (eigenvalue at -1), split g into 2^k-th roots first.
inline Implementer sigma_lift(const AOp& g, const FockSpace& f, const SpinorModel& m) {
  Mat log_g = logm_unitary(g.mat);
  // symmetrize into o_res and check nothing was lost
  Mat a = 0.5 * (log_g + alpha_conjugate(m.alpha, log_g));
  OResElement el = decompose(AOp(a), m);
  if ((expm_skew(el.A.mat) - g.mat).norm() > 1e-8 * std::sqrt(double(m.dim)))
    throw std::runtime_error("sigma_lift: log does not reproduce g within o_res");
  Implementer imp = sigma_lift(el, f);
  imp.g = g;
  return imp;
}

inline Implementer sigma_lift_factored(const AOp& g, const FockSpace& f, const SpinorModel& m,
                                       int max_halvings = 12) {
  for (int k = 0; k <= max_halvings; ++k) {
    Mat root = g.mat;
    bool ok = true;
    try {
      for (int i = 0; i < k; ++i) root = expm_skew(Mat(0.5 * logm_unitary(root)));
      Mat log_root = logm_unitary(root);
      Mat a = 0.5 * (log_root + alpha_conjugate(m.alpha, log_root));
      OResElement el = decompose(AOp(a), m);
      Implementer step = sigma_lift(el, f);
      Mat u = step.U.mat;
      Mat total = u;
      for (int i = 1; i < (1 << k); ++i) total = u * total;
      Implementer imp;
      imp.U = FockOp(total, false, Parity::even);
      imp.g = g;
      for (int i = 0; i < (1 << k); ++i) imp.provenance.push_back(el.A.mat);
      return imp;
    } catch (const std::runtime_error&) {
      ok = false;
    }
    (void)ok;
  }
  throw std::runtime_error("sigma_lift_factored: could not factor g into logarithmic steps");
}

enum class CocycleForm { j_form, block_form, prime_form, defect_oracle };

struct CocycleValue {
    double value = 0;
    CocycleForm form = CocycleForm::j_form;
};

// Central-extension 2-cocycle of the lift, in its closed trace forms and as
// the Fock-space commutator defect [A1~, A2~] - [A1,A2]~ = i w 1.
inline CocycleValue cocycle(const OResElement& a1, const OResElement& a2, CocycleForm form,
                            const SpinorModel& m, const FockSpace* f = nullptr,
                            double scalar_tol = 1e-8) {
  CocycleValue out;
  out.form = form;
  switch (form) {
    case CocycleForm::j_form: {
      Mat k1 = m.J.mat * a1.A.mat - a1.A.mat * m.J.mat;
      Mat k2 = m.J.mat * a2.A.mat - a2.A.mat * m.J.mat;
      out.value = ((m.J.mat * k1 * k2).trace() / 8.0).real();
      break;
    }
    case CocycleForm::block_form: {
      Mat a3 = m.basis_L.adjoint() * (a1.A.mat * a2.A.mat - a2.A.mat * a1.A.mat) * m.basis_L;
      cplx tr = (a1.a * a2.a - a2.a * a1.a - a3).trace();
      out.value = (tr / cplx(0, 2)).real();
      break;
    }
    case CocycleForm::prime_form: {
      // composition of two antilinear maps is linear: a1' a2' = a1' conj(a2')
      Mat comm = a1.a_prime * a2.a_prime.conjugate() - a2.a_prime * a1.a_prime.conjugate();
      out.value = (-comm.trace() / cplx(0, 2)).real();
      break;
    }
    case CocycleForm::defect_oracle: {
      if (!f) throw std::invalid_argument("cocycle: defect oracle needs a Fock space");
      Mat t1 = tilde_lift(a1, *f).mat;
      Mat t2 = tilde_lift(a2, *f).mat;
      OResElement a3 = commutator(m, a1, a2);
      Mat d = t1 * t2 - t2 * t1 - tilde_lift(a3, *f).mat;
      cplx mean = d.trace() / double(f->dim);
      double off = (d - mean * Mat::Identity(f->dim, f->dim)).norm();
      if (off > scalar_tol * std::max(1.0, d.norm()) + 1e-10)
        throw std::runtime_error("cocycle: commutator defect is not scalar, off-scalar part " +
                                 std::to_string(off));
      out.value = mean.imag();
      if (std::abs(mean.real()) > scalar_tol * std::max(1.0, std::abs(mean)) + 1e-10)
        throw std::runtime_error("cocycle: defect scalar has a real part");
      break;
    }
  }
  return out;
}

// kappa(U) = Lambda_{alpha tau} U Lambda_{alpha tau}; in the mode bases used
// here alpha tau fixes every L-mode, so the conjugator is plain conjugation.
inline Implementer kappa_imp(const Implementer& imp, const FockSpace& f, const SpinorModel& m) {
  AOp lam(Mat::Identity(f.dim, f.dim), true, Parity::even);
  Implementer out;
  out.U = compose(lam, compose(imp.U, lam));
  out.U.parity = imp.U.parity;
  out.g = compose(m.tau, compose(imp.g, m.tau));
  for (const Mat& a : imp.provenance) out.provenance.push_back(m.tau.mat * a.conjugate() * m.tau.mat);
  return out;
}

inline FockOp kappa_op(const FockOp& u) { return FockOp(u.mat.conjugate(), u.anti, u.parity); }

// Z_sigma(gamma, X): the scalar defect U^-1 (m(X))~ U - (m(Ad_gamma^-1 X))~,
// asserted to be an imaginary multiple of the identity.
struct ZSigmaResult {
    cplx value;          // the scalar z with defect = z * 1
    double off_scalar;   // distance from the scalar multiple
};

inline ZSigmaResult z_sigma_defect(const FockOp& u_gamma, const OResElement& sx,
                                   const OResElement& sx_ad, const FockSpace& f,
                                   double scalar_tol = 1e-7) {
  Mat lhs = u_gamma.mat.adjoint() * tilde_lift(sx, f).mat * u_gamma.mat;
  Mat d = lhs - tilde_lift(sx_ad, f).mat;
  ZSigmaResult r;
  r.value = d.trace() / double(f.dim);
  r.off_scalar = (d - r.value * Mat::Identity(f.dim, f.dim)).norm();
  if (r.off_scalar > scalar_tol * std::max(1.0, d.norm()) + 1e-9)
    throw std::runtime_error("z_sigma: defect operator is not scalar");
  return r;
}

}  // namespace fockfuse
