#pragma once

#include <Eigen/SparseCore>
#include <bit>
#include <vector>

#include "fockfuse/ores.hpp"

namespace fockfuse {

using SpMat = Eigen::SparseMatrix<cplx>;

// Fermionic Fock space over the Lagrangian L of a spinor model, with the
// occupation-bitmask basis over the ell ordered L-modes.  Wedge signs follow
// the convention sign = (-1)^{# occupied modes below the target mode}.
struct FockSpace {
    SpinorModel model;
    int ell = 0;
    Eigen::Index dim = 0;
    Eigen::Index max_dense_dim = 1024;

    Vec vacuum() const {
      Vec v = Vec::Zero(dim);
      v(0) = 1.0;
      return v;
    }

    bool dense_ok() const { return dim <= max_dense_dim; }
    void require_dense(const char* who) const {
      if (!dense_ok())
        throw std::runtime_error(std::string(who) +
                                 ": Fock dimension exceeds the dense-operator budget; use a smaller N/M/d");
    }
};

using FockOp = AOp;

inline FockSpace build_fock(const SpinorModel& model, Eigen::Index max_dim = (Eigen::Index(1) << 13)) {
  FockSpace f;
  f.model = model;
  f.ell = model.ell;
  if (model.ell >= 30 || (Eigen::Index(1) << model.ell) > max_dim)
    throw std::runtime_error("build_fock: 2^ell exceeds the memory budget; use a smaller N/M/d");
  f.dim = Eigen::Index(1) << model.ell;
  return f;
}

inline int popcount_mask(Eigen::Index mask) {
  return std::popcount(static_cast<std::uint64_t>(mask));
}

inline double wedge_sign(Eigen::Index mask, int p) {
  return (popcount_mask(mask & ((Eigen::Index(1) << p) - 1)) & 1) ? -1.0 : 1.0;
}

namespace detail {

struct CliffordCoeffs {
    Vec create;      // coefficients of c_p
    Vec annihilate;  // coefficients of a_p
};

inline CliffordCoeffs clifford_coeffs(const FockSpace& f, const Vec& x) {
  const SpinorModel& m = f.model;
  CliffordCoeffs cc;
  cc.create = m.basis_L.adjoint() * x;  // coords of P_L x
  Vec w = m.P_Lperp.mat * x;
  Vec u = m.alpha.apply(w);             // alpha(P_L^perp x), lies in L
  cc.annihilate = (m.basis_L.adjoint() * u).conjugate();
  return cc;
}

}  // namespace detail

// Matrix-free application of pi(x) = sqrt(2) (c(P_L x) + a((P_L^perp x)^*)).
inline Vec clifford_apply(const FockSpace& f, const Vec& x, const Vec& state) {
  auto cc = detail::clifford_coeffs(f, x);
  Vec out = Vec::Zero(f.dim);
  const double r2 = M_SQRT2;
  for (Eigen::Index mask = 0; mask < f.dim; ++mask) {
    cplx amp = state(mask);
    if (amp == cplx(0, 0)) continue;
    for (int p = 0; p < f.ell; ++p) {
      Eigen::Index bit = Eigen::Index(1) << p;
      double s = wedge_sign(mask, p);
      if (!(mask & bit)) {
        if (cc.create(p) != cplx(0, 0)) out(mask | bit) += r2 * cc.create(p) * s * amp;
      } else {
        if (cc.annihilate(p) != cplx(0, 0)) out(mask & ~bit) += r2 * cc.annihilate(p) * s * amp;
      }
    }
  }
  return out;
}

inline SpMat clifford_rep_sparse(const FockSpace& f, const Vec& x) {
  auto cc = detail::clifford_coeffs(f, x);
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<size_t>(f.dim) * f.ell);
  const double r2 = M_SQRT2;
  for (Eigen::Index mask = 0; mask < f.dim; ++mask)
    for (int p = 0; p < f.ell; ++p) {
      Eigen::Index bit = Eigen::Index(1) << p;
      double s = wedge_sign(mask, p);
      if (!(mask & bit)) {
        if (cc.create(p) != cplx(0, 0)) trips.emplace_back(mask | bit, mask, r2 * cc.create(p) * s);
      } else {
        if (cc.annihilate(p) != cplx(0, 0)) trips.emplace_back(mask & ~bit, mask, r2 * cc.annihilate(p) * s);
      }
    }
  SpMat sp(f.dim, f.dim);
  sp.setFromTriplets(trips.begin(), trips.end());
  return sp;
}

inline FockOp clifford_rep(const FockSpace& f, const Vec& x) {
  f.require_dense("clifford_rep");
  return FockOp(Mat(clifford_rep_sparse(f, x)), false, Parity::odd);
}

// Residuals of the Clifford-map relations for a pair of vectors, computed
// sparsely so large mode counts stay cheap:
//   car:      || pi(x)pi(y) + pi(y)pi(x) - 2 b(x,y) 1 ||_F
//   adjoint:  || pi(alpha x) - pi(x)^* ||_F
struct CliffordDefects {
    double car = 0;
    double adjoint = 0;
};

inline cplx bilinear_b(const SpinorModel& m, const Vec& x, const Vec& y) {
  return inner(x, m.alpha.apply(y));
}

inline CliffordDefects clifford_defects(const FockSpace& f, const Vec& x, const Vec& y) {
  auto cx = detail::clifford_coeffs(f, x);
  auto cy = detail::clifford_coeffs(f, y);
  cplx b2 = 2.0 * bilinear_b(f.model, x, y);
  const double r2 = M_SQRT2;

  // column-by-column matrix-free sweep over { pi(x), pi(y) } - 2b(x,y) 1;
  // each pi touches at most ell entries of a basis column
  struct Entry {
      Eigen::Index idx;
      cplx val;
  };
  std::vector<Entry> first;
  std::vector<cplx> scratch(static_cast<size_t>(f.dim), cplx(0, 0));
  std::vector<Eigen::Index> touched;
  first.reserve(f.ell);
  touched.reserve(4 * static_cast<size_t>(f.ell) * f.ell);

  auto apply_basis = [&](const detail::CliffordCoeffs& cc, Eigen::Index mask, auto&& sink) {
    for (int p = 0; p < f.ell; ++p) {
      Eigen::Index bit = Eigen::Index(1) << p;
      double s = wedge_sign(mask, p);
      if (!(mask & bit)) {
        if (cc.create(p) != cplx(0, 0)) sink(mask | bit, r2 * cc.create(p) * s);
      } else {
        if (cc.annihilate(p) != cplx(0, 0)) sink(mask & ~bit, r2 * cc.annihilate(p) * s);
      }
    }
  };

  double car2 = 0;
  for (Eigen::Index col = 0; col < f.dim; ++col) {
    touched.clear();
    auto accumulate = [&](const detail::CliffordCoeffs& outer, Eigen::Index idx, cplx amp) {
      apply_basis(outer, idx, [&](Eigen::Index i2, cplx v2) {
        if (scratch[i2] == cplx(0, 0)) touched.push_back(i2);
        scratch[i2] += amp * v2;
      });
    };
    first.clear();
    apply_basis(cy, col, [&](Eigen::Index i, cplx v) { first.push_back({i, v}); });
    for (const Entry& e : first) accumulate(cx, e.idx, e.val);
    first.clear();
    apply_basis(cx, col, [&](Eigen::Index i, cplx v) { first.push_back({i, v}); });
    for (const Entry& e : first) accumulate(cy, e.idx, e.val);
    if (scratch[col] == cplx(0, 0)) touched.push_back(col);
    scratch[col] -= b2;
    for (Eigen::Index i : touched) {
      car2 += std::norm(scratch[i]);
      scratch[i] = cplx(0, 0);
    }
  }

  CliffordDefects out;
  out.car = std::sqrt(car2);
  // pi(alpha x) - pi(x)^* expands over the orthogonal generator family
  // {c_p, a_p}, each of squared Frobenius norm 2^{ell-1}
  auto cax = detail::clifford_coeffs(f, f.model.alpha.apply(x));
  double coeff2 = (cax.create - cx.annihilate.conjugate()).squaredNorm() +
                  (cax.annihilate - cx.create.conjugate()).squaredNorm();
  out.adjoint = std::sqrt(2.0 * std::pow(2.0, f.ell - 1) * coeff2);
  return out;
}

// parity of a state vector, when homogeneous
inline Parity vector_parity(const FockSpace& f, const Vec& v, double tol = kStructuralTol) {
  double even = 0, odd = 0;
  for (Eigen::Index mask = 0; mask < f.dim; ++mask)
    ((popcount_mask(mask) & 1) ? odd : even) += std::norm(v(mask));
  double scale = std::max(1.0, even + odd);
  if (odd <= tol * scale) return Parity::even;
  if (even <= tol * scale) return Parity::odd;
  return Parity::none;
}

inline FockOp grading(const FockSpace& f) {
  Vec diag(f.dim);
  for (Eigen::Index mask = 0; mask < f.dim; ++mask)
    diag(mask) = (popcount_mask(mask) & 1) ? -1.0 : 1.0;
  return FockOp(Mat(diag.asDiagonal()), false, Parity::even);
}

// Klein transformation: identity on the even part, multiplication by i on
// the odd part.
inline FockOp klein(const FockSpace& f) {
  Vec diag(f.dim);
  for (Eigen::Index mask = 0; mask < f.dim; ++mask)
    diag(mask) = (popcount_mask(mask) & 1) ? cplx(0, 1) : cplx(1, 0);
  return FockOp(Mat(diag.asDiagonal()), false, Parity::even);
}

inline FockOp klein_inverse(const FockSpace& f) {
  return FockOp(klein(f).mat.conjugate(), false, Parity::even);
}

inline Parity measured_parity(const FockSpace& f, const Mat& op, double tol = kStructuralTol) {
  Mat g = grading(f).mat;
  double even = (g * op * g - op).norm();
  double odd = (g * op * g + op).norm();
  double scale = std::max(1.0, op.norm());
  if (even <= tol * scale) return Parity::even;
  if (odd <= tol * scale) return Parity::odd;
  return Parity::none;
}

// Multiplicative (wedge) extension Lambda_T of an (anti)unitary T on L; T
// may also be given on V provided it preserves L.
inline FockOp second_quantize(const FockSpace& f, const AOp& t, double tol = kStructuralTol) {
  f.require_dense("second_quantize");
  const SpinorModel& m = f.model;
  Mat tl;
  if (t.mat.rows() == m.ell) {
    tl = t.mat;
  } else if (t.mat.rows() == m.dim) {
    Mat image = t.anti ? Mat(t.mat * m.basis_L.conjugate()) : Mat(t.mat * m.basis_L);
    double leak = (m.P_Lperp.mat * image).norm();
    if (leak > tol * std::max(1.0, image.norm()))
      throw std::invalid_argument("second_quantize: operator does not preserve L");
    tl = m.basis_L.adjoint() * image;
  } else {
    throw std::invalid_argument("second_quantize: operator size matches neither L nor V");
  }

  std::vector<std::vector<Eigen::Index>> by_pop(f.ell + 1);
  for (Eigen::Index mask = 0; mask < f.dim; ++mask) by_pop[popcount_mask(mask)].push_back(mask);
  std::vector<int> occ, occ2;
  Mat lam = Mat::Zero(f.dim, f.dim);
  for (int k = 0; k <= f.ell; ++k) {
    for (Eigen::Index col : by_pop[k]) {
      occ.clear();
      for (int p = 0; p < f.ell; ++p)
        if (col & (Eigen::Index(1) << p)) occ.push_back(p);
      for (Eigen::Index row : by_pop[k]) {
        if (k == 0) {
          lam(row, col) = 1.0;
          continue;
        }
        occ2.clear();
        for (int p = 0; p < f.ell; ++p)
          if (row & (Eigen::Index(1) << p)) occ2.push_back(p);
        Mat sub(k, k);
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c) sub(r, c) = tl(occ2[r], occ[c]);
        lam(row, col) = (k == 1) ? sub(0, 0) : sub.determinant();
      }
    }
  }
  return FockOp(lam, t.anti, Parity::even);
}

// The wedge 2-vector hat(a') characterized by <hat(a'), f1 ^ f2> = <a' f1, f2>.
inline Vec hat_a_prime(const FockSpace& f, const Mat& a_prime) {
  Vec v = Vec::Zero(f.dim);
  for (int i = 0; i < f.ell; ++i)
    for (int j = i + 1; j < f.ell; ++j)
      v((Eigen::Index(1) << i) | (Eigen::Index(1) << j)) = a_prime(j, i);
  return v;
}

// Skew lift A~ = A~0 + A~1 of an o_res element: A~0 is the derivation
// extending `a`, and A~1 = iota_{hat a'} - hat a' ^ (.) built from the
// antilinear part.
inline FockOp tilde_lift(const OResElement& el, const FockSpace& f) {
  f.require_dense("tilde_lift");
  Mat t = Mat::Zero(f.dim, f.dim);
  Mat w = Mat::Zero(f.dim, f.dim);  // wedge by hat(a')
  for (Eigen::Index mask = 0; mask < f.dim; ++mask) {
    for (int q = 0; q < f.ell; ++q) {
      Eigen::Index qbit = Eigen::Index(1) << q;
      if (!(mask & qbit)) continue;
      double sq = wedge_sign(mask, q);
      Eigen::Index mid = mask & ~qbit;
      for (int p = 0; p < f.ell; ++p) {
        Eigen::Index pbit = Eigen::Index(1) << p;
        if (mid & pbit) continue;
        if (el.a(p, q) == cplx(0, 0)) continue;
        t(mid | pbit, mask) += el.a(p, q) * sq * wedge_sign(mid, p);
      }
    }
    for (int j = 0; j < f.ell; ++j) {
      Eigen::Index jbit = Eigen::Index(1) << j;
      if (mask & jbit) continue;
      double sj = wedge_sign(mask, j);
      Eigen::Index mid = mask | jbit;
      for (int i = 0; i < j; ++i) {
        Eigen::Index ibit = Eigen::Index(1) << i;
        if (mid & ibit) continue;
        cplx wij = el.a_prime(j, i);
        if (wij == cplx(0, 0)) continue;
        w(mid | ibit, mask) += wij * sj * wedge_sign(mid, i);
      }
    }
  }
  t += w.adjoint() - w;
  return FockOp(t, false, Parity::even);
}

}  // namespace fockfuse
