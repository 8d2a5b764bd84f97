#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace fockfuse {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;

inline constexpr double kStructuralTol = 1e-10;

// Inner product, linear in the first slot: <x, y> = sum_i x_i conj(y_i).
inline cplx inner(const Vec& x, const Vec& y) { return y.dot(x); }

// Dense operator with an antilinearity flag.  An antilinear operator with
// matrix M acts as v |-> M * conj(v); composition and adjoints follow the
// usual rules for mixed (anti)linear maps.
enum class Parity { even, odd, none };

struct AOp {
    Mat mat;
    bool anti = false;
    Parity parity = Parity::none;

    AOp() = default;
    AOp(Mat m, bool a = false, Parity p = Parity::none)
        : mat(std::move(m)), anti(a), parity(p) {}

    Eigen::Index dim() const { return mat.rows(); }

    Vec apply(const Vec& v) const { return anti ? Vec(mat * v.conjugate()) : Vec(mat * v); }

    static AOp identity(Eigen::Index n) { return AOp(Mat::Identity(n, n), false, Parity::even); }
};

using LinOp = AOp;

inline AOp compose(const AOp& a, const AOp& b) {
  AOp r;
  r.mat = a.anti ? Mat(a.mat * b.mat.conjugate()) : Mat(a.mat * b.mat);
  r.anti = a.anti != b.anti;
  if (a.parity != Parity::none && b.parity != Parity::none)
    r.parity = (a.parity == b.parity) ? Parity::even : Parity::odd;
  return r;
}

inline AOp operator*(const AOp& a, const AOp& b) { return compose(a, b); }

// Adjoint: for linear ops the conjugate transpose, for antilinear ops the
// plain transpose (so that <Av, w> = conj(<v, A* w>) holds).
inline AOp adjoint(const AOp& a) {
  return AOp(a.anti ? Mat(a.mat.transpose()) : Mat(a.mat.adjoint()), a.anti, a.parity);
}

inline AOp scale(cplx z, const AOp& a) { return AOp(z * a.mat, a.anti, a.parity); }

inline AOp inverse(const AOp& a) {
  Mat inv = a.mat.inverse();
  return a.anti ? AOp(inv.conjugate(), true, a.parity) : AOp(inv, false, a.parity);
}

inline double fnorm(const Mat& m) { return m.norm(); }

inline double op_distance(const AOp& a, const AOp& b) {
  if (a.anti != b.anti)
    throw std::invalid_argument("op_distance: mixing linear and antilinear operators");
  return (a.mat - b.mat).norm();
}

inline double opnorm(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

inline double commutator_norm(const AOp& a, const AOp& b) {
  return (compose(a, b).mat - compose(b, a).mat).norm();
}

inline bool is_unitary(const AOp& a, double tol = kStructuralTol) {
  Mat g = a.mat;
  return (g.adjoint() * g - Mat::Identity(g.rows(), g.cols())).norm() <= tol * std::sqrt(double(g.rows()));
}

// exp(A) for skew-Hermitian A, via the spectral theorem; the result is
// unitary by construction.
inline Mat expm_skew(const Mat& a) {
  Mat h = cplx(0, 1) * a;  // Hermitian
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("expm_skew: eigensolver failed");
  Vec phases = (cplx(0, -1) * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Principal logarithm of a unitary matrix.  Fails if an eigenvalue sits
// within `gap` of -1, where the principal branch is discontinuous.
inline Mat logm_unitary(const Mat& g, double gap = 1e-8) {
  Eigen::ComplexSchur<Mat> schur(g);
  if (schur.info() != Eigen::Success) throw std::runtime_error("logm_unitary: Schur failed");
  const Mat& q = schur.matrixU();
  Vec logs(g.rows());
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    cplx lam = schur.matrixT()(i, i);
    if (std::abs(lam + cplx(1, 0)) < gap)
      throw std::runtime_error("logm_unitary: eigenvalue at -1, factor the input into smaller steps");
    logs(i) = std::log(lam);
  }
  Mat l = q * logs.asDiagonal() * q.adjoint();
  return Mat(0.5 * (l - l.adjoint().eval()));  // clean up to exactly skew
}

// Spectral square root of a positive semidefinite Hermitian matrix.
inline Mat sqrtm_psd(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (a + a.adjoint())));
  if (es.info() != Eigen::Success) throw std::runtime_error("sqrtm_psd: eigensolver failed");
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal().toDenseMatrix().cast<cplx>() * es.eigenvectors().adjoint();
}

// Hermitian spectral function with a conditioning report.
struct SpectralInverse {
    Mat inv;
    double min_eig = 0;
    double max_eig = 0;
    double cond = 0;
};

inline SpectralInverse inverse_psd(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (a + a.adjoint())));
  if (es.info() != Eigen::Success) throw std::runtime_error("inverse_psd: eigensolver failed");
  SpectralInverse out;
  out.min_eig = es.eigenvalues().minCoeff();
  out.max_eig = es.eigenvalues().maxCoeff();
  if (out.min_eig <= 0) throw std::runtime_error("inverse_psd: matrix not positive definite");
  out.cond = out.max_eig / out.min_eig;
  Vec ev = es.eigenvalues().cast<cplx>().cwiseInverse();
  out.inv = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  return out;
}

// Polar decomposition F = u * |F| of a (possibly antilinear) operator; the
// unitary part is assembled from the SVD as P Q^dag, which stays stable even
// when |F| has a huge dynamic range.
struct PolarParts {
    AOp unitary;     // same antilinearity as the input
    Mat modulus;     // Hermitian PSD, |F| = (F^* F)^{1/2}
    Eigen::VectorXd singular_values;
};

inline PolarParts polar(const AOp& f) {
  Eigen::JacobiSVD<Mat> svd(f.mat, Eigen::ComputeFullU | Eigen::ComputeFullV);
  PolarParts out;
  const Mat& p = svd.matrixU();
  const Mat& q = svd.matrixV();
  out.singular_values = svd.singularValues();
  out.unitary = AOp(p * q.adjoint(), f.anti);
  if (f.anti) {
    out.modulus = q.conjugate() * out.singular_values.asDiagonal().toDenseMatrix().cast<cplx>() * q.transpose();
  } else {
    out.modulus = q * out.singular_values.asDiagonal().toDenseMatrix().cast<cplx>() * q.adjoint();
  }
  return out;
}

// Principal angles between the column spans of two orthonormal bases.
inline Eigen::VectorXd principal_angles(const Mat& basis_a, const Mat& basis_b) {
  Mat overlap = basis_a.adjoint() * basis_b;
  Eigen::JacobiSVD<Mat> svd(overlap);
  Eigen::VectorXd cosines = svd.singularValues().cwiseMin(1.0);
  return cosines.array().acos();
}

}  // namespace fockfuse
