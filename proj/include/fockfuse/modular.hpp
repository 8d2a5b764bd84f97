#pragma once

#include "fockfuse/fock.hpp"
#include "fockfuse/xprec.hpp"

namespace fockfuse {

// Half-circle modular machinery on the lattice model: T+- = (P_L - P+-)^2,
// the operator s, its polar data, and the Tomita operator assembled from the
// cyclic action of the lower-half Clifford algebra on the vacuum.

struct HalfStructure {
    Mat T_plus, T_minus;
    double sum_residual = 0;     // || T+ + T- - 1 ||_F
    double min_eig_plus = 0, max_eig_plus = 0;
    double min_eig_minus = 0, max_eig_minus = 0;
    GeneralPosition angles;
};

inline HalfStructure half_structure(const SpinorModel& m) {
  if (!m.is_lattice()) throw std::invalid_argument("half_structure: lattice flavor required");
  HalfStructure h;
  Mat dplus = m.P_L.mat - m.P_plus->mat;
  Mat dminus = m.P_L.mat - m.P_minus->mat;
  h.T_plus = dplus * dplus;
  h.T_minus = dminus * dminus;
  h.sum_residual = (h.T_plus + h.T_minus - Mat::Identity(m.dim, m.dim)).norm();
  Eigen::SelfAdjointEigenSolver<Mat> ep(h.T_plus), em(h.T_minus);
  h.min_eig_plus = ep.eigenvalues().minCoeff();
  h.max_eig_plus = ep.eigenvalues().maxCoeff();
  h.min_eig_minus = em.eigenvalues().minCoeff();
  h.max_eig_minus = em.eigenvalues().maxCoeff();
  h.angles = general_position(m);
  return h;
}

struct SAndPolar {
    Mat s;
    AOp u;               // antiunitary polar factor of alpha s
    Mat delta_half;      // |alpha s| = (s^dag s)^{1/2}
    Mat delta_half_closed;  // sqrt(T-/T+) P_L + sqrt(T+/T-) P_L^perp
    double closed_residual = 0;
    double u_identity_residual = 0;  // || u - (-i) alpha tau (P_L - P_L^perp) ||_F
    double cond = 0;     // condition number of T+
    double s_squares_residual = 0;
};

inline AOp u_identity_target(const SpinorModel& m) {
  Mat d = m.P_L.mat - m.P_Lperp.mat;
  // (-i) alpha tau (P_L - P_L^perp): lattice alpha tau has matrix tau.mat
  return AOp(Mat(cplx(0, -1) * m.tau.mat * d.conjugate()), true);
}

inline SAndPolar s_and_polar(const SpinorModel& m, double cond_cap = 1e9) {
  HalfStructure h = half_structure(m);
  SAndPolar out;
  SpectralInverse tp = inverse_psd(h.T_plus);
  SpectralInverse tm = inverse_psd(h.T_minus);
  out.cond = std::max(tp.cond, tm.cond);
  if (out.cond > cond_cap)
    throw std::runtime_error(
        "s_and_polar: T+- condition number exceeds the cap; use a smaller M or the extended-precision sweep");
  out.s = m.P_L.mat * m.P_minus->mat * tm.inv * m.P_Lperp.mat +
          m.P_Lperp.mat * m.P_minus->mat * tp.inv * m.P_L.mat;
  out.s_squares_residual = (out.s * out.s - Mat::Identity(m.dim, m.dim)).norm();

  AOp alpha_s = compose(m.alpha, AOp(out.s));
  PolarParts pol = polar(alpha_s);
  out.u = pol.unitary;
  out.delta_half = pol.modulus;
  out.delta_half_closed = sqrtm_psd(Mat(h.T_minus * tp.inv)) * m.P_L.mat +
                          sqrtm_psd(Mat(h.T_plus * tm.inv)) * m.P_Lperp.mat;
  out.closed_residual = (out.delta_half - out.delta_half_closed).norm();
  out.u_identity_residual = op_distance(out.u, u_identity_target(m));
  return out;
}

// Extended-precision measurement of the u-identity residual, with the
// inverse-free factorization u = alpha . polar(P_L P- P_L^perp + P_L^perp P- P_L);
// usable far beyond the double-precision conditioning wall.
struct USweepPoint {
    int M = 0;
    double residual = 0;
    double sigma_min = 0;     // smallest singular value of the polar input
    double noise_floor = 0;   // first-order roundoff bound on the residual
};

inline USweepPoint u_identity_sweep_point(int M) {
  using R = xp::real50;
  using C = xp::Cx<R>;
  const int n = 2 * M;
  const R pi = acos(R(-1));
  std::vector<R> t(n);
  for (int s = 0; s < n; ++s) t[s] = pi * (2 * s + 1 - 2 * M) / (2 * M);

  xp::XMat<R> pl(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      C acc;
      for (int k = 0; k < M; ++k) {
        R phase = -(R(k) + R(1) / 2) * (t[r] - t[c]);
        acc += C(cos(phase) / n, sin(phase) / n);
      }
      pl(r, c) = acc;
    }
  xp::XMat<R> kmat(n, n);
  {
    // K = P_L P- P_L^perp + P_L^perp P- P_L with P- diagonal on t<0 sites
    xp::XMat<R> pminus(n, n), plperp(n, n);
    for (int i = 0; i < n; ++i) {
      if (t[i] < 0) pminus(i, i) = C(R(1));
      for (int j = 0; j < n; ++j) {
        plperp(i, j) = C(-pl(i, j).re, -pl(i, j).im);
        if (i == j) plperp(i, j) += C(R(1));
      }
    }
    xp::XMat<R> a = xp::matmul(pl, xp::matmul(pminus, plperp));
    xp::XMat<R> b = xp::matmul(plperp, xp::matmul(pminus, pl));
    kmat = xp::XMat<R>(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) kmat(i, j) = a(i, j) + b(i, j);
  }
  auto pol = xp::polar_factor(kmat);

  // u = alpha o polar(K): matrix conj(u_K); target -i tau conj(P_L - P_L^perp)
  R fro2(0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      C u_rc = pol.u(r, c).conj();
      C d = pl(n - 1 - r, c).conj();  // (tau D)_{rc} with D = 2 P_L - 1
      d = C(2 * d.re, 2 * d.im);
      if (n - 1 - r == c) d = d - C(R(1));
      C target = C(R(0), R(-1)) * d;
      fro2 += (u_rc - target).norm2();
    }
  USweepPoint pt;
  pt.M = M;
  pt.residual = static_cast<double>(sqrt(fro2));
  pt.sigma_min = static_cast<double>(pol.sigma_min);
  R floor = 100 * n * std::numeric_limits<R>::epsilon() * pol.sigma_max / pol.sigma_min;
  pt.noise_floor = static_cast<double>(floor);
  return pt;
}

// Tomita data for (Cl(V_-)'', F, Omega) assembled from the cyclic action.
struct ModularData {
    AOp S;               // antilinear Tomita operator
    AOp J;               // modular conjugation
    Mat delta_half_fock;
    double cond_B = 0;   // conditioning of the cyclic-span basis
    double residual_S_formula = 0;   // || S - k^-1 Lambda_{i alpha s} ||_F
    double residual_J = 0;           // || J - k^-1 Lambda_{alpha tau} ||_F
    double residual_delta = 0;       // || Delta^{1/2} - Lambda_{delta^{1/2}} ||_F
    double s_vacuum_residual = 0;    // || S Omega - Omega ||
    double s_involution_residual = 0;
    double j_vacuum_residual = 0;
};

inline std::vector<Vec> lower_half_site_vectors(const SpinorModel& m) {
  std::vector<Vec> gens;
  for (int s = 0; s < 2 * m.size; ++s) {
    if (m.sites[s] >= 0) continue;
    for (int j = 0; j < m.d; ++j) {
      Vec v = Vec::Zero(m.dim);
      v(m.site_index(s, j)) = 1.0;
      gens.push_back(v);
    }
  }
  return gens;
}

inline ModularData tomita(const SpinorModel& m, const FockSpace& f, double cond_cap = 1e9) {
  if (!m.is_lattice()) throw std::invalid_argument("tomita: lattice flavor required");
  std::vector<Vec> gens = lower_half_site_vectors(m);
  const auto n_gens = static_cast<int>(gens.size());
  if ((Eigen::Index(1) << n_gens) != f.dim)
    throw std::runtime_error("tomita: lower-half monomial count does not match the Fock dimension");

  Mat B(f.dim, f.dim), C(f.dim, f.dim);
  for (Eigen::Index mask = 0; mask < f.dim; ++mask) {
    Vec fwd = f.vacuum();
    Vec bwd = f.vacuum();
    for (int g = 0; g < n_gens; ++g) {
      if (!(mask & (Eigen::Index(1) << g))) continue;
      bwd = clifford_apply(f, gens[g], bwd);  // reversed-order product for m_S^*
    }
    for (int g = n_gens - 1; g >= 0; --g) {
      if (!(mask & (Eigen::Index(1) << g))) continue;
      fwd = clifford_apply(f, gens[g], fwd);  // ascending product for m_S
    }
    B.col(mask) = fwd;
    C.col(mask) = bwd;
  }
  Eigen::JacobiSVD<Mat> svdB(B);
  double smin = svdB.singularValues().minCoeff();
  double smax = svdB.singularValues().maxCoeff();
  if (smin <= 0 || smax / smin > cond_cap)
    throw std::runtime_error("tomita: vacuum is not numerically cyclic for the lower-half algebra");

  ModularData md;
  md.cond_B = smax / smin;
  md.S = AOp(Mat(C * B.conjugate().inverse()), true);

  SAndPolar sp = s_and_polar(m, cond_cap);
  AOp i_alpha_s(Mat(cplx(0, 1) * sp.s.conjugate()), true);
  FockOp lam = second_quantize(f, i_alpha_s);
  AOp s_formula = compose(klein_inverse(f), lam);
  md.residual_S_formula = op_distance(md.S, s_formula);

  PolarParts pol = polar(md.S);
  md.J = pol.unitary;
  md.delta_half_fock = pol.modulus;
  AOp j_formula = compose(klein_inverse(f), AOp(Mat::Identity(f.dim, f.dim), true));
  md.residual_J = op_distance(md.J, j_formula);
  FockOp lam_delta = second_quantize(f, AOp(sp.delta_half_closed));
  md.residual_delta = (md.delta_half_fock - lam_delta.mat).norm();

  Vec om = f.vacuum();
  md.s_vacuum_residual = (md.S.apply(om) - om).norm();
  md.j_vacuum_residual = (md.J.apply(om) - om).norm();
  md.s_involution_residual = (compose(md.S, md.S).mat - Mat::Identity(f.dim, f.dim)).norm();
  return md;
}

// Span (as vectorized matrices) of the algebra generated by a family of
// Fock operators: all ordered monomials in the generators.
inline Mat monomial_span(const FockSpace& f, const std::vector<Vec>& gens) {
  const auto n_gens = static_cast<int>(gens.size());
  Eigen::Index cols = Eigen::Index(1) << n_gens;
  Mat span(f.dim * f.dim, cols);
  for (Eigen::Index mask = 0; mask < cols; ++mask) {
    Mat prod = Mat::Identity(f.dim, f.dim);
    for (int g = n_gens - 1; g >= 0; --g) {
      if (!(mask & (Eigen::Index(1) << g))) continue;
      prod = Mat(clifford_rep_sparse(f, gens[g])) * prod;
    }
    span.col(mask) = Eigen::Map<const Vec>(prod.data(), f.dim * f.dim);
  }
  return span;
}

inline Mat orthonormal_columns(const Mat& a, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  Eigen::Index r = 0;
  double top = svd.singularValues()(0);
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rel_tol * top) ++r;
  return svd.matrixU().leftCols(r);
}

struct DualityResult {
    double residual = 0;           // distance between the two operator subspaces
    Eigen::Index commutant_dim = 0;
};

// Twisted Haag duality at desk scale: the graded commutant of the algebra
// generated by pi(V_-) equals the algebra generated by pi(V_+), with the
// graded commutant computed through the Klein trick.
inline DualityResult duality(const SpinorModel& m, const FockSpace& f) {
  std::vector<Vec> lower = lower_half_site_vectors(m);
  std::vector<Vec> upper;
  for (int s = 0; s < 2 * m.size; ++s) {
    if (m.sites[s] <= 0) continue;
    for (int j = 0; j < m.d; ++j) {
      Vec v = Vec::Zero(m.dim);
      v(m.site_index(s, j)) = 1.0;
      upper.push_back(v);
    }
  }
  // ordinary commutant of the lower algebra: nullspace of X -> ([X, G_i])_i
  const Eigen::Index d2 = f.dim * f.dim;
  Mat constraints = Mat::Zero(static_cast<Eigen::Index>(lower.size()) * d2, d2);
  for (size_t g = 0; g < lower.size(); ++g) {
    Mat gm = Mat(clifford_rep_sparse(f, lower[g]));
    // vec(G X - X G): row (r + c*dim) of the constraint block, vec(X) column-major
    Eigen::Index base = static_cast<Eigen::Index>(g) * d2;
    for (Eigen::Index c = 0; c < f.dim; ++c)
      for (Eigen::Index r = 0; r < f.dim; ++r)
        for (Eigen::Index k = 0; k < f.dim; ++k) {
          constraints(base + r + c * f.dim, k + c * f.dim) += gm(r, k);
          constraints(base + r + c * f.dim, r + k * f.dim) -= gm(k, c);
        }
  }
  Eigen::JacobiSVD<Mat> svd(constraints, Eigen::ComputeFullV);
  double top = svd.singularValues()(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10 * top) ++rank;
  Mat null_basis = svd.matrixV().rightCols(d2 - rank);

  // Klein trick: graded commutant = k (commutant) k^-1
  Mat k = klein(f).mat;
  Mat kinv = klein_inverse(f).mat;
  Mat graded(d2, null_basis.cols());
  for (Eigen::Index c = 0; c < null_basis.cols(); ++c) {
    Mat x = Eigen::Map<const Mat>(null_basis.col(c).data(), f.dim, f.dim);
    Mat y = k * x * kinv;
    graded.col(c) = Eigen::Map<const Vec>(y.data(), d2);
  }

  Mat q1 = orthonormal_columns(graded);
  Mat q2 = orthonormal_columns(monomial_span(f, upper));
  DualityResult out;
  out.commutant_dim = null_basis.cols();
  out.residual = (q1 * q1.adjoint() - q2 * q2.adjoint()).norm();
  return out;
}

struct ConeSign {
    int sign = +1;
    cplx overlap;
};

inline ConeSign cone_sign(const FockSpace& f, const FockOp& u, double tol = 1e-9) {
  Vec om = f.vacuum();
  cplx z = inner(u.apply(om), om);  // <Omega, U Omega> with our first-slot-linear pairing reversed
  z = std::conj(z);
  ConeSign c;
  c.overlap = z;
  if (std::abs(z.imag()) > tol * std::max(1.0, std::abs(z)))
    throw std::runtime_error("cone_sign: vacuum overlap is not real; U is not in the reduced extension");
  if (std::abs(z.real()) < tol)
    throw std::runtime_error("cone_sign: vacuum overlap vanishes, cone sign ambiguous");
  c.sign = z.real() > 0 ? +1 : -1;
  return c;
}

// Fourier transforms of the half-splitting kernels, quadrature vs closed form.
//   s_eps(u) = e^{-u/2} / (e^{-u} - 1 - i eps),   c_eps(u) = e^{-u/2} / (e^{-u} + 1 - i eps)
struct TransformRow {
    double k = 0, eps = 0;
    cplx fs_quad, fs_closed, fc_quad, fc_closed;
    double fs_rel_err = 0, fc_rel_err = 0;
    double a_k = 0;               // 1 / (e^{pi k} + e^{-pi k})
    double partition_residual = 0;  // a(k) e^{pi k} + a(k) e^{-pi k} - 1
    double tail_bound = 0;
};

inline TransformRow transform_row(double k, double eps, double halfwidth = 80.0) {
  TransformRow row;
  row.k = k;
  row.eps = eps;
  double h = std::min(5e-3, eps / 32.0);
  auto n = static_cast<long>(std::ceil(2 * halfwidth / h));
  // compensated summation: the transforms can be exponentially small against
  // an O(1/eps) integrand peak
  cplx fs = 0, fc = 0, comp_s = 0, comp_c = 0;
  auto kahan = [](cplx& sum, cplx& comp, cplx term) {
    cplx y = term - comp;
    cplx t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (long i = 0; i < n; ++i) {
    double u = -halfwidth + (i + 0.5) * (2 * halfwidth / n);
    cplx e = std::polar(1.0, -k * u);
    double w = std::exp(-u / 2);
    // expm1 keeps full relative precision of e^{-u} - 1 through the peak
    kahan(fs, comp_s, w / (std::expm1(-u) - cplx(0, eps)) * e);
    kahan(fc, comp_c, w / (std::exp(-u) + 1.0 - cplx(0, eps)) * e);
  }
  fs *= 2 * halfwidth / n;
  fc *= 2 * halfwidth / n;
  row.fs_quad = fs;
  row.fc_quad = fc;
  row.tail_bound = 8.0 * std::exp(-halfwidth / 2);

  double epk = std::exp(M_PI * k), emk = std::exp(-M_PI * k);
  cplx pow_s = std::exp((cplx(0, k) - 0.5) * std::log(cplx(1, eps)));
  cplx pow_c = std::exp((cplx(0, k) - 0.5) * std::log(cplx(1, -eps)));
  row.fs_closed = cplx(0, 2 * M_PI) * pow_s * (epk / (emk + epk));
  row.fc_closed = 2 * M_PI * pow_c / (epk + emk);
  row.fs_rel_err = std::abs(row.fs_quad - row.fs_closed) / std::abs(row.fs_closed);
  row.fc_rel_err = std::abs(row.fc_quad - row.fc_closed) / std::abs(row.fc_closed);
  row.a_k = 1.0 / (epk + emk);
  row.partition_residual = std::abs(row.a_k * epk + row.a_k * emk - 1.0);
  return row;
}

}  // namespace fockfuse
