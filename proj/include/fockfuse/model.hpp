#pragma once

#include <optional>
#include <vector>

#include "fockfuse/linalg.hpp"

namespace fockfuse {

enum class Flavor { frequency, lattice };

struct ModeIndex {
    int n = 0;  // Fourier mode, xi_n ~ e^{-i(n+1/2)t}
    int j = 0;  // color
};

// Finite model of the spinor space V with real structure alpha, reflection
// tau, Lagrangian L and unitary structure J.
//
// Frequency flavor: basis xi_{n,j}, n in {-N,...,N-1} (an alpha-stable
// window), L spanned by the modes with n >= 0.
//
// Lattice flavor: 2M sites at t_m = pi(2m+1-2M)/(2M) in (-pi,pi); alpha is
// entrywise conjugation, tau the site reversal m -> 2M-1-m, and L is spanned
// by the antiperiodic plane waves psi_n, n = 0..M-1 (per color).
struct SpinorModel {
    Flavor flavor = Flavor::frequency;
    int size = 0;  // N (frequency) or M (lattice)
    int d = 1;
    int dim = 0;        // 2*size*d
    int ell = 0;        // dim/2 = dim of L
    std::vector<ModeIndex> modes;      // frequency basis labels
    std::vector<double> sites;         // lattice sample points t_m (per site)
    Mat basis_L;        // dim x ell, orthonormal basis of L
    Mat basis_aL;       // dim x ell, columns alpha(basis_L columns)
    AOp alpha;          // antilinear involution
    AOp tau;            // linear reflection
    AOp J;              // i(P_L - P_L^perp)
    AOp P_L, P_Lperp;
    std::optional<AOp> P_plus, P_minus;  // lattice only

    bool is_lattice() const { return flavor == Flavor::lattice; }

    // index of basis vector xi_{n,j} (frequency flavor)
    int freq_index(int n, int j) const { return (n + size) * d + j; }
    // index of the site-(m) color-(j) basis vector (lattice flavor)
    int site_index(int m, int j) const { return m * d + j; }
    // index of the p-th L-mode backing the Fock space ordering
    int l_mode(int n, int j) const { return n * d + j; }
};

inline SpinorModel build_model(Flavor flavor, int size, int d) {
  if (size < 1 || d < 1) throw std::invalid_argument("build_model: sizes must be >= 1");
  SpinorModel m;
  m.flavor = flavor;
  m.size = size;
  m.d = d;
  m.dim = 2 * size * d;
  m.ell = size * d;
  const int dim = m.dim;

  if (flavor == Flavor::frequency) {
    const int N = size;
    m.modes.resize(dim);
    for (int n = -N; n < N; ++n)
      for (int j = 0; j < d; ++j) m.modes[m.freq_index(n, j)] = ModeIndex{n, j};

    Mat swap = Mat::Zero(dim, dim);  // n -> -n-1, color fixed
    for (int n = -N; n < N; ++n)
      for (int j = 0; j < d; ++j) swap(m.freq_index(-n - 1, j), m.freq_index(n, j)) = 1.0;
    m.alpha = AOp(swap, true);
    m.tau = AOp(swap, false);

    m.basis_L = Mat::Zero(dim, m.ell);
    m.basis_aL = Mat::Zero(dim, m.ell);
    for (int n = 0; n < N; ++n)
      for (int j = 0; j < d; ++j) {
        m.basis_L(m.freq_index(n, j), m.l_mode(n, j)) = 1.0;
        m.basis_aL(m.freq_index(-n - 1, j), m.l_mode(n, j)) = 1.0;
      }
  } else {
    const int M = size;
    const int nsites = 2 * M;
    m.sites.resize(nsites);
    for (int s = 0; s < nsites; ++s) m.sites[s] = M_PI * (2 * s + 1 - 2 * M) / (2.0 * M);

    m.alpha = AOp(Mat::Identity(dim, dim), true);

    Mat rev = Mat::Zero(dim, dim);  // site reversal, t -> -t
    for (int s = 0; s < nsites; ++s)
      for (int j = 0; j < d; ++j) rev(m.site_index(nsites - 1 - s, j), m.site_index(s, j)) = 1.0;
    m.tau = AOp(rev, false);

    m.basis_L = Mat::Zero(dim, m.ell);
    m.basis_aL = Mat::Zero(dim, m.ell);
    const double norm = 1.0 / std::sqrt(double(nsites));
    for (int n = 0; n < M; ++n)
      for (int j = 0; j < d; ++j)
        for (int s = 0; s < nsites; ++s) {
          cplx w = std::polar(norm, -(n + 0.5) * m.sites[s]);
          m.basis_L(m.site_index(s, j), m.l_mode(n, j)) = w;
          m.basis_aL(m.site_index(s, j), m.l_mode(n, j)) = std::conj(w);
        }

    Mat pp = Mat::Zero(dim, dim), pm = Mat::Zero(dim, dim);
    for (int s = 0; s < nsites; ++s)
      for (int j = 0; j < d; ++j) {
        if (m.sites[s] > 0) pp(m.site_index(s, j), m.site_index(s, j)) = 1.0;
        else pm(m.site_index(s, j), m.site_index(s, j)) = 1.0;
      }
    m.P_plus = AOp(pp);
    m.P_minus = AOp(pm);
  }

  Mat pl = m.basis_L * m.basis_L.adjoint();
  m.P_L = AOp(pl);
  m.P_Lperp = AOp(Mat::Identity(dim, dim) - pl);
  m.J = AOp(cplx(0, 1) * (m.P_L.mat - m.P_Lperp.mat));
  return m;
}

struct CanonicalOps {
    AOp alpha, tau, J, P_L, P_Lperp;
    std::optional<AOp> P_plus, P_minus;
};

inline CanonicalOps canonical_operators(const SpinorModel& m, bool want_halves = false) {
  if (want_halves && !m.is_lattice())
    throw std::invalid_argument("canonical_operators: half-circle projections exist only on the lattice flavor");
  CanonicalOps ops{m.alpha, m.tau, m.J, m.P_L, m.P_Lperp, m.P_plus, m.P_minus};
  return ops;
}

struct OperatorNorms {
    double op_norm = 0;
    double hs_commutator = 0;  // Frobenius norm of [J, A]
    double j_norm = 0;
};

inline OperatorNorms operator_norms(const AOp& a, const SpinorModel& m) {
  if (a.anti) throw std::invalid_argument("operator_norms: expects a linear operator");
  OperatorNorms out;
  out.op_norm = opnorm(a.mat);
  out.hs_commutator = (m.J.mat * a.mat - a.mat * m.J.mat).norm();
  out.j_norm = out.op_norm + out.hs_commutator;
  return out;
}

struct Classification {
    bool unitary = false;
    bool orthogonal = false;
    bool preserves_halves = false;
    bool tau_fixed = false;
};

inline Classification classify(const AOp& g, const SpinorModel& m, double tol = kStructuralTol) {
  Classification c;
  const double scale = std::sqrt(double(m.dim));
  c.unitary = !g.anti && (g.mat.adjoint() * g.mat - Mat::Identity(m.dim, m.dim)).norm() <= tol * scale;
  c.orthogonal = c.unitary && op_distance(compose(m.alpha, g), compose(g, m.alpha)) <= tol * scale;
  if (m.is_lattice())
    c.preserves_halves = commutator_norm(g, *m.P_plus) <= tol * scale &&
                         commutator_norm(g, *m.P_minus) <= tol * scale;
  c.tau_fixed = op_distance(compose(m.tau, compose(g, m.tau)), g) <= tol * scale;
  return c;
}

// Smallest principal angles between V_- and L, and between V_- and alpha(L).
struct GeneralPosition {
    double angle_minus_L = 0;
    double angle_minus_aL = 0;
};

inline GeneralPosition general_position(const SpinorModel& m) {
  if (!m.is_lattice()) throw std::invalid_argument("general_position: lattice flavor only");
  int half = m.dim / 2;
  Mat bm = Mat::Zero(m.dim, half);
  int col = 0;
  for (int s = 0; s < 2 * m.size; ++s) {
    if (m.sites[s] >= 0) continue;
    for (int j = 0; j < m.d; ++j) bm(m.site_index(s, j), col++) = 1.0;
  }
  GeneralPosition gp;
  gp.angle_minus_L = principal_angles(bm, m.basis_L).minCoeff();
  gp.angle_minus_aL = principal_angles(bm, m.basis_aL).minCoeff();
  return gp;
}

}  // namespace fockfuse
