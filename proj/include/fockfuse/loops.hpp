#pragma once

#include <map>

#include "fockfuse/model.hpp"
#include "fockfuse/rng.hpp"

namespace fockfuse {

// Trigonometric-polynomial loop f(t) = sum_n A_n e^{int} with matrix
// coefficients.  A real-valued loop satisfies A_{-n} = conj(A_n).
struct TrigLoop {
    int d = 1;
    std::map<int, Mat> coeffs;

    Mat value(double t) const {
      Mat v = Mat::Zero(d, d);
      for (const auto& [n, a] : coeffs) v += a * std::polar(1.0, n * t);
      return v;
    }

    bool real_valued(double tol = kStructuralTol) const {
      for (const auto& [n, a] : coeffs) {
        auto it = coeffs.find(-n);
        Mat other = (it == coeffs.end()) ? Mat::Zero(d, d) : it->second;
        if ((other - a.conjugate()).norm() > tol) return false;
      }
      return true;
    }

    void add_coeff(int n, const Mat& a) {
      auto [it, inserted] = coeffs.try_emplace(n, a);
      if (!inserted) it->second += a;
    }
};

inline TrigLoop trig_harmonic(int d, int k, const Mat& a) {
  TrigLoop f;
  f.d = d;
  f.coeffs[k] = a;
  return f;
}

// f(t) = 2 X cos(kt) and 2 X sin(kt), the real loops built from one harmonic.
inline TrigLoop trig_cos(int d, int k, const RMat& x) {
  TrigLoop f;
  f.d = d;
  f.add_coeff(k, x.cast<cplx>());
  f.add_coeff(-k, x.cast<cplx>());
  return f;
}

inline TrigLoop trig_sin(int d, int k, const RMat& x) {
  TrigLoop f;
  f.d = d;
  f.add_coeff(k, Mat(cplx(0, -1) * x.cast<cplx>()));
  f.add_coeff(-k, Mat(cplx(0, 1) * x.cast<cplx>()));
  return f;
}

// Loop sampled at the 2M lattice sites t_m = pi(2m+1-2M)/(2M).
struct SampledLoop {
    int d = 1;
    std::vector<RMat> values;  // one per site, ascending site index

    int sites() const { return static_cast<int>(values.size()); }
};

inline SampledLoop sample_loop(const TrigLoop& f, int nsites) {
  if (!f.real_valued()) throw std::invalid_argument("sample_loop: loop is not real-valued");
  SampledLoop out;
  out.d = f.d;
  out.values.resize(nsites);
  for (int m = 0; m < nsites; ++m) {
    double t = M_PI * (2 * m + 1 - nsites) / double(nsites);
    out.values[m] = f.value(t).real();
  }
  return out;
}

inline SampledLoop pointwise_product(const SampledLoop& a, const SampledLoop& b) {
  if (a.sites() != b.sites() || a.d != b.d)
    throw std::invalid_argument("pointwise_product: incompatible loops");
  SampledLoop out = a;
  for (int m = 0; m < a.sites(); ++m) out.values[m] = a.values[m] * b.values[m];
  return out;
}

inline SampledLoop pointwise_inverse(const SampledLoop& a) {
  SampledLoop out = a;
  for (auto& v : out.values) v = v.transpose().eval();  // orthogonal values
  return out;
}

inline SampledLoop adjoint_action_inv(const SampledLoop& gamma, const SampledLoop& x) {
  if (gamma.sites() != x.sites()) throw std::invalid_argument("adjoint_action_inv: grid mismatch");
  SampledLoop out = x;
  for (int m = 0; m < x.sites(); ++m)
    out.values[m] = gamma.values[m].transpose() * x.values[m] * gamma.values[m];
  return out;
}

// Path in SO(d) on the uniform grid t_k = k pi / intervals, k = 0..intervals,
// with sitting instants (exactly constant margins) at both ends.  With
// intervals = 2M the odd grid points are exactly the positive lattice sites,
// so loops assembled from paths act site-exactly.
struct Path {
    int d = 1;
    int intervals = 0;
    std::vector<RMat> samples;  // intervals + 1 values
    int sit_margin = 0;

    int n() const { return intervals; }
    const RMat& start() const { return samples.front(); }
    const RMat& end() const { return samples.back(); }

    bool sitting_ok(double tol = kStructuralTol) const {
      for (int k = 0; k <= sit_margin; ++k) {
        if ((samples[k] - samples[0]).norm() > tol) return false;
        if ((samples[intervals - k] - samples[intervals]).norm() > tol) return false;
      }
      return true;
    }
};

inline Path constant_path(int d, int intervals, const RMat& g, int margin = 2) {
  Path p;
  p.d = d;
  p.intervals = intervals;
  p.samples.assign(intervals + 1, g);
  p.sit_margin = margin;
  return p;
}

inline Path pointwise_product(const Path& a, const Path& b) {
  if (a.intervals != b.intervals || a.d != b.d)
    throw std::invalid_argument("path product: incompatible paths");
  Path out = a;
  for (int k = 0; k <= a.intervals; ++k) out.samples[k] = a.samples[k] * b.samples[k];
  out.sit_margin = std::min(a.sit_margin, b.sit_margin);
  return out;
}

inline Path pointwise_inverse(const Path& a) {
  Path out = a;
  for (auto& v : out.samples) v = v.transpose().eval();
  return out;
}

inline Path reverse(const Path& a) {
  Path out = a;
  for (int k = 0; k <= a.intervals; ++k) out.samples[k] = a.samples[a.intervals - k];
  return out;
}

// Concatenation b * a (a first); both endpoints must match and the grid is
// reused, so inputs are read at even grid points only.
inline Path concat(const Path& a, const Path& b, double tol = kStructuralTol) {
  if (a.intervals != b.intervals || a.d != b.d) throw std::invalid_argument("concat: incompatible paths");
  if ((a.end() - b.start()).norm() > tol) throw std::invalid_argument("concat: endpoint mismatch");
  if (a.intervals % 2 != 0) throw std::invalid_argument("concat: grid not halvable");
  Path out;
  out.d = a.d;
  out.intervals = a.intervals;
  out.samples.resize(a.intervals + 1);
  int half = a.intervals / 2;
  for (int k = 0; k <= half; ++k) out.samples[k] = a.samples[2 * k];
  for (int k = half; k <= a.intervals; ++k) out.samples[k] = b.samples[2 * k - a.intervals];
  out.sit_margin = std::max(0, std::min(a.sit_margin, b.sit_margin) / 2);
  return out;
}

// beta1 cup beta2: follow beta1 on the upper half circle, reversed beta2 on
// the lower half; site values of the resulting loop.
inline SampledLoop cup(const Path& b1, const Path& b2, double tol = kStructuralTol) {
  if (b1.intervals != b2.intervals || b1.d != b2.d) throw std::invalid_argument("cup: incompatible paths");
  if ((b1.start() - b2.start()).norm() > tol || (b1.end() - b2.end()).norm() > tol)
    throw std::invalid_argument("cup: paths must share both endpoints");
  if (b1.intervals % 2 != 0) throw std::invalid_argument("cup: even grid required");
  int M = b1.intervals / 2;
  SampledLoop out;
  out.d = b1.d;
  out.values.resize(2 * M);
  for (int m = 0; m < M; ++m) out.values[m] = b2.samples[2 * (M - 1 - m) + 1];     // t_m < 0
  for (int m = M; m < 2 * M; ++m) out.values[m] = b1.samples[2 * (m - M) + 1];     // t_m > 0
  return out;
}

inline SampledLoop delta_loop(const Path& b) { return cup(b, b); }

// Pointwise multiplication operator on the model.
struct MultOpInfo {
    AOp op;
    double hs_predicted = 0;  // ( sum_n |n| ||A_n||_F^2 )^{1/2}
    double hs_measured = 0;   // || [m(f), J] ||_F
};

inline MultOpInfo mult_op(const TrigLoop& f, const SpinorModel& m) {
  if (m.flavor != Flavor::frequency)
    throw std::invalid_argument("mult_op: trig loops act on the frequency flavor");
  if (f.d != m.d) throw std::invalid_argument("mult_op: color count mismatch");
  const int N = m.size;
  Mat op = Mat::Zero(m.dim, m.dim);
  double pred = 0;
  for (const auto& [k, a] : f.coeffs) {
    pred += std::abs(k) * a.squaredNorm();
    for (int n = -N; n < N; ++n) {
      if (n - k < -N || n - k >= N) continue;  // modes leaving the window are dropped
      for (int i = 0; i < m.d; ++i)
        for (int j = 0; j < m.d; ++j)
          op(m.freq_index(n - k, i), m.freq_index(n, j)) += a(i, j);
    }
  }
  MultOpInfo out;
  out.op = AOp(op);
  out.hs_predicted = std::sqrt(pred);
  out.hs_measured = (m.J.mat * op - op * m.J.mat).norm();
  return out;
}

inline MultOpInfo mult_op(const SampledLoop& f, const SpinorModel& m) {
  if (m.flavor != Flavor::lattice)
    throw std::invalid_argument("mult_op: sampled loops act on the lattice flavor");
  if (f.sites() != 2 * m.size || f.d != m.d) throw std::invalid_argument("mult_op: grid mismatch");
  Mat op = Mat::Zero(m.dim, m.dim);
  for (int s = 0; s < f.sites(); ++s)
    for (int i = 0; i < m.d; ++i)
      for (int j = 0; j < m.d; ++j) op(m.site_index(s, i), m.site_index(s, j)) = f.values[s](i, j);
  MultOpInfo out;
  out.op = AOp(op);
  out.hs_measured = (m.J.mat * op - op * m.J.mat).norm();
  return out;
}

// Closed-form loop cocycle on Fourier coefficients, complex-bilinear in both
// arguments: -(i/2) sum_k k tr(A_k B_{-k}).  On real so(d)-valued loops the
// value is real and equals (1/(4 pi)) Int tr(f g') dt.
inline cplx loop_cocycle_bilinear(const TrigLoop& f, const TrigLoop& g) {
  cplx acc = 0;
  for (const auto& [k, a] : f.coeffs) {
    auto it = g.coeffs.find(-k);
    if (it == g.coeffs.end()) continue;
    acc += double(k) * (a * it->second).trace();
  }
  return acc / cplx(0, 2);
}

inline double loop_cocycle(const TrigLoop& f, const TrigLoop& g) {
  cplx v = loop_cocycle_bilinear(f, g);
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v)))
    throw std::invalid_argument("loop_cocycle: loops are not real so(d)-valued");
  return v.real();
}

// Fourier coefficients of a sampled loop via the plain DFT on the midpoint
// grid; modes |n| <= sites/2 - 1.
inline TrigLoop fourier_coeffs(const SampledLoop& f) {
  TrigLoop out;
  out.d = f.d;
  int n = f.sites();
  int half = n / 2 - 1;
  for (int k = -half; k <= half; ++k) {
    Mat a = Mat::Zero(f.d, f.d);
    for (int m = 0; m < n; ++m) {
      double t = M_PI * (2 * m + 1 - n) / double(n);
      a += f.values[m].cast<cplx>() * std::polar(1.0 / n, -k * t);
    }
    if (a.norm() > 1e-14) out.coeffs[k] = a;
  }
  return out;
}

inline double loop_cocycle(const SampledLoop& f, const SampledLoop& g) {
  return loop_cocycle(fourier_coeffs(f), fourier_coeffs(g));
}

// Quadrature of (1/(4 pi)) Int < tau^-1 d_t tau, tau^-1 X > dt with the basic
// inner product; the derivative is spectral (via the DFT).
inline double basic_pairing(const RMat& x, const RMat& y) { return -0.5 * (x * y).trace(); }

inline double beta_form(const SampledLoop& tau_loop, const SampledLoop& x_loop) {
  if (tau_loop.sites() != x_loop.sites() || tau_loop.d != x_loop.d)
    throw std::invalid_argument("beta_form: grid mismatch");
  int n = tau_loop.sites();
  TrigLoop tl = fourier_coeffs(tau_loop);
  double acc = 0;
  for (int m = 0; m < n; ++m) {
    double t = M_PI * (2 * m + 1 - n) / double(n);
    Mat deriv = Mat::Zero(tau_loop.d, tau_loop.d);
    for (const auto& [k, a] : tl.coeffs) deriv += a * (cplx(0, 1) * double(k)) * std::polar(1.0, k * t);
    RMat omega = (tau_loop.values[m].transpose() * deriv.real());
    RMat xi = tau_loop.values[m].transpose() * x_loop.values[m];
    acc += basic_pairing(omega, xi);
  }
  return acc * (2.0 * M_PI / n) / (4.0 * M_PI);
}

// Coroot norms of so(d) under the bilinear form -1/2 tr(XY), computed from
// sl2 triples assembled out of a simultaneous root-space decomposition of
// the complexified algebra in the defining representation.
struct CorootData {
    bool simple = true;              // false for d = 2 (abelian) and d = 4
    std::vector<double> norms;       // one per positive root
    double min_norm = 0;
};

inline CorootData basic_form_coroots(int d) {
  if (d < 2) throw std::invalid_argument("basic_form_coroots: d >= 2 required");
  CorootData out;
  out.simple = (d != 2 && d != 4);
  const int rank = d / 2;
  const int dim_g = d * (d - 1) / 2;
  if (d == 2) return out;  // so(2) abelian, no roots

  // Orthonormal basis of so(d) under the Hilbert-Schmidt inner product.
  std::vector<RMat> basis;
  basis.reserve(dim_g);
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      RMat e = RMat::Zero(d, d);
      e(a, b) = M_SQRT1_2;
      e(b, a) = -M_SQRT1_2;
      basis.push_back(e);
    }
  std::vector<RMat> cartan;
  for (int j = 0; j < rank; ++j) {
    RMat h = RMat::Zero(d, d);
    h(2 * j, 2 * j + 1) = 1;
    h(2 * j + 1, 2 * j) = -1;
    cartan.push_back(h);
  }

  auto ad_matrix = [&](const RMat& h) {
    Mat ad = Mat::Zero(dim_g, dim_g);
    for (int c = 0; c < dim_g; ++c) {
      RMat br = h * basis[c] - basis[c] * h;
      for (int r = 0; r < dim_g; ++r) ad(r, c) = (basis[r].transpose() * br).trace();
    }
    return ad;
  };

  // Generic Cartan combination separates the roots; i*ad is Hermitian.
  std::vector<double> combo(rank);
  for (int j = 0; j < rank; ++j) combo[j] = 1.0 + 0.137 * (j + 1) + 0.0071 * (j + 1) * (j + 1);
  Mat ad_c = Mat::Zero(dim_g, dim_g);
  std::vector<Mat> ads(rank);
  for (int j = 0; j < rank; ++j) {
    ads[j] = ad_matrix(cartan[j]);
    ad_c += combo[j] * ads[j];
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(cplx(0, 1) * ad_c));
  if (es.info() != Eigen::Success) throw std::runtime_error("basic_form_coroots: eigensolver failed");

  auto vec_to_matrix = [&](const Vec& v) {
    Mat e = Mat::Zero(d, d);
    for (int c = 0; c < dim_g; ++c) e += v(c) * basis[c].cast<cplx>();
    return e;
  };

  struct RootVec {
      double eig;
      Mat e;
      Vec coords;
  };
  std::vector<RootVec> roots;
  for (int i = 0; i < dim_g; ++i) {
    double lam = es.eigenvalues()(i);
    if (std::abs(lam) < 1e-8) continue;  // Cartan directions
    roots.push_back({lam, vec_to_matrix(es.eigenvectors().col(i)), es.eigenvectors().col(i)});
  }

  auto bracket = [](const Mat& x, const Mat& y) { return Mat(x * y - y * x); };

  for (const auto& r : roots) {
    if (r.eig < 0) continue;  // one sl2 per positive root
    // partner with opposite eigenvalue, maximal overlap with conj(E)
    const RootVec* best = nullptr;
    double best_ov = -1;
    for (const auto& s : roots) {
      if (std::abs(s.eig + r.eig) > 1e-8) continue;
      double ov = std::abs((r.e.adjoint() * s.e).trace());
      if (ov > best_ov) {
        best_ov = ov;
        best = &s;
      }
    }
    if (!best) throw std::runtime_error("basic_form_coroots: missing opposite root space");
    Mat h0 = bracket(r.e, best->e);
    cplx mu = (r.e.adjoint() * bracket(h0, r.e)).trace() / (r.e.adjoint() * r.e).trace();
    if (std::abs(mu) < 1e-10) throw std::runtime_error("basic_form_coroots: degenerate sl2 pairing");
    Mat h = (2.0 / mu) * h0;  // [h, E] = 2E
    cplx nrm = 0.5 * (h * h).trace();
    if (std::abs(nrm.imag()) > 1e-8) throw std::runtime_error("basic_form_coroots: coroot norm not real");
    out.norms.push_back(nrm.real());
  }
  out.min_norm = out.norms.empty() ? 0 : *std::min_element(out.norms.begin(), out.norms.end());
  return out;
}

}  // namespace fockfuse
