#pragma once

#include "fockfuse/implementers.hpp"
#include "fockfuse/loops.hpp"

namespace fockfuse {

// Principal logarithm of a rotation matrix, as a real skew matrix; fails
// near rotation angle pi where the branch is ambiguous.
inline RMat rotation_log(const RMat& r, double gap = 1e-6) {
  Mat l = logm_unitary(r.cast<cplx>(), gap);
  if (l.imag().norm() > 1e-9 * std::max(1.0, l.norm()))
    throw std::runtime_error("rotation_log: logarithm is not real");
  RMat k = l.real();
  return 0.5 * (k - k.transpose().eval());
}

// Lift of the multiplication operator of an SO(d)-valued sampled loop by the
// pointwise logarithm: M(gamma) = exp(m(log gamma)) site by site.
inline Implementer sigma_lift_loop(const SampledLoop& gamma, const SpinorModel& m, const FockSpace& f) {
  SampledLoop xlog = gamma;
  for (int s = 0; s < gamma.sites(); ++s) xlog.values[s] = rotation_log(gamma.values[s]);
  AOp a = mult_op(xlog, m).op;
  OResElement el = decompose(a, m);
  Implementer imp = sigma_lift(el, f);
  imp.g = mult_op(gamma, m).op;
  return imp;
}

// rho(beta): the implementer of M(beta u beta) normalized by vacuum
// positivity <Omega, rho(beta) Omega> > 0.
struct RhoResult {
    Implementer imp;
    double overlap = 0;             // the positive vacuum overlap after normalization
    double reality_defect = 0;      // |Im <Omega, U0 Omega>| before normalization
    double j_commutation = 0;       // || rho J - J rho ||_F
};

inline cplx vacuum_overlap(const FockSpace& f, const FockOp& u) {
  Vec om = f.vacuum();
  return std::conj(inner(u.apply(om), om));  // <Omega, U Omega>
}

inline RhoResult rho(const Path& beta, const SpinorModel& m, const FockSpace& f,
                     double positivity_tol = 1e-9) {
  if (!m.is_lattice()) throw std::invalid_argument("rho: lattice flavor required");
  if (beta.intervals != 2 * m.size) throw std::invalid_argument("rho: path grid must match the lattice");
  RhoResult out;
  out.imp = sigma_lift_loop(delta_loop(beta), m, f);
  cplx z = vacuum_overlap(f, out.imp.U);
  out.reality_defect = std::abs(z.imag());
  if (std::abs(z) < positivity_tol)
    throw std::runtime_error("rho: vacuum overlap vanishes, positivity normalization ambiguous");
  out.imp.U.mat *= std::abs(z) / z;
  out.overlap = vacuum_overlap(f, out.imp.U).real();
  AOp j = compose(klein_inverse(f), AOp(Mat::Identity(f.dim, f.dim), true));
  out.j_commutation = op_distance(compose(out.imp.U, j), compose(j, out.imp.U));
  return out;
}

// Element of the pulled-back extension over the loop beta_i u beta_j: the
// boundary paths, the loop, and an implementer of its multiplication
// operator.
struct PathLift {
    Path b1, b2;
    SampledLoop loop;
    Implementer U;
};

inline PathLift make_lift(const Path& b1, const Path& b2, const SpinorModel& m, const FockSpace& f,
                          cplx phase = cplx(1, 0)) {
  PathLift q;
  q.b1 = b1;
  q.b2 = b2;
  q.loop = cup(b1, b2);
  q.U = sigma_lift_loop(q.loop, m, f);
  q.U.U.mat *= phase / std::abs(phase);
  return q;
}

inline double path_distance(const Path& a, const Path& b) {
  if (a.intervals != b.intervals || a.d != b.d) return 1e99;
  double acc = 0;
  for (int k = 0; k <= a.intervals; ++k) acc = std::max(acc, (a.samples[k] - b.samples[k]).norm());
  return acc;
}

// Fusion product (q12, q23) -> q12 rho(beta2)^-1 q23 over beta1 u beta3.
inline PathLift fuse(const PathLift& q12, const PathLift& q23, const SpinorModel& m, const FockSpace& f,
                     double tol = 1e-9) {
  if (path_distance(q12.b2, q23.b1) > tol)
    throw std::invalid_argument("fuse: lifts do not share the middle path");
  RhoResult mid = rho(q12.b2, m, f);
  PathLift out;
  out.b1 = q12.b1;
  out.b2 = q23.b2;
  out.loop = cup(q12.b1, q23.b2);
  out.U.U = FockOp(Mat(q12.U.U.mat * mid.imp.U.mat.adjoint() * q23.U.U.mat), false, Parity::even);
  out.U.g = mult_op(out.loop, m).op;
  return out;
}

// Commutator residual for lifts supported on opposite half circles.
inline double admissibility_residual(const Path& b1, const Path& b3, const SpinorModel& m,
                                     const FockSpace& f) {
  RMat id = RMat::Identity(b1.d, b1.d);
  if ((b1.start() - id).norm() > 1e-12 || (b1.end() - id).norm() > 1e-12 ||
      (b3.start() - id).norm() > 1e-12 || (b3.end() - id).norm() > 1e-12)
    throw std::invalid_argument("admissibility_residual: paths must have identity endpoints");
  Path unit = constant_path(b1.d, b1.intervals, id, b1.sit_margin);
  Implementer upper = sigma_lift_loop(cup(b1, unit), m, f);
  Implementer lower = sigma_lift_loop(cup(unit, b3), m, f);
  return (upper.U.mat * lower.U.mat - lower.U.mat * upper.U.mat).norm();
}

// || sigma(M(beta u beta)) - rho(beta) ||_F for beta inside the exponential chart.
inline double compat_check(const Path& beta, const SpinorModel& m, const FockSpace& f) {
  Implementer direct = sigma_lift_loop(delta_loop(beta), m, f);
  RhoResult r = rho(beta, m, f);
  return op_distance(direct.U, r.imp.U);
}

// Z_sigma(gamma, X) on sampled loops: the scalar defect of the sigma-lift
// derivative under the adjoint action.
inline ZSigmaResult z_sigma(const SampledLoop& gamma, const SampledLoop& x, const SpinorModel& m,
                            const FockSpace& f) {
  Implementer u = sigma_lift_loop(gamma, m, f);
  OResElement sx = decompose(mult_op(x, m).op, m);
  OResElement sx_ad = decompose(mult_op(adjoint_action_inv(gamma, x), m).op, m);
  return z_sigma_defect(u.U, sx, sx_ad, f);
}

// --- generators for test paths -------------------------------------------

inline RMat random_skew(int d, Rng& rng, double scale) {
  RMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.gaussian();
  return scale * 0.5 * (g - g.transpose().eval());
}

inline double smoothstep(double u) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  return u * u * u * (10 + u * (-15 + 6 * u));
}

// Smooth path with sitting instants from x to y, modulated by a bump along
// one or two skew directions.
inline Path random_path(int d, int intervals, Rng& rng, double amplitude, const RMat& x, const RMat& y,
                        int margin = 2) {
  if (intervals < 4) throw std::invalid_argument("random_path: need at least 4 intervals");
  margin = std::min(margin, (intervals - 1) / 2);
  Path p;
  p.d = d;
  p.intervals = intervals;
  p.sit_margin = margin;
  p.samples.resize(intervals + 1);
  RMat geo = rotation_log(RMat(x.transpose() * y));
  RMat k1 = random_skew(d, rng, amplitude);
  RMat k2 = random_skew(d, rng, amplitude);
  double lo = margin * M_PI / intervals;
  double hi = M_PI - lo;
  for (int k = 0; k <= intervals; ++k) {
    double t = k * M_PI / intervals;
    double w = smoothstep((t - lo) / (hi - lo));
    double b = 4.0 * w * (1.0 - w);
    Mat rot = expm_skew(Mat((w * geo + b * k1 + b * w * k2).cast<cplx>()));
    p.samples[k] = x * rot.real();
  }
  return p;
}

inline Path random_path_identity_endpoints(int d, int intervals, Rng& rng, double amplitude,
                                           int margin = 2) {
  RMat id = RMat::Identity(d, d);
  return random_path(d, intervals, rng, amplitude, id, id, margin);
}

}  // namespace fockfuse
