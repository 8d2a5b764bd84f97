#pragma once

#include <algorithm>
#include <array>
#include <set>

#include "fockfuse/fusion.hpp"
#include "fockfuse/io.hpp"
#include "fockfuse/modular.hpp"
#include "fockfuse/report.hpp"

namespace fockfuse {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"clifford",     "implementer", "cocycle",
                                              "loop-cocycle", "kappa",       "modular",
                                              "transforms",   "duality",     "fusion",
                                              "admissibility", "compat"};
  return names;
}

namespace detail {

class Recorder {
  public:
    Recorder(Report& rep, std::string suite, std::optional<double> tol_override)
        : rep_(rep), suite_(std::move(suite)), override_(tol_override) {}

    void check(const std::string& id, const std::string& anchor, double residual, double tol) {
      rep_.add_check(suite_, id, anchor, residual, override_.value_or(tol));
    }
    void info(const std::string& id, const std::string& anchor, double value) {
      rep_.add_info(suite_, id, anchor, value);
    }

  private:
    Report& rep_;
    std::string suite_;
    std::optional<double> override_;
};

inline Vec random_state(int n, Rng& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.cgaussian();
  return v;
}

inline SpinorModel suite_model(const SuiteConfig& c) {
  return build_model(c.flavor, c.flavor == Flavor::frequency ? c.N : c.M, c.d);
}

inline SpinorModel fock_capped_model(const SuiteConfig& c, int max_ell) {
  int size = c.flavor == Flavor::frequency ? c.N : c.M;
  while (size > 1 && size * c.d > max_ell) --size;
  int d = c.d;
  while (d > 1 && size * d > max_ell) --d;
  return build_model(c.flavor, size, d);
}

// ---------------------------------------------------------------- clifford
inline void run_clifford(const SuiteConfig& cfg, Report& rep, Rng& rng) {
  Recorder rec(rep, "clifford", cfg.tol_override);
  SpinorModel m = suite_model(cfg);
  FockSpace f = build_fock(m);

  Mat id = Mat::Identity(m.dim, m.dim);
  rec.check("alpha-involution", "spinor_core.build_model",
            op_distance(compose(m.alpha, m.alpha), AOp::identity(m.dim)), 1e-12);
  rec.check("tau-involution", "spinor_core.build_model", (m.tau.mat * m.tau.mat - id).norm(), 1e-12);
  rec.check("j-square", "spinor_core.build_model", (m.J.mat * m.J.mat + id).norm(), 1e-12);
  rec.check("j-from-projections", "spinor_core.canonical_operators",
            (m.J.mat - cplx(0, 1) * (m.P_L.mat - m.P_Lperp.mat)).norm(), 1e-12);
  rec.check("tau-flips-j", "spinor_core.canonical_operators",
            (m.tau.mat * m.J.mat * m.tau.mat + m.J.mat).norm(), 1e-12);
  if (m.is_lattice()) {
    rec.check("halves-resolution", "spinor_core.build_model",
              (m.P_plus->mat + m.P_minus->mat - id).norm(), 1e-14);
    rec.check("tau-swaps-halves", "spinor_core.build_model",
              (m.tau.mat * m.P_minus->mat * m.tau.mat - m.P_plus->mat).norm(), 1e-14);
    rec.info("general-position-angle", "spinor_core.general_position",
             general_position(m).angle_minus_L);
  } else {
    AOp at = compose(m.alpha, m.tau);
    rec.check("alpha-tau-fixes-basis", "spinor_core.canonical_operators",
              (at.mat - id).norm(), 1e-13);
  }

  double worst_car = 0, worst_adj = 0, worst_sym = 0;
  for (int i = 0; i < cfg.samples; ++i) {
    Vec x = random_state(m.dim, rng), y = random_state(m.dim, rng);
    auto d2 = clifford_defects(f, x, y);
    worst_car = std::max(worst_car, d2.car);
    worst_adj = std::max(worst_adj, d2.adjoint);
    worst_sym = std::max(worst_sym, std::abs(bilinear_b(m, x, y) - bilinear_b(m, y, x)));
  }
  rec.check("car-relation", "fock.clifford_rep", worst_car, 1e-11);
  rec.check("adjoint-relation", "fock.clifford_rep", worst_adj, 1e-11);
  rec.check("bilinear-symmetry", "fock.clifford_rep", worst_sym, 1e-12);

  if (f.dense_ok()) {
    Vec x = random_state(m.dim, rng);
    FockOp p = clifford_rep(f, x);
    Mat g = grading(f).mat;
    rec.check("pi-odd", "fock.clifford_rep", (g * p.mat * g + p.mat).norm(), 1e-10);
  }
}

// -------------------------------------------------------------- implementer
inline void run_implementer(const SuiteConfig& cfg, Report& rep, Rng& rng) {
  Recorder rec(rep, "implementer", cfg.tol_override);
  SpinorModel m = fock_capped_model(cfg, 8);
  FockSpace f = build_fock(m);
  Mat g = grading(f).mat;

  double worst_residual = 0, worst_even = 0, worst_unitary = 0, min_overlap = 1e300;
  for (int i = 0; i < cfg.samples; ++i) {
    OResElement el = random_ores(m, rng, 0.5);
    Implementer imp = sigma_lift(el, f);
    worst_residual = std::max(worst_residual, implementation_residual(imp.U, imp.g, f));
    worst_even = std::max(worst_even, (g * imp.U.mat * g - imp.U.mat).norm());
    worst_unitary = std::max(
        worst_unitary, (imp.U.mat.adjoint() * imp.U.mat - Mat::Identity(f.dim, f.dim)).norm());
    min_overlap = std::min(min_overlap, std::abs(inner(imp.U.apply(f.vacuum()), f.vacuum())));
  }
  rec.check("implementation-residual", "implementers.sigma_lift", worst_residual, 1e-8);
  rec.check("evenness", "implementers.sigma_lift", worst_even, 1e-12);
  rec.check("unitarity", "implementers.sigma_lift", worst_unitary, 1e-11);
  rec.info("min-vacuum-overlap", "implementers.sigma_lift", min_overlap);

  OResElement el = random_ores(m, rng, 0.4);
  Implementer imp = sigma_lift(el, f);
  rec.check("identity-lift", "implementers.sigma_lift",
            (sigma_lift(make_ores(m, Mat::Zero(m.ell, m.ell), Mat::Zero(m.ell, m.ell)), f).U.mat -
             Mat::Identity(f.dim, f.dim))
                .norm(),
            1e-13);
  double base = implementation_residual(imp.U, imp.g, f);
  FockOp phased(Mat(std::polar(1.0, 0.37) * imp.U.mat));
  rec.check("phase-invariance", "implementers.implementation_residual",
            std::abs(implementation_residual(phased, imp.g, f) - base), 1e-11);
  double mismatch = implementation_residual(imp.U, AOp(expm_skew(Mat(2.0 * el.A.mat))), f);
  rec.check("mismatch-detected", "implementers.implementation_residual",
            std::max(0.0, 1e-2 - mismatch), 0.0);
}

// ------------------------------------------------------------------ cocycle
inline void run_cocycle(const SuiteConfig& cfg, Report& rep, Rng& rng) {
  Recorder rec(rep, "cocycle", cfg.tol_override);
  SpinorModel m = fock_capped_model(cfg, 8);
  FockSpace f = build_fock(m);

  double worst_spread = 0, worst_antisym = 0;
  for (int i = 0; i < cfg.samples; ++i) {
    OResElement a1 = random_ores(m, rng, 0.8);
    OResElement a2 = random_ores(m, rng, 0.8);
    std::array<double, 4> w{cocycle(a1, a2, CocycleForm::j_form, m).value,
                            cocycle(a1, a2, CocycleForm::block_form, m).value,
                            cocycle(a1, a2, CocycleForm::prime_form, m).value,
                            cocycle(a1, a2, CocycleForm::defect_oracle, m, &f).value};
    worst_spread = std::max(worst_spread, *std::max_element(w.begin(), w.end()) -
                                              *std::min_element(w.begin(), w.end()));
    worst_antisym = std::max(worst_antisym,
                             std::abs(w[0] + cocycle(a2, a1, CocycleForm::j_form, m).value));
  }
  rec.check("four-form-agreement", "implementers.cocycle", worst_spread, 1e-9);
  rec.check("antisymmetry", "implementers.cocycle", worst_antisym, 1e-11);

  // frozen two-mode value 2 Im(s conj t)
  SpinorModel m2 = build_model(cfg.flavor, 1, 2);
  FockSpace f2 = build_fock(m2);
  cplx s(0.3, 0.4), t(-0.2, 0.7);
  Mat ap1 = Mat::Zero(2, 2), ap2 = Mat::Zero(2, 2);
  ap1(0, 1) = s;
  ap1(1, 0) = -s;
  ap2(0, 1) = t;
  ap2(1, 0) = -t;
  OResElement e1 = make_ores(m2, Mat::Zero(2, 2), ap1);
  OResElement e2 = make_ores(m2, Mat::Zero(2, 2), ap2);
  rec.check("frozen-two-mode-value", "implementers.cocycle",
            std::abs(cocycle(e1, e2, CocycleForm::defect_oracle, m2, &f2).value - (-0.58)), 1e-12);

  OResElement d1 = make_ores(m, random_ores(m, rng, 0.5).a, Mat::Zero(m.ell, m.ell));
  OResElement d2 = make_ores(m, random_ores(m, rng, 0.5).a, Mat::Zero(m.ell, m.ell));
  rec.check("pure-a-vanishing", "implementers.cocycle",
            std::abs(cocycle(d1, d2, CocycleForm::j_form, m).value), 1e-12);
}

// ------------------------------------------------------------- loop-cocycle
inline void run_loop_cocycle(const SuiteConfig& cfg, Report& rep, Rng&) {
  Recorder rec(rep, "loop-cocycle", cfg.tol_override);
  RMat x = RMat::Zero(3, 3);
  x(0, 1) = 1;
  x(1, 0) = -1;

  rec.check("harmonic-off-diagonal", "loops.loop_cocycle",
            std::abs(loop_cocycle_bilinear(trig_harmonic(3, 2, x.cast<cplx>()),
                                           trig_harmonic(3, 3, x.cast<cplx>()))),
            0.0);
  double worst = 0;
  for (int k : {1, 2, 3})
    worst = std::max(worst, std::abs(std::abs(loop_cocycle_bilinear(
                                         trig_harmonic(3, k, x.cast<cplx>()),
                                         trig_harmonic(3, -k, x.cast<cplx>()))) -
                                     k * 1.0));
  rec.check("harmonic-magnitude", "loops.loop_cocycle", worst, 1e-12);

  TrigLoop fcos = trig_cos(3, 1, x), gsin = trig_sin(3, 1, x);
  double closed = loop_cocycle(fcos, gsin);
  rec.check("antisymmetry", "loops.loop_cocycle", std::abs(closed + loop_cocycle(gsin, fcos)),
            1e-12);

  int nw = cfg.flavor == Flavor::frequency ? std::max(cfg.N, 8) : 16;
  SpinorModel m = build_model(Flavor::frequency, nw, 3);
  OResElement a1 = decompose(mult_op(fcos, m).op, m);
  OResElement a2 = decompose(mult_op(gsin, m).op, m);
  double bridge = cocycle(a1, a2, CocycleForm::block_form, m).value;
  rec.check("operator-bridge", "implementers.cocycle", std::abs(bridge - closed) / std::abs(closed),
            0.01);

  auto hx = mult_op(trig_harmonic(3, 1, x.cast<cplx>()), m);
  rec.check("hs-band-factor", "loops.mult_op",
            std::abs(hx.hs_measured - 2.0 * hx.hs_predicted), 1e-12);

  for (int d : {3, 5, 6, 7}) {
    CorootData cd = basic_form_coroots(d);
    double even_defect = 0;
    for (double nn : cd.norms) {
      double r = std::round(nn / 2.0) * 2.0;
      even_defect = std::max(even_defect, std::abs(nn - r));
    }
    rec.check("coroot-norms-even-d" + std::to_string(d), "loops.basic_form_coroots", even_defect,
              1e-8);
    if (d >= 5)
      rec.check("coroot-min-d" + std::to_string(d), "loops.basic_form_coroots",
                std::abs(cd.min_norm - 2.0), 1e-8);
    else
      rec.info("coroot-min-d" + std::to_string(d), "loops.basic_form_coroots", cd.min_norm);
  }
}

// -------------------------------------------------------------------- kappa
inline void run_kappa(const SuiteConfig& cfg, Report& rep, Rng& rng) {
  Recorder rec(rep, "kappa", cfg.tol_override);
  SpinorModel m = fock_capped_model(cfg, 8);
  FockSpace f = build_fock(m);

  double worst_cs = 0, worst_impl = 0, worst_inv = 0, worst_hom = 0;
  for (int i = 0; i < cfg.samples; ++i) {
    OResElement el = random_ores(m, rng, 0.5);
    Implementer imp = sigma_lift(el, f);
    Implementer k = kappa_imp(imp, f, m);
    worst_impl = std::max(worst_impl, implementation_residual(k.U, k.g, f));
    OResElement tel = decompose(compose(m.tau, compose(el.A, m.tau)), m);
    worst_cs = std::max(worst_cs, op_distance(k.U, sigma_lift(tel, f).U));
    worst_inv = std::max(worst_inv, op_distance(kappa_imp(k, f, m).U, imp.U));
    Implementer imp2 = sigma_lift(random_ores(m, rng, 0.5), f);
    Mat lhs = kappa_op(FockOp(Mat(imp.U.mat * imp2.U.mat))).mat;
    worst_hom = std::max(worst_hom, (lhs - kappa_op(imp.U).mat * kappa_op(imp2.U).mat).norm());
  }
  rec.check("kappa-sigma-tau", "implementers.kappa_imp", worst_cs, 1e-10);
  rec.check("implements-reflected", "implementers.kappa_imp", worst_impl, 1e-9);
  rec.check("involution", "implementers.kappa_imp", worst_inv, 1e-12);
  rec.check("homomorphism", "implementers.kappa_imp", worst_hom, 1e-12);
  rec.check("phase-antilinearity", "implementers.kappa_imp",
            (kappa_op(FockOp(Mat(cplx(0, 1) * Mat::Identity(f.dim, f.dim)))).mat +
             cplx(0, 1) * Mat::Identity(f.dim, f.dim))
                .norm(),
            1e-14);
}

// ------------------------------------------------------------------ modular
inline void run_modular(const SuiteConfig& cfg, Report& rep, Rng&) {
  Recorder rec(rep, "modular", cfg.tol_override);
  int M_fock = std::min(cfg.M, 4);
  SpinorModel m = build_model(Flavor::lattice, M_fock, 1);
  FockSpace f = build_fock(m);

  HalfStructure h = half_structure(m);
  rec.check("t-sum", "modular.half_structure", h.sum_residual, 1e-14);
  rec.check("t-spectra-open-interval", "modular.half_structure",
            std::max({0.0, -h.min_eig_plus, h.max_eig_plus - 1.0, -h.min_eig_minus,
                      h.max_eig_minus - 1.0}),
            0.0);
  rec.info("t-plus-min-eig", "modular.half_structure", h.min_eig_plus);
  rec.info("general-position-angle", "modular.half_structure", h.angles.angle_minus_L);

  SAndPolar sp = s_and_polar(m);
  rec.info("t-condition-number", "modular.s_and_polar", sp.cond);
  rec.check("s-squares-to-one", "modular.s_and_polar", sp.s_squares_residual, 1e-9 * sp.cond);
  rec.check("delta-closed-formula", "modular.s_and_polar", sp.closed_residual, 1e-10 * sp.cond);
  rec.info("u-identity-residual", "modular.s_and_polar", sp.u_identity_residual);

  ModularData md = tomita(m, f);
  rec.info("cyclic-span-cond", "modular.tomita", md.cond_B);
  rec.check("s-formula", "modular.tomita", md.residual_S_formula, 1e-8 * md.cond_B);
  rec.check("s-vacuum", "modular.tomita", md.s_vacuum_residual, 1e-12);
  rec.check("s-involution", "modular.tomita", md.s_involution_residual, 1e-8 * md.cond_B);
  rec.check("j-vacuum", "modular.tomita", md.j_vacuum_residual, 1e-12);
  rec.check("j-formula", "modular.tomita", md.residual_J, 1e-9 * md.cond_B);
  rec.check("delta-formula", "modular.tomita", md.residual_delta, 1e-8 * md.cond_B);

  // spectra table over a small refinement family
  for (int msize : {M_fock, 2 * M_fock, 4 * M_fock}) {
    SpinorModel mm = build_model(Flavor::lattice, msize, 1);
    HalfStructure hh = half_structure(mm);
    SpectraRow row;
    row.M = msize;
    row.min_eig_plus = hh.min_eig_plus;
    row.max_eig_plus = hh.max_eig_plus;
    row.angle_minus_L = hh.angles.angle_minus_L;
    row.cond = hh.max_eig_plus / hh.min_eig_plus;
    rep.spectra_rows.push_back(row);
  }

  // extended-precision u-identity sweep with certified noise floors
  double monotonic_violation = 0;
  double prev = 0;
  bool first = true;
  for (int msize : cfg.sweep) {
    USweepPoint pt = u_identity_sweep_point(msize);
    rep.sweep_rows.push_back({pt.M, pt.residual, pt.sigma_min, pt.noise_floor});
    if (!first) {
      double allowed = std::max(prev, pt.noise_floor);
      monotonic_violation = std::max(monotonic_violation, pt.residual - allowed);
    }
    prev = pt.residual;
    first = false;
  }
  rec.check("u-sweep-monotone-within-floor", "modular.s_and_polar", monotonic_violation, 0.0);

  // J-residual sweep at Fock level, same floor treatment
  double j_violation = 0;
  prev = 0;
  first = true;
  for (int msize = 2; msize <= M_fock; ++msize) {
    SpinorModel mm = build_model(Flavor::lattice, msize, 1);
    FockSpace ff = build_fock(mm);
    ModularData mdd = tomita(mm, ff);
    double floor = 50 * std::numeric_limits<double>::epsilon() * mdd.cond_B *
                   std::sqrt(double(ff.dim));
    if (!first) j_violation = std::max(j_violation, mdd.residual_J - std::max(prev, floor));
    prev = mdd.residual_J;
    first = false;
  }
  rec.check("j-sweep-monotone-within-floor", "modular.tomita", j_violation, 0.0);
}

// --------------------------------------------------------------- transforms
inline void run_transforms(const SuiteConfig& cfg, Report& rep, Rng&) {
  Recorder rec(rep, "transforms", cfg.tol_override);
  double worst_s = 0, worst_c = 0, worst_partition = 0, worst_tail = 0;
  for (double k : {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0})
    for (double eps : {0.1, 0.01}) {
      TransformRow row = transform_row(k, eps);
      worst_s = std::max(worst_s, row.fs_rel_err);
      worst_c = std::max(worst_c, row.fc_rel_err);
      worst_partition = std::max(worst_partition, row.partition_residual);
      worst_tail = std::max(worst_tail, row.tail_bound);
    }
  rec.check("fs-quadrature", "modular.kernel_transforms", worst_s, 1e-6);
  rec.check("fc-quadrature", "modular.kernel_transforms", worst_c, 1e-6);
  rec.check("partition-of-unity", "modular.kernel_transforms", worst_partition, 1e-14);
  rec.info("tail-bound", "modular.kernel_transforms", worst_tail);
  rec.check("a-at-zero", "modular.kernel_transforms",
            std::abs(transform_row(0.0, 0.01).a_k - 0.5), 1e-15);
}

// ------------------------------------------------------------------ duality
inline void run_duality(const SuiteConfig& cfg, Report& rep, Rng& rng) {
  Recorder rec(rep, "duality", cfg.tol_override);
  int M = std::min(cfg.M, 3);
  SpinorModel m = build_model(Flavor::lattice, M, 1);
  FockSpace f = build_fock(m);
  DualityResult dr = duality(m, f);
  rec.check("graded-commutant-match", "modular.duality", dr.residual, 1e-9);
  rec.check("commutant-dimension", "modular.duality",
            std::abs(double(dr.commutant_dim) - double(Eigen::Index(1) << M)), 0.5);
  rec.check("cone-identity", "modular.cone_sign",
            cone_sign(f, AOp::identity(f.dim)).sign == 1 ? 0.0 : 1.0, 0.0);
  rec.check("cone-minus-identity", "modular.cone_sign",
            cone_sign(f, AOp(Mat(-Mat::Identity(f.dim, f.dim)))).sign == -1 ? 0.0 : 1.0, 0.0);
  SpinorModel m2 = build_model(Flavor::lattice, 3, 2);
  FockSpace f2 = build_fock(m2);
  Path b = random_path_identity_endpoints(2, 2 * m2.size, rng, 0.5);
  rec.check("cone-rho-positive", "modular.cone_sign",
            cone_sign(f2, rho(b, m2, f2).imp.U).sign == 1 ? 0.0 : 1.0, 0.0);
}

// ------------------------------------------------------------ admissibility
inline void run_admissibility(const SuiteConfig& cfg, Report& rep, Rng& rng) {
  Recorder rec(rep, "admissibility", cfg.tol_override);
  int d = std::clamp(cfg.d, 2, 3);
  SpinorModel m = build_model(Flavor::lattice, 3, d);  // smallest size with moving sites
  FockSpace f = build_fock(m);
  int n = 2 * m.size;
  double worst = 0;
  int pairs = std::max(4, cfg.samples / 3);
  for (int i = 0; i < pairs; ++i) {
    Path b1 = random_path_identity_endpoints(d, n, rng, 0.6);
    Path b3 = random_path_identity_endpoints(d, n, rng, 0.6);
    worst = std::max(worst, admissibility_residual(b1, b3, m, f));
  }
  rec.check("opposite-halves-commute", "fusion.admissibility_residual", worst, 1e-9);

  Path b1 = random_path_identity_endpoints(d, n, rng, 0.6);
  Path unit = constant_path(d, n, RMat::Identity(d, d));
  Implementer upper = sigma_lift_loop(cup(b1, unit), m, f);
  Implementer full = sigma_lift(random_ores(m, rng, 0.6), f);
  double control = (upper.U.mat * full.U.mat - full.U.mat * upper.U.mat).norm();
  rec.check("negative-control", "fusion.admissibility_residual", std::max(0.0, 1e-2 - control),
            0.0);
}

// ------------------------------------------------------------------- fusion
inline void run_fusion(const SuiteConfig& cfg, Report& rep, Rng& rng) {
  Recorder rec(rep, "fusion", cfg.tol_override);
  int d = std::clamp(cfg.d, 2, 3);
  SpinorModel m = build_model(Flavor::lattice, 3, d);  // smallest size with moving sites
  FockSpace f = build_fock(m);
  int n = 2 * m.size;
  RMat id = RMat::Identity(d, d);

  double worst_hom = 0, min_overlap = 1e300, worst_reality = 0, worst_j = 0;
  int pairs = std::max(4, cfg.samples / 3);
  for (int i = 0; i < pairs; ++i) {
    Path b1 = random_path_identity_endpoints(d, n, rng, 0.5);
    Path b2 = random_path_identity_endpoints(d, n, rng, 0.5);
    RhoResult r1 = rho(b1, m, f), r2 = rho(b2, m, f);
    RhoResult r12 = rho(pointwise_product(b1, b2), m, f);
    worst_hom = std::max(worst_hom, (r1.imp.U.mat * r2.imp.U.mat - r12.imp.U.mat).norm());
    min_overlap = std::min({min_overlap, r1.overlap, r2.overlap});
    worst_reality = std::max({worst_reality, r1.reality_defect, r2.reality_defect});
    worst_j = std::max({worst_j, r1.j_commutation, r2.j_commutation});
  }
  rec.check("rho-homomorphism", "fusion.rho", worst_hom, 1e-8);
  rec.check("rho-vacuum-positivity", "fusion.rho", min_overlap > 0 ? 0.0 : 1.0, 0.0);
  rec.check("rho-overlap-reality", "fusion.rho", worst_reality, 1e-10);
  rec.check("rho-j-commutation", "fusion.rho", worst_j, 1e-8);

  double worst_book = 0, worst_assoc = 0, worst_mult = 0, worst_neutral = 0, worst_equiv = 0;
  int triples = std::max(3, cfg.samples / 8);
  for (int i = 0; i < triples; ++i) {
    RMat end = expm_skew(Mat(random_skew(d, rng, 0.3).cast<cplx>())).real();
    Path b1 = random_path(d, n, rng, 0.3, id, end);
    Path b2 = random_path(d, n, rng, 0.3, id, end);
    Path b3 = random_path(d, n, rng, 0.3, id, end);
    Path b4 = random_path(d, n, rng, 0.3, id, end);
    PathLift q12 = make_lift(b1, b2, m, f);
    PathLift q23 = make_lift(b2, b3, m, f);
    PathLift q34 = make_lift(b3, b4, m, f);
    PathLift fused = fuse(q12, q23, m, f);
    worst_book = std::max(worst_book,
                          implementation_residual(fused.U.U, mult_op(cup(b1, b3), m).op, f));
    Mat lhs = fuse(fuse(q12, q23, m, f), q34, m, f).U.U.mat;
    Mat rhs = fuse(q12, fuse(q23, q34, m, f), m, f).U.U.mat;
    worst_assoc = std::max(worst_assoc, (lhs - rhs).norm());

    RhoResult r2 = rho(b2, m, f);
    PathLift delta_lift{b2, b2, delta_loop(b2), r2.imp};
    worst_neutral = std::max(worst_neutral, op_distance(fuse(delta_lift, q23, m, f).U.U, q23.U.U));

    cplx lam = std::polar(1.0, 0.83), mu = std::polar(1.0, -1.91);
    PathLift q12p = q12, q23p = q23;
    q12p.U.U.mat *= lam;
    q23p.U.U.mat *= mu;
    worst_equiv = std::max(worst_equiv,
                           (fuse(q12p, q23p, m, f).U.U.mat - lam * mu * fused.U.U.mat).norm());

    // multiplicativity with an independent triple
    RMat endp = expm_skew(Mat(random_skew(d, rng, 0.3).cast<cplx>())).real();
    Path c1 = random_path(d, n, rng, 0.3, id, endp);
    Path c2 = random_path(d, n, rng, 0.3, id, endp);
    Path c3 = random_path(d, n, rng, 0.3, id, endp);
    PathLift p12 = make_lift(c1, c2, m, f);
    PathLift p23 = make_lift(c2, c3, m, f);
    Mat prod_of_fused = fused.U.U.mat * fuse(p12, p23, m, f).U.U.mat;
    PathLift prod12{pointwise_product(b1, c1), pointwise_product(b2, c2), {}, {}};
    prod12.loop = cup(prod12.b1, prod12.b2);
    prod12.U.U = FockOp(Mat(q12.U.U.mat * p12.U.U.mat), false, Parity::even);
    PathLift prod23{prod12.b2, pointwise_product(b3, c3), {}, {}};
    prod23.loop = cup(prod23.b1, prod23.b2);
    prod23.U.U = FockOp(Mat(q23.U.U.mat * p23.U.U.mat), false, Parity::even);
    worst_mult = std::max(worst_mult, (prod_of_fused - fuse(prod12, prod23, m, f).U.U.mat).norm());
  }
  rec.check("fuse-loop-bookkeeping", "fusion.fuse", worst_book, 1e-8);
  rec.check("associativity", "fusion.fusion_laws", worst_assoc, 1e-8);
  rec.check("multiplicativity", "fusion.fusion_laws", worst_mult, 1e-8);
  rec.check("neutrality", "fusion.fuse", worst_neutral, 1e-9);
  rec.check("central-equivariance", "fusion.fuse", worst_equiv, 1e-10);
}

// ------------------------------------------------------------------- compat
inline void run_compat(const SuiteConfig& cfg, Report& rep, Rng& rng) {
  Recorder rec(rep, "compat", cfg.tol_override);
  int d = std::clamp(cfg.d, 2, 3);
  SpinorModel m = build_model(Flavor::lattice, 3, d);  // smallest size with moving sites
  FockSpace f = build_fock(m);
  int n = 2 * m.size;

  rec.check("constant-path", "fusion.compat_check",
            compat_check(constant_path(d, n, RMat::Identity(d, d)), m, f), 1e-13);
  double worst = 0;
  for (int i = 0; i < std::max(3, cfg.samples / 5); ++i)
    worst = std::max(worst, compat_check(random_path_identity_endpoints(d, n, rng, 0.3), m, f));
  rec.check("near-constant-paths", "fusion.compat_check", worst, 1e-8);

  // z_sigma vanishing on opposite halves and additivity
  Path b = random_path_identity_endpoints(d, n, rng, 0.5);
  Path unit = constant_path(d, n, RMat::Identity(d, d));
  SampledLoop gamma = cup(b, unit);
  SampledLoop xp;
  xp.d = d;
  xp.values.assign(n, RMat::Zero(d, d));
  RMat kk = random_skew(d, rng, 0.7);
  for (int s = 0; s < m.size; ++s) {
    double t = m.sites[s];
    xp.values[s] = (std::sin(-2 * t) * std::sin(-2 * t)) * kk;
  }
  rec.check("z-sigma-opposite-halves", "implementers.z_sigma",
            std::abs(z_sigma(gamma, xp, m, f).value), 1e-8);

  SampledLoop x;
  x.d = d;
  x.values.resize(n);
  for (auto& v : x.values) v = random_skew(d, rng, 0.5);
  Path b2 = random_path_identity_endpoints(d, n, rng, 0.5);
  SampledLoop g1 = delta_loop(b), g2 = delta_loop(b2);
  auto lhs = z_sigma(pointwise_product(g1, g2), x, m, f);
  auto rhs1 = z_sigma(g1, x, m, f);
  auto rhs2 = z_sigma(g2, adjoint_action_inv(g1, x), m, f);
  rec.check("z-sigma-additivity", "implementers.z_sigma",
            std::abs(lhs.value - rhs1.value - rhs2.value), 1e-8);
  rec.check("z-sigma-constant-loop", "implementers.z_sigma",
            std::abs(z_sigma(SampledLoop{d, std::vector<RMat>(n, RMat::Identity(d, d))}, x, m, f)
                         .value),
            1e-12);
}

}  // namespace detail

inline void validate_config(const SuiteConfig& cfg) {
  if (cfg.N < 1 || cfg.M < 1 || cfg.d < 1)
    throw std::invalid_argument("config: sizes must be positive");
  std::set<std::string> known(suite_names().begin(), suite_names().end());
  known.insert("all");
  for (const auto& s : cfg.suites)
    if (!known.count(s)) throw std::invalid_argument("config: unknown suite name '" + s + "'");
  long ell = long(cfg.flavor == Flavor::frequency ? cfg.N : cfg.M) * cfg.d;
  if (ell > 13) throw std::invalid_argument("config: 2^ell exceeds the memory budget");
}

inline Report run_suite(const SuiteConfig& cfg) {
  validate_config(cfg);
  Report rep;
  rep.config = cfg;
  rep.calibration["cocycle_forms_relative_sign"] = 1;
  rep.calibration["loop_cocycle_vs_block_sign"] = 1;
  rep.calibration["hs_commutator_band_factor"] = 2.0;
  rep.calibration["u_identity_finite_size"] = "exact";

  std::set<std::string> selected(cfg.suites.begin(), cfg.suites.end());
  bool all = selected.count("all") > 0;
  auto want = [&](const std::string& name) { return all || selected.count(name) > 0; };

  Rng rng(cfg.seed);
  // each suite forks its own stream so selections do not perturb each other
  for (const auto& name : suite_names()) {
    Rng sub = rng.fork();
    if (!want(name)) continue;
    if (name == "clifford") detail::run_clifford(cfg, rep, sub);
    else if (name == "implementer") detail::run_implementer(cfg, rep, sub);
    else if (name == "cocycle") detail::run_cocycle(cfg, rep, sub);
    else if (name == "loop-cocycle") detail::run_loop_cocycle(cfg, rep, sub);
    else if (name == "kappa") detail::run_kappa(cfg, rep, sub);
    else if (name == "modular") detail::run_modular(cfg, rep, sub);
    else if (name == "transforms") detail::run_transforms(cfg, rep, sub);
    else if (name == "duality") detail::run_duality(cfg, rep, sub);
    else if (name == "fusion") detail::run_fusion(cfg, rep, sub);
    else if (name == "admissibility") detail::run_admissibility(cfg, rep, sub);
    else if (name == "compat") detail::run_compat(cfg, rep, sub);
  }
  return rep;
}

}  // namespace fockfuse
