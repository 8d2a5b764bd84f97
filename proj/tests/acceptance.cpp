// Acceptance suite: one criterion per section, one pass/fail line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <vector>

#include "fockfuse/fockfuse.hpp"

using namespace fockfuse;

namespace {

int g_failures = 0;

void report_line(int idx, const char* name, bool pass, double worst, double tol,
                 double seconds) {
  std::printf("criterion %2d %-38s %s  worst=%.3e tol=%.3e  (%.1fs)\n", idx, name,
              pass ? "PASS" : "FAIL", worst, tol, seconds);
  if (!pass) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

Vec random_vec(int n, Rng& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.cgaussian();
  return v;
}

// 1. Clifford relations at desk scale
void criterion_clifford() {
  Timer t;
  Rng rng(1001);
  double worst = 0;
  for (auto flavor : {Flavor::frequency, Flavor::lattice})
    for (int d : {1, 2, 3}) {
      SpinorModel m = build_model(flavor, 4, d);
      FockSpace f = build_fock(m);
      for (int i = 0; i < 200; ++i) {
        Vec x = random_vec(m.dim, rng), y = random_vec(m.dim, rng);
        auto defects = clifford_defects(f, x, y);
        worst = std::max({worst, defects.car, defects.adjoint});
      }
    }
  report_line(1, "clifford relations", worst <= 1e-11, worst, 1e-11, t.elapsed());
}

// 2. sigma lifts implement their exponentials
void criterion_implementation() {
  Timer t;
  Rng rng(1002);
  double worst = 0;
  struct ModelSpec {
      Flavor flavor;
      int size, d;
  };
  for (auto spec : {ModelSpec{Flavor::frequency, 2, 1}, ModelSpec{Flavor::frequency, 4, 1},
                    ModelSpec{Flavor::frequency, 2, 2}, ModelSpec{Flavor::lattice, 3, 1},
                    ModelSpec{Flavor::lattice, 4, 2}}) {
    SpinorModel m = build_model(spec.flavor, spec.size, spec.d);
    FockSpace f = build_fock(m);
    for (int i = 0; i < 50; ++i) {
      OResElement el = random_ores(m, rng, 0.5);
      Implementer imp = sigma_lift(el, f);
      worst = std::max(worst, implementation_residual(imp.U, imp.g, f));
    }
  }
  report_line(2, "implementation residual", worst <= 1e-8, worst, 1e-8, t.elapsed());
}

// 3. four cocycle forms agree pairwise
void criterion_cocycle() {
  Timer t;
  Rng rng(1003);
  double worst = 0;
  struct ModelSpec {
      Flavor flavor;
      int size, d;
  };
  for (auto spec : {ModelSpec{Flavor::frequency, 4, 1}, ModelSpec{Flavor::frequency, 3, 2},
                    ModelSpec{Flavor::lattice, 3, 1}, ModelSpec{Flavor::lattice, 2, 2}}) {
    SpinorModel m = build_model(spec.flavor, spec.size, spec.d);
    FockSpace f = build_fock(m);
    for (int i = 0; i < 100; ++i) {
      OResElement a1 = random_ores(m, rng, 0.8);
      OResElement a2 = random_ores(m, rng, 0.8);
      std::vector<double> w{cocycle(a1, a2, CocycleForm::j_form, m).value,
                            cocycle(a1, a2, CocycleForm::block_form, m).value,
                            cocycle(a1, a2, CocycleForm::prime_form, m).value,
                            cocycle(a1, a2, CocycleForm::defect_oracle, m, &f).value};
      worst = std::max(worst, *std::max_element(w.begin(), w.end()) -
                                  *std::min_element(w.begin(), w.end()));
    }
  }
  report_line(3, "cocycle four-form agreement", worst <= 1e-9, worst, 1e-9, t.elapsed());
}

// 4. loop cocycle: closed form and the operator-side bridge at N = 64
void criterion_loop_cocycle() {
  Timer t;
  RMat x = RMat::Zero(3, 3);
  x(0, 1) = 1;
  x(1, 0) = -1;
  RMat y = RMat::Zero(3, 3);
  y(1, 2) = 1;
  y(2, 1) = -1;
  double worst_closed = 0;
  for (int k : {1, 2, 3})
    for (int mm : {-3, -2, -1, 1, 2, 3}) {
      cplx v = loop_cocycle_bilinear(trig_harmonic(3, k, x.cast<cplx>()),
                                     trig_harmonic(3, mm, x.cast<cplx>()));
      double expect = (k + mm == 0) ? std::abs(k / 2.0 * (-2.0)) : 0.0;
      worst_closed = std::max(worst_closed, std::abs(std::abs(v) - expect));
      cplx vy = loop_cocycle_bilinear(trig_harmonic(3, k, x.cast<cplx>()),
                                      trig_harmonic(3, mm, y.cast<cplx>()));
      double expect_y = 0.0;  // tr(XY) = 0 for these two generators
      worst_closed = std::max(worst_closed, std::abs(std::abs(vy) - expect_y));
    }
  bool closed_ok = worst_closed <= 1e-12;

  SpinorModel m = build_model(Flavor::frequency, 64, 3);
  TrigLoop f = trig_cos(3, 1, x), g = trig_sin(3, 1, x);
  double closed = loop_cocycle(f, g);
  OResElement a1 = decompose(mult_op(f, m).op, m);
  OResElement a2 = decompose(mult_op(g, m).op, m);
  double bridge_rel =
      std::abs(cocycle(a1, a2, CocycleForm::block_form, m).value - closed) / std::abs(closed);
  bool bridge_ok = bridge_rel <= 0.01;
  report_line(4, "loop cocycle closed form + bridge", closed_ok && bridge_ok,
              std::max(worst_closed, bridge_rel), 0.01, t.elapsed());
}

// 5. basic form coroots
void criterion_basic_form() {
  Timer t;
  double worst_even = 0;
  double collective_min = 1e300;
  bool per_d_ok = true;
  for (int d : {3, 5, 6, 7}) {
    CorootData cd = basic_form_coroots(d);
    for (double nn : cd.norms) {
      double r = std::round(nn / 2.0) * 2.0;
      worst_even = std::max(worst_even, std::abs(nn - r));
    }
    collective_min = std::min(collective_min, cd.min_norm);
    if (d >= 5 && std::abs(cd.min_norm - 2.0) > 1e-8) per_d_ok = false;
  }
  bool ok = worst_even <= 1e-8 && std::abs(collective_min - 2.0) <= 1e-8 && per_d_ok;
  report_line(5, "basic form coroot norms", ok, std::max(worst_even, std::abs(collective_min - 2.0)),
              1e-8, t.elapsed());
}

// 6. kappa machinery
void criterion_kappa() {
  Timer t;
  Rng rng(1006);
  double worst_cs = 0, worst_alg = 0;
  for (auto flavor : {Flavor::frequency, Flavor::lattice}) {
    SpinorModel m = build_model(flavor, 2, 2);
    FockSpace f = build_fock(m);
    for (int i = 0; i < 25; ++i) {
      OResElement el = random_ores(m, rng, 0.5);
      Implementer imp = sigma_lift(el, f);
      Implementer k = kappa_imp(imp, f, m);
      OResElement tel = decompose(compose(m.tau, compose(el.A, m.tau)), m);
      worst_cs = std::max(worst_cs, op_distance(k.U, sigma_lift(tel, f).U));
      worst_alg = std::max(worst_alg, op_distance(kappa_imp(k, f, m).U, imp.U));
      Implementer imp2 = sigma_lift(random_ores(m, rng, 0.5), f);
      Mat lhs = kappa_op(FockOp(Mat(imp.U.mat * imp2.U.mat))).mat;
      worst_alg = std::max(worst_alg, (lhs - kappa_op(imp.U).mat * kappa_op(imp2.U).mat).norm());
    }
  }
  bool ok = worst_cs <= 1e-10 && worst_alg <= 1e-12;
  report_line(6, "kappa . sigma = sigma . tau + algebra", ok, std::max(worst_cs, worst_alg), 1e-10,
              t.elapsed());
}

// 7. modular exactness at M in {3, 4}
void criterion_modular_exact() {
  Timer t;
  double worst = 0;
  bool ok = true;
  for (int M : {3, 4}) {
    SpinorModel m = build_model(Flavor::lattice, M, 1);
    FockSpace f = build_fock(m);
    HalfStructure h = half_structure(m);
    ok = ok && h.sum_residual <= 1e-14;
    SAndPolar sp = s_and_polar(m);
    ok = ok && sp.closed_residual <= 1e-10;
    ModularData md = tomita(m, f);
    ok = ok && md.residual_S_formula <= 1e-8 * md.cond_B;
    worst = std::max({worst, h.sum_residual, sp.closed_residual,
                      md.residual_S_formula / md.cond_B});
  }
  report_line(7, "modular exactness (S, T-sum, delta)", ok, worst, 1e-8, t.elapsed());
}

// 8. modular convergence sweep with certified noise floors
void criterion_modular_sweep() {
  Timer t;
  double worst_violation = 0;
  double prev = 0;
  bool first = true;
  for (int M : {8, 16, 32}) {
    USweepPoint pt = u_identity_sweep_point(M);
    if (!first)
      worst_violation = std::max(worst_violation, pt.residual - std::max(prev, pt.noise_floor));
    prev = pt.residual;
    first = false;
  }
  prev = 0;
  first = true;
  for (int M : {2, 3, 4}) {
    SpinorModel m = build_model(Flavor::lattice, M, 1);
    FockSpace f = build_fock(m);
    ModularData md = tomita(m, f);
    double floor =
        50 * std::numeric_limits<double>::epsilon() * md.cond_B * std::sqrt(double(f.dim));
    if (!first) worst_violation = std::max(worst_violation, md.residual_J - std::max(prev, floor));
    prev = md.residual_J;
    first = false;
  }
  report_line(8, "modular sweep nonincreasing", worst_violation <= 0.0, worst_violation, 0.0,
              t.elapsed());
}

// 9. kernel transforms
void criterion_transforms() {
  Timer t;
  double worst = 0, worst_partition = 0;
  for (int ik = -6; ik <= 6; ++ik)
    for (double eps : {0.1, 0.01}) {
      TransformRow row = transform_row(ik * 0.5, eps);
      worst = std::max({worst, row.fs_rel_err, row.fc_rel_err});
      worst_partition = std::max(worst_partition, row.partition_residual);
    }
  bool ok = worst <= 1e-6 && worst_partition <= 1e-14;
  report_line(9, "kernel transforms quadrature", ok, worst, 1e-6, t.elapsed());
}

// 10. twisted Haag duality
void criterion_duality() {
  Timer t;
  SpinorModel m = build_model(Flavor::lattice, 3, 1);
  FockSpace f = build_fock(m);
  DualityResult dr = duality(m, f);
  report_line(10, "twisted Haag duality", dr.residual <= 1e-9, dr.residual, 1e-9, t.elapsed());
}

// 11. admissibility with negative control
void criterion_admissibility() {
  Timer t;
  Rng rng(1011);
  SpinorModel m = build_model(Flavor::lattice, 3, 2);
  FockSpace f = build_fock(m);
  int n = 2 * m.size;
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    Path b1 = random_path_identity_endpoints(2, n, rng, 0.6);
    Path b3 = random_path_identity_endpoints(2, n, rng, 0.6);
    worst = std::max(worst, admissibility_residual(b1, b3, m, f));
  }
  Path b1 = random_path_identity_endpoints(2, n, rng, 0.6);
  Path unit = constant_path(2, n, RMat::Identity(2, 2));
  Implementer upper = sigma_lift_loop(cup(b1, unit), m, f);
  Implementer full = sigma_lift(random_ores(m, rng, 0.6), f);
  double control = (upper.U.mat * full.U.mat - full.U.mat * upper.U.mat).norm();
  bool ok = worst <= 1e-9 && control > 1e-2;
  report_line(11, "admissibility + negative control", ok, worst, 1e-9, t.elapsed());
}

// 12. fusion laws
void criterion_fusion() {
  Timer t;
  Rng rng(1012);
  SpinorModel m = build_model(Flavor::lattice, 3, 2);
  FockSpace f = build_fock(m);
  int n = 2 * m.size;
  RMat id = RMat::Identity(2, 2);
  double worst = 0;
  bool positivity = true;

  for (int i = 0; i < 10; ++i) {  // rho homomorphism + positivity
    Path b1 = random_path_identity_endpoints(2, n, rng, 0.5);
    Path b2 = random_path_identity_endpoints(2, n, rng, 0.5);
    RhoResult r1 = rho(b1, m, f), r2 = rho(b2, m, f);
    RhoResult r12 = rho(pointwise_product(b1, b2), m, f);
    worst = std::max(worst, (r1.imp.U.mat * r2.imp.U.mat - r12.imp.U.mat).norm());
    positivity = positivity && r1.overlap > 0 && r2.overlap > 0 && r12.overlap > 0;
  }
  for (int i = 0; i < 10; ++i) {  // compat for near-constant paths
    worst = std::max(worst, compat_check(random_path_identity_endpoints(2, n, rng, 0.25), m, f));
  }
  for (int i = 0; i < 10; ++i) {  // 10 quadruples for associativity, 20 triples via reuse
    RMat end = expm_skew(Mat(random_skew(2, rng, 0.3).cast<cplx>())).real();
    Path b1 = random_path(2, n, rng, 0.3, id, end);
    Path b2 = random_path(2, n, rng, 0.3, id, end);
    Path b3 = random_path(2, n, rng, 0.3, id, end);
    Path b4 = random_path(2, n, rng, 0.3, id, end);
    PathLift q12 = make_lift(b1, b2, m, f, std::polar(1.0, rng.uniform(0, 6.28)));
    PathLift q23 = make_lift(b2, b3, m, f, std::polar(1.0, rng.uniform(0, 6.28)));
    PathLift q34 = make_lift(b3, b4, m, f, std::polar(1.0, rng.uniform(0, 6.28)));
    positivity = positivity && rho(b2, m, f).overlap > 0 && rho(b3, m, f).overlap > 0;
    Mat lhs = fuse(fuse(q12, q23, m, f), q34, m, f).U.U.mat;
    Mat rhs = fuse(q12, fuse(q23, q34, m, f), m, f).U.U.mat;
    worst = std::max(worst, (lhs - rhs).norm());

    RMat endp = expm_skew(Mat(random_skew(2, rng, 0.3).cast<cplx>())).real();
    Path c1 = random_path(2, n, rng, 0.3, id, endp);
    Path c2 = random_path(2, n, rng, 0.3, id, endp);
    Path c3 = random_path(2, n, rng, 0.3, id, endp);
    PathLift p12 = make_lift(c1, c2, m, f);
    PathLift p23 = make_lift(c2, c3, m, f);
    Mat prod_of_fused = fuse(q12, q23, m, f).U.U.mat * fuse(p12, p23, m, f).U.U.mat;
    PathLift prod12{pointwise_product(b1, c1), pointwise_product(b2, c2), {}, {}};
    prod12.loop = cup(prod12.b1, prod12.b2);
    prod12.U.U = FockOp(Mat(q12.U.U.mat * p12.U.U.mat), false, Parity::even);
    PathLift prod23{prod12.b2, pointwise_product(b3, c3), {}, {}};
    prod23.loop = cup(prod23.b1, prod23.b2);
    prod23.U.U = FockOp(Mat(q23.U.U.mat * p23.U.U.mat), false, Parity::even);
    worst = std::max(worst, (prod_of_fused - fuse(prod12, prod23, m, f).U.U.mat).norm());
  }
  bool ok = worst <= 1e-8 && positivity;
  report_line(12, "fusion laws + compat + positivity", ok, worst, 1e-8, t.elapsed());
}

// 13. byte-identical reports
void criterion_determinism() {
  Timer t;
  SuiteConfig cfg;
  cfg.flavor = Flavor::lattice;
  cfg.M = 2;
  cfg.d = 2;
  cfg.seed = 99;
  cfg.samples = 10;
  cfg.sweep = {4, 8};
  cfg.suites = {"all"};
  std::string a = report_to_json(run_suite(cfg)).dump(2);
  std::string b = report_to_json(run_suite(cfg)).dump(2);
  bool ok = a == b && !a.empty();
  report_line(13, "deterministic reports", ok, ok ? 0.0 : 1.0, 0.0, t.elapsed());
}

}  // namespace

int main() {
  criterion_clifford();
  criterion_implementation();
  criterion_cocycle();
  criterion_loop_cocycle();
  criterion_basic_form();
  criterion_kappa();
  criterion_modular_exact();
  criterion_modular_sweep();
  criterion_transforms();
  criterion_duality();
  criterion_admissibility();
  criterion_fusion();
  criterion_determinism();
  std::printf("acceptance: %s (%d criteria failed)\n", g_failures == 0 ? "PASS" : "FAIL",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
