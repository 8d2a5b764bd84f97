#include <catch2/catch.hpp>

#include "fockfuse/fock.hpp"
#include "fockfuse/fusion.hpp"
#include "fockfuse/model.hpp"

using namespace fockfuse;

namespace {

Vec random_vec(int n, Rng& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.cgaussian();
  return v;
}

void check_structural_identities(const SpinorModel& m) {
  Mat id = Mat::Identity(m.dim, m.dim);
  CHECK(op_distance(compose(m.alpha, m.alpha), AOp::identity(m.dim)) < 1e-12);
  CHECK((m.tau.mat * m.tau.mat - id).norm() < 1e-12);
  CHECK((m.J.mat * m.J.mat + id).norm() < 1e-12);
  CHECK(op_distance(compose(m.alpha, m.tau), compose(m.tau, m.alpha)) < 1e-12);
  CHECK((m.J.mat - cplx(0, 1) * (m.P_L.mat - m.P_Lperp.mat)).norm() < 1e-12);
  // tau J tau = -J since tau exchanges L with alpha(L)
  CHECK((m.tau.mat * m.J.mat * m.tau.mat + m.J.mat).norm() < 1e-12);
  // alpha commutes with J: the antilinearity flips i and the halves at once
  CHECK((alpha_conjugate(m.alpha, m.J.mat) - m.J.mat).norm() < 1e-12);
}

}  // namespace

TEST_CASE("frequency model basics") {
  SpinorModel m = build_model(Flavor::frequency, 1, 1);
  REQUIRE(m.dim == 2);
  // alpha and tau swap the two modes; J = diag over (mode -1, mode 0) = (-i, +i)
  CHECK(m.alpha.mat(m.freq_index(-1, 0), m.freq_index(0, 0)) == cplx(1, 0));
  CHECK(m.tau.mat(m.freq_index(0, 0), m.freq_index(-1, 0)) == cplx(1, 0));
  CHECK(m.J.mat(m.freq_index(0, 0), m.freq_index(0, 0)) == cplx(0, 1));
  CHECK(m.J.mat(m.freq_index(-1, 0), m.freq_index(-1, 0)) == cplx(0, -1));
  check_structural_identities(m);

  // alpha tau fixes every basis vector
  AOp at = compose(m.alpha, m.tau);
  CHECK(at.anti);
  CHECK((at.mat - Mat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("frequency model structural identities across sizes") {
  for (int n : {1, 2, 4})
    for (int d : {1, 2, 3}) check_structural_identities(build_model(Flavor::frequency, n, d));
}

TEST_CASE("lattice model structure") {
  for (int M : {2, 3, 4}) {
    SpinorModel m = build_model(Flavor::lattice, M, 1);
    check_structural_identities(m);
    Mat id = Mat::Identity(m.dim, m.dim);
    CHECK((m.P_plus->mat + m.P_minus->mat - id).norm() == 0.0);
    CHECK((m.tau.mat * m.P_minus->mat * m.tau.mat - m.P_plus->mat).norm() == 0.0);
    // alpha tau fixes the plane-wave basis of L
    AOp at = compose(m.alpha, m.tau);
    CHECK((at.mat * m.basis_L.conjugate() - m.basis_L).norm() < 1e-12);
  }
}

TEST_CASE("lattice plane waves are orthonormal") {
  SpinorModel m = build_model(Flavor::lattice, 4, 1);
  Mat full(m.dim, m.dim);
  full << m.basis_L, m.basis_aL;
  CHECK((full.adjoint() * full - Mat::Identity(m.dim, m.dim)).norm() < 1e-13);
}

TEST_CASE("build_model rejects bad sizes") {
  CHECK_THROWS_AS(build_model(Flavor::frequency, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_model(Flavor::lattice, 1, 0), std::invalid_argument);
}

TEST_CASE("canonical operators and halves") {
  SpinorModel freq = build_model(Flavor::frequency, 2, 1);
  CHECK_THROWS_AS(canonical_operators(freq, true), std::invalid_argument);
  SpinorModel lat = build_model(Flavor::lattice, 2, 1);
  auto ops = canonical_operators(lat, true);
  REQUIRE(ops.P_plus.has_value());
}

TEST_CASE("operator norms") {
  SpinorModel m = build_model(Flavor::frequency, 3, 2);
  auto n1 = operator_norms(AOp::identity(m.dim), m);
  CHECK(n1.op_norm == Approx(1.0));
  CHECK(n1.hs_commutator < 1e-14);
  CHECK(n1.j_norm == Approx(1.0));

  // [tau, J] = 2 tau J, of Frobenius norm 2 sqrt(dim)
  auto n2 = operator_norms(m.tau, m);
  CHECK(n2.hs_commutator == Approx(2.0 * std::sqrt(double(m.dim))));
}

TEST_CASE("classify") {
  SpinorModel m = build_model(Flavor::lattice, 3, 2);
  auto c_tau = classify(m.tau, m);
  CHECK(c_tau.orthogonal);
  CHECK(c_tau.tau_fixed);
  CHECK_FALSE(c_tau.preserves_halves);

  auto c_alpha = classify(m.alpha, m);
  CHECK_FALSE(c_alpha.unitary);  // antilinear

  Rng rng(11);
  Path beta = random_path_identity_endpoints(2, 2 * m.size, rng, 0.4);
  AOp doubled = mult_op(delta_loop(beta), m).op;
  auto c_doubled = classify(doubled, m);
  CHECK(c_doubled.orthogonal);
  CHECK(c_doubled.tau_fixed);
  CHECK(c_doubled.preserves_halves);
}

TEST_CASE("general position angles are positive and shrink") {
  double prev = 1e9;
  for (int M : {2, 4, 8}) {
    auto gp = general_position(build_model(Flavor::lattice, M, 1));
    CHECK(gp.angle_minus_L > 0);
    CHECK(gp.angle_minus_aL > 0);
    CHECK(gp.angle_minus_L < prev);
    prev = gp.angle_minus_L;
  }
}

TEST_CASE("decompose round trip") {
  Rng rng(5);
  for (auto flavor : {Flavor::frequency, Flavor::lattice}) {
    SpinorModel m = build_model(flavor, 3, 2);
    for (int rep = 0; rep < 20; ++rep) {
      OResElement el = random_ores(m, rng);
      OResElement back = decompose(el.A, m);
      CHECK((back.a - el.a).norm() < 1e-12);
      CHECK((back.a_prime - el.a_prime).norm() < 1e-12);
      CHECK((assemble_ores(m, back.a, back.a_prime) - el.A.mat).norm() < 1e-12);
      // a skew-Hermitian, a' antisymmetric
      CHECK((back.a + back.a.adjoint()).norm() < 1e-12);
      CHECK((back.a_prime + back.a_prime.transpose()).norm() < 1e-12);
    }
  }
}

TEST_CASE("J itself lies in o_res with trivial antilinear part") {
  SpinorModel m = build_model(Flavor::frequency, 2, 1);
  OResElement el = decompose(m.J, m);
  CHECK((el.a - cplx(0, 1) * Mat::Identity(m.ell, m.ell)).norm() < 1e-13);
  CHECK(el.a_prime.norm() < 1e-13);
}

TEST_CASE("decompose rejects non-skew and alpha-breaking inputs") {
  SpinorModel m = build_model(Flavor::frequency, 2, 1);
  CHECK_THROWS_AS(decompose(m.P_L, m), std::invalid_argument);  // not skew
  Mat bad = Mat::Zero(m.dim, m.dim);
  bad(0, 1) = cplx(0, 1);
  bad(1, 0) = cplx(0, 1);  // skew-adjoint but does not commute with alpha
  CHECK_THROWS_AS(decompose(AOp(bad), m), std::invalid_argument);
}

TEST_CASE("decompose kills a_prime when off-diagonal blocks vanish") {
  SpinorModel m = build_model(Flavor::frequency, 2, 2);
  Rng rng(3);
  Mat g(m.ell, m.ell);
  for (int i = 0; i < m.ell; ++i)
    for (int j = 0; j < m.ell; ++j) g(i, j) = rng.cgaussian();
  OResElement el = make_ores(m, g, Mat::Zero(m.ell, m.ell));
  OResElement back = decompose(el.A, m);
  CHECK(back.a_prime.norm() < 1e-13);
}

TEST_CASE("conjugated unitary structure stays a unitary structure") {
  SpinorModel m = build_model(Flavor::lattice, 3, 1);
  Rng rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    OResElement el = random_ores(m, rng, 0.7);
    Mat g = expm_skew(el.A.mat);
    Mat j2 = g * m.J.mat * g.adjoint();
    CHECK((j2 * j2 + Mat::Identity(m.dim, m.dim)).norm() < 1e-12);
    CHECK((alpha_conjugate(m.alpha, j2) - j2).norm() < 1e-12);
  }
}

TEST_CASE("random vectors satisfy bilinear symmetry") {
  SpinorModel m = build_model(Flavor::lattice, 2, 2);
  Rng rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    Vec x = random_vec(m.dim, rng), y = random_vec(m.dim, rng);
    CHECK(std::abs(bilinear_b(m, x, y) - bilinear_b(m, y, x)) < 1e-12);
  }
}
