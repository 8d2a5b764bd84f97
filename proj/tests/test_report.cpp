#include <catch2/catch.hpp>
#include <cstdio>
#include <fstream>

#include "fockfuse/fockfuse.hpp"

using namespace fockfuse;

namespace {

SuiteConfig small_config() {
  SuiteConfig cfg;
  cfg.flavor = Flavor::lattice;
  cfg.M = 2;
  cfg.d = 2;
  cfg.seed = 7;
  cfg.samples = 8;
  cfg.sweep = {4, 8};
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("model descriptors round trip") {
  for (auto flavor : {Flavor::frequency, Flavor::lattice}) {
    SpinorModel m = build_model(flavor, 3, 2);
    SpinorModel back = model_from_descriptor(model_descriptor(m));
    CHECK(back.flavor == m.flavor);
    CHECK(back.size == m.size);
    CHECK(back.d == m.d);
  }
  CHECK_THROWS_AS(model_from_descriptor(nlohmann::json{{"flavor", "weird"}, {"d", 1}}),
                  std::invalid_argument);
}

TEST_CASE("loop and path literals round trip") {
  Rng rng(5);
  RMat x = random_skew(3, rng, 1.0);
  TrigLoop f = trig_cos(3, 2, x);
  auto f2 = loop_from_json(trig_loop_to_json(f));
  REQUIRE(f2.trig.has_value());
  CHECK(loop_cocycle_bilinear(f, trig_sin(3, 2, x)) ==
        loop_cocycle_bilinear(*f2.trig, trig_sin(3, 2, x)));

  SampledLoop s = sample_loop(f, 8);
  auto s2 = loop_from_json(sampled_loop_to_json(s));
  REQUIRE(s2.sampled.has_value());
  for (int i = 0; i < s.sites(); ++i) CHECK((s.values[i] - s2.sampled->values[i]).norm() == 0.0);

  Path p = random_path_identity_endpoints(2, 8, rng, 0.5);
  Path p2 = path_from_json(path_to_json(p));
  CHECK(path_distance(p, p2) == 0.0);
  CHECK(p2.sit_margin == p.sit_margin);
}

TEST_CASE("matrix csv printer emits one row per matrix row") {
  Mat m = Mat::Zero(2, 3);
  m(0, 1) = cplx(1, -2);
  std::string csv = matrix_to_csv(m);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.find("1-2i") != std::string::npos);
}

TEST_CASE("run_suite is deterministic and canonical") {
  SuiteConfig cfg = small_config();
  cfg.suites = {"clifford", "cocycle"};
  Report r1 = run_suite(cfg);
  Report r2 = run_suite(cfg);
  std::string j1 = report_to_json(r1).dump(2);
  std::string j2 = report_to_json(r2).dump(2);
  CHECK(j1 == j2);
  // re-emission after a parse round trip is byte-identical
  std::string j3 = json::parse(j1).dump(2);
  CHECK(j1 == j3);
}

TEST_CASE("clifford suite emits at least ten records") {
  SuiteConfig cfg;
  cfg.flavor = Flavor::frequency;
  cfg.N = 2;
  cfg.d = 1;
  cfg.seed = 7;
  cfg.samples = 10;
  cfg.suites = {"clifford"};
  Report rep = run_suite(cfg);
  CHECK(rep.records.size() >= 10);
  CHECK(rep.overall_pass);
  for (const auto& r : rep.records) CHECK(r.suite == "clifford");
}

TEST_CASE("csv row count equals record count") {
  SuiteConfig cfg = small_config();
  cfg.suites = {"kappa"};
  Report rep = run_suite(cfg);
  std::string csv = report_to_csv(rep);
  auto rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == static_cast<long>(rep.records.size()) + 1);  // header included
  CHECK(csv.rfind("suite,check_id,residual,tolerance,pass\n", 0) == 0);
}

TEST_CASE("spectra files are emitted only with the modular suite") {
  SuiteConfig cfg = small_config();
  cfg.suites = {"clifford"};
  Report rep = run_suite(cfg);
  CHECK(rep.spectra_rows.empty());
  CHECK(rep.sweep_rows.empty());

  std::string dir = "/tmp/fockfuse_test_csv";
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir + "/modular_spectra.csv");
  emit_report(rep, "", dir);
  CHECK_FALSE(std::filesystem::exists(dir + "/modular_spectra.csv"));

  cfg.suites = {"modular"};
  Report rep2 = run_suite(cfg);
  CHECK_FALSE(rep2.spectra_rows.empty());
  emit_report(rep2, dir + "/rep.json", dir);
  CHECK(std::filesystem::exists(dir + "/modular_spectra.csv"));
  CHECK(std::filesystem::exists(dir + "/modular_convergence.csv"));
  // emitted JSON parses and carries the schema tag
  json j = json::parse(slurp(dir + "/rep.json"));
  CHECK(j.at("schema").get<std::string>() == "fockfuse-report/1");
  CHECK(j.at("records").size() == rep2.records.size());
}

TEST_CASE("impossible tolerance fails the report") {
  SuiteConfig cfg = small_config();
  cfg.suites = {"clifford"};
  cfg.tol_override = 1e-30;
  Report rep = run_suite(cfg);
  CHECK_FALSE(rep.overall_pass);
  bool some_nonzero_failed = false;
  for (const auto& r : rep.records)
    if (!r.pass && r.residual > 0) some_nonzero_failed = true;
  CHECK(some_nonzero_failed);
}

TEST_CASE("config validation surfaces before work") {
  SuiteConfig cfg = small_config();
  cfg.suites = {"nope"};
  CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.M = 12;
  cfg.d = 2;  // 2^24 states
  CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.d = 0;
  CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
}

TEST_CASE("all suites pass on defaults") {
  SuiteConfig cfg = small_config();
  Report rep = run_suite(cfg);
  CHECK(rep.overall_pass);
  // every named suite contributed records
  for (const auto& name : suite_names()) {
    bool seen = false;
    for (const auto& r : rep.records) seen = seen || r.suite == name;
    CHECK(seen);
  }
}

TEST_CASE("vector parity helper") {
  FockSpace f = build_fock(build_model(Flavor::frequency, 2, 1));
  CHECK(vector_parity(f, f.vacuum()) == Parity::even);
  Vec odd = Vec::Zero(f.dim);
  odd(1) = 1.0;
  CHECK(vector_parity(f, odd) == Parity::odd);
  Vec mixed = f.vacuum();
  mixed(1) = 1.0;
  CHECK(vector_parity(f, mixed) == Parity::none);
}
