#pragma once

#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fockfuse/model.hpp"

namespace fockfuse {

using json = nlohmann::json;

// One verification record.  Thresholded checks carry a tolerance and pass
// iff residual <= tolerance; informational rows (recorded quantities like
// spectra and conditioning) have no tolerance and always pass.
struct CheckRecord {
    std::string suite;
    std::string check_id;
    std::string anchor;  // stable <module>.<operation> identifier
    double residual = 0;
    std::optional<double> tolerance;
    bool pass = true;
};

struct SweepRow {
    int M = 0;
    double u_residual = 0;
    double sigma_min = 0;
    double noise_floor = 0;
};

struct SpectraRow {
    int M = 0;
    double min_eig_plus = 0, max_eig_plus = 0;
    double angle_minus_L = 0;
    double cond = 0;
};

struct SuiteConfig {
    Flavor flavor = Flavor::lattice;
    int N = 2;
    int M = 2;
    int d = 1;
    std::uint64_t seed = 1;
    std::optional<double> tol_override;
    int samples = 25;
    std::vector<std::string> suites{"all"};
    std::vector<int> sweep{8, 16, 32};
    std::string out_path;
    std::string csv_dir;
};

struct Report {
    SuiteConfig config;
    std::vector<CheckRecord> records;
    std::vector<SweepRow> sweep_rows;
    std::vector<SpectraRow> spectra_rows;
    json calibration;
    bool overall_pass = true;

    void add(CheckRecord r) {
      if (r.tolerance) r.pass = r.residual <= *r.tolerance;
      overall_pass = overall_pass && r.pass;
      records.push_back(std::move(r));
    }

    void add_check(const std::string& suite, const std::string& check_id, const std::string& anchor,
                   double residual, double tolerance) {
      CheckRecord r{suite, check_id, anchor, residual, tolerance, true};
      add(std::move(r));
    }

    void add_info(const std::string& suite, const std::string& check_id, const std::string& anchor,
                  double value) {
      CheckRecord r{suite, check_id, anchor, value, std::nullopt, true};
      add(std::move(r));
    }
};

inline json config_to_json(const SuiteConfig& c) {
  json j;
  j["flavor"] = c.flavor == Flavor::frequency ? "freq" : "lattice";
  j["N"] = c.N;
  j["M"] = c.M;
  j["d"] = c.d;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["suites"] = c.suites;
  j["sweep"] = c.sweep;
  if (c.tol_override) j["tol"] = *c.tol_override;
  return j;
}

inline json environment_fingerprint() {
  json j;
  j["compiler"] = __VERSION__;
  j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
#ifdef NDEBUG
  j["build"] = "release";
#else
  j["build"] = "debug";
#endif
  return j;
}

inline json report_to_json(const Report& rep) {
  json j;
  j["schema"] = "fockfuse-report/1";
  j["config"] = config_to_json(rep.config);
  j["environment"] = environment_fingerprint();
  j["calibration"] = rep.calibration;
  j["overall_pass"] = rep.overall_pass;
  json recs = json::array();
  for (const auto& r : rep.records) {
    json rj;
    rj["suite"] = r.suite;
    rj["check_id"] = r.check_id;
    rj["anchor"] = r.anchor;
    rj["residual"] = r.residual;
    rj["tolerance"] = r.tolerance ? json(*r.tolerance) : json(nullptr);
    rj["pass"] = r.pass;
    recs.push_back(rj);
  }
  j["records"] = recs;
  if (!rep.sweep_rows.empty()) {
    json rows = json::array();
    for (const auto& s : rep.sweep_rows)
      rows.push_back({{"M", s.M},
                      {"u_residual", s.u_residual},
                      {"sigma_min", s.sigma_min},
                      {"noise_floor", s.noise_floor}});
    j["modular_convergence"] = rows;
  }
  return j;
}

inline std::string csv_escape_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string report_to_csv(const Report& rep) {
  std::string out = "suite,check_id,residual,tolerance,pass\n";
  for (const auto& r : rep.records) {
    out += r.suite + "," + r.check_id + "," + csv_escape_double(r.residual) + ",";
    if (r.tolerance) out += csv_escape_double(*r.tolerance);
    out += r.pass ? ",1\n" : ",0\n";
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << content;
}

inline void emit_report(const Report& rep, const std::string& json_path, const std::string& csv_dir) {
  if (!json_path.empty()) write_file(json_path, report_to_json(rep).dump(2) + "\n");
  if (!csv_dir.empty()) {
    write_file(csv_dir + "/report.csv", report_to_csv(rep));
    if (!rep.spectra_rows.empty()) {
      std::string s = "M,min_eig_plus,max_eig_plus,angle_minus_L,cond\n";
      for (const auto& row : rep.spectra_rows)
        s += std::to_string(row.M) + "," + csv_escape_double(row.min_eig_plus) + "," +
             csv_escape_double(row.max_eig_plus) + "," + csv_escape_double(row.angle_minus_L) + "," +
             csv_escape_double(row.cond) + "\n";
      write_file(csv_dir + "/modular_spectra.csv", s);
    }
    if (!rep.sweep_rows.empty()) {
      std::string s = "M,u_residual,sigma_min,noise_floor\n";
      for (const auto& row : rep.sweep_rows)
        s += std::to_string(row.M) + "," + csv_escape_double(row.u_residual) + "," +
             csv_escape_double(row.sigma_min) + "," + csv_escape_double(row.noise_floor) + "\n";
      write_file(csv_dir + "/modular_convergence.csv", s);
    }
  }
}

}  // namespace fockfuse
