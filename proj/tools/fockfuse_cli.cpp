// Command-line runner: configures a model, executes named verification
// suites, and emits machine-readable reports.
//
// Exit codes: 0 all selected checks pass, 1 check failure, 2 config error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fockfuse/fockfuse.hpp"

namespace {

// flat key=value defaults file; flags override
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config file " + path);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fockfuse: verification suites for finite free-fermion models"};

  std::string model = "lattice";
  std::string config_path, suites_csv, sweep_csv;
  fockfuse::SuiteConfig cfg;
  double tol = -1;

  app.add_option("--config", config_path, "flat key=value file supplying defaults");
  app.add_option("--model", model, "model flavor: freq | lattice");
  app.add_option("--N", cfg.N, "frequency window size");
  app.add_option("--M", cfg.M, "lattice half-size");
  app.add_option("--d", cfg.d, "color count");
  app.add_option("--seed", cfg.seed, "random seed fixing all draws");
  app.add_option("--tol", tol, "tolerance override applied to every thresholded check");
  app.add_option("--samples", cfg.samples, "random draws per property");
  app.add_option("--suite", suites_csv, "comma-separated suite names (or 'all')");
  app.add_option("--sweep", sweep_csv, "comma-separated lattice sizes for the modular sweep");
  app.add_option("--out", cfg.out_path, "JSON report output path");
  app.add_option("--csv-dir", cfg.csv_dir, "directory for CSV tables");

  try {
    app.parse(argc, argv);

    if (!config_path.empty()) {
      auto kv = read_config_file(config_path);
      auto take = [&](const char* key, auto setter) {
        auto it = kv.find(key);
        if (it != kv.end()) setter(it->second);
      };
      // file supplies defaults only where flags were not given
      take("model", [&](const std::string& v) { if (!app.count("--model")) model = v; });
      take("N", [&](const std::string& v) { if (!app.count("--N")) cfg.N = std::stoi(v); });
      take("M", [&](const std::string& v) { if (!app.count("--M")) cfg.M = std::stoi(v); });
      take("d", [&](const std::string& v) { if (!app.count("--d")) cfg.d = std::stoi(v); });
      take("seed", [&](const std::string& v) { if (!app.count("--seed")) cfg.seed = std::stoull(v); });
      take("tol", [&](const std::string& v) { if (!app.count("--tol")) tol = std::stod(v); });
      take("samples",
           [&](const std::string& v) { if (!app.count("--samples")) cfg.samples = std::stoi(v); });
      take("suite", [&](const std::string& v) { if (!app.count("--suite")) suites_csv = v; });
      take("sweep", [&](const std::string& v) { if (!app.count("--sweep")) sweep_csv = v; });
      take("out", [&](const std::string& v) { if (!app.count("--out")) cfg.out_path = v; });
      take("csv-dir", [&](const std::string& v) { if (!app.count("--csv-dir")) cfg.csv_dir = v; });
    }

    if (model == "freq" || model == "frequency") cfg.flavor = fockfuse::Flavor::frequency;
    else if (model == "lattice") cfg.flavor = fockfuse::Flavor::lattice;
    else throw std::invalid_argument("unknown model flavor '" + model + "'");
    if (tol >= 0) cfg.tol_override = tol;
    if (!suites_csv.empty()) cfg.suites = split_csv(suites_csv);
    if (!sweep_csv.empty()) {
      cfg.sweep.clear();
      for (const auto& s : split_csv(sweep_csv)) cfg.sweep.push_back(std::stoi(s));
    }
    fockfuse::validate_config(cfg);

    fockfuse::Report rep = fockfuse::run_suite(cfg);
    fockfuse::emit_report(rep, cfg.out_path, cfg.csv_dir);

    int failed = 0;
    for (const auto& r : rep.records)
      if (!r.pass) ++failed;
    std::cout << "checks: " << rep.records.size() << "  failed: " << failed << "  overall: "
              << (rep.overall_pass ? "PASS" : "FAIL") << "\n";
    if (!rep.overall_pass)
      for (const auto& r : rep.records)
        if (!r.pass)
          std::cout << "  FAIL " << r.suite << "/" << r.check_id << " residual=" << r.residual
                    << " tol=" << (r.tolerance ? *r.tolerance : 0.0) << "\n";
    return rep.overall_pass ? 0 : 1;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
