#pragma once

#include <json.hpp>

#include "fockfuse/loops.hpp"

namespace fockfuse {

// JSON descriptors for models and loop/path literals, for reproducible runs.

inline nlohmann::json model_descriptor(const SpinorModel& m) {
  nlohmann::json j;
  j["flavor"] = m.flavor == Flavor::frequency ? "freq" : "lattice";
  j[m.flavor == Flavor::frequency ? "N" : "M"] = m.size;
  j["d"] = m.d;
  return j;
}

inline SpinorModel model_from_descriptor(const nlohmann::json& j) {
  std::string flavor = j.at("flavor").get<std::string>();
  int d = j.at("d").get<int>();
  if (flavor == "freq") return build_model(Flavor::frequency, j.at("N").get<int>(), d);
  if (flavor == "lattice") return build_model(Flavor::lattice, j.at("M").get<int>(), d);
  throw std::invalid_argument("model_from_descriptor: unknown flavor " + flavor);
}

// debugging aid: dense operator as CSV text, entries "re+imi"
inline std::string matrix_to_csv(const Mat& m) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ",";
      os << m(r, c).real() << (m(r, c).imag() < 0 ? "" : "+") << m(r, c).imag() << "i";
    }
    os << "\n";
  }
  return os.str();
}

inline nlohmann::json matrix_to_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

inline Mat matrix_from_json(const nlohmann::json& j) {
  auto rows = j.size();
  auto cols = rows ? j.at(0).size() : 0;
  Mat m(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) {
      const auto& e = j.at(r).at(c);
      m(Eigen::Index(r), Eigen::Index(c)) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return m;
}

// Loop literals: {"type": "trig"|"sampled", "d": ..., "coeffs"|"samples": ...}
inline nlohmann::json trig_loop_to_json(const TrigLoop& f) {
  nlohmann::json j;
  j["type"] = "trig";
  j["d"] = f.d;
  nlohmann::json coeffs = nlohmann::json::object();
  for (const auto& [n, a] : f.coeffs) coeffs[std::to_string(n)] = matrix_to_json(a);
  j["coeffs"] = coeffs;
  return j;
}

inline nlohmann::json sampled_loop_to_json(const SampledLoop& f) {
  nlohmann::json j;
  j["type"] = "sampled";
  j["d"] = f.d;
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& v : f.values) samples.push_back(matrix_to_json(v.cast<cplx>()));
  j["samples"] = samples;
  return j;
}

struct LoopLiteral {
    std::optional<TrigLoop> trig;
    std::optional<SampledLoop> sampled;
};

inline LoopLiteral loop_from_json(const nlohmann::json& j) {
  LoopLiteral out;
  std::string type = j.at("type").get<std::string>();
  int d = j.at("d").get<int>();
  if (type == "trig") {
    TrigLoop f;
    f.d = d;
    for (const auto& [key, val] : j.at("coeffs").items()) f.coeffs[std::stoi(key)] = matrix_from_json(val);
    out.trig = std::move(f);
  } else if (type == "sampled") {
    SampledLoop f;
    f.d = d;
    for (const auto& s : j.at("samples")) {
      Mat m = matrix_from_json(s);
      if (m.imag().norm() > 1e-12)
        throw std::invalid_argument("loop_from_json: sampled loop values must be real");
      f.values.push_back(m.real());
    }
    out.sampled = std::move(f);
  } else {
    throw std::invalid_argument("loop_from_json: unknown type " + type);
  }
  return out;
}

inline nlohmann::json path_to_json(const Path& p) {
  nlohmann::json j;
  j["type"] = "path";
  j["d"] = p.d;
  j["intervals"] = p.intervals;
  j["sit_margin"] = p.sit_margin;
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& v : p.samples) samples.push_back(matrix_to_json(v.cast<cplx>()));
  j["samples"] = samples;
  return j;
}

inline Path path_from_json(const nlohmann::json& j) {
  Path p;
  p.d = j.at("d").get<int>();
  p.intervals = j.at("intervals").get<int>();
  p.sit_margin = j.value("sit_margin", 0);
  for (const auto& s : j.at("samples")) {
    Mat m = matrix_from_json(s);
    if (m.imag().norm() > 1e-12) throw std::invalid_argument("path_from_json: samples must be real");
    p.samples.push_back(m.real());
  }
  if (static_cast<int>(p.samples.size()) != p.intervals + 1)
    throw std::invalid_argument("path_from_json: sample count does not match the grid");
  return p;
}

}  // namespace fockfuse
