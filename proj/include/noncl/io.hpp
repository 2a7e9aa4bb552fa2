#pragma once

// File formats: density matrices as JSON {dim, entries: row-major [re, im]
// pairs}, tabular output as CSV with one header line, numbers printed with
// 12 significant digits and '\n' endings so identical inputs give identical
// bytes.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "noncl/errors.hpp"
#include "noncl/fock.hpp"

namespace noncl {

inline std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline nlohmann::json density_to_json(const DensityMatrix& rho) {
  nlohmann::json entries = nlohmann::json::array();
  int d = rho.cutoff();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const cplx& z = rho.entries()(i, j);
      entries.push_back({z.real(), z.imag()});
    }
  return nlohmann::json{{"dim", d}, {"entries", std::move(entries)}};
}

inline DensityMatrix density_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    fail(errc::io_failure, "density matrix JSON needs {dim, entries}");
  int d = j.at("dim").get<int>();
  const auto& entries = j.at("entries");
  if (d < 2 || !entries.is_array() || static_cast<int>(entries.size()) != d * d)
    fail(errc::io_failure, "entries must hold dim^2 [re, im] pairs");
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int jj = 0; jj < d; ++jj) {
      const auto& e = entries.at(i * d + jj);
      if (!e.is_array() || e.size() != 2)
        fail(errc::io_failure, "each entry must be an [re, im] pair");
      m(i, jj) = cplx{e.at(0).get<double>(), e.at(1).get<double>()};
    }
  try {
    return DensityMatrix(std::move(m));
  } catch (const error& e) {
    fail(e.code(), std::string("parsed matrix rejected: ") + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_failure, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) fail(errc::io_failure, "read error on " + path);
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_failure, "cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out.good()) fail(errc::io_failure, "write error on " + path);
}

inline DensityMatrix read_density_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(errc::io_failure, std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return density_from_json(j);
}

inline std::optional<Family> parse_family(const std::string& name) {
  for (Family f : {Family::coherent, Family::fock, Family::fock_superposition,
                   Family::squeezed_vacuum, Family::squeezed_coherent, Family::even_cat,
                   Family::odd_cat, Family::three_headed_cat, Family::four_headed_cat})
    if (name == family_name(f)) return f;
  return std::nullopt;
}

// "re" or "re,im"
inline cplx parse_complex(const std::string& text) {
  std::size_t comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      double re = std::stod(text, &used);
      if (used != text.size()) fail(errc::bad_parameter, "trailing characters in " + text);
      return cplx{re, 0.0};
    }
    double re = std::stod(text.substr(0, comma), &used);
    if (used != comma) fail(errc::bad_parameter, "bad real part in " + text);
    std::string imtext = text.substr(comma + 1);
    double im = std::stod(imtext, &used);
    if (used != imtext.size()) fail(errc::bad_parameter, "bad imaginary part in " + text);
    return cplx{re, im};
  } catch (const std::logic_error&) {
    fail(errc::bad_parameter, "cannot parse complex number from '" + text + "'");
  }
}

}  // namespace noncl
