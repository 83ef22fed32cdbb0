#include "spinwave/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spinwave/errors.hpp"

namespace spinwave::io {

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_number(const std::string& s, const fs::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, "bad number '" + s + "' in " + path.string());
  }
}

nlohmann::json parse_header(std::istream& in, const fs::path& path) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ConfigError, "empty file " + path.string());
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::ConfigError, "bad JSON header in " + path.string());
  }
}

// Reads CSV rows after the column line, checking the column names.
std::vector<std::vector<double>> read_rows(std::istream& in, const std::vector<std::string>& cols,
                                           const fs::path& path) {
  std::string line;
  if (!std::getline(in, line) || split(line) != cols) {
    throw Error(ErrorKind::ConfigError, "unexpected columns in " + path.string());
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != cols.size()) {
      throw Error(ErrorKind::ConfigError, "ragged row in " + path.string());
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c, path));
    rows.push_back(std::move(row));
  }
  return rows;
}

int as_int(double v, const fs::path& path) {
  if (v != std::floor(v)) throw Error(ErrorKind::ConfigError, "non-integer index in " + path.string());
  return static_cast<int>(v);
}

}  // namespace

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw Error(ErrorKind::InvalidArgument, "row width mismatch");
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  char buf[40];
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", v);
  }
  return buf;
}

void write_table(const fs::path& path, const Table& table) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

Table read_table(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ConfigError, "empty file " + path.string());
  Table t;
  t.columns = split(line);
  in.seekg(0);
  t.rows = read_rows(in, t.columns, path);
  return t;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, "malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_coefficients(const fs::path& path, const SpinCoefficients& a) {
  auto out = open_out(path);
  out << nlohmann::json{{"spin", a.spin()}, {"L", a.L()}}.dump() << '\n';
  out << "l,m,re,im\n";
  for (int l = a.lmin(); l <= a.L(); ++l) {
    for (int m = -l; m <= l; ++m) {
      const cplx v = a(l, m);
      out << l << ',' << m << ',' << format_number(v.real()) << ',' << format_number(v.imag())
          << '\n';
    }
  }
}

SpinCoefficients read_coefficients(const fs::path& path) {
  auto in = open_in(path);
  const auto h = parse_header(in, path);
  int s = 0, L = 0;
  try {
    s = h.at("spin").get<int>();
    L = h.at("L").get<int>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::ConfigError, "coefficient header needs spin and L in " + path.string());
  }
  SpinCoefficients a(s, L);
  for (const auto& r : read_rows(in, {"l", "m", "re", "im"}, path)) {
    const int l = as_int(r[0], path), m = as_int(r[1], path);
    if (!a.has(l, m)) throw Error(ErrorKind::ConfigError, "index out of range in " + path.string());
    a(l, m) = {r[2], r[3]};
  }
  return a;
}

void write_grid(const fs::path& path, const GridField& field) {
  auto out = open_out(path);
  out << "theta,phi,re,im\n";
  const auto& g = field.grid;
  for (std::size_t i = 0; i < g.theta.size(); ++i) {
    for (int k = 0; k < g.n_phi; ++k) {
      const cplx v = field.at(i, k);
      out << format_number(g.theta[i]) << ',' << format_number(g.phi(k)) << ','
          << format_number(v.real()) << ',' << format_number(v.imag()) << '\n';
    }
  }
}

void write_spectrum(const fs::path& path, const PowerSpectrum& spec) {
  auto out = open_out(path);
  out << nlohmann::json{{"spin", spec.s}, {"L", spec.L}, {"model", spec.model}, {"params", spec.params}}
             .dump()
      << '\n';
  out << "l,C_l\n";
  for (int l = std::abs(spec.s); l <= spec.L; ++l) out << l << ',' << format_number(spec.C[l]) << '\n';
}

PowerSpectrum read_spectrum(const fs::path& path) {
  auto in = open_in(path);
  const auto h = parse_header(in, path);
  PowerSpectrum spec;
  try {
    spec.s = h.at("spin").get<int>();
    spec.L = h.at("L").get<int>();
    spec.model = h.value("model", std::string("tabulated"));
    spec.params = h.value("params", nlohmann::json::object());
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::ConfigError, "spectrum header needs spin and L in " + path.string());
  }
  if (spec.L < std::abs(spec.s)) throw Error(ErrorKind::ConfigError, "L below |spin| in " + path.string());
  spec.C.assign(spec.L + 1, 0.0);
  for (const auto& r : read_rows(in, {"l", "C_l"}, path)) {
    const int l = as_int(r[0], path);
    if (l < std::abs(spec.s) || l > spec.L || !(r[1] >= 0.0)) {
      throw Error(ErrorKind::ConfigError, "invalid spectrum row in " + path.string());
    }
    spec.C[l] = r[1];
  }
  return spec;
}

void write_wavelets(const fs::path& path, const WaveletCoefficients& w) {
  auto out = open_out(path);
  out << "j,k,re,im\n";
  for (const auto& [j, beta] : w.beta) {
    for (std::size_t k = 0; k < beta.size(); ++k) {
      out << j << ',' << k << ',' << format_number(beta[k].real()) << ','
          << format_number(beta[k].imag()) << '\n';
    }
  }
}

void write_ensemble(const fs::path& dir, const std::vector<SpinCoefficients>& samples,
                    const nlohmann::json& manifest) {
  fs::create_directories(dir);
  nlohmann::json m = manifest;
  m["files"] = nlohmann::json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "sample_%05zu.csv", i);
    write_coefficients(dir / name, samples[i]);
    m["files"].push_back(name);
  }
  write_json(dir / "manifest.json", m);
}

std::vector<SpinCoefficients> read_ensemble(const fs::path& dir) {
  const auto m = read_json(dir / "manifest.json");
  if (!m.contains("files") || !m["files"].is_array()) {
    throw Error(ErrorKind::ConfigError, "ensemble manifest lacks a file list");
  }
  std::vector<SpinCoefficients> out;
  for (const auto& f : m["files"]) out.push_back(read_coefficients(dir / f.get<std::string>()));
  return out;
}

}  // namespace spinwave::io
