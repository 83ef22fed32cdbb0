#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "spinwave/coefficients.hpp"
#include "spinwave/frame.hpp"
#include "spinwave/random_fields.hpp"
#include "spinwave/transform.hpp"

namespace spinwave::io {

namespace fs = std::filesystem;

/// Column-oriented numeric table written as CSV with a header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

/// Doubles are printed with 17 significant digits so files round-trip exactly;
/// integral values print without a fractional part.
std::string format_number(double v);

void write_table(const fs::path& path, const Table& table);
Table read_table(const fs::path& path);

void write_json(const fs::path& path, const nlohmann::json& j);
/// Throws IoError if unreadable, ConfigError if malformed.
nlohmann::json read_json(const fs::path& path);

/// First line: JSON header {"spin","L"}; then CSV l,m,re,im.
void write_coefficients(const fs::path& path, const SpinCoefficients& a);
SpinCoefficients read_coefficients(const fs::path& path);

/// CSV theta,phi,re,im in ring-major order.
void write_grid(const fs::path& path, const GridField& field);

/// First line: JSON header {"spin","L","model","params"}; then CSV l,C_l.
void write_spectrum(const fs::path& path, const PowerSpectrum& spec);
PowerSpectrum read_spectrum(const fs::path& path);

/// CSV j,k,re,im.
void write_wavelets(const fs::path& path, const WaveletCoefficients& w);

/// Writes sample_NNNNN.csv coefficient files and manifest.json into dir.
void write_ensemble(const fs::path& dir, const std::vector<SpinCoefficients>& samples,
                    const nlohmann::json& manifest);
std::vector<SpinCoefficients> read_ensemble(const fs::path& dir);

}  // namespace spinwave::io
