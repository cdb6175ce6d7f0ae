#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pbg/spdc.hpp"

namespace pbg {

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// Writes `content` next to `path` under a temporary name, then renames it
/// into place. Throws IoError.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct Provenance {
  std::string tool_version = PBG_VERSION;
  std::uint64_t stack_hash = 0;
  std::uint64_t config_hash = 0;
  std::optional<std::string> timestamp;  // omitted for reproducible output
};

/// "# key=value" comment lines at the top of every CSV.
std::string provenance_comment(const Provenance& p);
/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// Comma-separated table with a provenance header, a column header row,
/// numeric rows and optional trailing "#stats" rows.
class CsvWriter {
 public:
  CsvWriter(Provenance provenance, std::vector<std::string> columns);

  void row(const std::vector<double>& values);
  /// A footer line "#stats,key=value,..." (values already formatted).
  void stats(const std::vector<std::pair<std::string, std::string>>& fields);
  /// Extra "# ..." line placed after the provenance lines.
  void comment(const std::string& text);

  std::string str() const;
  std::size_t rows() const { return rows_; }

 private:
  std::string head_;
  std::string column_line_;
  std::string body_;
  std::string footer_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

/// Binary JSA file: little-endian header (magic "PBGJSA01", u32 version,
/// u32 kind, u64 G_s, u64 G_i, f64 ω_s start/step, f64 ω_i start/step,
/// f64 ω_p⁰, f64 θ_s, φ_s, φ_i, u64 stack hash) followed by the FF, FB, BF,
/// BB sheets as complex64 (f32 re, f32 im), row-major, signal index slowest.
/// For cw data G_i = 1 and the idler "grid" records ω_p⁰ − ω_s (step −h).
struct JsaFile {
  enum class Kind : std::uint32_t { pulsed = 0, cw = 1 };
  Kind kind = Kind::pulsed;
  UniformGrid signal;
  double idler_start = 0.0, idler_step = 0.0;
  std::size_t idler_size = 0;
  double pump_omega = 0.0;
  EmissionGeometry geometry;
  std::uint64_t stack_hash = 0;
  std::array<std::vector<cplx>, 4> sheets;  // widened from complex64
};

inline constexpr char kJsaMagic[8] = {'P', 'B', 'G', 'J', 'S', 'A', '0', '1'};
inline constexpr std::uint32_t kJsaVersion = 1;
inline constexpr std::size_t kJsaHeaderBytes = 8 + 4 + 4 + 8 + 8 + 8 * 8 + 8;

std::string encode_jsa(const JsaGrid& jsa);
std::string encode_jsa(const CwJsa& jsa);
JsaFile decode_jsa(const std::string& bytes);

void write_jsa(const std::filesystem::path& path, const JsaGrid& jsa);
void write_jsa(const std::filesystem::path& path, const CwJsa& jsa);
JsaFile read_jsa(const std::filesystem::path& path);

}  // namespace pbg
