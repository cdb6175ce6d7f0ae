#include "pbg/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include "pbg/error.hpp"
#include "pbg/hash.hpp"

namespace pbg {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string provenance_comment(const Provenance& p) {
  std::string s = "# pbg-spdc " + p.tool_version + " stack_hash=" + hex64(p.stack_hash) +
                  " config_hash=" + hex64(p.config_hash) + "\n";
  if (p.timestamp) s += "# generated " + *p.timestamp + "\n";
  return s;
}

CsvWriter::CsvWriter(Provenance provenance, std::vector<std::string> columns)
    : head_(provenance_comment(provenance)), columns_(columns.size()) {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (k) column_line_ += ',';
    column_line_ += columns[k];
  }
  column_line_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw Error("CSV row has the wrong number of fields");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) body_ += ',';
    body_ += format_double(values[k]);
  }
  body_ += '\n';
  ++rows_;
}

void CsvWriter::stats(const std::vector<std::pair<std::string, std::string>>& fields) {
  footer_ += "#stats";
  for (const auto& [k, v] : fields) footer_ += "," + k + "=" + v;
  footer_ += '\n';
}

void CsvWriter::comment(const std::string& text) { head_ += "# " + text + "\n"; }

std::string CsvWriter::str() const { return head_ + column_line_ + body_ + footer_; }

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::string& out, T v) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(bytes, sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw IoError("JSA file is truncated");
  char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

void put_header(std::string& out, JsaFile::Kind kind, std::size_t gs, std::size_t gi, double s0, double sh, double i0,
                double ih, double wp, const EmissionGeometry& g, std::uint64_t hash) {
  out.append(kJsaMagic, 8);
  put<std::uint32_t>(out, kJsaVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(kind));
  put<std::uint64_t>(out, gs);
  put<std::uint64_t>(out, gi);
  for (double v : {s0, sh, i0, ih, wp, g.theta_s, g.phi_s, g.phi_i}) put<double>(out, v);
  put<std::uint64_t>(out, hash);
}

void put_sheets(std::string& out, const std::array<std::vector<cplx>, 4>& sheets) {
  for (const auto& sheet : sheets)
    for (const cplx& v : sheet) {
      put<float>(out, static_cast<float>(v.real()));
      put<float>(out, static_cast<float>(v.imag()));
    }
}

}  // namespace

std::string encode_jsa(const JsaGrid& jsa) {
  std::string out;
  out.reserve(kJsaHeaderBytes + 4 * 8 * jsa.signal.size * jsa.idler.size);
  put_header(out, JsaFile::Kind::pulsed, jsa.signal.size, jsa.idler.size, jsa.signal.start, jsa.signal.step,
             jsa.idler.start, jsa.idler.step, jsa.pump.carrier_omega, jsa.geometry, jsa.stack_hash);
  put_sheets(out, jsa.sheets);
  return out;
}

std::string encode_jsa(const CwJsa& jsa) {
  std::string out;
  out.reserve(kJsaHeaderBytes + 4 * 8 * jsa.signal.size);
  put_header(out, JsaFile::Kind::cw, jsa.signal.size, 1, jsa.signal.start, jsa.signal.step, jsa.idler_omega(0),
             -jsa.signal.step, jsa.pump_omega(), jsa.geometry, jsa.stack_hash);
  put_sheets(out, jsa.sheets);
  return out;
}

JsaFile decode_jsa(const std::string& bytes) {
  if (bytes.size() < kJsaHeaderBytes || std::memcmp(bytes.data(), kJsaMagic, 8) != 0)
    throw IoError("not a JSA file (bad magic)");
  std::size_t pos = 8;
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != kJsaVersion) throw IoError("unsupported JSA file version " + std::to_string(version));
  JsaFile f;
  const auto kind = get<std::uint32_t>(bytes, pos);
  if (kind > 1) throw IoError("unknown JSA kind " + std::to_string(kind));
  f.kind = static_cast<JsaFile::Kind>(kind);
  const auto gs = get<std::uint64_t>(bytes, pos);
  const auto gi = get<std::uint64_t>(bytes, pos);
  f.signal.size = gs;
  f.signal.start = get<double>(bytes, pos);
  f.signal.step = get<double>(bytes, pos);
  f.idler_start = get<double>(bytes, pos);
  f.idler_step = get<double>(bytes, pos);
  f.idler_size = gi;
  f.pump_omega = get<double>(bytes, pos);
  f.geometry.theta_s = get<double>(bytes, pos);
  f.geometry.phi_s = get<double>(bytes, pos);
  f.geometry.phi_i = get<double>(bytes, pos);
  f.stack_hash = get<std::uint64_t>(bytes, pos);
  const std::uint64_t cells = gs * gi;
  if (gs != 0 && cells / gs != gi) throw IoError("JSA grid dimensions overflow");
  if (bytes.size() - pos != 4 * cells * 8) throw IoError("JSA payload size does not match the header");
  for (auto& sheet : f.sheets) {
    sheet.resize(cells);
    for (auto& v : sheet) {
      const float re = get<float>(bytes, pos);
      const float im = get<float>(bytes, pos);
      v = {re, im};
    }
  }
  return f;
}

void write_jsa(const std::filesystem::path& path, const JsaGrid& jsa) { write_atomic(path, encode_jsa(jsa)); }
void write_jsa(const std::filesystem::path& path, const CwJsa& jsa) { write_atomic(path, encode_jsa(jsa)); }

JsaFile read_jsa(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return decode_jsa(buf.str());
}

}  // namespace pbg
