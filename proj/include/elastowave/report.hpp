#pragma once

// Bit-stable report files: JSON with sorted keys and every number printed
// with 17 significant digits, CSV series in the same float format.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace elastowave {

using Json = nlohmann::json;  // std::map storage, so object keys are sorted

struct Series {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// "%.17g" for finite values, "nan" / "inf" / "-inf" otherwise.
std::string format_double(double v);

/// Deterministic JSON text (two-space indent, trailing newline). Non-finite
/// numbers are written as strings so the output stays parseable.
std::string dump_json(const Json& j);

std::string render_csv(const Series& s);

/// Throws domain for an empty document or series, io on write failure.
void write_json(const std::string& path, const Json& j);
void write_csv(const std::string& path, const Series& s);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

std::string toolkit_version();

}  // namespace elastowave
