#include "elastowave/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "elastowave/error.hpp"

namespace elastowave {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void dump(const Json& j, int depth, std::string& out) {
  const std::string pad(size_t(2 * depth), ' '), inner(size_t(2 * depth + 2), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        dump(it.value(), depth + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump(j[i], depth + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "\"" + format_double(v) + "\"";
      return;
    }
    default: out += j.dump(); return;
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(Errc::io, "write to '" + path + "' failed");
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump(j, 0, out);
  out += "\n";
  return out;
}

std::string render_csv(const Series& s) {
  std::string out;
  for (size_t c = 0; c < s.columns.size(); ++c) out += (c ? "," : "") + s.columns[c];
  out += "\n";
  for (const auto& row : s.rows) {
    if (row.size() != s.columns.size()) throw Error(Errc::shape, "series '" + s.name + "' has a ragged row");
    for (size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_double(row[c]);
    out += "\n";
  }
  return out;
}

void write_json(const std::string& path, const Json& j) {
  if (j.is_null() || (j.is_structured() && j.empty())) throw Error(Errc::domain, "refusing to write empty results");
  write_text(path, dump_json(j));
}

void write_csv(const std::string& path, const Series& s) {
  if (s.columns.empty() || s.rows.empty()) throw Error(Errc::domain, "refusing to write an empty series");
  write_text(path, render_csv(s));
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string toolkit_version() { return ELASTOWAVE_VERSION; }

}  // namespace elastowave
