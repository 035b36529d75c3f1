#include "sndeco/cli/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sndeco::cli {
namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string scalar_text(const Value& v, bool json) {
  return std::visit(
      [json](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(x)) throw EmitError("non-finite value in output");
          return format_double(x);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else {
          return json ? nlohmann::json(x).dump() : csv_escape(x);
        }
      },
      v);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render(std::span<const ResultRecord> records, Format format) {
  if (records.empty()) throw EmitError("no records to emit");
  std::ostringstream out;
  if (format == Format::csv) {
    const auto& head = records.front().fields;
    for (std::size_t i = 0; i < head.size(); ++i) {
      out << (i ? "," : "") << csv_escape(head[i].first);
    }
    out << '\n';
    for (const auto& rec : records) {
      if (rec.fields.size() != head.size()) {
        throw EmitError("records have differing columns");
      }
      for (std::size_t i = 0; i < rec.fields.size(); ++i) {
        if (rec.fields[i].first != head[i].first) {
          throw EmitError("records have differing columns");
        }
        out << (i ? "," : "") << scalar_text(rec.fields[i].second, false);
      }
      out << '\n';
    }
  } else {
    out << "[\n";
    for (std::size_t r = 0; r < records.size(); ++r) {
      out << "  {";
      const auto& f = records[r].fields;
      for (std::size_t i = 0; i < f.size(); ++i) {
        out << (i ? ", " : "") << nlohmann::json(f[i].first).dump() << ": "
            << scalar_text(f[i].second, true);
      }
      out << (r + 1 < records.size() ? "},\n" : "}\n");
    }
    out << "]\n";
  }
  return out.str();
}

void emit(std::span<const ResultRecord> records, Format format,
          const std::string& path, std::ostream& stdout_stream) {
  const std::string text = render(records, format);
  if (path == "-") {
    stdout_stream << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw EmitError("cannot open output file: " + path);
  file << text;
  if (!file.flush()) throw EmitError("cannot write output file: " + path);
}

}  // namespace sndeco::cli
