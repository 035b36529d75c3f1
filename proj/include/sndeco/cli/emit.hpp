#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sndeco::cli {

enum class Format { csv, json };

using Value = std::variant<double, std::int64_t, bool, std::string>;

/// One output row. Column order is insertion order.
struct ResultRecord {
  std::vector<std::pair<std::string, Value>> fields;

  ResultRecord& add(std::string key, Value v) {
    fields.emplace_back(std::move(key), std::move(v));
    return *this;
  }
};

/// Output could not be produced (unwritable path, non-finite number).
class EmitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.17g; parses back to the identical double.
std::string format_double(double v);

/// CSV (header + one line per record, columns from the first record) or a
/// JSON array of objects.
std::string render(std::span<const ResultRecord> records, Format format);

/// Writes the rendered records to `path`, or to `stdout_stream` when path is
/// "-". The file is only created once rendering succeeded.
void emit(std::span<const ResultRecord> records, Format format,
          const std::string& path, std::ostream& stdout_stream);

}  // namespace sndeco::cli
