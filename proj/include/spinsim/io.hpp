#pragma once

#include "spinsim/spin.hpp"

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace spinsim {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 42;

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// "5/2", "3", "0.5".
SpinValue parse_spin(std::string_view text);
// "x,y,z", normalised; a zero vector is rejected.
UnitVector3 parse_direction(std::string_view text);

// 12 significant digits in positional notation; magnitudes >= 1e15 fall back to exponent form.
std::string format_number(double x, int significant = 12);

// Minimal RFC 4180 writer.
class CsvWriter {
public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void header(const std::vector<std::string>& cols);
  using Cell = std::variant<std::string, double, std::int64_t>;
  void row(const std::vector<Cell>& cells);

private:
  std::ostream& out_;
  std::size_t ncols_ = 0;
};

// One flat JSON object per line with keys kept in insertion order.
class JsonRecord {
public:
  JsonRecord& add(std::string key, const std::string& v);
  JsonRecord& add(std::string key, const char* v) { return add(std::move(key), std::string(v)); }
  JsonRecord& add(std::string key, double v);
  JsonRecord& add(std::string key, std::int64_t v);
  JsonRecord& add(std::string key, int v) { return add(std::move(key), std::int64_t(v)); }
  JsonRecord& add(std::string key, std::uint64_t v);
  JsonRecord& add(std::string key, bool v);
  JsonRecord& add(std::string key, const std::vector<double>& v);
  JsonRecord& add_raw(std::string key, std::string json);

  std::string str() const;

private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string json_string(std::string_view s);

} // namespace spinsim
