#include "spinsim/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace spinsim {

namespace {

double parse_double(std::string_view t, const char* what) {
  std::string s(t);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw UsageError(std::string("cannot parse ") + what + ": '" + s + "'");
  return v;
}

} // namespace

SpinValue parse_spin(std::string_view text) {
  double v;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const double num = parse_double(text.substr(0, slash), "spin numerator");
    const double den = parse_double(text.substr(slash + 1), "spin denominator");
    if (den == 0) throw UsageError("spin denominator is zero");
    v = num / den;
  } else {
    v = parse_double(text, "spin");
  }
  const double twice = 2 * v;
  if (std::abs(twice - std::round(twice)) > 1e-9 || std::round(twice) < 1)
    throw UsageError("spin must be a positive multiple of 1/2: '" + std::string(text) + "'");
  return SpinValue(static_cast<int>(std::round(twice)));
}

UnitVector3 parse_direction(std::string_view text) {
  double c[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = text.find(',', pos);
    if ((i < 2) != (comma != std::string_view::npos))
      throw UsageError("direction must be three comma-separated numbers: '" + std::string(text) + "'");
    c[i] = parse_double(text.substr(pos, i < 2 ? comma - pos : std::string_view::npos), "direction component");
    pos = comma + 1;
  }
  try {
    return UnitVector3::normalized(c[0], c[1], c[2]);
  } catch (const std::invalid_argument&) {
    throw UsageError("direction must be non-zero");
  }
}

std::string format_number(double x, int significant) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[512];
  if (std::abs(x) >= 1e15) {
    std::snprintf(buf, sizeof buf, "%.*e", significant - 1, x);
    return buf;
  }
  const int e = static_cast<int>(std::floor(std::log10(std::abs(x))));
  const int decimals = std::max(0, significant - 1 - e);
  std::snprintf(buf, sizeof buf, "%.*f", std::min(decimals, 400), x);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

void CsvWriter::header(const std::vector<std::string>& cols) {
  ncols_ = cols.size();
  std::vector<Cell> cells(cols.begin(), cols.end());
  row(cells);
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (ncols_ && cells.size() != ncols_) throw std::logic_error("csv row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    if (const auto* s = std::get_if<std::string>(&cells[i])) {
      if (s->find_first_of(",\"\r\n") == std::string::npos) {
        out_ << *s;
      } else {
        out_ << '"';
        for (char ch : *s) out_ << (ch == '"' ? "\"\"" : std::string(1, ch));
        out_ << '"';
      }
    } else if (const auto* d = std::get_if<double>(&cells[i])) {
      out_ << format_number(*d);
    } else {
      out_ << std::get<std::int64_t>(cells[i]);
    }
  }
  out_ << '\n';
}

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

namespace {

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

} // namespace

JsonRecord& JsonRecord::add(std::string key, const std::string& v) { return add_raw(std::move(key), json_string(v)); }
JsonRecord& JsonRecord::add(std::string key, double v) { return add_raw(std::move(key), json_number(v)); }
JsonRecord& JsonRecord::add(std::string key, std::int64_t v) { return add_raw(std::move(key), std::to_string(v)); }
JsonRecord& JsonRecord::add(std::string key, std::uint64_t v) { return add_raw(std::move(key), std::to_string(v)); }
JsonRecord& JsonRecord::add(std::string key, bool v) { return add_raw(std::move(key), v ? "true" : "false"); }

JsonRecord& JsonRecord::add(std::string key, const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + json_number(v[i]);
  return add_raw(std::move(key), s + "]");
}

JsonRecord& JsonRecord::add_raw(std::string key, std::string json) {
  fields_.emplace_back(std::move(key), std::move(json));
  return *this;
}

std::string JsonRecord::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < fields_.size(); ++i) s += (i ? "," : "") + json_string(fields_[i].first) + ":" + fields_[i].second;
  return s + "}";
}

} // namespace spinsim
