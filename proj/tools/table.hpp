#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

// A flat result table rendered as CSV, JSON or an aligned text table.
// Floating cells always go through %.12g so every format agrees on digits.

using Cell = std::variant<std::string, std::int64_t, std::uint64_t, double, bool>;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string cell_text(const Cell& cell) {
  struct {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  } visit;
  return std::visit(visit, cell);
}

inline nlohmann::ordered_json cell_json(const Cell& cell) {
  struct {
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return std::strtod(format_double(v).c_str(), nullptr);
    }
    nlohmann::ordered_json operator()(bool v) const { return v; }
  } visit;
  return std::visit(visit, cell);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Extra JSON members appended to a single-row object (e.g. nested arrays).
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  // A single-row result prints as one JSON object rather than an array.
  bool single = false;

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + quote(cell_text(row[i]));
      out += '\n';
    }
    return out;
  }

  std::string json() const {
    auto object = [&](const std::vector<Cell>& row) {
      nlohmann::ordered_json o = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = cell_json(row[i]);
      return o;
    };
    if (single && rows.size() == 1) {
      auto o = object(rows.front());
      for (const auto& [key, value] : extra.items()) o[key] = value;
      return o.dump(2) + "\n";
    }
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& row : rows) a.push_back(object(row));
    return a.dump(2) + "\n";
  }

  std::string text() const {
    std::vector<std::size_t> width(columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i) width[i] = columns[i].size();
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : rows) {
      auto& line = cells.emplace_back();
      for (std::size_t i = 0; i < row.size(); ++i) {
        line.push_back(cell_text(row[i]));
        width[i] = std::max(width[i], line.back().size());
      }
    }
    auto emit = [&](const std::vector<std::string>& line) {
      std::string out;
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (i) out += "  ";
        out += line[i];
        if (i + 1 < line.size()) out.append(width[i] - line[i].size(), ' ');
      }
      return out + '\n';
    };
    std::string out = emit(columns);
    for (const auto& line : cells) out += emit(line);
    return out;
  }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + '"';
  }
};
