#pragma once

// CSV/JSON artifact plumbing: fixed 12-significant-digit float formatting so
// reruns are byte-identical, plus the manifest layout shared by the CLI and
// the scripted experiments.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace magnon {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Check {
  std::string name;
  std::string relation;  // ">=", "<=", "~" (within tolerance), ...
  double expected = 0.0;
  double measured = 0.0;
  bool pass = false;
};

inline void to_json(nlohmann::json& j, const Check& c) {
  j = nlohmann::json{{"name", c.name},
                     {"relation", c.relation},
                     {"expected", c.expected},
                     {"measured", c.measured},
                     {"pass", c.pass}};
}

// Tabular observable record: named columns, double-valued rows.
struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline void write_csv(const std::filesystem::path& path, const DataTable& table) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) os << ',';
    os << table.columns[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << format_double(row[c]);
    }
    os << '\n';
  }
}

inline void write_json_rows(const std::filesystem::path& path,
                            const DataTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj;
    for (size_t c = 0; c < row.size() && c < table.columns.size(); ++c)
      obj[table.columns[c]] = row[c];
    rows.push_back(std::move(obj));
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << rows.dump(2) << '\n';
}

inline void write_text(const std::filesystem::path& path, const std::string& s) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << s;
}

}  // namespace magnon
