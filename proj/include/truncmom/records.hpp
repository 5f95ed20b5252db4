#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace truncmom {

// One machine-readable result row. Serializes to a single JSON object per
// line; CSV export fixes the column order
// (command, beta, n, m, order, x_re, x_im, value, stderr, method, runtime_ms).
struct QueryRecord {
  std::string command;
  std::vector<std::pair<std::string, double>> params;  // insertion-ordered
  double value = 0.0;
  std::optional<double> stderr_est;
  std::string method;
  long runtime_ms = 0;

  void set(const std::string& key, double v) { params.emplace_back(key, v); }

  std::optional<double> lookup(const std::string& key) const {
    for (const auto& [k, v] : params)
      if (k == key) return v;
    return std::nullopt;
  }

  std::string to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
    j["value"] = value;
    if (stderr_est) j["stderr"] = *stderr_est;
    j["method"] = method;
    j["runtime_ms"] = runtime_ms;
    return j.dump();
  }

  static std::string csv_header() {
    return "command,beta,n,m,order,x_re,x_im,value,stderr,method,runtime_ms";
  }

  std::string to_csv() const {
    std::ostringstream out;
    out.precision(17);
    auto cell = [this, &out](const std::string& key) {
      if (auto v = lookup(key)) out << *v;
      out << ',';
    };
    out << command << ',';
    cell("beta");
    cell("n");
    cell("m");
    cell("order");
    cell("x_re");
    cell("x_im");
    out << value << ',';
    if (stderr_est) out << *stderr_est;
    out << ',' << method << ',' << runtime_ms;
    return out.str();
  }
};

}  // namespace truncmom
