#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "hjlab/checks.hpp"

namespace hjlab {

namespace {

std::string num(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

std::string node_json(const NodeRef& n) {
  if (n.node < 0) return "null";
  return "{\"node\": " + std::to_string(n.node) + ", \"chart\": " + quote(to_string(n.chart)) + ", \"u\": [" +
         num(n.u.real()) + ", " + num(n.u.imag()) + "]}";
}

std::string string_array(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + quote(v[i]);
  return out + "]";
}

}  // namespace

std::string report_json(const Report& r) {
  const Scenario& s = r.scenario;
  std::string o = "{\n";
  o += "  \"environment\": {\n";
  o += "    \"version\": " + quote(kVersion) + ",\n";
  o += "    \"seed\": " + std::to_string(s.seed) + ",\n";
  o += "    \"resolution\": [" + std::to_string(s.n_theta) + ", " + std::to_string(s.n_phi) + "],\n";
  o += "    \"rmax\": " + std::to_string(s.rmax) + ",\n";
  o += "    \"fs_holomorphic_sectional_curvature\": 4,\n";
  o += "    \"cases\": " + string_array(s.cases) + ",\n";
  o += "    \"checks\": " + string_array(s.checks) + ",\n";
  o += "    \"tolerances\": {";
  bool first = true;
  for (const auto& [k, v] : s.tolerances) {
    o += (first ? "" : ", ") + quote(k) + ": " + num(v);
    first = false;
  }
  o += "}\n  },\n";
  o += "  \"results\": [";
  for (std::size_t i = 0; i < r.results.size(); ++i) {
    const CheckResult& c = r.results[i];
    const bool skip = c.status == Status::kSkip;
    o += i ? ",\n" : "\n";
    o += "    {\n";
    o += "      \"check\": " + quote(c.check) + ",\n";
    o += "      \"case\": " + quote(c.case_name) + ",\n";
    o += "      \"status\": " + quote(to_string(c.status)) + ",\n";
    o += "      \"reason\": " + (c.reason.empty() ? std::string("null") : quote(c.reason)) + ",\n";
    o += "      \"grid_max\": " + (skip ? std::string("null") : num(c.grid_max)) + ",\n";
    o += "      \"mean\": " + (skip ? std::string("null") : num(c.mean)) + ",\n";
    o += "      \"worst_node\": " + (skip ? std::string("null") : node_json(c.worst)) + ",\n";
    o += "      \"tolerance\": " + (skip ? std::string("null") : num(c.tolerance)) + ",\n";
    if (c.wall_time) o += "      \"wall_time\": " + num(*c.wall_time) + ",\n";
    o += "      \"components\": [";
    for (std::size_t k = 0; k < c.components.size(); ++k) {
      const Component& m = c.components[k];
      o += k ? ",\n" : "\n";
      o += "        {\"name\": " + quote(m.name) + ", \"kind\": " + quote(to_string(m.kind)) +
           ", \"threshold\": " + num(m.threshold) + ", \"grid_max\": " + num(m.grid_max) + ", \"mean\": " + num(m.mean) +
           ", \"worst_node\": " + node_json(m.worst) + ", \"status\": " + quote(to_string(m.status));
      if (!m.per_node.empty()) {
        o += ", \"per_node\": [";
        for (std::size_t j = 0; j < m.per_node.size(); ++j) o += (j ? ", " : "") + num(m.per_node[j]);
        o += "]";
      }
      o += "}";
    }
    o += c.components.empty() ? "]\n" : "\n      ]\n";
    o += "    }";
  }
  o += r.results.empty() ? "],\n" : "\n  ],\n";
  o += "  \"verdict\": " + quote(r.pass() ? "pass" : "fail") + "\n}\n";
  return o;
}

std::string report_csv(const Report& r) {
  std::string o = "check,case,statistic,value,status\n";
  for (const CheckResult& c : r.results) {
    const bool skip = c.status == Status::kSkip;
    const std::string prefix = c.check + "," + c.case_name + ",";
    const std::string st = std::string(",") + to_string(c.status) + "\n";
    auto val = [&](double x) { return skip || !std::isfinite(x) ? std::string() : num(x); };
    o += prefix + "grid_max," + val(c.grid_max) + st;
    o += prefix + "mean," + val(c.mean) + st;
    o += prefix + "worst_node," + (skip || c.worst.node < 0 ? std::string() : std::to_string(c.worst.node)) + st;
    o += prefix + "tolerance," + val(c.tolerance) + st;
  }
  return o;
}

void emit(const Report& r, const std::string& format, const std::string& path) {
  std::string text;
  if (format == "json") {
    text = report_json(r);
  } else if (format == "csv") {
    text = report_csv(r);
  } else {
    throw Error(ErrorKind::kRejectedInput, "unknown format '" + format + "'");
  }
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for '" + path + "'");
}

}  // namespace hjlab
