#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hjlab/checks.hpp"

namespace hjlab {

namespace {

std::vector<std::string> string_list(const YAML::Node& n, const char* key) {
  if (n.IsScalar()) {
    const std::string s = n.as<std::string>();
    if (s == "all") return key == std::string("cases") ? case_names() : check_names();
    return {s};
  }
  if (!n.IsSequence()) throw Error(ErrorKind::kRejectedInput, std::string("'") + key + "' must be a list or 'all'");
  std::vector<std::string> out;
  for (const auto& item : n) out.push_back(item.as<std::string>());
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::kRejectedInput, std::string("scenario is not valid YAML: ") + e.what());
  }
  Scenario s;
  if (root.IsNull()) return s;
  if (!root.IsMap()) throw Error(ErrorKind::kRejectedInput, "scenario must be a YAML mapping");
  try {
    for (const auto& kv : root) {
      const std::string key = kv.first.as<std::string>();
      const YAML::Node& v = kv.second;
      if (key == "cases") {
        s.cases = string_list(v, "cases");
      } else if (key == "checks") {
        s.checks = string_list(v, "checks");
      } else if (key == "resolution") {
        if (!v.IsSequence() || v.size() != 2) throw Error(ErrorKind::kRejectedInput, "resolution must be [n_theta, n_phi]");
        s.n_theta = v[0].as<int>();
        s.n_phi = v[1].as<int>();
      } else if (key == "rmax") {
        s.rmax = v.as<int>();
      } else if (key == "seed") {
        s.seed = v.as<std::uint64_t>();
      } else if (key == "per_node") {
        s.per_node = v.as<bool>();
      } else if (key == "tolerances") {
        if (!v.IsMap()) throw Error(ErrorKind::kRejectedInput, "tolerances must be a mapping");
        for (const auto& t : v) s.tolerances[t.first.as<std::string>()] = t.second.as<double>();
      } else {
        throw Error(ErrorKind::kRejectedInput, "unknown scenario key '" + key + "'");
      }
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::kRejectedInput, std::string("bad scenario value: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read scenario '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace hjlab
