#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace galois {

using Json = nlohmann::ordered_json;

/// Machine-readable result of one CLI command. Field order is fixed so output is deterministic.
struct Report {
  int schema = 1;
  std::string command;
  Json inputs = Json::object();
  std::string verdict;
  int exit_code = 0;
  std::vector<std::string> diagnostics;
  Json data = Json::object();
  std::optional<double> timing_ms;

  bool operator==(const Report& o) const {
    return schema == o.schema && command == o.command && inputs == o.inputs && verdict == o.verdict &&
           exit_code == o.exit_code && diagnostics == o.diagnostics && data == o.data && timing_ms == o.timing_ms;
  }
};

inline Json to_json(const Report& r) {
  Json j;
  j["schema"] = r.schema;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  j["verdict"] = r.verdict;
  j["exit_code"] = r.exit_code;
  j["diagnostics"] = r.diagnostics;
  j["data"] = r.data;
  if (r.timing_ms) j["timing_ms"] = *r.timing_ms;
  return j;
}

inline Report report_from_json(const Json& j) {
  Report r;
  r.schema = j.at("schema").get<int>();
  r.command = j.at("command").get<std::string>();
  r.inputs = j.at("inputs");
  r.verdict = j.at("verdict").get<std::string>();
  r.exit_code = j.at("exit_code").get<int>();
  r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  r.data = j.at("data");
  if (j.contains("timing_ms")) r.timing_ms = j.at("timing_ms").get<double>();
  return r;
}

}  // namespace galois
