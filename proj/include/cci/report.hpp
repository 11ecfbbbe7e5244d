// Reproducibility reports: a named list of checked claims with expected and
// observed values, serialised as a single JSON document.  Reports are fully
// deterministic - two runs with the same parameters produce byte-identical
// output - so the runtime_ms field is pinned to zero in the serialised form
// and wall-clock timing is left to the caller's logging.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "../../vendor/json.hpp"

namespace cci {

using json = nlohmann::ordered_json;

struct Claim {
  std::string name;
  json expected;
  json actual;
  bool pass = false;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, json>> parameters;  // insertion order
  std::vector<Claim> claims;
  long long runtime_ms = 0;
  std::vector<std::string> artifact_paths;

  void param(const std::string& key, json value) {
    parameters.emplace_back(key, std::move(value));
  }

  // Exact comparison: integers as integers, booleans as booleans, arrays as
  // already-canonicalised (sorted) arrays.  json equality covers all three.
  void claim(const std::string& name, json expected, json actual) {
    const bool pass = (expected == actual);
    claims.push_back({name, std::move(expected), std::move(actual), pass});
  }

  bool all_pass() const {
    for (const Claim& c : claims)
      if (!c.pass) return false;
    return true;
  }

  json to_json() const {
    json doc;
    doc["command"] = command;
    json params = json::object();
    for (const auto& [k, v] : parameters) params[k] = v;
    doc["parameters"] = std::move(params);
    json cl = json::array();
    for (const Claim& c : claims)
      cl.push_back(json{{"name", c.name},
                        {"expected", c.expected},
                        {"actual", c.actual},
                        {"pass", c.pass}});
    doc["claims"] = std::move(cl);
    doc["runtime_ms"] = runtime_ms;
    doc["artifact_paths"] = artifact_paths;
    return doc;
  }
};

}  // namespace cci
