#include "hcec/report.hpp"

#include <fstream>
#include <stdexcept>

namespace hcec {

namespace {

Json record_json(const PairRecord& r, bool with_id) {
  Json j;
  if (with_id) j["id"] = r.id;
  j["gates"] = r.gates;
  j["pis"] = r.pis;
  j["score_xor"] = r.score_xor;
  j["engine"] = r.engine;
  j["verdict"] = r.verdict;
  j["seconds"] = r.seconds;
  return j;
}

bool has_type(const Json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  throw std::invalid_argument("schema uses unsupported type '" + t + "'");
}

void validate_at(const Json& v, const Json& schema, const std::string& where, std::vector<std::string>& errors) {
  if (auto t = schema.find("type"); t != schema.end()) {
    bool ok = false;
    if (t->is_array()) {
      for (const auto& x : *t) ok = ok || has_type(v, x.get<std::string>());
    } else {
      ok = has_type(v, t->get<std::string>());
    }
    if (!ok) {
      errors.push_back(where + ": expected type " + t->dump());
      return;
    }
  }
  if (auto e = schema.find("enum"); e != schema.end()) {
    bool ok = false;
    for (const auto& x : *e) ok = ok || x == v;
    if (!ok) errors.push_back(where + ": value " + v.dump() + " not in " + e->dump());
  }
  if (auto m = schema.find("minimum"); m != schema.end() && v.is_number()) {
    if (v.get<double>() < m->get<double>()) errors.push_back(where + ": below minimum " + m->dump());
  }
  if (v.is_object()) {
    if (auto r = schema.find("required"); r != schema.end()) {
      for (const auto& key : *r) {
        if (!v.contains(key.get<std::string>())) errors.push_back(where + ": missing key " + key.dump());
      }
    }
    const auto props = schema.find("properties");
    const bool closed = schema.value("additionalProperties", true) == false;
    for (const auto& [key, item] : v.items()) {
      if (props != schema.end() && props->contains(key)) {
        validate_at(item, (*props)[key], where + "." + key, errors);
      } else if (closed) {
        errors.push_back(where + ": unexpected key \"" + key + "\"");
      }
    }
  }
  if (v.is_array()) {
    if (auto items = schema.find("items"); items != schema.end()) {
      for (std::size_t i = 0; i < v.size(); ++i) validate_at(v[i], *items, where + "[" + std::to_string(i) + "]", errors);
    }
  }
}

}  // namespace

Json stats_to_json(const SweepResult& result) {
  const SweepStats& s = result.stats;
  Json j;
  j["verdict"] = verdict_name(result.verdict);
  j["wall_seconds"] = result.wall_seconds;
  j["pairs"] = s.pairs;
  j["raw_pairs"] = s.raw_pairs;
  j["isd_hits"] = s.isd_hits;
  j["sat_calls"] = s.sat_calls;
  j["sat_time_seconds"] = s.sat_time_seconds;
  j["eps_calls"] = s.eps_calls;
  j["eps_time_seconds"] = s.eps_time_seconds;
  j["skipped_pairs"] = s.skipped_pairs;
  j["merges"] = s.merges;
  j["refinements"] = s.refinements;
  j["engine_calls"] = s.engine_calls;
  if (!result.reason.empty()) j["reason"] = result.reason;
  j["failing_output"] = result.failing_output ? Json(*result.failing_output) : Json(nullptr);
  if (result.verdict == SweepResult::Verdict::kNonEquivalent) {
    Json bits = Json::array();
    for (uint8_t b : result.counterexample) bits.push_back(b ? 1 : 0);
    j["counterexample"] = std::move(bits);
  } else {
    j["counterexample"] = nullptr;
  }
  j["final"] = s.final_stage ? record_json(*s.final_stage, false) : Json(nullptr);
  Json pairs = Json::array();
  for (const auto& r : s.per_pair) pairs.push_back(record_json(r, true));
  j["per_pair"] = std::move(pairs);
  return j;
}

void write_stats_json(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << stats_to_json(result).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

const std::vector<std::string>& wall_clock_fields() {
  static const std::vector<std::string> fields = {"wall_seconds", "sat_time_seconds", "eps_time_seconds", "seconds"};
  return fields;
}

Json strip_wall_clock(Json stats) {
  for (const auto& f : {"wall_seconds", "sat_time_seconds", "eps_time_seconds"}) stats.erase(f);
  if (stats.contains("final") && stats["final"].is_object()) stats["final"].erase("seconds");
  for (auto& p : stats["per_pair"]) p.erase("seconds");
  return stats;
}

std::vector<std::string> validate_json(const Json& value, const Json& schema) {
  std::vector<std::string> errors;
  validate_at(value, schema, "$", errors);
  return errors;
}

}  // namespace hcec
