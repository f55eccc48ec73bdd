#include "ccbound/serialization.h"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace ccb {

namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(uint64_t& h, const void* data, size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

int positive_int(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<int>() < 1)
    throw SchemaError(std::string("field '") + key +
                      "' must be a positive integer");
  return v.get<int>();
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + " is not a number");
  return j.get<double>();
}

// Runs a constructor that validates with std::invalid_argument.
template <typename F>
auto as_schema(F&& make, const std::string& what) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(what + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

}  // namespace

Json correlation_to_json(const Correlation& c) {
  const Scenario& s = c.scenario();
  Json probs = Json::array();
  for (int x = 0; x < s.mA; ++x) {
    Json px = Json::array();
    for (int y = 0; y < s.mB; ++y) {
      Json pxy = Json::array();
      for (int a = 0; a < s.nA; ++a) {
        Json row = Json::array();
        for (int b = 0; b < s.nB; ++b) row.push_back(c(x, y, a, b));
        pxy.push_back(std::move(row));
      }
      px.push_back(std::move(pxy));
    }
    probs.push_back(std::move(px));
  }
  return {{"scenario", {{"mA", s.mA}, {"mB", s.mB}, {"nA", s.nA}, {"nB", s.nB}}},
          {"probs", std::move(probs)}};
}

Correlation correlation_from_json(const Json& j) {
  const Json& js = field(j, "scenario");
  Scenario s{positive_int(js, "mA"), positive_int(js, "mB"),
             positive_int(js, "nA"), positive_int(js, "nB")};
  as_schema([&] { s.validate(); return 0; }, "scenario");
  const Json& jp = field(j, "probs");
  const int dims[4] = {s.mA, s.mB, s.nA, s.nB};
  std::vector<double> probs;
  probs.reserve(s.size());
  // Depth-first walk checking the nested array shape level by level.
  auto walk = [&](auto&& self, const Json& node, int depth,
                  const std::string& path) -> void {
    if (depth == 4) {
      probs.push_back(number(node, "probs" + path));
      return;
    }
    if (!node.is_array() || static_cast<int>(node.size()) != dims[depth])
      throw SchemaError("probs" + path + " must be an array of length " +
                        std::to_string(dims[depth]));
    for (size_t i = 0; i < node.size(); ++i)
      self(self, node[i], depth + 1, path + "[" + std::to_string(i) + "]");
  };
  walk(walk, jp, 0, "");
  return as_schema([&] { return Correlation(s, std::move(probs)); },
                   "correlation");
}

Json qubit_strategy_to_json(const QubitStrategy& s) {
  return {{"theta", s.theta}, {"alice", s.alice_angles}, {"bob", s.bob_angles}};
}

QubitStrategy qubit_strategy_from_json(const Json& j) {
  QubitStrategy s;
  s.theta = number(field(j, "theta"), "theta");
  for (const char* key : {"alice", "bob"}) {
    const Json& arr = field(j, key);
    if (!arr.is_array() || arr.empty())
      throw SchemaError(std::string("'") + key + "' must be a non-empty array");
    auto& dst = key[0] == 'a' ? s.alice_angles : s.bob_angles;
    for (size_t i = 0; i < arr.size(); ++i)
      dst.push_back(number(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return s;
}

uint64_t correlation_hash(const Correlation& c) {
  uint64_t h = kFnvOffset;
  const Scenario& s = c.scenario();
  const int32_t dims[4] = {s.mA, s.mB, s.nA, s.nB};
  fnv_mix(h, dims, sizeof dims);
  for (double p : c.probs()) {
    if (p == 0.0) p = 0.0;  // fold -0.0
    fnv_mix(h, &p, sizeof p);
  }
  return h;
}

std::string hash_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json decomposition_to_json(const CCDecomposition& d) {
  Json weights = Json::object();
  for (const auto& [idx, w] : d.vertex_weights) weights[std::to_string(idx)] = w;
  Json anchors = Json::array();
  for (const auto& a : d.anchors) anchors.push_back(hash_hex(correlation_hash(a)));
  return {{"qLocal", d.q_local},
          {"vertexWeights", std::move(weights)},
          {"nonlocalWeights", d.nonlocal_weights},
          {"anchors", std::move(anchors)},
          {"feasibleAtTolerance", d.feasible_at_tolerance},
          {"residual", d.residual}};
}

Json stochastic_map_to_json(const StochasticMap& m) { return m.to_rows(); }

StochasticMap stochastic_map_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw SchemaError("stochastic map must be a non-empty list of rows");
  std::vector<std::vector<double>> rows;
  for (size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array()) throw SchemaError("stochastic map row is not an array");
    std::vector<double> row;
    for (size_t c = 0; c < j[r].size(); ++c)
      row.push_back(number(j[r][c], "map entry (" + std::to_string(r) + "," +
                                        std::to_string(c) + ")"));
    rows.push_back(std::move(row));
  }
  return as_schema([&] { return StochasticMap(rows); }, "stochastic map");
}

Json strategy_to_json(const PreprocessingStrategy& s) {
  return {{"name", s.name},
          {"aToAprime", stochastic_map_to_json(s.a_to_aprime)},
          {"aprimeToM", s.aprime_to_m ? stochastic_map_to_json(*s.aprime_to_m)
                                      : Json(nullptr)}};
}

PreprocessingStrategy strategy_from_json(const Json& j) {
  PreprocessingStrategy s;
  const Json& name = field(j, "name");
  if (!name.is_string()) throw SchemaError("strategy name must be a string");
  s.name = name.get<std::string>();
  s.a_to_aprime = stochastic_map_from_json(field(j, "aToAprime"));
  if (j.contains("aprimeToM") && !j.at("aprimeToM").is_null()) {
    s.aprime_to_m = stochastic_map_from_json(j.at("aprimeToM"));
    if (s.aprime_to_m->cols() != s.a_to_aprime.rows())
      throw SchemaError("aprimeToM takes " +
                        std::to_string(s.aprime_to_m->cols()) +
                        " inputs but aToAprime has " +
                        std::to_string(s.a_to_aprime.rows()) + " outputs");
  }
  return s;
}

Json eve_map_to_json(const EveMap& m) { return {{"map", stochastic_map_to_json(m)}}; }

EveMap eve_map_from_json(const Json& j) {
  return stochastic_map_from_json(j.is_object() ? field(j, "map") : j);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace ccb
