#ifndef CCBOUND_SERIALIZATION_H_
#define CCBOUND_SERIALIZATION_H_

#include <cstdint>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "ccbound/ccattack.h"
#include "ccbound/correlations.h"
#include "ccbound/localset.h"
#include "ccbound/twoway.h"

namespace ccb {

using Json = nlohmann::json;

// Malformed or inconsistent JSON input.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"scenario": {"mA", "mB", "nA", "nB"}, "probs": [x][y][a][b]}
Json correlation_to_json(const Correlation& c);
// Validates shape, entries, normalization and no-signalling.
Correlation correlation_from_json(const Json& j);

// {"theta", "alice", "bob"}; angles in radians.
Json qubit_strategy_to_json(const QubitStrategy& s);
QubitStrategy qubit_strategy_from_json(const Json& j);

// 64-bit FNV-1a over the scenario and the IEEE-754 bytes of the entries.
uint64_t correlation_hash(const Correlation& c);
std::string hash_hex(uint64_t h);

// {"qLocal", "vertexWeights": {index: w}, "nonlocalWeights", "anchors":
// [hash], "feasibleAtTolerance", "residual"}. Anchors are stored by hash
// only, so a decomposition is not recoverable from its JSON alone.
Json decomposition_to_json(const CCDecomposition& d);

Json stochastic_map_to_json(const StochasticMap& m);  // list of rows
StochasticMap stochastic_map_from_json(const Json& j);

// {"name", "aToAprime", "aprimeToM" (null when absent)}
Json strategy_to_json(const PreprocessingStrategy& s);
PreprocessingStrategy strategy_from_json(const Json& j);

Json eve_map_to_json(const EveMap& m);
EveMap eve_map_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace ccb

#endif  // CCBOUND_SERIALIZATION_H_
