#ifndef CAUSAL_JSON_IO_HPP
#define CAUSAL_JSON_IO_HPP

#include <json.hpp>

#include "causal/estimate.hpp"
#include "causal/identify.hpp"
#include "causal/refute.hpp"

namespace causal {

// All serialization uses ordered_json so output key order (and therefore
// the emitted bytes) is deterministic.
using Json = nlohmann::ordered_json;

Json to_json(const Estimand& e);
Estimand estimand_from_json(const Json& j);

Json to_json(const EffectEstimate& e);
Json to_json(const RefutationReport& r);
Json to_json(const SensitivitySurface& s);

}  // namespace causal

#endif
