#pragma once

#include "../common/json_reader.hpp"
#include "uavlab/faultlab/fault.hpp"

namespace uavlab::campaign {

// Shared by the scenario and campaign-matrix readers.
faultlab::FaultParams parse_fault_params(const JsonNode& n, faultlab::FaultMode mode);
nlohmann::ordered_json fault_params_json(faultlab::FaultMode mode, const faultlab::FaultParams& p);

}  // namespace uavlab::campaign
