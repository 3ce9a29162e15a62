#pragma once

// JSON and CSV encodings shared by the CLI. Decimals carry 9 significant digits.

#include <string>

#include "json.hpp"
#include "qkd3/epbound.hpp"
#include "qkd3/protocol_sim.hpp"

namespace qkd3 {

/// Rounds to 9 significant digits; non-finite values pass through.
double round9(double x);
/// "%.9g" rendering used for CSV cells.
std::string format9(double x);

void to_json(nlohmann::json& j, const ProtocolStats& s);
void to_json(nlohmann::json& j, const AzumaReport& r);
void to_json(nlohmann::json& j, const BoundResult& r);

}  // namespace qkd3
