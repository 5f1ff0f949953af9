#pragma once

#include <string>

#include "qbc/protocol.hpp"

namespace qbc {

// Audit/replay serialization. Top-level field order and names are fixed:
// params, bob_secret, evidence, unveil, verdict, round_seed.
std::string transcript_to_json(const Transcript& transcript);
Transcript transcript_from_json(const std::string& text);

}  // namespace qbc
