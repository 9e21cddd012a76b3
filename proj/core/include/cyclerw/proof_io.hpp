#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "cyclerw/prover.hpp"

namespace cyclerw {

enum class ProofFormat { Human, Json };

// Symbols are written by name, so a proof can be checked against a freshly
// parsed copy of the problem.
nlohmann::json proof_to_json(const Srs& problem, const ProofObject& proof);
// Throws std::runtime_error on malformed input or unknown symbols.
ProofObject proof_from_json(const nlohmann::json& j, const Srs& problem);

std::string print_proof(const Srs& problem, const ProofObject& proof, ProofFormat format);

}  // namespace cyclerw
