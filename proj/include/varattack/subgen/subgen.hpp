#pragma once

#include <span>
#include <string>
#include <vector>

#include "varattack/core/config.hpp"
#include "varattack/core/types.hpp"
#include "varattack/gateway/gateway.hpp"
#include "varattack/lang/rename.hpp"

namespace varattack::subgen {

/// Union of raw lists (max score per name), minus the variable's own name
/// and anything is_valid_substitute rejects, sorted by descending score then
/// name, cut to top_k.
std::vector<SubstituteCandidate> filter_candidates(
    const std::string& variable, std::span<const std::vector<SubstituteCandidate>> raw_lists,
    const lang::NameSet& identifiers, Language language, int top_k);

/// One MLM query per occurrence of every variable.
SubstituteSet generate_substitutes(const lang::Renamer& renamer, const AttackConfig& cfg,
                                   gateway::Gateway& gw);

SubstituteSet generate_substitutes(const SourceUnit& src, std::span<const Identifier> vars,
                                   const AttackConfig& cfg, gateway::Gateway& gw);

}  // namespace varattack::subgen
