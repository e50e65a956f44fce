#pragma once

#include <cstdint>
#include <string>

#include "dynmatch/market.hpp"

namespace dynmatch {

/// Parses the instance text format:
///   [firms] / [workers]    one identifier per line
///   [firm_utils] / [worker_utils]   lines "agent partner value"
///   [discounts]            lines "agent value"
/// Values are integers, fractions "p/q" or decimals; '#' starts a comment.
/// Pairs not listed default to utility -1 (unacceptable). Errors carry the
/// offending line (and column where it makes sense).
MarketInstance parse_instance(const std::string& text);

/// Canonical text form; parse_instance(serialize_instance(m)) == m.
std::string serialize_instance(const MarketInstance& m);

/// Deterministic random market: utilities are distinct nonzero integers in
/// [-3, 12] per agent, discounts sit on the grid k/100 with k in [6, 94].
MarketInstance generate_market(std::uint64_t seed, int num_firms, int num_workers);

/// Resolves a --mu selector: "firmOpt", "workerOpt", "empty" or a literal
/// "(f1,w1)(f2,w2)".
Matching parse_matching_selector(const MarketInstance& m, const std::string& text);

/// Parses the literal form only.
Matching parse_matching_literal(const MarketInstance& m, const std::string& text);

}  // namespace dynmatch
