#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dynmatch/market.hpp"

namespace dynmatch {

/// Brute-force enumeration refuses markets beyond this side length.
constexpr int kEnumerationGuard = 7;

/// Deferred acceptance with the given proposing side. Proposers work down
/// their acceptable partners in descending utility order; receivers hold the
/// best acceptable offer. With strict utilities the outcome is the
/// proposing-side-optimal stable matching.
Matching deferred_acceptance(const MarketInstance& m, Side proposing_side);

/// Visits every partial one-to-one matching exactly once, in a fixed
/// deterministic order (firm by firm; self first, then workers ascending).
/// Throws InstanceTooLarge beyond the enumeration guard.
void for_each_matching(const MarketInstance& m,
                       const std::function<void(const Matching&)>& visit);

std::vector<Matching> all_matchings(const MarketInstance& m);

/// Number of partial one-to-one matchings: sum over k of C(nf,k)*C(nw,k)*k!.
long long count_all_matchings(int num_firms, int num_workers);

struct StableSetReport {
  long long all_matchings_count = 0;
  std::vector<Matching> stable;  // in enumeration order
  Matching firm_optimal;
  Matching worker_optimal;
};

/// Enumerates the stable set by brute force and locates the two side-optimal
/// matchings. Throws InternalLatticeViolation if no simultaneous optimum
/// exists (impossible for a valid market; indicates a bug upstream).
StableSetReport enumerate_stable_set(const MarketInstance& m);

struct SingleAgentCheck {
  bool holds = true;
  // Populated when holds is false: two stable matchings that disagree on an
  // agent's matched status.
  std::optional<Matching> first;
  std::optional<Matching> second;
  std::optional<AgentRef> agent;
};

/// Verifies that the set of unmatched agents is identical across all stable
/// matchings. Failure signals an implementation bug, since this is a theorem.
SingleAgentCheck check_single_agent_property(const MarketInstance& m);

}  // namespace dynmatch
