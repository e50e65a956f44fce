#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dynmatch/error.hpp"
#include "dynmatch/rational.hpp"

namespace dynmatch {

// Agents are referred to by dense indices into the market's firm/worker
// lists, which are sorted lexicographically by identifier. Index -1 stands
// for "self" (unmatched / no offer / reject all) throughout.
constexpr int kSelf = -1;

enum class Side { Firm, Worker };

struct AgentRef {
  Side side;
  int index;

  friend bool operator==(const AgentRef&, const AgentRef&) = default;
};

enum class CommitmentRegime { TwoSided, NoCommitment, FirmOnly, WorkerOnly };

const char* regime_name(CommitmentRegime regime);

/// Unvalidated market data, as produced by a parser or built in code.
/// Utility entries not listed default to -1 (unacceptable partner).
struct RawMarket {
  std::vector<std::string> firms;
  std::vector<std::string> workers;
  // (agent id, partner id, utility)
  std::vector<std::tuple<std::string, std::string, Rational>> firm_utils;
  std::vector<std::tuple<std::string, std::string, Rational>> worker_utils;
  std::vector<std::pair<std::string, Rational>> discounts;
};

class Matching;

/// A validated one-to-one market: agents, utility tables and discount
/// factors. Immutable after construction.
class MarketInstance {
 public:
  int num_firms() const { return static_cast<int>(firm_ids_.size()); }
  int num_workers() const { return static_cast<int>(worker_ids_.size()); }

  const std::string& firm_id(int f) const { return firm_ids_[f]; }
  const std::string& worker_id(int w) const { return worker_ids_[w]; }
  const std::vector<std::string>& firm_ids() const { return firm_ids_; }
  const std::vector<std::string>& worker_ids() const { return worker_ids_; }

  /// Index lookup by identifier; throws UnknownAgentReference.
  int firm_index(const std::string& id) const;
  int worker_index(const std::string& id) const;

  /// u_f(w) and u_w(f).
  const Rational& firm_utility(int f, int w) const { return firm_util_[f][w]; }
  const Rational& worker_utility(int w, int f) const { return worker_util_[w][f]; }

  /// Utility of the partner assigned under mu (0 when unmatched).
  Rational firm_value(int f, const Matching& mu) const;
  Rational worker_value(int w, const Matching& mu) const;
  Rational agent_value(AgentRef a, const Matching& mu) const;

  const Rational& firm_discount(int f) const { return firm_delta_[f]; }
  const Rational& worker_discount(int w) const { return worker_delta_[w]; }
  const Rational& agent_discount(AgentRef a) const {
    return a.side == Side::Firm ? firm_delta_[a.index] : worker_delta_[a.index];
  }

  std::string agent_id(AgentRef a) const {
    return a.side == Side::Firm ? firm_id(a.index) : worker_id(a.index);
  }

  bool acceptable_to_firm(int f, int w) const { return firm_util_[f][w] > 0; }
  bool acceptable_to_worker(int w, int f) const { return worker_util_[w][f] > 0; }

  /// Markets compare equal iff identifiers, utilities and discounts agree.
  friend bool operator==(const MarketInstance&, const MarketInstance&) = default;

  /// Returns a copy with every worker (resp. firm) discount replaced.
  MarketInstance with_worker_discounts(const std::vector<Rational>& deltas) const;
  MarketInstance with_firm_discounts(const std::vector<Rational>& deltas) const;
  MarketInstance with_all_discounts(const Rational& delta) const;

 private:
  friend MarketInstance validate_market(const RawMarket& raw);

  std::vector<std::string> firm_ids_;
  std::vector<std::string> worker_ids_;
  std::vector<std::vector<Rational>> firm_util_;    // [f][w]
  std::vector<std::vector<Rational>> worker_util_;  // [w][f]
  std::vector<Rational> firm_delta_;
  std::vector<Rational> worker_delta_;
};

/// Validates raw market data against the model's assumptions:
///   - identifiers unique, partners resolvable (UnknownAgentReference)
///   - no utility equals 0 (ZeroUtility)
///   - acceptable (positive) utilities pairwise distinct per agent
///     (DuplicateUtility); ties among negative utilities are allowed since
///     unacceptable partners are never compared against each other
///   - discount factors strictly inside (0,1) (DiscountOutOfRange)
/// Agents are reindexed in lexicographic identifier order.
MarketInstance validate_market(const RawMarket& raw);

/// A partial one-to-one matching between the firms and workers of a market.
/// Immutable value type.
class Matching {
 public:
  Matching() = default;

  static Matching empty(const MarketInstance& m);
  static Matching empty(int num_firms, int num_workers);

  /// Builds a matching from (firm, worker) index pairs; rejects repeated
  /// agents and out-of-range indices.
  static Matching from_pairs(const MarketInstance& m,
                             const std::vector<std::pair<int, int>>& pairs);

  /// Same, from identifier pairs.
  static Matching from_ids(
      const MarketInstance& m,
      const std::vector<std::pair<std::string, std::string>>& pairs);

  int num_firms() const { return static_cast<int>(firm_to_worker_.size()); }
  int num_workers() const { return static_cast<int>(worker_to_firm_.size()); }

  /// Partner of firm f (kSelf when unmatched); symmetric for workers.
  int firm_partner(int f) const { return firm_to_worker_[f]; }
  int worker_partner(int w) const { return worker_to_firm_[w]; }

  bool firm_matched(int f) const { return firm_to_worker_[f] != kSelf; }
  bool worker_matched(int w) const { return worker_to_firm_[w] != kSelf; }
  bool agent_matched(AgentRef a) const {
    return a.side == Side::Firm ? firm_matched(a.index) : worker_matched(a.index);
  }

  /// Pairs in ascending firm order.
  std::vector<std::pair<int, int>> pairs() const;
  int pair_count() const;

  bool compatible_with(const MarketInstance& m) const {
    return num_firms() == m.num_firms() && num_workers() == m.num_workers();
  }

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;

  /// Canonical literal: "(f1,w1)(f2,w2)" in firm order, or "empty".
  std::string to_string(const MarketInstance& m) const;

 private:
  std::vector<int> firm_to_worker_;
  std::vector<int> worker_to_firm_;
};

/// Requires mu to belong to m; throws UnknownAgentReference otherwise.
void require_compatible(const MarketInstance& m, const Matching& mu);

/// True iff every matched agent gets non-negative utility from its partner.
bool is_individually_rational(const MarketInstance& m, const Matching& mu);

/// All pairs (f, w) with u_f(w) > u_f(mu(f)) and u_w(f) > u_w(mu(w)),
/// in lexicographic (firm, worker) index order.
std::vector<std::pair<int, int>> blocking_pairs(const MarketInstance& m,
                                                const Matching& mu);

/// Individually rational and no blocking pair.
bool is_stable(const MarketInstance& m, const Matching& mu);

struct ActiveSets {
  std::vector<int> inactive_firms;    // F_c(prev), ascending
  std::vector<int> inactive_workers;  // W_c(prev), ascending

  friend bool operator==(const ActiveSets&, const ActiveSets&) = default;
};

/// The inactive sides for period t given the previous matching:
/// TwoSided locks all matched agents, FirmOnly only matched firms,
/// WorkerOnly only matched workers, NoCommitment nobody.
ActiveSets active_sets(const MarketInstance& m, CommitmentRegime regime,
                       const Matching& prev);

bool firm_inactive(CommitmentRegime regime, const Matching& prev, int f);
bool worker_inactive(CommitmentRegime regime, const Matching& prev, int w);

}  // namespace dynmatch
