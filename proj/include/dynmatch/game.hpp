#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dynmatch/market.hpp"

namespace dynmatch {

/// First-stage actions: one offer per firm, o_f = kSelf meaning no offer.
struct OfferProfile {
  std::vector<int> offer;  // [f] -> worker index or kSelf

  friend bool operator==(const OfferProfile&, const OfferProfile&) = default;
};

/// Second-stage actions: one response per worker, r_w = kSelf rejecting all.
struct ResponseProfile {
  std::vector<int> response;  // [w] -> firm index or kSelf

  friend bool operator==(const ResponseProfile&, const ResponseProfile&) = default;
};

struct TracePeriod {
  OfferProfile offers;
  ResponseProfile responses;
  Matching matching;  // realized mu^t
};

/// Realized play with a detected eventually-constant tail.
struct Trace {
  Matching start;                    // matching before the first recorded period
  std::vector<TracePeriod> periods;  // periods[i] is period i+1 of the trace
  int tail_start = 1;                // 1-based period from which play is constant

  const Matching& tail_matching() const { return periods[tail_start - 1].matching; }
  const Matching& at(int period) const {
    return period >= tail_start ? tail_matching() : periods[period - 1].matching;
  }
};

/// Offers available to firm f in the period following prev: an inactive firm
/// must renew its current employee, an active firm may target any worker or
/// abstain. Sorted: kSelf first, then workers ascending.
std::vector<int> feasible_offers(const MarketInstance& m, CommitmentRegime regime,
                                 const Matching& prev, int f);

/// Responses available to worker w given the firms that offered to her.
/// Active: any received offer or reject-all. Inactive: the renewal offer when
/// her employer extended one; otherwise only kSelf (released by the firm).
std::vector<int> admissible_responses(const MarketInstance& m, CommitmentRegime regime,
                                      const Matching& prev, int w,
                                      const std::vector<int>& received);

/// Realizes one period: validates both action profiles against prev (throws
/// InfeasibleOffer / InfeasibleResponse naming the agent) and forms the
/// matching mu with mu(w) = r_w.
Matching play_period(const MarketInstance& m, CommitmentRegime regime,
                     const Matching& prev, const OfferProfile& offers,
                     const ResponseProfile& responses);

/// Rejections each firm accumulated since it was last matched; consulted only
/// by profiles that declare uses_rejected_sets().
using RejectedSets = std::vector<std::vector<bool>>;  // [f][w]

RejectedSets fresh_rejected_sets(const MarketInstance& m);

/// Everything a stationary rule may condition on.
struct SimState {
  const MarketInstance& market;
  CommitmentRegime regime;
  const Matching& prev;
  const RejectedSets& rejected;
};

/// A stationary strategy profile: actions may depend only on the
/// continuation-equivalence class of prev (for workers, additionally the
/// offer set), plus the rejected-set bookkeeping when declared.
class StationaryProfile {
 public:
  virtual ~StationaryProfile() = default;

  /// Offer for firm f; must lie in feasible_offers for the state.
  virtual int firm_offer(const SimState& state, int f) const = 0;

  /// Response for worker w to the given ascending offer list; must be
  /// admissible for the state.
  virtual int worker_response(const SimState& state, int w,
                              const std::vector<int>& offers) const = 0;

  virtual bool uses_rejected_sets() const { return false; }

  virtual std::string descriptor() const = 0;
};

/// Override one agent's action for a single period.
struct ActionOverride {
  AgentRef agent;
  int action;
};

struct StepResult {
  OfferProfile offers;
  ResponseProfile responses;
  Matching next;
};

/// Plays one period under the profile, optionally overriding one agent.
/// precomputed_offers, when given (and no firm deviates), skips re-querying
/// the firm rules.
StepResult step_period(const SimState& state, const StationaryProfile& profile,
                       const std::optional<ActionOverride>& deviation = std::nullopt,
                       const OfferProfile* precomputed_offers = nullptr);

/// Folds one period's rejections into the per-firm sets (cleared on match).
void update_rejected_sets(const MarketInstance& m, const StepResult& result,
                          RejectedSets& rejected);

int default_max_periods(const MarketInstance& m);

/// Runs the profile from `start` until the continuation state (the ~-class of
/// the previous matching plus prescribed offers, and rejected sets when used)
/// recurs. Throws NoStationaryTail when play cycles without settling or no
/// recurrence appears within max_periods (diagnostic trace in the message).
Trace play_from(const MarketInstance& m, CommitmentRegime regime,
                const StationaryProfile& profile, const Matching& start,
                int max_periods = 0, const RejectedSets* initial_rejected = nullptr);

/// The dynamic game proper: play_from the empty matching.
Trace simulate(const MarketInstance& m, CommitmentRegime regime,
               const StationaryProfile& profile, int max_periods = 0);

struct DiscountedPayoff {
  AgentRef agent;
  Rational value;
};

/// Exact discounted payoff of the trace for one agent, tail resolved as a
/// geometric series.
DiscountedPayoff discounted_payoff(const MarketInstance& m, const Trace& trace,
                                   AgentRef agent);

/// Truncated sum over periods 1..horizon (tail periods repeated), for
/// comparing against the closed form.
Rational discounted_payoff_truncated(const MarketInstance& m, const Trace& trace,
                                     AgentRef agent, int horizon);

/// Line-oriented text form, one period per line:
///   t | f1->w1; f2->f2 | w1->f1; w2->w2 | (f1,w1)
/// followed by "tail | start=T". Grammar documented in the README.
std::string trace_to_text(const MarketInstance& m, const Trace& trace);

}  // namespace dynmatch
