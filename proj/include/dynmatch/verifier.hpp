#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dynmatch/game.hpp"
#include "dynmatch/strategies.hpp"

namespace dynmatch {

/// A profitable unilateral deviation: conclusive evidence that the profile is
/// not a stationary equilibrium.
struct DeviationWitness {
  AgentRef agent;
  Matching state;              // previous matching entering the deviation period
  std::vector<int> offer_set;  // workers only: firms whose offers w faced
  int prescribed_action = kSelf;
  int deviating_action = kSelf;
  Rational payoff_on_path;
  Rational payoff_deviating;
  CommitmentRegime regime = CommitmentRegime::NoCommitment;
  // Multi-period resignation deviation, evaluated in closed form rather than
  // by a one-shot replay; deviating_action is meaningless when set.
  bool resign_and_wait = false;
};

struct EquilibriumReport {
  std::string profile_descriptor;
  CommitmentRegime regime = CommitmentRegime::NoCommitment;
  bool equilibrium = false;
  std::vector<DeviationWitness> witnesses;  // empty iff equilibrium
  long long states_checked = 0;
  long long agents_checked = 0;
};

/// All profitable one-period deviations for one agent at one state: every
/// feasible action is tried once, with play reverting to the profile
/// afterwards and everyone else conforming throughout. Payoffs are exact.
std::vector<DeviationWitness> one_shot_deviations(const MarketInstance& m,
                                                  CommitmentRegime regime,
                                                  const StationaryProfile& profile,
                                                  AgentRef agent,
                                                  const Matching& state);

/// One-shot deviation checks for every agent over the regime's state space
/// (NoCommitment: the single class; one-sided: every matching; TwoSided: one
/// representative per unmatched-set class). Under firm commitment with the
/// flexible firm profile, additionally runs the closed-form resign-and-wait
/// deviation for every matched worker.
EquilibriumReport verify_equilibrium(const MarketInstance& m, CommitmentRegime regime,
                                     const StationaryProfile& profile);

/// Recomputes a witness's two payoffs from scratch through the game engine
/// (or the closed form, for resign-and-wait witnesses).
std::pair<Rational, Rational> replay_witness(const MarketInstance& m,
                                             CommitmentRegime regime,
                                             const StationaryProfile& profile,
                                             const DeviationWitness& witness);

std::string witness_to_text(const MarketInstance& m, const DeviationWitness& w);
std::string report_to_text(const MarketInstance& m, const EquilibriumReport& report);

/// Payoff comparison for a deviation that trades the current position for a
/// better one later. Exact when built from a rational discount factor; the
/// floating-point path flags verdicts within 1e-9 of equality inconclusive.
struct DeviationComparison {
  Rational stay;     // exact path only
  Rational deviate;  // exact path only
  long double stay_f = 0;
  long double deviate_f = 0;
  bool profitable = false;
  bool exact = true;
  bool inconclusive = false;
  // Firm comparisons: whether the direct verdict matches delta > c^f.
  bool agrees_with_threshold = true;
};

/// Resign in period 1, earn nothing for k(w) periods, then hold nu(w)
/// forever, against staying at mu(w) throughout. When w cannot improve the
/// deviating payoff is 0 and the deviation is never profitable.
DeviationComparison resign_and_wait_comparison(const MarketInstance& m, const Matching& mu,
                                               int w, const Rational& delta);
DeviationComparison resign_and_wait_comparison(const MarketInstance& m, const Matching& mu,
                                               int w, long double delta);

/// Withhold the offer in period t~ and hold the firm-optimal partner from
/// t~+1 on, against staying at mu(f) throughout.
DeviationComparison firm_wait_comparison(const MarketInstance& m, const Matching& mu,
                                         int f, const Rational& delta, int deviation_period);
DeviationComparison firm_wait_comparison(const MarketInstance& m, const Matching& mu,
                                         int f, long double delta, int deviation_period);

/// True iff the relevant comparison flips from unprofitable to profitable
/// across the agent's threshold (tested at distance 1e-3, clamped inside
/// (0,1)). Throws NoBoundary when the threshold is 1.
bool threshold_boundary_test(const MarketInstance& m, const Matching& mu, AgentRef agent);

}  // namespace dynmatch
