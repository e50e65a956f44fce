#include "dynmatch/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "dynmatch/matching_algorithms.hpp"
#include "dynmatch/restabilization.hpp"

namespace dynmatch {

namespace {

constexpr long double kInconclusiveBand = 1e-9L;

// Simulates conforming play from arbitrary states, caching traces keyed on
// (matching, rejected sets when the profile uses them).
class ContinuationCache {
 public:
  ContinuationCache(const MarketInstance& m, CommitmentRegime regime,
                    const StationaryProfile& profile)
      : m_(m), regime_(regime), profile_(profile) {}

  const Trace& trace_from(const Matching& start, const RejectedSets& rejected) {
    std::vector<int> key;
    key.reserve(m_.num_workers() + m_.num_firms());
    for (int w = 0; w < m_.num_workers(); ++w) key.push_back(start.worker_partner(w));
    if (profile_.uses_rejected_sets()) {
      for (int f = 0; f < m_.num_firms(); ++f) {
        int bits = 0;
        for (int w = 0; w < m_.num_workers(); ++w)
          if (rejected[f][w]) bits |= 1 << w;
        key.push_back(bits);
      }
    }
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(std::move(key),
                          play_from(m_, regime_, profile_, start, 0, &rejected))
               .first;
    }
    return it->second;
  }

  Rational value(const Trace& trace, AgentRef agent) {
    return discounted_payoff(m_, trace, agent).value;
  }

 private:
  const MarketInstance& m_;
  CommitmentRegime regime_;
  const StationaryProfile& profile_;
  std::map<std::vector<int>, Trace> cache_;
};

std::vector<int> offers_to_worker(const MarketInstance& m, const OfferProfile& offers,
                                  int w) {
  std::vector<int> out;
  for (int f = 0; f < m.num_firms(); ++f)
    if (offers.offer[f] == w) out.push_back(f);
  return out;
}

// Deviate once at `state`, conform afterwards; value measured from the
// deviation period.
Rational deviation_value(const MarketInstance& m, CommitmentRegime regime,
                         const StationaryProfile& profile, ContinuationCache& cache,
                         const Matching& state, AgentRef agent, int action) {
  RejectedSets rejected = fresh_rejected_sets(m);
  SimState st{m, regime, state, rejected};
  StepResult dev = step_period(st, profile, ActionOverride{agent, action});
  update_rejected_sets(m, dev, rejected);
  const Trace& cont = cache.trace_from(dev.next, rejected);
  return m.agent_value(agent, dev.next) +
         m.agent_discount(agent) * cache.value(cont, agent);
}

std::vector<DeviationWitness> check_agent(const MarketInstance& m, CommitmentRegime regime,
                                          const StationaryProfile& profile,
                                          ContinuationCache& cache, AgentRef agent,
                                          const Matching& state) {
  std::vector<DeviationWitness> witnesses;
  RejectedSets fresh = fresh_rejected_sets(m);
  SimState st{m, regime, state, fresh};

  const Trace& on_path_trace = cache.trace_from(state, fresh);
  const Rational on_path = cache.value(on_path_trace, agent);

  int prescribed;
  std::vector<int> actions;
  std::vector<int> offer_set;
  if (agent.side == Side::Firm) {
    prescribed = profile.firm_offer(st, agent.index);
    actions = feasible_offers(m, regime, state, agent.index);
  } else {
    StepResult on = step_period(st, profile);
    offer_set = offers_to_worker(m, on.offers, agent.index);
    prescribed = profile.worker_response(st, agent.index, offer_set);
    actions = admissible_responses(m, regime, state, agent.index, offer_set);
  }

  for (int action : actions) {
    if (action == prescribed) continue;
    Rational value = deviation_value(m, regime, profile, cache, state, agent, action);
    if (value > on_path) {
      DeviationWitness w;
      w.agent = agent;
      w.state = state;
      w.offer_set = offer_set;
      w.prescribed_action = prescribed;
      w.deviating_action = action;
      w.payoff_on_path = on_path;
      w.payoff_deviating = value;
      w.regime = regime;
      witnesses.push_back(std::move(w));
    }
  }
  return witnesses;
}

std::vector<Matching> state_space(const MarketInstance& m, CommitmentRegime regime) {
  switch (regime) {
    case CommitmentRegime::NoCommitment:
      return {Matching::empty(m)};
    case CommitmentRegime::FirmOnly:
    case CommitmentRegime::WorkerOnly:
      return all_matchings(m);
    case CommitmentRegime::TwoSided: {
      // One representative per unmatched-set class, first in enumeration
      // order; locked agents have singleton action sets, and active agents
      // face identical continuations across a class.
      std::vector<Matching> reps;
      std::map<std::pair<int, int>, bool> seen;
      for (const Matching& mu : all_matchings(m)) {
        int fbits = 0, wbits = 0;
        for (int f = 0; f < m.num_firms(); ++f)
          if (mu.firm_matched(f)) fbits |= 1 << f;
        for (int w = 0; w < m.num_workers(); ++w)
          if (mu.worker_matched(w)) wbits |= 1 << w;
        if (!seen.emplace(std::make_pair(fbits, wbits), true).second) continue;
        reps.push_back(mu);
      }
      return reps;
    }
  }
  return {};
}

void sort_witnesses(std::vector<DeviationWitness>& witnesses) {
  std::sort(witnesses.begin(), witnesses.end(),
            [](const DeviationWitness& a, const DeviationWitness& b) {
              auto keya = std::tuple(a.agent.side, a.agent.index, a.resign_and_wait,
                                     a.deviating_action);
              auto keyb = std::tuple(b.agent.side, b.agent.index, b.resign_and_wait,
                                     b.deviating_action);
              if (keya != keyb) return keya < keyb;
              return a.state < b.state;
            });
}

}  // namespace

std::vector<DeviationWitness> one_shot_deviations(const MarketInstance& m,
                                                  CommitmentRegime regime,
                                                  const StationaryProfile& profile,
                                                  AgentRef agent, const Matching& state) {
  require_compatible(m, state);
  ContinuationCache cache(m, regime, profile);
  return check_agent(m, regime, profile, cache, agent, state);
}

EquilibriumReport verify_equilibrium(const MarketInstance& m, CommitmentRegime regime,
                                     const StationaryProfile& profile) {
  EquilibriumReport report;
  report.profile_descriptor = profile.descriptor();
  report.regime = regime;
  report.agents_checked = m.num_firms() + m.num_workers();

  ContinuationCache cache(m, regime, profile);
  for (const Matching& state : state_space(m, regime)) {
    ++report.states_checked;
    for (int f = 0; f < m.num_firms(); ++f) {
      auto w = check_agent(m, regime, profile, cache, AgentRef{Side::Firm, f}, state);
      report.witnesses.insert(report.witnesses.end(), w.begin(), w.end());
    }
    for (int w = 0; w < m.num_workers(); ++w) {
      auto ws = check_agent(m, regime, profile, cache, AgentRef{Side::Worker, w}, state);
      report.witnesses.insert(report.witnesses.end(), ws.begin(), ws.end());
    }
  }

  // The resignation deviation spans many periods (reject, wait, accept), so
  // the one-shot replay cannot represent it under the flexible firm profile;
  // it is evaluated in closed form at the profile's target matching.
  const auto* canonical = dynamic_cast<const CanonicalProfile*>(&profile);
  if (regime == CommitmentRegime::FirmOnly && canonical != nullptr &&
      canonical->kind() == ProfileKind::FirmCommitFlexible) {
    const Matching& target = canonical->target();
    for (int w = 0; w < m.num_workers(); ++w) {
      if (!target.worker_matched(w)) continue;
      DeviationComparison cmp =
          resign_and_wait_comparison(m, target, w, m.worker_discount(w));
      if (cmp.profitable) {
        DeviationWitness witness;
        witness.agent = AgentRef{Side::Worker, w};
        witness.state = target;
        witness.offer_set = {target.worker_partner(w)};
        witness.prescribed_action = target.worker_partner(w);
        witness.deviating_action = kSelf;
        witness.payoff_on_path = cmp.stay;
        witness.payoff_deviating = cmp.deviate;
        witness.regime = regime;
        witness.resign_and_wait = true;
        report.witnesses.push_back(std::move(witness));
      }
    }
  }

  sort_witnesses(report.witnesses);
  report.equilibrium = report.witnesses.empty();
  return report;
}

std::pair<Rational, Rational> replay_witness(const MarketInstance& m,
                                             CommitmentRegime regime,
                                             const StationaryProfile& profile,
                                             const DeviationWitness& witness) {
  if (witness.resign_and_wait) {
    DeviationComparison cmp = resign_and_wait_comparison(
        m, witness.state, witness.agent.index, m.worker_discount(witness.agent.index));
    return {cmp.stay, cmp.deviate};
  }
  ContinuationCache cache(m, regime, profile);
  RejectedSets fresh = fresh_rejected_sets(m);
  Rational on_path = cache.value(cache.trace_from(witness.state, fresh), witness.agent);
  Rational deviating = deviation_value(m, regime, profile, cache, witness.state,
                                       witness.agent, witness.deviating_action);
  return {on_path, deviating};
}

namespace {

std::string action_name(const MarketInstance& m, AgentRef agent, int action) {
  if (agent.side == Side::Firm) {
    return action == kSelf ? m.firm_id(agent.index) : m.worker_id(action);
  }
  return action == kSelf ? m.worker_id(agent.index) : m.firm_id(action);
}

}  // namespace

std::string witness_to_text(const MarketInstance& m, const DeviationWitness& w) {
  std::ostringstream os;
  os << "witness | agent=" << m.agent_id(w.agent) << " | state=" << w.state.to_string(m);
  if (w.agent.side == Side::Worker && !w.resign_and_wait) {
    os << " | offers={";
    for (std::size_t i = 0; i < w.offer_set.size(); ++i) {
      if (i) os << ',';
      os << m.firm_id(w.offer_set[i]);
    }
    os << '}';
  }
  os << " | prescribed=" << action_name(m, w.agent, w.prescribed_action);
  os << " | deviation="
     << (w.resign_and_wait ? std::string("resign-and-wait")
                           : action_name(m, w.agent, w.deviating_action));
  os << " | on_path=" << rational_to_string(w.payoff_on_path) << " ("
     << rational_to_decimal(w.payoff_on_path) << ")";
  os << " | deviating=" << rational_to_string(w.payoff_deviating) << " ("
     << rational_to_decimal(w.payoff_deviating) << ")";
  return os.str();
}

std::string report_to_text(const MarketInstance& m, const EquilibriumReport& report) {
  std::ostringstream os;
  os << "profile: " << report.profile_descriptor << '\n';
  os << "regime: " << regime_name(report.regime) << '\n';
  os << "states_checked: " << report.states_checked << '\n';
  os << "agents_checked: " << report.agents_checked << '\n';
  os << "witnesses: " << report.witnesses.size() << '\n';
  for (const auto& w : report.witnesses) os << witness_to_text(m, w) << '\n';
  os << "verdict: " << (report.equilibrium ? "equilibrium" : "not-equilibrium") << '\n';
  return os.str();
}

DeviationComparison resign_and_wait_comparison(const MarketInstance& m, const Matching& mu,
                                               int w, const Rational& delta) {
  if (!is_stable(m, mu))
    throw Error(Errc::NotStable, "comparison is defined for stable matchings");
  DeviationComparison cmp;
  const Rational u_stay = m.worker_value(w, mu);
  cmp.stay = u_stay / (1 - delta);
  cmp.deviate = 0;
  if (mu.worker_matched(w)) {
    if (auto out = try_restabilize(m, mu, w)) {
      cmp.deviate = rational_pow(delta, out->periods_waited) *
                    m.worker_value(w, out->final) / (1 - delta);
    }
  }
  cmp.profitable = cmp.deviate > cmp.stay;
  cmp.stay_f = to_long_double(cmp.stay);
  cmp.deviate_f = to_long_double(cmp.deviate);
  cmp.exact = true;
  return cmp;
}

DeviationComparison resign_and_wait_comparison(const MarketInstance& m, const Matching& mu,
                                               int w, long double delta) {
  if (!is_stable(m, mu))
    throw Error(Errc::NotStable, "comparison is defined for stable matchings");
  DeviationComparison cmp;
  cmp.exact = false;
  cmp.stay_f = to_long_double(m.worker_value(w, mu)) / (1 - delta);
  cmp.deviate_f = 0;
  if (mu.worker_matched(w)) {
    if (auto out = try_restabilize(m, mu, w)) {
      cmp.deviate_f = std::pow(delta, static_cast<long double>(out->periods_waited)) *
                      to_long_double(m.worker_value(w, out->final)) / (1 - delta);
    }
  }
  cmp.profitable = cmp.deviate_f > cmp.stay_f;
  cmp.inconclusive = std::fabs(cmp.deviate_f - cmp.stay_f) < kInconclusiveBand;
  return cmp;
}

namespace {

void require_period(int deviation_period) {
  if (deviation_period < 1)
    throw Error(Errc::UsageError, "deviation period must be >= 1");
}

}  // namespace

DeviationComparison firm_wait_comparison(const MarketInstance& m, const Matching& mu,
                                         int f, const Rational& delta,
                                         int deviation_period) {
  if (!is_stable(m, mu))
    throw Error(Errc::NotStable, "comparison is defined for stable matchings");
  require_period(deviation_period);
  const Rational u = m.firm_value(f, mu);
  const Rational u_opt = m.firm_value(f, deferred_acceptance(m, Side::Firm));

  DeviationComparison cmp;
  cmp.stay = u / (1 - delta);
  cmp.deviate = u * (1 - rational_pow(delta, deviation_period - 1)) / (1 - delta) +
                rational_pow(delta, deviation_period) * u_opt / (1 - delta);
  cmp.profitable = cmp.deviate > cmp.stay;
  cmp.stay_f = to_long_double(cmp.stay);
  cmp.deviate_f = to_long_double(cmp.deviate);
  cmp.exact = true;
  cmp.agrees_with_threshold = cmp.profitable == (delta > firm_threshold(m, mu, f));
  return cmp;
}

DeviationComparison firm_wait_comparison(const MarketInstance& m, const Matching& mu,
                                         int f, long double delta, int deviation_period) {
  if (!is_stable(m, mu))
    throw Error(Errc::NotStable, "comparison is defined for stable matchings");
  require_period(deviation_period);
  const long double u = to_long_double(m.firm_value(f, mu));
  const long double u_opt =
      to_long_double(m.firm_value(f, deferred_acceptance(m, Side::Firm)));

  DeviationComparison cmp;
  cmp.exact = false;
  const long double tilde = static_cast<long double>(deviation_period);
  cmp.stay_f = u / (1 - delta);
  cmp.deviate_f = u * (1 - std::pow(delta, tilde - 1)) / (1 - delta) +
                  std::pow(delta, tilde) * u_opt / (1 - delta);
  cmp.profitable = cmp.deviate_f > cmp.stay_f;
  cmp.inconclusive = std::fabs(cmp.deviate_f - cmp.stay_f) < kInconclusiveBand;
  cmp.agrees_with_threshold =
      cmp.profitable == (delta > to_long_double(firm_threshold(m, mu, f)));
  return cmp;
}

bool threshold_boundary_test(const MarketInstance& m, const Matching& mu, AgentRef agent) {
  if (agent.side == Side::Worker) {
    const long double c = worker_threshold(m, mu, agent.index);
    if (c >= 1.0L) throw Error(Errc::NoBoundary, "worker threshold is 1, nothing to cross");
    long double lo = std::max(c - 1e-3L, c / 2);
    long double hi = std::min(c + 1e-3L, (1 + c) / 2);
    DeviationComparison below = resign_and_wait_comparison(m, mu, agent.index, lo);
    DeviationComparison above = resign_and_wait_comparison(m, mu, agent.index, hi);
    return !below.profitable && above.profitable;
  }

  const Rational c = firm_threshold(m, mu, agent.index);
  if (c == 1) throw Error(Errc::NoBoundary, "firm threshold is 1, nothing to cross");
  const Rational step(1, 1000);
  Rational lo = c - step;
  if (lo <= 0) lo = c / 2;
  Rational hi = c + step;
  if (hi >= 1) hi = (1 + c) / 2;
  bool below_ok = true;
  bool above_profitable = false;
  for (int t = 1; t <= default_max_periods(m); ++t) {
    below_ok = below_ok && !firm_wait_comparison(m, mu, agent.index, lo, t).profitable;
    above_profitable =
        above_profitable || firm_wait_comparison(m, mu, agent.index, hi, t).profitable;
  }
  return below_ok && above_profitable;
}

}  // namespace dynmatch
