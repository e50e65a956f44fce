#include "dynmatch/game.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace dynmatch {

std::vector<int> feasible_offers(const MarketInstance& m, CommitmentRegime regime,
                                 const Matching& prev, int f) {
  require_compatible(m, prev);
  if (firm_inactive(regime, prev, f)) return {prev.firm_partner(f)};
  std::vector<int> out;
  out.reserve(m.num_workers() + 1);
  out.push_back(kSelf);
  for (int w = 0; w < m.num_workers(); ++w) out.push_back(w);
  return out;
}

std::vector<int> admissible_responses(const MarketInstance& m, CommitmentRegime regime,
                                      const Matching& prev, int w,
                                      const std::vector<int>& received) {
  require_compatible(m, prev);
  if (worker_inactive(regime, prev, w)) {
    int employer = prev.worker_partner(w);
    bool renewed = std::find(received.begin(), received.end(), employer) != received.end();
    // Commitment binds while the firm sustains the match; a worker whose
    // employer offered elsewhere sits out this period.
    if (renewed) return {employer};
    return {kSelf};
  }
  std::vector<int> out;
  out.reserve(received.size() + 1);
  out.push_back(kSelf);
  for (int f : received) out.push_back(f);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<std::vector<int>> offers_received(const MarketInstance& m,
                                              const OfferProfile& offers) {
  std::vector<std::vector<int>> received(m.num_workers());
  for (int f = 0; f < m.num_firms(); ++f) {
    int w = offers.offer[f];
    if (w != kSelf) received[w].push_back(f);
  }
  return received;
}

void check_offers(const MarketInstance& m, CommitmentRegime regime,
                  const Matching& prev, const OfferProfile& offers) {
  if (static_cast<int>(offers.offer.size()) != m.num_firms())
    throw Error(Errc::InfeasibleOffer, "offer profile size mismatch");
  for (int f = 0; f < m.num_firms(); ++f) {
    int o = offers.offer[f];
    if (o != kSelf && (o < 0 || o >= m.num_workers()))
      throw Error(Errc::InfeasibleOffer, "firm '" + m.firm_id(f) + "' offers out of range");
    if (firm_inactive(regime, prev, f) && o != prev.firm_partner(f)) {
      throw Error(Errc::InfeasibleOffer,
                  "firm '" + m.firm_id(f) + "' is committed to '" +
                      m.worker_id(prev.firm_partner(f)) + "' and must renew");
    }
  }
}

void check_responses(const MarketInstance& m, CommitmentRegime regime,
                     const Matching& prev, const OfferProfile& offers,
                     const ResponseProfile& responses) {
  if (static_cast<int>(responses.response.size()) != m.num_workers())
    throw Error(Errc::InfeasibleResponse, "response profile size mismatch");
  auto received = offers_received(m, offers);
  for (int w = 0; w < m.num_workers(); ++w) {
    int r = responses.response[w];
    if (r != kSelf &&
        std::find(received[w].begin(), received[w].end(), r) == received[w].end()) {
      throw Error(Errc::InfeasibleResponse,
                  "worker '" + m.worker_id(w) + "' accepts a firm that made no offer");
    }
    if (worker_inactive(regime, prev, w)) {
      int employer = prev.worker_partner(w);
      bool renewed =
          std::find(received[w].begin(), received[w].end(), employer) != received[w].end();
      int required = renewed ? employer : kSelf;
      if (r != required) {
        throw Error(Errc::InfeasibleResponse,
                    "worker '" + m.worker_id(w) + "' is committed to '" +
                        m.firm_id(employer) + "'");
      }
    }
  }
}

}  // namespace

Matching play_period(const MarketInstance& m, CommitmentRegime regime,
                     const Matching& prev, const OfferProfile& offers,
                     const ResponseProfile& responses) {
  require_compatible(m, prev);
  check_offers(m, regime, prev, offers);
  check_responses(m, regime, prev, offers, responses);
  std::vector<std::pair<int, int>> pairs;
  for (int w = 0; w < m.num_workers(); ++w) {
    int f = responses.response[w];
    if (f != kSelf) pairs.emplace_back(f, w);
  }
  return Matching::from_pairs(m, pairs);
}

RejectedSets fresh_rejected_sets(const MarketInstance& m) {
  return RejectedSets(m.num_firms(), std::vector<bool>(m.num_workers(), false));
}

StepResult step_period(const SimState& state, const StationaryProfile& profile,
                       const std::optional<ActionOverride>& deviation,
                       const OfferProfile* precomputed_offers) {
  const MarketInstance& m = state.market;
  StepResult result;
  if (precomputed_offers != nullptr && !deviation) {
    result.offers = *precomputed_offers;
  } else {
    result.offers.offer.resize(m.num_firms());
    for (int f = 0; f < m.num_firms(); ++f) {
      if (deviation && deviation->agent == AgentRef{Side::Firm, f}) {
        result.offers.offer[f] = deviation->action;
      } else {
        result.offers.offer[f] = profile.firm_offer(state, f);
      }
    }
  }
  auto received = offers_received(m, result.offers);
  result.responses.response.resize(m.num_workers());
  for (int w = 0; w < m.num_workers(); ++w) {
    if (deviation && deviation->agent == AgentRef{Side::Worker, w}) {
      result.responses.response[w] = deviation->action;
    } else {
      result.responses.response[w] = profile.worker_response(state, w, received[w]);
    }
  }
  result.next = play_period(m, state.regime, state.prev, result.offers, result.responses);
  return result;
}

void update_rejected_sets(const MarketInstance& m, const StepResult& result,
                          RejectedSets& rejected) {
  for (int f = 0; f < m.num_firms(); ++f) {
    if (result.next.firm_matched(f)) {
      std::fill(rejected[f].begin(), rejected[f].end(), false);
    } else {
      int w = result.offers.offer[f];
      if (w != kSelf && result.responses.response[w] != f) rejected[f][w] = true;
    }
  }
}

int default_max_periods(const MarketInstance& m) {
  return 2 * m.num_firms() * m.num_workers() + 4;
}

namespace {

// State key for recurrence detection: previous matching, rejected sets (only
// when the profile consults them) and the prescribed offers.
std::vector<int> encode_state(const MarketInstance& m, const Matching& prev,
                              const RejectedSets& rejected, bool with_rejected,
                              const OfferProfile& offers) {
  std::vector<int> key;
  key.reserve(m.num_workers() + m.num_firms() * (with_rejected ? 2 : 1));
  for (int w = 0; w < m.num_workers(); ++w) key.push_back(prev.worker_partner(w));
  for (int f = 0; f < m.num_firms(); ++f) key.push_back(offers.offer[f]);
  if (with_rejected) {
    for (int f = 0; f < m.num_firms(); ++f) {
      int bits = 0;
      for (int w = 0; w < m.num_workers(); ++w)
        if (rejected[f][w]) bits |= 1 << w;
      key.push_back(bits);
    }
  }
  return key;
}

}  // namespace

Trace play_from(const MarketInstance& m, CommitmentRegime regime,
                const StationaryProfile& profile, const Matching& start,
                int max_periods, const RejectedSets* initial_rejected) {
  require_compatible(m, start);
  if (max_periods <= 0) max_periods = default_max_periods(m);

  Trace trace;
  trace.start = start;
  Matching prev = start;
  RejectedSets rejected = initial_rejected ? *initial_rejected : fresh_rejected_sets(m);
  const bool with_rejected = profile.uses_rejected_sets();

  std::map<std::vector<int>, int> seen;  // state key -> period index
  for (int t = 1; t <= max_periods + 1; ++t) {
    SimState state{m, regime, prev, rejected};
    // Prescribed offers determine the whole period under the profile, so the
    // recurrence key is (class of prev, offers) plus rejected sets when used.
    OfferProfile offers;
    offers.offer.resize(m.num_firms());
    for (int f = 0; f < m.num_firms(); ++f) offers.offer[f] = profile.firm_offer(state, f);
    auto key = encode_state(m, prev, rejected, with_rejected, offers);

    if (auto it = seen.find(key); it != seen.end()) {
      int first = it->second;  // periods first..t-1 repeat forever
      const Matching& cycle_matching = trace.periods[first - 1].matching;
      for (int p = first; p < t; ++p) {
        if (!(trace.periods[p - 1].matching == cycle_matching)) {
          throw Error(Errc::NoStationaryTail,
                      "play cycles without settling on a constant matching\n" +
                          trace_to_text(m, trace));
        }
      }
      int tail = first;
      while (tail > 1 && trace.periods[tail - 2].matching == cycle_matching) --tail;
      trace.periods.resize(t - 1);
      trace.tail_start = tail;
      return trace;
    }
    seen.emplace(std::move(key), t);

    StepResult result = step_period(state, profile, std::nullopt, &offers);
    update_rejected_sets(m, result, rejected);
    prev = result.next;
    trace.periods.push_back(std::move(result));
  }
  throw Error(Errc::NoStationaryTail,
              "no recurring continuation state within " + std::to_string(max_periods) +
                  " periods\n" + trace_to_text(m, trace));
}

Trace simulate(const MarketInstance& m, CommitmentRegime regime,
               const StationaryProfile& profile, int max_periods) {
  return play_from(m, regime, profile, Matching::empty(m), max_periods);
}

DiscountedPayoff discounted_payoff(const MarketInstance& m, const Trace& trace,
                                   AgentRef agent) {
  const Rational& delta = m.agent_discount(agent);
  Rational value = 0;
  Rational power = 1;  // delta^{t-1}
  for (int t = 1; t < trace.tail_start; ++t) {
    value += power * m.agent_value(agent, trace.periods[t - 1].matching);
    power *= delta;
  }
  value += power * m.agent_value(agent, trace.tail_matching()) / (1 - delta);
  return DiscountedPayoff{agent, value};
}

Rational discounted_payoff_truncated(const MarketInstance& m, const Trace& trace,
                                     AgentRef agent, int horizon) {
  const Rational& delta = m.agent_discount(agent);
  Rational value = 0;
  Rational power = 1;
  for (int t = 1; t <= horizon; ++t) {
    value += power * m.agent_value(agent, trace.at(t));
    power *= delta;
  }
  return value;
}

std::string trace_to_text(const MarketInstance& m, const Trace& trace) {
  std::ostringstream os;
  auto target = [&](int idx, Side side, const std::vector<std::string>& self_ids, int self) {
    return idx == kSelf ? self_ids[self]
                        : (side == Side::Firm ? m.firm_id(idx) : m.worker_id(idx));
  };
  for (std::size_t i = 0; i < trace.periods.size(); ++i) {
    const TracePeriod& p = trace.periods[i];
    os << (i + 1) << " | ";
    for (int f = 0; f < m.num_firms(); ++f) {
      if (f > 0) os << "; ";
      os << m.firm_id(f) << "->" << target(p.offers.offer[f], Side::Worker, m.firm_ids(), f);
    }
    os << " | ";
    for (int w = 0; w < m.num_workers(); ++w) {
      if (w > 0) os << "; ";
      os << m.worker_id(w) << "->"
         << target(p.responses.response[w], Side::Firm, m.worker_ids(), w);
    }
    os << " | ";
    if (p.matching.pair_count() == 0) {
      os << "-";
    } else {
      bool first = true;
      for (auto [f, w] : p.matching.pairs()) {
        if (!first) os << ' ';
        os << '(' << m.firm_id(f) << ',' << m.worker_id(w) << ')';
        first = false;
      }
    }
    os << '\n';
  }
  os << "tail | start=" << trace.tail_start << '\n';
  return os.str();
}

}  // namespace dynmatch
