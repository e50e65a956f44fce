#include "dynmatch/restabilization.hpp"

#include <cmath>

#include "dynmatch/matching_algorithms.hpp"

namespace dynmatch {

std::optional<RestabilizationOutcome> try_restabilize(const MarketInstance& m,
                                                      const Matching& mu, int w) {
  require_compatible(m, mu);
  if (!is_stable(m, mu)) {
    throw Error(Errc::NotStable, "re-stabilization starts from a stable matching");
  }
  if (!mu.worker_matched(w)) {
    throw Error(Errc::WorkerUnmatched,
                "worker '" + m.worker_id(w) + "' has no position to resign from");
  }

  RestabilizationOutcome out;
  out.resigning_worker = w;
  out.initial = mu;
  const Rational reservation = m.worker_value(w, mu);

  // Period 1: renewals go out, w rejects hers, everyone else stays put.
  const int resigned_firm = mu.worker_partner(w);
  std::vector<int> worker_at(m.num_workers());  // current firm per worker
  for (int i = 0; i < m.num_workers(); ++i) worker_at[i] = mu.worker_partner(i);
  worker_at[w] = kSelf;
  std::vector<std::vector<bool>> rejected(m.num_firms(),
                                          std::vector<bool>(m.num_workers(), false));
  rejected[resigned_firm][w] = true;
  out.event_log.push_back({1, resigned_firm, w, false});

  auto firm_of = [&](int worker) { return worker_at[worker]; };
  auto firm_matched_to = [&](int f) {
    for (int i = 0; i < m.num_workers(); ++i)
      if (worker_at[i] == f) return i;
    return kSelf;
  };
  auto willing = [&](int worker, int f) {
    if (worker == w) return m.worker_utility(w, f) > reservation;
    int cur = firm_of(worker);
    const Rational current = cur == kSelf ? Rational(0) : m.worker_utility(worker, cur);
    return m.worker_utility(worker, f) > current;
  };

  const int cap = 4 * m.num_firms() * m.num_workers() + 8;
  for (int period = 2; period <= cap; ++period) {
    // Unmatched firms pick their best candidate, in firm order.
    std::vector<std::pair<int, int>> offers;  // (firm, worker)
    for (int f = 0; f < m.num_firms(); ++f) {
      if (firm_matched_to(f) != kSelf) continue;
      int best = kSelf;
      for (int cand = 0; cand < m.num_workers(); ++cand) {
        if (rejected[f][cand]) continue;
        if (m.firm_utility(f, cand) <= 0) continue;
        if (!willing(cand, f)) continue;
        if (best == kSelf || m.firm_utility(f, cand) > m.firm_utility(f, best)) best = cand;
      }
      if (best != kSelf) offers.emplace_back(f, best);
    }
    if (offers.empty()) return std::nullopt;  // chain halted, w never improves

    // Each offered worker takes the best firm on the table this period.
    std::vector<int> best_offer(m.num_workers(), kSelf);
    for (auto [f, cand] : offers) {
      int& cur = best_offer[cand];
      if (cur == kSelf || m.worker_utility(cand, f) > m.worker_utility(cand, cur)) cur = f;
    }
    for (auto [f, cand] : offers) {
      bool accepted = best_offer[cand] == f;
      out.event_log.push_back({period, f, cand, accepted});
      if (!accepted) rejected[f][cand] = true;
    }
    for (int cand = 0; cand < m.num_workers(); ++cand) {
      int f = best_offer[cand];
      if (f == kSelf) continue;
      int old = firm_of(cand);
      if (old != kSelf) rejected[old][cand] = true;  // renewal turned down
      worker_at[cand] = f;
    }

    if (worker_at[w] != kSelf) {
      // The improving offer arrived and w accepted it.
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < m.num_workers(); ++i)
        if (worker_at[i] != kSelf) pairs.emplace_back(worker_at[i], i);
      out.final = Matching::from_pairs(m, pairs);
      out.periods_waited = period - 1;
      if (!is_stable(m, out.final)) {
        throw Error(Errc::InternalLatticeViolation,
                    "re-stabilization ended at an unstable matching " +
                        out.final.to_string(m));
      }
      return out;
    }
  }
  throw Error(Errc::InternalLatticeViolation, "re-stabilization did not terminate");
}

RestabilizationOutcome restabilize(const MarketInstance& m, const Matching& mu, int w) {
  auto out = try_restabilize(m, mu, w);
  if (!out) {
    throw Error(Errc::NoImprovingOffer,
                "no firm can make a further offer; worker '" + m.worker_id(w) +
                    "' cannot improve on " + mu.to_string(m));
  }
  return *out;
}

long double worker_threshold(const MarketInstance& m, const Matching& mu, int w) {
  require_compatible(m, mu);
  if (!is_stable(m, mu)) {
    throw Error(Errc::NotStable, "threshold is defined for stable matchings");
  }
  if (!mu.worker_matched(w)) return 1.0L;  // nothing to resign from
  auto out = try_restabilize(m, mu, w);
  if (!out) return 1.0L;  // resign-and-wait never pays
  const Rational ratio = m.worker_value(w, mu) / m.worker_value(w, out->final);
  return std::pow(to_long_double(ratio), 1.0L / out->periods_waited);
}

Rational firm_threshold(const MarketInstance& m, const Matching& mu, int f) {
  require_compatible(m, mu);
  if (!is_stable(m, mu)) {
    throw Error(Errc::NotStable, "threshold is defined for stable matchings");
  }
  if (!mu.firm_matched(f)) return Rational(1);
  Matching firm_optimal = deferred_acceptance(m, Side::Firm);
  if (mu.firm_partner(f) == firm_optimal.firm_partner(f)) return Rational(1);
  if (!firm_optimal.firm_matched(f)) {
    throw Error(Errc::InternalLatticeViolation,
                "firm matched under a stable matching but single under mu_F");
  }
  return m.firm_value(f, mu) / m.firm_value(f, firm_optimal);
}

}  // namespace dynmatch
