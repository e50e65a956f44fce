#include "dynmatch/matching_algorithms.hpp"

#include <algorithm>

namespace dynmatch {

namespace {

// One proposing agent's view: receiver indices in descending utility order,
// acceptable partners only.
std::vector<std::vector<int>> proposal_lists(int num_proposers, int num_receivers,
                                             const std::function<const Rational&(int, int)>& util) {
  std::vector<std::vector<int>> lists(num_proposers);
  for (int p = 0; p < num_proposers; ++p) {
    for (int r = 0; r < num_receivers; ++r) {
      if (util(p, r) > 0) lists[p].push_back(r);
    }
    std::sort(lists[p].begin(), lists[p].end(),
              [&](int a, int b) { return util(p, a) > util(p, b); });
  }
  return lists;
}

// Core proposer-receiver loop; returns proposer -> receiver (kSelf when
// unmatched). Proposers are processed in ascending index order each round,
// which is immaterial for the outcome under strict utilities but keeps runs
// reproducible.
std::vector<int> gale_shapley(int num_proposers, int num_receivers,
                              const std::function<const Rational&(int, int)>& proposer_util,
                              const std::function<const Rational&(int, int)>& receiver_util) {
  auto lists = proposal_lists(num_proposers, num_receivers, proposer_util);
  std::vector<std::size_t> next(num_proposers, 0);
  std::vector<int> held_by(num_receivers, kSelf);  // receiver -> proposer
  std::vector<int> engaged(num_proposers, kSelf);

  bool progress = true;
  while (progress) {
    progress = false;
    for (int p = 0; p < num_proposers; ++p) {
      if (engaged[p] != kSelf) continue;
      while (next[p] < lists[p].size()) {
        int r = lists[p][next[p]++];
        if (receiver_util(r, p) <= 0) continue;
        int rival = held_by[r];
        if (rival == kSelf) {
          held_by[r] = p;
          engaged[p] = r;
        } else if (receiver_util(r, p) > receiver_util(r, rival)) {
          held_by[r] = p;
          engaged[p] = r;
          engaged[rival] = kSelf;
        } else {
          continue;  // rejected, try next
        }
        progress = true;
        break;
      }
    }
  }
  return engaged;
}

void check_guard(const MarketInstance& m) {
  if (m.num_firms() > kEnumerationGuard || m.num_workers() > kEnumerationGuard) {
    throw Error(Errc::InstanceTooLarge,
                "brute-force enumeration is limited to " +
                    std::to_string(kEnumerationGuard) + " agents per side");
  }
}

void enumerate_rec(const MarketInstance& m, int f, std::vector<int>& firm_to_worker,
                   std::vector<bool>& worker_used,
                   const std::function<void(const Matching&)>& visit) {
  if (f == m.num_firms()) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < m.num_firms(); ++i) {
      if (firm_to_worker[i] != kSelf) pairs.emplace_back(i, firm_to_worker[i]);
    }
    visit(Matching::from_pairs(m, pairs));
    return;
  }
  firm_to_worker[f] = kSelf;
  enumerate_rec(m, f + 1, firm_to_worker, worker_used, visit);
  for (int w = 0; w < m.num_workers(); ++w) {
    if (worker_used[w]) continue;
    worker_used[w] = true;
    firm_to_worker[f] = w;
    enumerate_rec(m, f + 1, firm_to_worker, worker_used, visit);
    firm_to_worker[f] = kSelf;
    worker_used[w] = false;
  }
}

}  // namespace

Matching deferred_acceptance(const MarketInstance& m, Side proposing_side) {
  if (proposing_side == Side::Firm) {
    auto fu = [&m](int f, int w) -> const Rational& { return m.firm_utility(f, w); };
    auto wu = [&m](int w, int f) -> const Rational& { return m.worker_utility(w, f); };
    auto engaged = gale_shapley(m.num_firms(), m.num_workers(), fu, wu);
    std::vector<std::pair<int, int>> pairs;
    for (int f = 0; f < m.num_firms(); ++f)
      if (engaged[f] != kSelf) pairs.emplace_back(f, engaged[f]);
    return Matching::from_pairs(m, pairs);
  }
  auto wu = [&m](int w, int f) -> const Rational& { return m.worker_utility(w, f); };
  auto fu = [&m](int f, int w) -> const Rational& { return m.firm_utility(f, w); };
  auto engaged = gale_shapley(m.num_workers(), m.num_firms(), wu, fu);
  std::vector<std::pair<int, int>> pairs;
  for (int w = 0; w < m.num_workers(); ++w)
    if (engaged[w] != kSelf) pairs.emplace_back(engaged[w], w);
  return Matching::from_pairs(m, pairs);
}

void for_each_matching(const MarketInstance& m,
                       const std::function<void(const Matching&)>& visit) {
  check_guard(m);
  std::vector<int> firm_to_worker(m.num_firms(), kSelf);
  std::vector<bool> worker_used(m.num_workers(), false);
  enumerate_rec(m, 0, firm_to_worker, worker_used, visit);
}

std::vector<Matching> all_matchings(const MarketInstance& m) {
  std::vector<Matching> out;
  for_each_matching(m, [&out](const Matching& mu) { out.push_back(mu); });
  return out;
}

long long count_all_matchings(int num_firms, int num_workers) {
  // sum_k C(nf,k) * C(nw,k) * k!
  auto choose = [](int n, int k) {
    long long c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
  };
  long long total = 0;
  for (int k = 0; k <= std::min(num_firms, num_workers); ++k) {
    long long fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    total += choose(num_firms, k) * choose(num_workers, k) * fact;
  }
  return total;
}

StableSetReport enumerate_stable_set(const MarketInstance& m) {
  StableSetReport report;
  for_each_matching(m, [&](const Matching& mu) {
    ++report.all_matchings_count;
    if (is_stable(m, mu)) report.stable.push_back(mu);
  });

  // A valid market always has a stable matching; an empty set here means the
  // stability predicates are broken.
  if (report.stable.empty()) {
    throw Error(Errc::InternalLatticeViolation, "no stable matching found");
  }

  auto dominates_for = [&m](Side side, const Matching& a, const Matching& b) {
    int n = side == Side::Firm ? m.num_firms() : m.num_workers();
    for (int i = 0; i < n; ++i) {
      Rational va = side == Side::Firm ? m.firm_value(i, a) : m.worker_value(i, a);
      Rational vb = side == Side::Firm ? m.firm_value(i, b) : m.worker_value(i, b);
      if (va < vb) return false;
    }
    return true;
  };

  auto find_optimum = [&](Side side) -> const Matching* {
    for (const Matching& cand : report.stable) {
      bool best = true;
      for (const Matching& other : report.stable) {
        if (!dominates_for(side, cand, other)) {
          best = false;
          break;
        }
      }
      if (best) return &cand;
    }
    return nullptr;
  };

  const Matching* fo = find_optimum(Side::Firm);
  const Matching* wo = find_optimum(Side::Worker);
  if (fo == nullptr || wo == nullptr) {
    throw Error(Errc::InternalLatticeViolation,
                "stable set has no simultaneous side optimum");
  }
  report.firm_optimal = *fo;
  report.worker_optimal = *wo;
  return report;
}

SingleAgentCheck check_single_agent_property(const MarketInstance& m) {
  StableSetReport report = enumerate_stable_set(m);
  SingleAgentCheck check;
  const Matching& ref = report.stable.front();
  for (const Matching& mu : report.stable) {
    for (int f = 0; f < m.num_firms(); ++f) {
      if (mu.firm_matched(f) != ref.firm_matched(f)) {
        check.holds = false;
        check.first = ref;
        check.second = mu;
        check.agent = AgentRef{Side::Firm, f};
        return check;
      }
    }
    for (int w = 0; w < m.num_workers(); ++w) {
      if (mu.worker_matched(w) != ref.worker_matched(w)) {
        check.holds = false;
        check.first = ref;
        check.second = mu;
        check.agent = AgentRef{Side::Worker, w};
        return check;
      }
    }
  }
  return check;
}

}  // namespace dynmatch
