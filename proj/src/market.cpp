#include "dynmatch/market.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace dynmatch {

const char* regime_name(CommitmentRegime regime) {
  switch (regime) {
    case CommitmentRegime::TwoSided: return "two-sided";
    case CommitmentRegime::NoCommitment: return "none";
    case CommitmentRegime::FirmOnly: return "firm";
    case CommitmentRegime::WorkerOnly: return "worker";
  }
  return "?";
}

namespace {

std::map<std::string, int> index_of(const std::vector<std::string>& ids,
                                    const char* side) {
  std::map<std::string, int> idx;
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
    if (!idx.emplace(ids[i], i).second) {
      throw Error(Errc::UnknownAgentReference,
                  std::string("duplicate ") + side + " identifier '" + ids[i] + "'");
    }
  }
  return idx;
}

// Fills the utility matrix for one side. Unlisted pairs stay at -1.
void fill_utilities(
    const std::vector<std::tuple<std::string, std::string, Rational>>& entries,
    const std::map<std::string, int>& agent_idx,
    const std::map<std::string, int>& partner_idx, const char* agent_side,
    std::vector<std::vector<Rational>>& table) {
  std::set<std::pair<int, int>> seen;
  for (const auto& [agent, partner, value] : entries) {
    auto ai = agent_idx.find(agent);
    if (ai == agent_idx.end()) {
      throw Error(Errc::UnknownAgentReference,
                  std::string("unknown ") + agent_side + " '" + agent + "' in utility entry");
    }
    auto pi = partner_idx.find(partner);
    if (pi == partner_idx.end()) {
      throw Error(Errc::UnknownAgentReference,
                  "unknown partner '" + partner + "' in utility entry for '" + agent + "'");
    }
    if (!seen.emplace(ai->second, pi->second).second) {
      throw Error(Errc::DuplicateUtility,
                  "utility for (" + agent + ", " + partner + ") listed twice");
    }
    if (value == 0) {
      throw Error(Errc::ZeroUtility,
                  "u_" + agent + "(" + partner + ") = 0; utilities over partners must be nonzero");
    }
    table[ai->second][pi->second] = value;
  }
}

// Acceptable (positive) utilities must be pairwise distinct per agent.
void check_strictness(const std::vector<std::string>& agents,
                      const std::vector<std::string>& partners,
                      const std::vector<std::vector<Rational>>& table) {
  for (std::size_t a = 0; a < agents.size(); ++a) {
    std::map<Rational, int> positive;
    for (std::size_t p = 0; p < partners.size(); ++p) {
      const Rational& v = table[a][p];
      if (v <= 0) continue;
      auto [it, inserted] = positive.emplace(v, static_cast<int>(p));
      if (!inserted) {
        throw Error(Errc::DuplicateUtility,
                    "u_" + agents[a] + " ties at " + rational_to_string(v) + " between '" +
                        partners[it->second] + "' and '" + partners[p] + "'");
      }
    }
  }
}

}  // namespace

MarketInstance validate_market(const RawMarket& raw) {
  MarketInstance m;
  m.firm_ids_ = raw.firms;
  m.worker_ids_ = raw.workers;
  std::sort(m.firm_ids_.begin(), m.firm_ids_.end());
  std::sort(m.worker_ids_.begin(), m.worker_ids_.end());

  auto firm_idx = index_of(m.firm_ids_, "firm");
  auto worker_idx = index_of(m.worker_ids_, "worker");

  for (const auto& f : m.firm_ids_) {
    if (worker_idx.count(f)) {
      throw Error(Errc::UnknownAgentReference,
                  "identifier '" + f + "' appears on both sides");
    }
  }

  const int nf = m.num_firms();
  const int nw = m.num_workers();
  m.firm_util_.assign(nf, std::vector<Rational>(nw, Rational(-1)));
  m.worker_util_.assign(nw, std::vector<Rational>(nf, Rational(-1)));

  fill_utilities(raw.firm_utils, firm_idx, worker_idx, "firm", m.firm_util_);
  fill_utilities(raw.worker_utils, worker_idx, firm_idx, "worker", m.worker_util_);
  check_strictness(m.firm_ids_, m.worker_ids_, m.firm_util_);
  check_strictness(m.worker_ids_, m.firm_ids_, m.worker_util_);

  m.firm_delta_.assign(nf, Rational(0));
  m.worker_delta_.assign(nw, Rational(0));
  std::set<std::string> discount_seen;
  for (const auto& [agent, delta] : raw.discounts) {
    if (!discount_seen.insert(agent).second) {
      throw Error(Errc::DuplicateUtility, "discount for '" + agent + "' listed twice");
    }
    if (!(delta > 0 && delta < 1)) {
      throw Error(Errc::DiscountOutOfRange,
                  "discount for '" + agent + "' is " + rational_to_string(delta) +
                      ", must lie strictly inside (0,1)");
    }
    if (auto it = firm_idx.find(agent); it != firm_idx.end()) {
      m.firm_delta_[it->second] = delta;
    } else if (auto jt = worker_idx.find(agent); jt != worker_idx.end()) {
      m.worker_delta_[jt->second] = delta;
    } else {
      throw Error(Errc::UnknownAgentReference, "discount for unknown agent '" + agent + "'");
    }
  }
  for (int f = 0; f < nf; ++f) {
    if (m.firm_delta_[f] == 0) {
      throw Error(Errc::DiscountOutOfRange, "missing discount for firm '" + m.firm_ids_[f] + "'");
    }
  }
  for (int w = 0; w < nw; ++w) {
    if (m.worker_delta_[w] == 0) {
      throw Error(Errc::DiscountOutOfRange,
                  "missing discount for worker '" + m.worker_ids_[w] + "'");
    }
  }
  return m;
}

int MarketInstance::firm_index(const std::string& id) const {
  auto it = std::lower_bound(firm_ids_.begin(), firm_ids_.end(), id);
  if (it == firm_ids_.end() || *it != id)
    throw Error(Errc::UnknownAgentReference, "unknown firm '" + id + "'");
  return static_cast<int>(it - firm_ids_.begin());
}

int MarketInstance::worker_index(const std::string& id) const {
  auto it = std::lower_bound(worker_ids_.begin(), worker_ids_.end(), id);
  if (it == worker_ids_.end() || *it != id)
    throw Error(Errc::UnknownAgentReference, "unknown worker '" + id + "'");
  return static_cast<int>(it - worker_ids_.begin());
}

Rational MarketInstance::firm_value(int f, const Matching& mu) const {
  int w = mu.firm_partner(f);
  return w == kSelf ? Rational(0) : firm_util_[f][w];
}

Rational MarketInstance::worker_value(int w, const Matching& mu) const {
  int f = mu.worker_partner(w);
  return f == kSelf ? Rational(0) : worker_util_[w][f];
}

Rational MarketInstance::agent_value(AgentRef a, const Matching& mu) const {
  return a.side == Side::Firm ? firm_value(a.index, mu) : worker_value(a.index, mu);
}

MarketInstance MarketInstance::with_worker_discounts(
    const std::vector<Rational>& deltas) const {
  MarketInstance m = *this;
  for (const auto& d : deltas) {
    if (!(d > 0 && d < 1))
      throw Error(Errc::DiscountOutOfRange, "replacement discount outside (0,1)");
  }
  if (static_cast<int>(deltas.size()) != num_workers())
    throw Error(Errc::UnknownAgentReference, "discount vector size mismatch");
  m.worker_delta_ = deltas;
  return m;
}

MarketInstance MarketInstance::with_firm_discounts(
    const std::vector<Rational>& deltas) const {
  MarketInstance m = *this;
  for (const auto& d : deltas) {
    if (!(d > 0 && d < 1))
      throw Error(Errc::DiscountOutOfRange, "replacement discount outside (0,1)");
  }
  if (static_cast<int>(deltas.size()) != num_firms())
    throw Error(Errc::UnknownAgentReference, "discount vector size mismatch");
  m.firm_delta_ = deltas;
  return m;
}

MarketInstance MarketInstance::with_all_discounts(const Rational& delta) const {
  MarketInstance m = *this;
  if (!(delta > 0 && delta < 1))
    throw Error(Errc::DiscountOutOfRange, "replacement discount outside (0,1)");
  std::fill(m.firm_delta_.begin(), m.firm_delta_.end(), delta);
  std::fill(m.worker_delta_.begin(), m.worker_delta_.end(), delta);
  return m;
}

Matching Matching::empty(const MarketInstance& m) {
  return empty(m.num_firms(), m.num_workers());
}

Matching Matching::empty(int num_firms, int num_workers) {
  Matching mu;
  mu.firm_to_worker_.assign(num_firms, kSelf);
  mu.worker_to_firm_.assign(num_workers, kSelf);
  return mu;
}

Matching Matching::from_pairs(const MarketInstance& m,
                              const std::vector<std::pair<int, int>>& pairs) {
  Matching mu = empty(m);
  for (auto [f, w] : pairs) {
    if (f < 0 || f >= m.num_firms() || w < 0 || w >= m.num_workers())
      throw Error(Errc::UnknownAgentReference, "matching pair index out of range");
    if (mu.firm_to_worker_[f] != kSelf || mu.worker_to_firm_[w] != kSelf)
      throw Error(Errc::UnknownAgentReference,
                  "agent appears twice in matching: (" + m.firm_id(f) + ", " + m.worker_id(w) + ")");
    mu.firm_to_worker_[f] = w;
    mu.worker_to_firm_[w] = f;
  }
  return mu;
}

Matching Matching::from_ids(
    const MarketInstance& m,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::pair<int, int>> idx;
  idx.reserve(pairs.size());
  for (const auto& [f, w] : pairs) idx.emplace_back(m.firm_index(f), m.worker_index(w));
  return from_pairs(m, idx);
}

std::vector<std::pair<int, int>> Matching::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int f = 0; f < num_firms(); ++f) {
    if (firm_to_worker_[f] != kSelf) out.emplace_back(f, firm_to_worker_[f]);
  }
  return out;
}

int Matching::pair_count() const {
  int n = 0;
  for (int w : firm_to_worker_)
    if (w != kSelf) ++n;
  return n;
}

std::string Matching::to_string(const MarketInstance& m) const {
  if (pair_count() == 0) return "empty";
  std::ostringstream os;
  for (auto [f, w] : pairs()) os << '(' << m.firm_id(f) << ',' << m.worker_id(w) << ')';
  return os.str();
}

void require_compatible(const MarketInstance& m, const Matching& mu) {
  if (!mu.compatible_with(m))
    throw Error(Errc::UnknownAgentReference, "matching refers to a different market");
}

bool is_individually_rational(const MarketInstance& m, const Matching& mu) {
  require_compatible(m, mu);
  for (auto [f, w] : mu.pairs()) {
    if (m.firm_utility(f, w) < 0 || m.worker_utility(w, f) < 0) return false;
  }
  return true;
}

std::vector<std::pair<int, int>> blocking_pairs(const MarketInstance& m,
                                                const Matching& mu) {
  require_compatible(m, mu);
  std::vector<std::pair<int, int>> out;
  std::vector<Rational> firm_cur(m.num_firms());
  std::vector<Rational> worker_cur(m.num_workers());
  for (int f = 0; f < m.num_firms(); ++f) firm_cur[f] = m.firm_value(f, mu);
  for (int w = 0; w < m.num_workers(); ++w) worker_cur[w] = m.worker_value(w, mu);
  for (int f = 0; f < m.num_firms(); ++f) {
    for (int w = 0; w < m.num_workers(); ++w) {
      if (m.firm_utility(f, w) > firm_cur[f] && m.worker_utility(w, f) > worker_cur[w]) {
        out.emplace_back(f, w);
      }
    }
  }
  return out;
}

bool is_stable(const MarketInstance& m, const Matching& mu) {
  if (!is_individually_rational(m, mu)) return false;
  // Same scan as blocking_pairs, stopping at the first hit.
  std::vector<Rational> firm_cur(m.num_firms());
  std::vector<Rational> worker_cur(m.num_workers());
  for (int f = 0; f < m.num_firms(); ++f) firm_cur[f] = m.firm_value(f, mu);
  for (int w = 0; w < m.num_workers(); ++w) worker_cur[w] = m.worker_value(w, mu);
  for (int f = 0; f < m.num_firms(); ++f) {
    for (int w = 0; w < m.num_workers(); ++w) {
      if (m.firm_utility(f, w) > firm_cur[f] && m.worker_utility(w, f) > worker_cur[w]) {
        return false;
      }
    }
  }
  return true;
}

bool firm_inactive(CommitmentRegime regime, const Matching& prev, int f) {
  switch (regime) {
    case CommitmentRegime::TwoSided:
    case CommitmentRegime::FirmOnly:
      return prev.firm_matched(f);
    case CommitmentRegime::NoCommitment:
    case CommitmentRegime::WorkerOnly:
      return false;
  }
  return false;
}

bool worker_inactive(CommitmentRegime regime, const Matching& prev, int w) {
  switch (regime) {
    case CommitmentRegime::TwoSided:
    case CommitmentRegime::WorkerOnly:
      return prev.worker_matched(w);
    case CommitmentRegime::NoCommitment:
    case CommitmentRegime::FirmOnly:
      return false;
  }
  return false;
}

ActiveSets active_sets(const MarketInstance& m, CommitmentRegime regime,
                       const Matching& prev) {
  require_compatible(m, prev);
  ActiveSets sets;
  for (int f = 0; f < m.num_firms(); ++f) {
    if (firm_inactive(regime, prev, f)) sets.inactive_firms.push_back(f);
  }
  for (int w = 0; w < m.num_workers(); ++w) {
    if (worker_inactive(regime, prev, w)) sets.inactive_workers.push_back(w);
  }
  return sets;
}

}  // namespace dynmatch
