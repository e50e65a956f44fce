#include "dynmatch/strategies.hpp"

#include <algorithm>

#include "dynmatch/matching_algorithms.hpp"

namespace dynmatch {

bool continuation_equivalent(CommitmentRegime regime, const Matching& mu,
                             const Matching& mu2) {
  switch (regime) {
    case CommitmentRegime::NoCommitment:
      return true;
    case CommitmentRegime::FirmOnly:
    case CommitmentRegime::WorkerOnly:
      return mu == mu2;
    case CommitmentRegime::TwoSided: {
      if (mu.num_firms() != mu2.num_firms() || mu.num_workers() != mu2.num_workers())
        return false;
      for (int f = 0; f < mu.num_firms(); ++f)
        if (mu.firm_matched(f) != mu2.firm_matched(f)) return false;
      for (int w = 0; w < mu.num_workers(); ++w)
        if (mu.worker_matched(w) != mu2.worker_matched(w)) return false;
      return true;
    }
  }
  return false;
}

int best_response_accept(const MarketInstance& m, int w, const std::vector<int>& offers) {
  int best = kSelf;
  for (int f : offers) {
    if (m.worker_utility(w, f) <= 0) continue;
    if (best == kSelf || m.worker_utility(w, f) > m.worker_utility(w, best)) best = f;
  }
  return best;
}

const char* profile_kind_name(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::NoCommitmentOffer: return "no-commit";
    case ProfileKind::FirmCommitRestrictive: return "firm-restrictive";
    case ProfileKind::FirmCommitFlexible: return "firm-flexible";
    case ProfileKind::WorkerCommitRestrictive: return "worker-restrictive";
    case ProfileKind::WorkerCommitFlexible: return "worker-flexible";
  }
  return "?";
}

CanonicalProfile::CanonicalProfile(ProfileKind kind, const MarketInstance& m,
                                   Matching target, FlexibleFirmMode mode)
    : kind_(kind), market_(&m), target_(std::move(target)), mode_(mode) {
  if (!is_stable(m, target_)) {
    throw Error(Errc::NotStable,
                "profile target matching " + target_.to_string(m) + " is not stable");
  }
  if (kind_ == ProfileKind::WorkerCommitFlexible) {
    firm_optimal_ = deferred_acceptance(m, Side::Firm);
  }
}

bool CanonicalProfile::uses_rejected_sets() const {
  return kind_ == ProfileKind::FirmCommitFlexible && mode_ == FlexibleFirmMode::RejectedSet;
}

int CanonicalProfile::firm_offer(const SimState& state, int f) const {
  const MarketInstance& m = state.market;
  const Matching& prev = state.prev;

  // Commitment overrides anything the rule would choose.
  if (firm_inactive(state.regime, prev, f)) return prev.firm_partner(f);

  switch (kind_) {
    case ProfileKind::NoCommitmentOffer:
    case ProfileKind::FirmCommitRestrictive:
    case ProfileKind::WorkerCommitRestrictive:
      return target_.firm_partner(f);

    case ProfileKind::WorkerCommitFlexible:
      // Initial state and on-path: aim at the target; after any other
      // history: aim at the firm-optimal stable matching.
      if (prev == target_ || prev.pair_count() == 0) return target_.firm_partner(f);
      return firm_optimal_.firm_partner(f);

    case ProfileKind::FirmCommitFlexible: {
      if (prev.firm_matched(f)) return prev.firm_partner(f);  // sustain what it holds
      // mu(f) = f means "no offer", and an unmatched f then has
      // mu^{t-1}(f) = mu(f) every period.
      if (!target_.firm_matched(f)) return kSelf;
      if (prev.pair_count() == 0) return target_.firm_partner(f);
      // Rejected at some point: chase the best acceptable worker, other than
      // the target partner, who would leave her current position for f.
      int best = kSelf;
      for (int w = 0; w < m.num_workers(); ++w) {
        if (w == target_.firm_partner(f)) continue;
        if (m.firm_utility(f, w) <= 0) continue;
        if (uses_rejected_sets() && state.rejected[f][w]) continue;
        int cur = prev.worker_partner(w);
        const Rational current_value = cur == kSelf ? Rational(0) : m.worker_utility(w, cur);
        if (!(m.worker_utility(w, f) > current_value)) continue;
        if (best == kSelf || m.firm_utility(f, w) > m.firm_utility(f, best)) best = w;
      }
      return best;
    }
  }
  return kSelf;
}

int CanonicalProfile::worker_response(const SimState& state, int w,
                                      const std::vector<int>& offers) const {
  const Matching& prev = state.prev;
  if (worker_inactive(state.regime, prev, w)) {
    int employer = prev.worker_partner(w);
    bool renewed = std::find(offers.begin(), offers.end(), employer) != offers.end();
    return renewed ? employer : kSelf;
  }
  return best_response_accept(state.market, w, offers);
}

std::string CanonicalProfile::descriptor() const {
  std::string s = profile_kind_name(kind_);
  s += "[mu=" + target_.to_string(*market_);
  if (kind_ == ProfileKind::FirmCommitFlexible) {
    s += mode_ == FlexibleFirmMode::RejectedSet ? ",mode=rejected-set" : ",mode=strict-stationary";
  }
  s += "]";
  return s;
}

namespace {

ProfilePtr make(ProfileKind kind, const MarketInstance& m, const Matching& mu,
                FlexibleFirmMode mode = FlexibleFirmMode::RejectedSet) {
  return std::make_shared<const CanonicalProfile>(kind, m, mu, mode);
}

}  // namespace

ProfilePtr profile_no_commitment(const MarketInstance& m, const Matching& mu) {
  return make(ProfileKind::NoCommitmentOffer, m, mu);
}

ProfilePtr profile_firm_commit_restrictive(const MarketInstance& m, const Matching& mu) {
  return make(ProfileKind::FirmCommitRestrictive, m, mu);
}

ProfilePtr profile_firm_commit_flexible(const MarketInstance& m, const Matching& mu,
                                        FlexibleFirmMode mode) {
  return make(ProfileKind::FirmCommitFlexible, m, mu, mode);
}

ProfilePtr profile_worker_commit_restrictive(const MarketInstance& m, const Matching& mu) {
  return make(ProfileKind::WorkerCommitRestrictive, m, mu);
}

ProfilePtr profile_worker_commit_flexible(const MarketInstance& m, const Matching& mu) {
  return make(ProfileKind::WorkerCommitFlexible, m, mu);
}

ProfilePtr make_profile(const MarketInstance& m, const std::string& name,
                        const Matching& mu, FlexibleFirmMode mode) {
  if (name == "no-commit") return profile_no_commitment(m, mu);
  if (name == "firm-restrictive") return profile_firm_commit_restrictive(m, mu);
  if (name == "firm-flexible") return profile_firm_commit_flexible(m, mu, mode);
  if (name == "worker-restrictive") return profile_worker_commit_restrictive(m, mu);
  if (name == "worker-flexible") return profile_worker_commit_flexible(m, mu);
  throw Error(Errc::UsageError,
              "unknown profile '" + name +
                  "' (expected no-commit, firm-restrictive, firm-flexible, "
                  "worker-restrictive or worker-flexible)");
}

}  // namespace dynmatch
