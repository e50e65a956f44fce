#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dynmatch/game.hpp"
#include "dynmatch/market.hpp"

namespace dynmatch {

/// The continuation-equivalence relation: two previous matchings induce the
/// same continuation game. TwoSided compares unmatched-agent sets,
/// NoCommitment identifies everything, one-sided regimes require equality.
bool continuation_equivalent(CommitmentRegime regime, const Matching& mu,
                             const Matching& mu2);

/// The offer with the highest positive utility for w (kSelf if none is
/// positive). Unique by strictness. `offers` holds firm indices.
int best_response_accept(const MarketInstance& m, int w, const std::vector<int>& offers);

enum class ProfileKind {
  NoCommitmentOffer,     // firms always offer mu(f)
  FirmCommitRestrictive, // same offers, firm-commitment semantics
  FirmCommitFlexible,    // rejected firms chase the best willing worker
  WorkerCommitRestrictive,
  WorkerCommitFlexible,  // off-path firms switch to the firm-optimal target
};

const char* profile_kind_name(ProfileKind kind);

/// How the flexible firm rule treats workers that already rejected a firm:
/// RejectedSet skips them until the firm is matched again (the re-offer
/// bookkeeping of the vacancy-chain narrative); StrictStationary conditions
/// on the previous matching alone and may re-offer immediately.
enum class FlexibleFirmMode { RejectedSet, StrictStationary };

/// The canonical stationary profiles. All five share the worker rule
/// (forced action when committed, otherwise best_response_accept) and differ
/// in the firm rule. Commitment overrides are applied first, so every
/// prescription is feasible in every regime.
class CanonicalProfile final : public StationaryProfile {
 public:
  CanonicalProfile(ProfileKind kind, const MarketInstance& m, Matching target,
                   FlexibleFirmMode mode);

  int firm_offer(const SimState& state, int f) const override;
  int worker_response(const SimState& state, int w,
                      const std::vector<int>& offers) const override;
  bool uses_rejected_sets() const override;
  std::string descriptor() const override;

  ProfileKind kind() const { return kind_; }
  const Matching& target() const { return target_; }
  FlexibleFirmMode mode() const { return mode_; }

 private:
  ProfileKind kind_;
  const MarketInstance* market_;
  Matching target_;
  Matching firm_optimal_;  // used by WorkerCommitFlexible
  FlexibleFirmMode mode_;
};

using ProfilePtr = std::shared_ptr<const CanonicalProfile>;

/// Factories for the five profiles; each requires is_stable(m, mu) and
/// throws NotStable otherwise.
ProfilePtr profile_no_commitment(const MarketInstance& m, const Matching& mu);
ProfilePtr profile_firm_commit_restrictive(const MarketInstance& m, const Matching& mu);
ProfilePtr profile_firm_commit_flexible(
    const MarketInstance& m, const Matching& mu,
    FlexibleFirmMode mode = FlexibleFirmMode::RejectedSet);
ProfilePtr profile_worker_commit_restrictive(const MarketInstance& m, const Matching& mu);
ProfilePtr profile_worker_commit_flexible(const MarketInstance& m, const Matching& mu);

/// Descriptor-string factory: "no-commit", "firm-restrictive",
/// "firm-flexible", "worker-restrictive" or "worker-flexible".
ProfilePtr make_profile(const MarketInstance& m, const std::string& name,
                        const Matching& mu,
                        FlexibleFirmMode mode = FlexibleFirmMode::RejectedSet);

}  // namespace dynmatch
