#pragma once

#include <optional>
#include <vector>

#include "dynmatch/market.hpp"

namespace dynmatch {

struct RestabilizationEvent {
  int period;
  int firm;
  int worker;
  bool accepted;
};

/// Result of the vacancy-chain process after worker w resigns from a stable
/// matching: the re-stabilized matching nu, the number of periods w waited
/// for the improving offer (the resignation period is period 1; k counts the
/// periods after it, up to and including the arrival of nu(w)'s offer), and
/// the offers made along the way.
struct RestabilizationOutcome {
  int resigning_worker = kSelf;
  Matching initial;
  Matching final;
  int periods_waited = 0;  // k(w)
  std::vector<RestabilizationEvent> event_log;
};

/// Runs the process: w rejects every offer not strictly better than her
/// position under mu; other workers take the best offer on the table; each
/// firm left unmatched offers its best acceptable worker who has not rejected
/// it and would accept. Returns nullopt when the chain halts before an
/// improving offer reaches w.
/// Throws NotStable when mu is not stable and WorkerUnmatched when w has no
/// position to resign from.
std::optional<RestabilizationOutcome> try_restabilize(const MarketInstance& m,
                                                      const Matching& mu, int w);

/// Same, but a halted chain is reported as a NoImprovingOffer error.
RestabilizationOutcome restabilize(const MarketInstance& m, const Matching& mu, int w);

/// Discount-factor threshold below which resign-and-wait is unprofitable for
/// w at mu: (u_w(mu(w)) / u_w(nu(w)))^(1/k(w)). The root is irrational in
/// general and is computed in extended (80-bit) precision. Returns 1 when w
/// cannot improve (including when w is unmatched under mu).
long double worker_threshold(const MarketInstance& m, const Matching& mu, int w);

/// Discount-factor threshold for firm f at mu: u_f(mu(f)) / u_f(mu_F(f)),
/// exact. Equals 1 when mu(f) is f's firm-optimal partner or f is unmatched.
Rational firm_threshold(const MarketInstance& m, const Matching& mu, int f);

}  // namespace dynmatch
