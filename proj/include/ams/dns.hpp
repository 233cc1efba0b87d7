#pragma once

#include <cstdint>
#include <vector>

#include "ams/models.hpp"
#include "ams/sde.hpp"

namespace ams {

struct DnsResult {
  double alphaDns = 0.0;
  double stdErr = 0.0;
  std::uint64_t M = 0;
  std::uint64_t hitsA = 0;
  std::uint64_t hitsB = 0;
  bool zeroHit = false;
  std::vector<double> reactiveDurations;  // in trajectory order
  std::uint64_t steps = 0;
};

/// M independent trajectories from rho_C to absorption. Trajectory i uses
/// the substreams (realization, i) so results do not depend on `threads`.
DnsResult dns_run(const ProblemSpec& problem, const IntegratorScheme& scheme, std::uint64_t M,
                  std::uint64_t masterSeed, int threads = 1, std::uint32_t realization = 0,
                  std::uint64_t maxSteps = 1'000'000'000ULL);

}  // namespace ams
