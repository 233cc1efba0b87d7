#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "ams/models.hpp"
#include "ams/rng.hpp"
#include "ams/sde.hpp"

namespace ams {

/// Generalized: kill every trajectory tied with the n-th level, branch strictly above
/// that common level. Literal: kill exactly n, each branching where phi >= its own level.
enum class AmsVariant { Generalized, Literal };

AmsVariant ams_variant_from_string(std::string_view name);
std::string_view to_string(AmsVariant v);

struct AmsConfig {
  int N = 100;
  int n = 1;
  ProblemSpec problem;
  IntegratorScheme scheme;
  std::uint64_t masterSeed = 0;
  std::uint32_t realization = 0;
  std::uint64_t maxIterations = 100'000'000ULL;
  std::uint64_t maxSteps = 1'000'000'000ULL;
  AmsVariant variant = AmsVariant::Generalized;
  bool brownianBridge = false;
  int bridgeSubsteps = 100;
};

struct AmsOutcome {
  double alphaHat = 0.0;
  std::uint64_t K = 0;
  int r = 0;
  int N = 0;
  int n = 0;
  std::vector<double> levels;
  std::vector<int> killed;  // per iteration; n unless levels tie
  std::vector<double> reactiveDurations;  // ordered by trajectory id
  bool extinction = false;
  std::uint64_t seed = 0;
  std::uint32_t realization = 0;
  std::uint64_t stepsInit = 0;
  std::uint64_t stepsBranch = 0;
  double wallSeconds = 0.0;  // not part of the deterministic record

  double mean_duration() const;
  /// Killed clones over n: K itself unless ties forced extra kills.
  double iterations_equivalent() const;
};

/// (r / N) (1 - n / N)^K.
double ams_estimator(int r, int N, int n, std::uint64_t K);
/// (r / N) prod_k (1 - killed_k / N).
double ams_estimator(int r, int N, const std::vector<int>& killed);

struct BranchPoint {
  std::size_t index = 0;  // full-path index
  double time = 0.0;
  State state = State::Zero();
};

/// First full-path point of survivor with phi >= level, or phi > level when strict.
BranchPoint branch_point(const Trajectory& survivor, double level, bool strict = false);

struct BridgePoint {
  double time = 0.0;
  State state = State::Zero();
};

/// Brownian bridge with variance rate sigma2 from (tLeft, xLeft) to
/// (tRight, xRight) on `substeps` equal substeps. Returns the first substep
/// point with phi >= level, or the right end when no interior point crosses.
BridgePoint brownian_bridge_crossing(double xLeft, double tLeft, double xRight, double tRight, double level,
                                     const ReactionCoordinate& phi, double sigma2, int substeps, RandomStream& rng);

/// Refines a branch point of a stored 1-D Euler path at step dtFine.
BridgePoint brownian_bridge_refine(const Trajectory& survivor, const BranchPoint& at, double level,
                                   const ProblemSpec& problem, double dtFine, RandomStream& rng);

AmsOutcome ams_run(const AmsConfig& cfg);

/// Realizations first..first+count-1 of cfg on `threads` workers, returned in realization order.
std::vector<AmsOutcome> run_ams_ensemble(const AmsConfig& cfg, std::uint32_t first, std::uint32_t count, int threads);

}  // namespace ams
