#include "ams/ams.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace ams {

AmsVariant ams_variant_from_string(std::string_view name) {
  if (name == "generalized") return AmsVariant::Generalized;
  if (name == "literal") return AmsVariant::Literal;
  throw Error(ErrorKind::ConfigError, "unknown AMS variant '" + std::string(name) + "'");
}

std::string_view to_string(AmsVariant v) { return v == AmsVariant::Literal ? "literal" : "generalized"; }

double AmsOutcome::mean_duration() const {
  if (reactiveDurations.empty()) return 0.0;
  return std::accumulate(reactiveDurations.begin(), reactiveDurations.end(), 0.0) /
         static_cast<double>(reactiveDurations.size());
}

double AmsOutcome::iterations_equivalent() const {
  if (killed.empty() || n < 1) return static_cast<double>(K);
  return static_cast<double>(std::accumulate(killed.begin(), killed.end(), std::int64_t{0})) / n;
}

double ams_estimator(int r, int N, int n, std::uint64_t K) {
  return static_cast<double>(r) / N * std::pow(1.0 - static_cast<double>(n) / N, static_cast<double>(K));
}

double ams_estimator(int r, int N, const std::vector<int>& killed) {
  double a = static_cast<double>(r) / N;
  for (int k : killed) a *= 1.0 - static_cast<double>(k) / N;
  return a;
}

BranchPoint branch_point(const Trajectory& survivor, double level, bool strict) {
  const auto reaches = [&](double phi) { return strict ? phi > level : phi >= level; };
  std::vector<const Trajectory*> chain;
  for (const Trajectory* t = &survivor; t; t = t->parent.get()) chain.push_back(t);
  std::reverse(chain.begin(), chain.end());
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const Trajectory& seg = *chain[k];
    if (!reaches(seg.ownMax)) continue;
    if (!seg.stored()) throw Error(ErrorKind::InvalidArgument, "branching needs stored paths");
    // Points of this segment that survive into the next one.
    const std::size_t end = k + 1 < chain.size() ? chain[k + 1]->cut - seg.cut : seg.phis.size();
    for (std::size_t j = 0; j < end && j < seg.phis.size(); ++j) {
      if (reaches(seg.phis[j])) {
        BranchPoint bp;
        bp.index = seg.cut + j;
        bp.time = seg.startTime + static_cast<double>(j) * seg.dt;
        bp.state = State(seg.xs[j], seg.dimension == 2 ? seg.ys[j] : 0.0);
        return bp;
      }
    }
  }
  throw Error(ErrorKind::InternalInconsistency, "no crossing of level " + std::to_string(level) + " on survivor");
}

BridgePoint brownian_bridge_crossing(double xLeft, double tLeft, double xRight, double tRight, double level,
                                     const ReactionCoordinate& phi, double sigma2, int substeps, RandomStream& rng) {
  if (phi(State(xLeft, 0.0)) >= level) return {tLeft, State(xLeft, 0.0)};
  if (substeps < 1 || !(tRight > tLeft)) throw Error(ErrorKind::InvalidArgument, "bad bridge interval");
  const double h = (tRight - tLeft) / substeps;
  double x = xLeft;
  for (int k = 1; k < substeps; ++k) {
    const double remaining = tRight - (tLeft + (k - 1) * h);
    const double mean = x + (xRight - x) * h / remaining;
    const double var = sigma2 * h * (remaining - h) / remaining;
    x = mean + std::sqrt(std::max(var, 0.0)) * rng.normal();
    if (phi(State(x, 0.0)) >= level) return {tLeft + k * h, State(x, 0.0)};
  }
  return {tRight, State(xRight, 0.0)};
}

BridgePoint brownian_bridge_refine(const Trajectory& survivor, const BranchPoint& at, double level,
                                   const ProblemSpec& problem, double dtFine, RandomStream& rng) {
  if (problem.model.dimension != 1) throw Error(ErrorKind::UnsupportedDimension, "Brownian bridge is 1-D only");
  if (at.index == 0) return {at.time, at.state};
  const double tLeft = survivor.time_at(at.index - 1);
  const int substeps = std::max(1, static_cast<int>(std::lround((at.time - tLeft) / dtFine)));
  return brownian_bridge_crossing(survivor.state_at(at.index - 1)(0), tLeft, at.state(0), at.time, level, problem.phi,
                                  2.0 / problem.model.beta, substeps, rng);
}

namespace {

double rank_level(const Trajectory& t) { return t.outcome == Outcome::HitB ? 1.0 : t.qMax; }

void validate(const AmsConfig& cfg) {
  if (cfg.N < 2) throw Error(ErrorKind::InvalidArgument, "N must be at least 2");
  if (cfg.n < 1 || cfg.n > cfg.N - 1) throw Error(ErrorKind::InvalidArgument, "n must lie in [1, N-1]");
  if (cfg.brownianBridge && (cfg.problem.model.dimension != 1 || cfg.scheme.kind != SchemeKind::Euler)) {
    throw Error(ErrorKind::UnsupportedDimension, "Brownian bridge needs a 1-D model and the Euler scheme");
  }
}

}  // namespace

AmsOutcome ams_run(const AmsConfig& cfg) {
  validate(cfg);
  const auto clockStart = std::chrono::steady_clock::now();
  const ProblemSpec& problem = cfg.problem;
  const int N = cfg.N;
  const int n = cfg.n;
  const bool literal = cfg.variant == AmsVariant::Literal;
  SimulationOptions sim;
  sim.maxSteps = cfg.maxSteps;

  AmsOutcome out;
  out.N = N;
  out.n = n;
  out.seed = cfg.masterSeed;
  out.realization = cfg.realization;

  std::vector<std::shared_ptr<const Trajectory>> pop(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const auto id = static_cast<std::uint32_t>(i);
    RandomStream init(cfg.masterSeed, {cfg.realization, id, StreamPurpose::InitialCondition});
    RandomStream dyn(cfg.masterSeed, {cfg.realization, id, StreamPurpose::Dynamics});
    auto traj = std::make_shared<Trajectory>();
    traj->id = id;
    traj->start = sample_rho_c(problem, init);
    simulate_segment(*traj, problem, cfg.scheme, dyn, sim);
    out.stepsInit += traj->ownSteps;
    pop[static_cast<std::size_t>(i)] = std::move(traj);
  }

  std::uint32_t nextId = static_cast<std::uint32_t>(N);
  std::vector<std::size_t> order(pop.size());
  for (;;) {
    int hitB = 0;
    for (const auto& t : pop) hitB += t->outcome == Outcome::HitB;
    if (hitB >= N - n + 1) break;

    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double qa = rank_level(*pop[a]);
      const double qb = rank_level(*pop[b]);
      return qa != qb ? qa < qb : pop[a]->id < pop[b]->id;
    });
    const double z = rank_level(*pop[order[static_cast<std::size_t>(n - 1)]]);
    int tied = n;
    while (tied < N && rank_level(*pop[order[static_cast<std::size_t>(tied)]]) <= z) ++tied;
    if (tied == N) {
      out.extinction = true;
      break;
    }
    if (out.K >= cfg.maxIterations) {
      throw Error(ErrorKind::IterationBudgetExhausted,
                  "AMS exceeded " + std::to_string(cfg.maxIterations) + " iterations");
    }
    // The generalized variant kills everything tied with the n-th level.
    const int killedCount = literal ? n : tied;
    out.levels.push_back(z);
    out.killed.push_back(killedCount);
    ++out.K;

    RandomStream select(cfg.masterSeed,
                        {cfg.realization, static_cast<std::uint32_t>(out.K), StreamPurpose::Selection});
    std::vector<std::size_t> chosen(static_cast<std::size_t>(killedCount));
    for (auto& c : chosen) {
      c = order[static_cast<std::size_t>(killedCount) +
                select.index_below(static_cast<std::uint64_t>(N - killedCount))];
    }

    for (int j = 0; j < killedCount; ++j) {
      const std::size_t killed = order[static_cast<std::size_t>(j)];
      const double level = literal ? rank_level(*pop[killed]) : z;
      const std::shared_ptr<const Trajectory>& survivor = pop[chosen[static_cast<std::size_t>(j)]];

      const auto id = nextId++;
      auto child = std::make_shared<Trajectory>();
      child->id = id;
      BranchPoint bp;
      const bool strict = !literal;
      if ((strict ? level >= survivor->qMax : level > survivor->qMax) && survivor->outcome == Outcome::HitB) {
        // Entry into B ranks as 1 even where phi itself is lower.
        bp.index = survivor->full_length() - 1;
        bp.time = survivor->totalDuration();
        bp.state = survivor->end;
        child->qMax = survivor->qMax;
      } else {
        bp = branch_point(*survivor, level, strict);
      }
      child->start = bp.state;
      child->startTime = bp.time;
      if (cfg.brownianBridge && bp.index > 0) {
        RandomStream bridge(cfg.masterSeed, {cfg.realization, id, StreamPurpose::Bridge});
        const BridgePoint refined =
            brownian_bridge_refine(*survivor, bp, level, problem, cfg.scheme.dt / cfg.bridgeSubsteps, bridge);
        child->start = refined.state;
        child->startTime = refined.time;
      }
      // Link to the segment that actually owns the kept prefix [0, index).
      std::shared_ptr<const Trajectory> parent = survivor;
      while (parent->parent && bp.index <= parent->cut) parent = parent->parent;
      child->parent = bp.index > 0 ? parent : nullptr;
      child->cut = bp.index;

      RandomStream dyn(cfg.masterSeed, {cfg.realization, id, StreamPurpose::Dynamics});
      simulate_segment(*child, problem, cfg.scheme, dyn, sim);
      out.stepsBranch += child->ownSteps;
      if (rank_level(*child) < level) {
        throw Error(ErrorKind::InternalInconsistency, "branched trajectory fell below its branch level");
      }
      pop[killed] = std::move(child);
    }
  }

  std::vector<std::shared_ptr<const Trajectory>> byId = pop;
  std::sort(byId.begin(), byId.end(), [](const auto& a, const auto& b) { return a->id < b->id; });
  for (const auto& t : byId) {
    if (t->outcome == Outcome::HitB) {
      ++out.r;
      out.reactiveDurations.push_back(t->totalDuration());
    }
  }
  out.alphaHat = out.extinction ? 0.0 : ams_estimator(out.r, N, out.killed);
  out.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clockStart).count();
  return out;
}

std::vector<AmsOutcome> run_ams_ensemble(const AmsConfig& cfg, std::uint32_t first, std::uint32_t count,
                                         int threads) {
  std::vector<AmsOutcome> results(count);
  std::atomic<std::uint32_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  const auto worker = [&] {
    for (;;) {
      const std::uint32_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        AmsConfig local = cfg;
        local.realization = first + k;
        results[k] = ams_run(local);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failureMutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace ams
