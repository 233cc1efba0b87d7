#include "ams/dns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace ams {

DnsResult dns_run(const ProblemSpec& problem, const IntegratorScheme& scheme, std::uint64_t M,
                  std::uint64_t masterSeed, int threads, std::uint32_t realization, std::uint64_t maxSteps) {
  if (M < 1) throw Error(ErrorKind::InvalidArgument, "M must be at least 1");
  if (M > 0xFFFFFFFFULL) throw Error(ErrorKind::InvalidArgument, "M exceeds the substream index range");
  SimulationOptions sim;
  sim.maxSteps = maxSteps;
  sim.storePath = false;

  // Per-trajectory duration, negative for trajectories that ended in A.
  std::vector<double> durations(M);
  std::vector<std::uint64_t> steps(M);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  const auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= M) return;
      try {
        const auto id = static_cast<std::uint32_t>(i);
        RandomStream init(masterSeed, {realization, id, StreamPurpose::InitialCondition});
        RandomStream dyn(masterSeed, {realization, id, StreamPurpose::Dynamics});
        const Trajectory t = simulate_to_absorption(sample_rho_c(problem, init), problem, scheme, dyn, sim);
        durations[i] = t.outcome == Outcome::HitB ? t.totalDuration() : -1.0;
        steps[i] = t.ownSteps;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failureMutex);
        if (!failure) failure = std::current_exception();
        next = M;
        return;
      }
    }
  };
  const int workers = static_cast<int>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, M)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  DnsResult result;
  result.M = M;
  for (std::uint64_t i = 0; i < M; ++i) {
    result.steps += steps[i];
    if (durations[i] >= 0.0) {
      ++result.hitsB;
      result.reactiveDurations.push_back(durations[i]);
    } else {
      ++result.hitsA;
    }
  }
  result.alphaDns = static_cast<double>(result.hitsB) / static_cast<double>(M);
  result.stdErr = std::sqrt(result.alphaDns * (1.0 - result.alphaDns) / static_cast<double>(M));
  result.zeroHit = result.hitsB == 0;
  return result;
}

}  // namespace ams
