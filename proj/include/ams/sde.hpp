#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ams/error.hpp"
#include "ams/models.hpp"
#include "ams/rng.hpp"

namespace ams {

/// Wiener increment per component and the 1-D iterated integral dZ.
struct NoiseIncrements {
  State dW = State::Zero();
  double dZ = 0.0;
};

/// dW = sqrt(2 dt / beta) u1, dZ = sqrt(2 / beta) dt^{3/2} (u1 + u2 / sqrt 3) / 2.
NoiseIncrements make_noise(double u1, double u2, double dt, double beta);

enum class SchemeKind { Euler, Order15 };

std::string_view to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(std::string_view name);

struct IntegratorScheme {
  SchemeKind kind = SchemeKind::Euler;
  double dt = 1e-4;
};

/// Draws the increments one step of `scheme` consumes, x component first.
NoiseIncrements draw_noise(RandomStream& rng, const IntegratorScheme& scheme, double beta, int dimension);

/// x + F(x) dt + dW.
State euler_step(const State& x, const SdeModel& model, double dt, const NoiseIncrements& noise);

/// x + F dt + dW + F' dZ + dt^2 (F F' + F'' / beta) / 2, 1-D models only.
double order15_step(double x, const SdeModel& model, double dt, const NoiseIncrements& noise);

State advance(const State& x, const SdeModel& model, const IntegratorScheme& scheme, const NoiseIncrements& noise);

enum class Outcome { HitA, HitB, Running };

std::string_view to_string(Outcome outcome);

/// One segment of a path plus a link to the path it branched from.
/// The full path is parent's full path [0, cut) followed by the own points;
/// own point k sits at time startTime + k dt.
struct Trajectory {
  std::uint32_t id = 0;
  std::shared_ptr<const Trajectory> parent;
  std::size_t cut = 0;
  double startTime = 0.0;
  double dt = 0.0;
  int dimension = 1;

  State start = State::Zero();
  State end = State::Zero();
  // Own points; empty when the path was not stored.
  std::vector<double> xs, ys, phis;
  std::size_t ownSteps = 0;

  Outcome outcome = Outcome::Running;
  double ownMax = 0.0;  // sup of phi over the own points
  double qMax = 0.0;    // sup of phi over the full path

  bool stored() const { return !phis.empty(); }
  double ownDuration() const { return static_cast<double>(ownSteps) * dt; }
  double totalDuration() const { return startTime + ownDuration(); }
  std::size_t full_length() const { return cut + ownSteps + 1; }

  double phi_at(std::size_t g) const;
  State state_at(std::size_t g) const;
  double time_at(std::size_t g) const;
};

struct SimulationOptions {
  std::uint64_t maxSteps = 1'000'000'000ULL;
  bool storePath = true;
};

/// Raised when a trajectory is still running after maxSteps; carries it for inspection.
class StepBudgetError : public Error {
 public:
  StepBudgetError(const std::string& what, std::shared_ptr<const Trajectory> partial)
      : Error(ErrorKind::StepBudgetExhausted, what), partial_(std::move(partial)) {}
  const std::shared_ptr<const Trajectory>& partial() const { return partial_; }

 private:
  std::shared_ptr<const Trajectory> partial_;
};

/// Runs traj from traj.start until it enters A or B. B is tested from the
/// first point, A from the second one so that starts on the boundary of A
/// are allowed. Fills the own points, outcome, ownMax and qMax (qMax keeps
/// any value preset by the caller for the inherited prefix).
void simulate_segment(Trajectory& traj, const ProblemSpec& problem, const IntegratorScheme& scheme, RandomStream& rng,
                      const SimulationOptions& options = {});

Trajectory simulate_to_absorption(const State& start, const ProblemSpec& problem, const IntegratorScheme& scheme,
                                  RandomStream& rng, const SimulationOptions& options = {});

}  // namespace ams
