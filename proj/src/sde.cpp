#include "ams/sde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ams {

NoiseIncrements make_noise(double u1, double u2, double dt, double beta) {
  NoiseIncrements noise;
  noise.dW(0) = std::sqrt(2.0 * dt / beta) * u1;
  noise.dZ = std::sqrt(2.0 / beta) * 0.5 * dt * std::sqrt(dt) * (u1 + u2 / std::sqrt(3.0));
  return noise;
}

std::string_view to_string(SchemeKind kind) { return kind == SchemeKind::Euler ? "euler" : "order15"; }

SchemeKind scheme_kind_from_string(std::string_view name) {
  if (name == "euler") return SchemeKind::Euler;
  if (name == "order15") return SchemeKind::Order15;
  throw Error(ErrorKind::ConfigError, "unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::HitA: return "A";
    case Outcome::HitB: return "B";
    case Outcome::Running: return "running";
  }
  return "running";
}

NoiseIncrements draw_noise(RandomStream& rng, const IntegratorScheme& scheme, double beta, int dimension) {
  const double scale = std::sqrt(2.0 * scheme.dt / beta);
  NoiseIncrements noise;
  if (scheme.kind == SchemeKind::Order15) {
    const double u1 = rng.normal();
    const double u2 = rng.normal();
    return make_noise(u1, u2, scheme.dt, beta);
  }
  noise.dW(0) = scale * rng.normal();
  if (dimension == 2) noise.dW(1) = scale * rng.normal();
  return noise;
}

State euler_step(const State& x, const SdeModel& model, double dt, const NoiseIncrements& noise) {
  const State f = model.force(x);
  if (!f.allFinite()) throw Error(ErrorKind::NumericalBlowup, "non-finite force");
  State next = x + f * dt + noise.dW;
  if (model.dimension == 1) next(1) = 0.0;
  if (!next.allFinite()) throw Error(ErrorKind::NumericalBlowup, "non-finite state");
  return next;
}

double order15_step(double x, const SdeModel& model, double dt, const NoiseIncrements& noise) {
  if (model.dimension != 1) throw Error(ErrorKind::UnsupportedDimension, "order-1.5 scheme is one-dimensional");
  const auto d1 = model.force_d1(x);
  const auto d2 = model.force_d2(x);
  if (!d1 || !d2) throw Error(ErrorKind::InvalidArgument, "order-1.5 scheme needs F' and F''");
  const double f = model.force(State(x, 0.0))(0);
  const double next = x + f * dt + noise.dW(0) + *d1 * noise.dZ + 0.5 * dt * dt * (f * *d1 + *d2 / model.beta);
  if (!std::isfinite(next)) throw Error(ErrorKind::NumericalBlowup, "non-finite state");
  return next;
}

State advance(const State& x, const SdeModel& model, const IntegratorScheme& scheme, const NoiseIncrements& noise) {
  if (scheme.kind == SchemeKind::Order15) return State(order15_step(x(0), model, scheme.dt, noise), 0.0);
  return euler_step(x, model, scheme.dt, noise);
}

double Trajectory::phi_at(std::size_t g) const {
  const Trajectory* t = this;
  while (g < t->cut) t = t->parent.get();
  if (!t->stored()) throw Error(ErrorKind::InvalidArgument, "trajectory path was not stored");
  return t->phis.at(g - t->cut);
}

State Trajectory::state_at(std::size_t g) const {
  const Trajectory* t = this;
  while (g < t->cut) t = t->parent.get();
  if (!t->stored()) throw Error(ErrorKind::InvalidArgument, "trajectory path was not stored");
  const std::size_t k = g - t->cut;
  return State(t->xs.at(k), t->dimension == 2 ? t->ys.at(k) : 0.0);
}

double Trajectory::time_at(std::size_t g) const {
  const Trajectory* t = this;
  while (g < t->cut) t = t->parent.get();
  return t->startTime + static_cast<double>(g - t->cut) * t->dt;
}

void simulate_segment(Trajectory& traj, const ProblemSpec& problem, const IntegratorScheme& scheme, RandomStream& rng,
                      const SimulationOptions& options) {
  if (!(scheme.dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  const SdeModel& model = problem.model;
  const int dim = model.dimension;
  if (scheme.kind == SchemeKind::Order15 && dim != 1) {
    throw Error(ErrorKind::UnsupportedDimension, "order-1.5 scheme is one-dimensional");
  }
  traj.dt = scheme.dt;
  traj.dimension = dim;
  traj.xs.clear();
  traj.ys.clear();
  traj.phis.clear();
  traj.ownSteps = 0;
  traj.outcome = Outcome::Running;

  State x = traj.start;
  if (dim == 1) x(1) = 0.0;
  const bool same = problem.sameCoordinate;
  const bool euler = scheme.kind == SchemeKind::Euler;
  const double scale = std::sqrt(2.0 * scheme.dt / model.beta);
  double ownMax = -1.0;
  for (std::uint64_t k = 0;; ++k) {
    const double phi = problem.phi(x);
    const double setPhi = same ? phi : problem.setPhi(x);
    ownMax = std::max(ownMax, phi);
    if (options.storePath) {
      traj.xs.push_back(x(0));
      if (dim == 2) traj.ys.push_back(x(1));
      traj.phis.push_back(phi);
    }
    if (setPhi >= problem.b) {
      traj.outcome = Outcome::HitB;
    } else if (k > 0 && setPhi <= problem.a) {
      traj.outcome = Outcome::HitA;
    }
    if (traj.outcome != Outcome::Running) break;
    if (k >= options.maxSteps) {
      traj.end = x;
      traj.ownMax = ownMax;
      traj.qMax = std::max(traj.qMax, ownMax);
      throw StepBudgetError("trajectory exceeded " + std::to_string(options.maxSteps) + " steps",
                            std::make_shared<const Trajectory>(traj));
    }
    if (euler) {
      // euler_step with the noise scale hoisted out of the loop.
      const State f = model.force(x);
      x(0) += f(0) * scheme.dt + scale * rng.normal();
      if (dim == 2) x(1) += f(1) * scheme.dt + scale * rng.normal();
      if (!std::isfinite(x(0)) || !std::isfinite(x(1))) throw Error(ErrorKind::NumericalBlowup, "non-finite state");
    } else {
      x = advance(x, model, scheme, draw_noise(rng, scheme, model.beta, dim));
    }
    ++traj.ownSteps;
  }
  traj.end = x;
  traj.ownMax = ownMax;
  traj.qMax = traj.parent ? std::max(traj.qMax, ownMax) : ownMax;
}

Trajectory simulate_to_absorption(const State& start, const ProblemSpec& problem, const IntegratorScheme& scheme,
                                  RandomStream& rng, const SimulationOptions& options) {
  Trajectory traj;
  traj.start = start;
  simulate_segment(traj, problem, scheme, rng, options);
  return traj;
}

}  // namespace ams
