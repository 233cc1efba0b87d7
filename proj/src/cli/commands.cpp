#include "ams/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "ams/ams.hpp"
#include "ams/committor.hpp"
#include "ams/committor_grid.hpp"
#include "ams/dns.hpp"
#include "ams/error.hpp"
#include "ams/io/output.hpp"
#include "ams/stats.hpp"
#include "ams/three_level.hpp"

namespace ams::cli {

using io::CsvTable;
using io::Json;
using io::num;

namespace {

bool is_2d(ModelKind kind) { return kind == ModelKind::TripleWell || kind == ModelKind::TwoSaddles; }

struct Reference {
  std::optional<double> alpha;
  std::string source = "none";
};

// A problem together with what was needed to build it.
struct Built {
  ProblemSpec problem;
  std::shared_ptr<const CommittorGrid> grid;
  std::string gridPath;
};

std::shared_ptr<const CommittorGrid> load_grid_for(const std::string& path, double beta) {
  auto grid = std::make_shared<const CommittorGrid>(load_committor_grid(path));
  if (std::abs(grid->beta - beta) > 1e-12 * std::max(1.0, beta)) {
    throw Error(ErrorKind::ConfigError, "committor grid " + path + " was solved at beta = " + num(grid->beta) +
                                            ", the model uses beta = " + num(beta));
  }
  return grid;
}

CommittorSolveOptions solve_options(const io::ExperimentConfig& c, const ProblemSpec& setsProblem) {
  CommittorSolveOptions o;
  if (c.committor.setDirichlet) {
    o = set_dirichlet_options(setsProblem, c.committor.spacing, c.committor.monitoringDt);
  } else {
    o.dx = o.dy = c.committor.spacing;
  }
  o.x0 = c.committor.x0;
  o.x1 = c.committor.x1;
  o.y0 = c.committor.y0;
  o.y1 = c.committor.y1;
  o.tol = c.committor.tol;
  return o;
}

ProblemSpec make_2d(ModelKind kind, double beta, CoordinateChoice coord, std::shared_ptr<const CommittorGrid> grid) {
  return kind == ModelKind::TripleWell ? make_triple_well_problem(beta, coord, std::move(grid))
                                       : make_two_saddles_problem(beta, coord, std::move(grid));
}

// The problem whose sets bound the committor solve: the norm sets for the
// committor coordinate, the coordinate's own sets otherwise.
ProblemSpec sets_problem(const io::ExperimentConfig& c, double beta) {
  const CoordinateChoice coord =
      c.problem.coordinate == CoordinateChoice::Committor ? CoordinateChoice::Norm : c.problem.coordinate;
  return make_2d(c.model.kind, beta, coord, nullptr);
}

// solveMissing: solve a grid at this beta when the configured one is absent or at another beta.
Built build_problem(const io::ExperimentConfig& c, double beta, bool solveMissing, std::ostream& log) {
  Built b;
  switch (c.model.kind) {
    case ModelKind::Drift: b.problem = make_drift_problem(c.model.mu, beta, c.problem.coordinate, c.problem.drift); break;
    case ModelKind::DoubleWell: b.problem = make_double_well_problem(beta, c.problem.coordinate, c.problem.xC); break;
    case ModelKind::TripleWell:
    case ModelKind::TwoSaddles: {
      const std::string& path = c.problem.committorGrid;
      if (!path.empty()) {
        if (!std::filesystem::exists(path)) throw Error(ErrorKind::FileNotFound, "committor grid not found: " + path);
        auto grid = std::make_shared<const CommittorGrid>(load_committor_grid(path));
        if (std::abs(grid->beta - beta) <= 1e-12 * std::max(1.0, beta)) {
          b.grid = grid;
          b.gridPath = path;
        } else if (!solveMissing) {
          load_grid_for(path, beta);  // throws the mismatch diagnostic
        }
      }
      if (!b.grid && c.problem.coordinate == CoordinateChoice::Committor) {
        if (!solveMissing) {
          throw Error(ErrorKind::FileNotFound, "the committor coordinate needs problem.committorGrid");
        }
        log << "solving the committor grid at beta = " << beta << "\n";
        b.grid = std::make_shared<const CommittorGrid>(
            solve_committor_2d(make_2d(c.model.kind, beta, CoordinateChoice::Norm, nullptr).model,
                               solve_options(c, sets_problem(c, beta))));
      }
      b.problem = make_2d(c.model.kind, beta, c.problem.coordinate, b.grid);
      break;
    }
    case ModelKind::Custom: throw Error(ErrorKind::ConfigError, "custom models cannot be built from a configuration");
  }
  return b;
}

// Closed form > 1-D quadrature > committor grid averaged over rho_C > configured value.
Reference reference_alpha(const io::ExperimentConfig& c, const Built& b) {
  Reference r;
  const auto& g = c.problem.drift;
  switch (c.model.kind) {
    case ModelKind::Drift:
      r.alpha = committor_drift(g.x0, g.xA, g.xB, b.problem.model.beta, c.model.mu);
      r.source = "closed_form";
      return r;
    case ModelKind::DoubleWell:
      r.alpha = committor_1d_quadrature(c.problem.xC, b.problem.model, -1.0, 1.0);
      r.source = "quadrature";
      return r;
    default: break;
  }
  if (b.grid) {
    r.alpha = committor_average_on_c(*b.grid, b.problem);
    r.source = "committor_grid";
  } else if (c.referenceAlpha) {
    r.alpha = c.referenceAlpha;
    r.source = "config";
  }
  return r;
}

AmsConfig ams_config(const io::ExperimentConfig& c, const ProblemSpec& problem, int N, double dt) {
  AmsConfig a;
  a.N = N;
  a.n = c.ams.n;
  a.problem = problem;
  a.scheme = c.scheme;
  a.scheme.dt = dt;
  a.masterSeed = c.masterSeed;
  a.maxIterations = c.ams.maxIterations;
  a.maxSteps = c.ams.maxSteps;
  a.variant = ams_variant_from_string(c.ams.variant);
  a.brownianBridge = c.ams.brownianBridge;
  return a;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

const std::vector<std::string> kSummaryHeader = {
    "model", "coordinate", "beta", "dt", "N", "n", "realizations", "count", "extinct", "meanAlpha", "stdErrAlpha",
    "alphaRef", "alphaRefSource", "meanK", "varK", "KOverN", "lnAlphaRef", "sigmaOverM", "skewness", "sigma0",
    "meanTau", "stdTau", "meanSteps"};

std::vector<std::string> summary_row(const io::ExperimentConfig& c, double beta, double dt, std::size_t realizations,
                                     const EnsembleSummary& s, const Reference& ref) {
  const std::optional<double> lnRef = ref.alpha ? std::optional<double>(std::abs(std::log(*ref.alpha))) : std::nullopt;
  return {std::string(to_string(c.model.kind)),
          std::string(to_string(c.problem.coordinate)),
          num(beta),
          num(dt),
          num(s.N),
          num(s.n),
          num(static_cast<std::uint64_t>(realizations)),
          num(static_cast<std::uint64_t>(s.count)),
          num(static_cast<std::uint64_t>(s.extinctionCount)),
          num(s.meanAlpha),
          num(s.stdErrAlpha),
          opt(ref.alpha),
          ref.source,
          num(s.meanK),
          num(s.varK),
          num(s.meanK / s.N),
          opt(lnRef),
          num(s.sigmaOverM),
          num(s.skewnessS),
          opt(s.sigma0),
          num(s.meanDuration),
          num(std::sqrt(s.varDuration)),
          num(s.meanSteps)};
}

std::string jsonl(const std::vector<AmsOutcome>& records, const std::string& hash) {
  std::string out;
  for (const auto& r : records) out += io::ams_record(r, hash).dump() + "\n";
  return out;
}

template <typename T>
std::vector<T> or_single(const std::vector<T>& list, T fallback) {
  return list.empty() ? std::vector<T>{fallback} : list;
}

}  // namespace

Json prepare_config(const Overrides& o) {
  Json user = o.configPath.empty() ? Json::object() : io::load_config_file(o.configPath);
  if (!user.is_object()) throw Error(ErrorKind::ConfigError, "configuration must be a JSON object");
  if (o.seed) user["masterSeed"] = *o.seed;
  if (o.threads) user["threads"] = *o.threads;
  if (o.out) user["output"] = *o.out;
  return io::resolve_config(user);
}

int cmd_run_ams(const Json& resolved, std::ostream& log) {
  const io::ExperimentConfig c = io::to_experiment(resolved);
  io::RunWriter w(c.output, "run-ams", resolved);
  const Built b = build_problem(c, c.model.beta, false, log);
  if (!b.gridPath.empty()) w.add_input(b.gridPath);
  const Reference ref = reference_alpha(c, b);

  const AmsConfig cfg = ams_config(c, b.problem, c.ams.N, c.scheme.dt);
  const auto records = run_ams_ensemble(cfg, c.ams.firstRealization, c.ams.realizations, c.threads);
  w.write("records.jsonl", jsonl(records, w.hash()));

  const EnsembleSummary s = summarize(records, records.size() >= 2 ? ref.alpha : std::nullopt);
  CsvTable table(kSummaryHeader);
  table.row(summary_row(c, c.model.beta, c.scheme.dt, records.size(), s, ref));
  w.write("summary.csv", table.render(w.hash()));
  w.note("extinctionCount", s.extinctionCount);
  w.finish();

  log << "run-ams: " << s.count << " realizations, mean alpha " << num(s.meanAlpha) << " +- " << num(s.stdErrAlpha);
  if (ref.alpha) log << " (reference " << num(*ref.alpha) << ", " << ref.source << ")";
  log << "\n";
  if (s.extinctionCount > 0) {
    log << "run-ams: " << s.extinctionCount << " realizations went extinct\n";
    return kExitFlagged;
  }
  return kExitOk;
}

int cmd_run_dns(const Json& resolved, std::ostream& log) {
  const io::ExperimentConfig c = io::to_experiment(resolved);
  io::RunWriter w(c.output, "run-dns", resolved);
  const Built b = build_problem(c, c.model.beta, false, log);
  if (!b.gridPath.empty()) w.add_input(b.gridPath);
  const Reference ref = reference_alpha(c, b);
  const DnsResult d = dns_run(b.problem, c.scheme, c.dnsM, c.masterSeed, c.threads, 0, c.dnsMaxSteps);
  const Moments tau = moments(d.reactiveDurations);

  CsvTable table({"model", "coordinate", "beta", "dt", "scheme", "M", "hitsA", "hitsB", "zeroHit", "alphaDns",
                  "stdErr", "alphaRef", "alphaRefSource", "meanTau", "stdErrTau", "steps"});
  table.row({std::string(to_string(c.model.kind)), std::string(to_string(c.problem.coordinate)), num(c.model.beta),
             num(c.scheme.dt), std::string(to_string(c.scheme.kind)), num(d.M), num(d.hitsA), num(d.hitsB),
             d.zeroHit ? "true" : "false", num(d.alphaDns), num(d.stdErr), opt(ref.alpha), ref.source, num(tau.mean),
             num(tau.count > 1 ? std::sqrt(tau.sampleVariance / static_cast<double>(tau.count)) : 0.0),
             num(d.steps)});
  w.write("summary.csv", table.render(w.hash()));
  CsvTable durations({"duration"});
  for (double t : d.reactiveDurations) durations.row({num(t)});
  w.write("durations.csv", durations.render(w.hash()));
  w.finish();
  log << "run-dns: alpha " << num(d.alphaDns) << " +- " << num(d.stdErr) << " from " << d.hitsB << " hits\n";
  return kExitOk;
}

int cmd_committor(const Json& resolved, std::ostream& log) {
  const io::ExperimentConfig c = io::to_experiment(resolved);
  io::RunWriter w(c.output, "committor", resolved);
  const double beta = c.model.beta;
  if (!is_2d(c.model.kind)) {
    const int points = c.committor.points1d;
    if (points < 2) throw Error(ErrorKind::ConfigError, "committor.points1d must be at least 2");
    const bool drift = c.model.kind == ModelKind::Drift;
    const SdeModel model = drift ? SdeModel::drift(c.model.mu, beta) : SdeModel::double_well(beta);
    const double xA = drift ? c.problem.drift.xA : -1.0;
    const double xB = drift ? c.problem.drift.xB : 1.0;
    CsvTable table(drift ? std::vector<std::string>{"x", "q_quadrature", "q_closed_form"}
                         : std::vector<std::string>{"x", "q_quadrature", "q_saddle_approx"});
    for (int k = 0; k < points; ++k) {
      const double x = xA + (xB - xA) * k / (points - 1);
      const double q = committor_1d_quadrature(x, model, xA, xB);
      const double other = drift ? committor_drift(x, xA, xB, beta, c.model.mu)
                                 : committor_saddle_approx(x, model, xA, xB, 0.0);
      table.row({num(x), num(q), num(other)});
    }
    w.write("committor_1d.csv", table.render(w.hash()));
    w.finish();
    log << "committor: tabulated " << points << " points\n";
    return kExitOk;
  }

  const ProblemSpec sets = sets_problem(c, beta);
  const CommittorGrid grid = solve_committor_2d(sets.model, solve_options(c, sets));
  std::ostringstream text;
  write_committor_grid(text, grid);
  w.write("committor.grid", text.str());
  const double atC = committor_average_on_c(grid, sets);
  CsvTable table({"model", "beta", "spacing", "nx", "ny", "dirichlet", "monitoringDt", "residual", "qOnC"});
  table.row({std::string(to_string(c.model.kind)), num(beta), num(c.committor.spacing),
             num(static_cast<std::uint64_t>(grid.nx())), num(static_cast<std::uint64_t>(grid.ny())),
             c.committor.setDirichlet ? "sets" : "points", num(c.committor.monitoringDt), num(grid.residualNorm),
             num(atC)});
  w.write("summary.csv", table.render(w.hash()));
  w.finish();
  log << "committor: " << grid.nx() << "x" << grid.ny() << " grid, average on C " << num(atC) << "\n";
  return kExitOk;
}

int cmd_ensemble_sweep(const Json& resolved, std::ostream& log) {
  const io::ExperimentConfig c = io::to_experiment(resolved);
  io::RunWriter w(c.output, "ensemble-sweep", resolved);
  const auto Ns = or_single(c.sweep.N, c.ams.N);
  const auto dts = or_single(c.sweep.dt, c.scheme.dt);
  const auto betas = or_single(c.sweep.beta, c.model.beta);
  const std::uint32_t R = c.sweep.realizations;

  CsvTable summary(kSummaryHeader);
  CsvTable dtFit({"beta", "N", "gamma", "gammaStdErr", "r2", "fitUnreliable"});
  CsvTable nFit({"beta", "dt", "quantity", "slope", "slopeStdErr", "r2"});
  CsvTable knBeta({"series", "x", "y", "err"});
  CsvTable edt({"series", "x", "y", "err"});
  CsvTable knN({"series", "x", "y", "err"});
  CsvTable tauN({"series", "x", "y", "err"});
  std::string records;
  std::size_t extinct = 0;

  for (double beta : betas) {
    const Built b = build_problem(c, beta, true, log);
    if (!b.gridPath.empty()) w.add_input(b.gridPath);
    const Reference ref = reference_alpha(c, b);
    const double lnRef = ref.alpha ? std::abs(std::log(*ref.alpha)) : std::nan("");
    // summaries[dt index][N index]
    std::vector<std::vector<EnsembleSummary>> grid(dts.size(), std::vector<EnsembleSummary>(Ns.size()));
    std::vector<std::vector<std::vector<double>>> taus(dts.size(), std::vector<std::vector<double>>(Ns.size()));
    for (std::size_t i = 0; i < dts.size(); ++i) {
      for (std::size_t j = 0; j < Ns.size(); ++j) {
        if (c.ams.n >= Ns[j]) throw Error(ErrorKind::ConfigError, "ams.n must be smaller than every sweep.N");
        log << "ensemble-sweep: beta " << beta << " dt " << dts[i] << " N " << Ns[j] << "\n";
        const auto recs = run_ams_ensemble(ams_config(c, b.problem, Ns[j], dts[i]), 0, R, c.threads);
        records += jsonl(recs, w.hash());
        const EnsembleSummary s = summarize(recs, recs.size() >= 2 ? ref.alpha : std::nullopt);
        extinct += s.extinctionCount;
        grid[i][j] = s;
        for (const auto& r : recs) {
          if (!r.extinction && !r.reactiveDurations.empty()) taus[i][j].push_back(r.mean_duration());
        }
        summary.row(summary_row(c, beta, dts[i], recs.size(), s, ref));
        const std::string series = "beta=" + num(beta) + ",dt=" + num(dts[i]);
        if (ref.alpha) {
          const double err = s.count > 1 ? std::sqrt(s.varK / static_cast<double>(s.count)) / Ns[j] : 0.0;
          knN.row({series, num(Ns[j]), num(s.meanK / Ns[j] - lnRef), num(err)});
          knBeta.row({"N=" + num(Ns[j]) + ",dt=" + num(dts[i]), num(beta), num(s.meanK / Ns[j] - lnRef), num(err)});
        }
        tauN.row({series, num(Ns[j]), num(s.meanDuration),
                  num(s.count > 1 ? std::sqrt(s.varDuration / static_cast<double>(s.count)) : 0.0)});
      }
    }

    if (ref.alpha && dts.size() >= 2) {
      for (std::size_t j = 0; j < Ns.size(); ++j) {
        std::vector<double> mean, err;
        for (std::size_t i = 0; i < dts.size(); ++i) {
          mean.push_back(grid[i][j].meanAlpha);
          err.push_back(grid[i][j].stdErrAlpha);
        }
        try {
          const DtConvergence fit = dt_convergence_fit(dts, mean, err, *ref.alpha);
          dtFit.row({num(beta), num(Ns[j]), num(fit.gamma()), num(fit.fit.slopeStdErr), num(fit.fit.r2),
                     fit.fitUnreliable ? "true" : "false"});
          for (std::size_t i = 0; i < dts.size(); ++i) {
            edt.row({"beta=" + num(beta) + ",N=" + num(Ns[j]), num(dts[i]), num(fit.eDt[i]), num(fit.eDtErr[i])});
          }
        } catch (const Error& e) {
          log << "ensemble-sweep: dt fit skipped: " << e.what() << "\n";
        }
      }
    }

    if (Ns.size() >= 4) {
      const std::vector<double> Nd(Ns.begin(), Ns.end());
      for (std::size_t i = 0; i < dts.size(); ++i) {
        std::vector<double> kOverN, meanTau;
        for (std::size_t j = 0; j < Ns.size(); ++j) {
          kOverN.push_back(grid[i][j].meanK / Ns[j]);
          meanTau.push_back(grid[i][j].meanDuration);
        }
        try {
          if (ref.alpha) {
            const LinearFit f = n_convergence_rate(Nd, kOverN, lnRef);
            nFit.row({num(beta), num(dts[i]), "f_alpha", num(f.slope), num(f.slopeStdErr), num(f.r2)});
          }
          const bool haveTauLimit = c.sweep.tauAsymptote == TauAsymptote::LargestN || c.referenceTau;
          if (haveTauLimit) {
            const NConvergenceRates rates =
                n_convergence_rates(Nd, kOverN, ref.alpha ? lnRef : 0.0, meanTau, c.sweep.tauAsymptote,
                                    c.referenceTau.value_or(0.0));
            nFit.row({num(beta), num(dts[i]), "f_tau", num(rates.tau.slope), num(rates.tau.slopeStdErr),
                      num(rates.tau.r2)});
          }
          if (c.referenceTau) {
            const DurationStatistics d = duration_statistics(Ns, taus[i], c.referenceTau);
            nFit.row({num(beta), num(dts[i]), "gamma_tau", num(d.gammaTau), "", ""});
            if (d.biasFit) {
              nFit.row({num(beta), num(dts[i]), "tau_bias", num(d.biasFit->slope), num(d.biasFit->slopeStdErr),
                        num(d.biasFit->r2)});
            }
          }
        } catch (const Error& e) {
          log << "ensemble-sweep: N fit skipped: " << e.what() << "\n";
        }
      }
    }
  }

  w.write("records.jsonl", records);
  w.write("summary.csv", summary.render(w.hash()));
  w.write("dt_fit.csv", dtFit.render(w.hash()));
  w.write("n_fit.csv", nFit.render(w.hash()));
  w.write("plot_edt_vs_dt.csv", edt.render(w.hash()));
  w.write("plot_kn_bias_vs_n.csv", knN.render(w.hash()));
  w.write("plot_kn_bias_vs_beta.csv", knBeta.render(w.hash()));
  w.write("plot_tau_vs_n.csv", tauN.render(w.hash()));
  w.note("extinctionCount", extinct);
  w.finish();
  log << "ensemble-sweep: " << summary.size() << " sweep points written\n";
  return extinct > 0 ? kExitFlagged : kExitOk;
}

int cmd_three_level(const Json& resolved, std::ostream& log) {
  const io::ExperimentConfig c = io::to_experiment(resolved);
  io::RunWriter w(c.output, "three-level", resolved);
  const auto& t = c.threeLevel;
  std::vector<double> betas;
  const auto count = static_cast<std::size_t>(std::floor((t.betaMax - t.betaMin) / t.betaStep + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) betas.push_back(t.betaMin + static_cast<double>(k) * t.betaStep);

  const auto rows = sweep_tau_vs_beta<double>(t.preset, t.cutoffs, betas);
  CsvTable sweep({"cutoff", "beta", "tauLambda", "tau"});
  CsvTable plot({"series", "x", "y", "err"});
  for (const auto& r : rows) {
    sweep.row({num(r.cutoff), num(r.beta), num(r.tauLambda), num(r.tau)});
    plot.row({"Lambda=" + num(r.cutoff), num(r.beta), num(r.tauLambda), "0"});
  }
  CsvTable peaks({"cutoff", "argmaxBeta", "maxTauLambda", "argminBeta", "inflexionBetaLin", "inflexionBetaLog",
                  "inflexionBetaLogFirstOrder"});
  CsvTable argmax({"series", "x", "y", "err"});
  for (const auto& p : sweep_peaks(rows)) {
    const auto lin = inflexion_beta<double>(p.cutoff, RatePreset::LinBeta);
    const auto lg = inflexion_beta<double>(p.cutoff, RatePreset::LogBeta);
    peaks.row({num(p.cutoff), num(p.argmaxBeta), num(p.maxTau), num(p.argminBeta), num(lin.value), num(lg.value),
               num(lg.firstOrder)});
    argmax.row({"argmax", num(std::log(p.cutoff)), num(p.argmaxBeta), "0"});
    argmax.row({"inflexion_" + std::string(to_string(t.preset)), num(std::log(p.cutoff)),
                num(t.preset == RatePreset::LinBeta ? lin.value : lg.value), "0"});
    log << "three-level: Lambda " << num(p.cutoff) << " argmax beta " << num(p.argmaxBeta) << " inflexion (lin) "
        << num(lin.value) << "\n";
  }
  w.write("tau_sweep.csv", sweep.render(w.hash()));
  w.write("peaks.csv", peaks.render(w.hash()));
  w.write("plot_tau_lambda_vs_beta.csv", plot.render(w.hash()));
  w.write("plot_argmax_vs_log_cutoff.csv", argmax.render(w.hash()));
  w.finish();
  return kExitOk;
}

}  // namespace ams::cli
