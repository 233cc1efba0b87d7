#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ams/ams.hpp"

namespace ams {

/// Population moments of a sample.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;        // divides by count
  double sampleVariance = 0.0;  // divides by count - 1
  double thirdCentral = 0.0;
};

Moments moments(const std::vector<double>& values);

struct KCumulants {
  double meanK = 0.0;
  double varK = 0.0;
  double sigmaOverM = 0.0;  // sqrt(<K^2> - <K>^2) / <K>
  double skewness = 0.0;    // (<K^3> - 3<K> Var - <K>^3) / Var^{3/2}
};

/// Throws DegenerateSample for fewer than two values or zero variance.
KCumulants cumulants_of_K(const std::vector<double>& K);

enum class CompensatedVarianceKind {
  AlphaHat,  // N Var(alpha) / (alpha^2 |ln alpha|)
  LiteralK,  // sqrt(N) Var(K) / (alpha sqrt|ln alpha|)
};

double compensated_variance(const std::vector<double>& values, double alphaRef, int N,
                            CompensatedVarianceKind kind = CompensatedVarianceKind::AlphaHat);

struct EnsembleSummary {
  std::size_t count = 0;  // non-extinct records
  std::size_t extinctionCount = 0;
  int N = 0;
  int n = 0;
  double meanAlpha = 0.0;
  double varAlpha = 0.0;  // sample variance
  double stdErrAlpha = 0.0;
  double meanK = 0.0;  // of AmsOutcome::iterations_equivalent
  double varK = 0.0;
  double sigmaOverM = 0.0;
  double skewnessS = 0.0;
  std::optional<double> sigma0;  // when a reference alpha is given
  double meanDuration = 0.0;     // over realization means <tau>_N
  double varDuration = 0.0;
  double meanR = 0.0;
  double meanSteps = 0.0;
};

/// Extinct records are counted and left out of every moment.
EnsembleSummary summarize(const std::vector<AmsOutcome>& records, std::optional<double> alphaRef = std::nullopt);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slopeStdErr = 0.0;
  double r2 = 0.0;
  std::vector<double> residuals;

  double lower(double z = 1.96) const { return slope - z * slopeStdErr; }
  double upper(double z = 1.96) const { return slope + z * slopeStdErr; }
};

/// Ordinary least squares of y on x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Least squares of log y on log x.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct DtConvergence {
  std::vector<double> dt;
  std::vector<double> eDt;
  std::vector<double> eDtErr;
  LinearFit fit;
  bool fitUnreliable = false;  // e_dt not monotone in dt

  double gamma() const { return fit.slope; }
};

/// e_dt = |1 - (<alpha_dt> - bias) / alpha| and the slope of log e_dt against log dt.
DtConvergence dt_convergence_fit(const std::vector<double>& dt, const std::vector<double>& meanAlpha,
                                 const std::vector<double>& stdErrAlpha, double alphaRef, double bias = 0.0);

/// Runs `realizations` AMS runs at every dt of the list and fits the rate.
DtConvergence dt_convergence_rate(const AmsConfig& base, const std::vector<double>& dtList, std::uint32_t realizations,
                                  double alphaRef, int threads, double bias = 0.0);

struct DurationStatistics {
  double gammaTau = 0.0;
  std::vector<double> N;
  std::vector<double> meanTau;
  std::vector<double> stdTau;
  std::vector<double> bias;  // <tau_N> - tauRef
  std::optional<LinearFit> biasFit;  // log |bias| against log N
};

/// perN[k] holds the per-realization mean durations at Ns[k].
DurationStatistics duration_statistics(const std::vector<int>& Ns, const std::vector<std::vector<double>>& perN,
                                       std::optional<double> tauRef);

/// Slope of log |value - limit| against log N; needs at least four N values.
LinearFit n_convergence_rate(const std::vector<double>& Ns, const std::vector<double>& values, double limit);

struct NConvergenceRates {
  LinearFit alpha;  // f_alpha
  LinearFit tau;    // f_tau
};

enum class TauAsymptote { Reference, LargestN };

NConvergenceRates n_convergence_rates(const std::vector<double>& Ns, const std::vector<double>& meanKOverN,
                                      double kLimit, const std::vector<double>& meanTau, TauAsymptote asymptote,
                                      double tauRef = 0.0);

/// <K>/N - |ln alphaRef| over non-extinct records.
double kn_bias(const std::vector<AmsOutcome>& records, double lnAlphaRef);

struct ComplexityEstimate {
  double K = 0.0;
  double cost = 0.0;
};

/// C = N (D_init + a ln N) + K (n D_branch + b ln N), K = ln(alpha N / r) / ln(1 - n / N).
ComplexityEstimate complexity_estimate(int N, int n, double alpha, double dInit, double dBranch, double a, double b,
                                       int r);

}  // namespace ams
