#include "ams/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ams/error.hpp"

namespace ams {

Moments moments(const std::vector<double>& values) {
  Moments m;
  m.count = values.size();
  if (values.empty()) return m;
  const double count = static_cast<double>(values.size());
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
  double s2 = 0.0, s3 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    s2 += d * d;
    s3 += d * d * d;
  }
  m.variance = s2 / count;
  m.sampleVariance = values.size() > 1 ? s2 / (count - 1.0) : 0.0;
  m.thirdCentral = s3 / count;
  return m;
}

KCumulants cumulants_of_K(const std::vector<double>& K) {
  if (K.size() < 2) throw Error(ErrorKind::DegenerateSample, "need at least two records");
  const Moments m = moments(K);
  if (!(m.variance > 0.0)) throw Error(ErrorKind::DegenerateSample, "K has zero variance");
  KCumulants c;
  c.meanK = m.mean;
  c.varK = m.variance;
  c.sigmaOverM = std::sqrt(m.variance) / m.mean;
  // <K^3> - 3<K>Var - <K>^3 is the third central moment.
  c.skewness = m.thirdCentral / std::pow(m.variance, 1.5);
  return c;
}

double compensated_variance(const std::vector<double>& values, double alphaRef, int N, CompensatedVarianceKind kind) {
  if (!(alphaRef > 0.0 && alphaRef < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "reference alpha must lie in (0,1)");
  }
  if (values.size() < 2) throw Error(ErrorKind::DegenerateSample, "need at least two records");
  const double var = moments(values).sampleVariance;
  const double logAlpha = std::abs(std::log(alphaRef));
  if (kind == CompensatedVarianceKind::AlphaHat) return N * var / (alphaRef * alphaRef * logAlpha);
  return std::sqrt(static_cast<double>(N)) * var / (alphaRef * std::sqrt(logAlpha));
}

EnsembleSummary summarize(const std::vector<AmsOutcome>& records, std::optional<double> alphaRef) {
  EnsembleSummary s;
  std::vector<double> alpha, K, tau, r, steps;
  for (const auto& rec : records) {
    s.N = rec.N;
    s.n = rec.n;
    if (rec.extinction) {
      ++s.extinctionCount;
      continue;
    }
    alpha.push_back(rec.alphaHat);
    K.push_back(rec.iterations_equivalent());
    r.push_back(rec.r);
    steps.push_back(static_cast<double>(rec.stepsInit + rec.stepsBranch));
    if (!rec.reactiveDurations.empty()) tau.push_back(rec.mean_duration());
  }
  s.count = alpha.size();
  if (alpha.empty()) return s;
  const Moments ma = moments(alpha);
  s.meanAlpha = ma.mean;
  s.varAlpha = ma.sampleVariance;
  s.stdErrAlpha = std::sqrt(ma.sampleVariance / static_cast<double>(alpha.size()));
  const Moments mk = moments(K);
  s.meanK = mk.mean;
  s.varK = mk.variance;
  if (K.size() >= 2 && mk.variance > 0.0) {
    const KCumulants c = cumulants_of_K(K);
    s.sigmaOverM = c.sigmaOverM;
    s.skewnessS = c.skewness;
  }
  if (alphaRef && alpha.size() >= 2) s.sigma0 = compensated_variance(alpha, *alphaRef, s.N);
  const Moments mt = moments(tau);
  s.meanDuration = mt.mean;
  s.varDuration = mt.sampleVariance;
  s.meanR = moments(r).mean;
  s.meanSteps = moments(steps).mean;
  return s;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "fit needs two or more points");
  const Moments mx = moments(x);
  const Moments my = moments(y);
  double sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) sxy += (x[k] - mx.mean) * (y[k] - my.mean);
  const double sxx = mx.variance * static_cast<double>(x.size());
  if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateSample, "fit abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my.mean - fit.slope * mx.mean;
  double ssr = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double res = y[k] - (fit.intercept + fit.slope * x[k]);
    fit.residuals.push_back(res);
    ssr += res * res;
  }
  const double sst = my.variance * static_cast<double>(y.size());
  fit.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
  fit.slopeStdErr = x.size() > 2 ? std::sqrt(ssr / static_cast<double>(x.size() - 2) / sxx) : 0.0;
  return fit;
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw Error(ErrorKind::InvalidArgument, "log-log fit needs positive data");
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
  }
  return fit_line(lx, ly);
}

DtConvergence dt_convergence_fit(const std::vector<double>& dt, const std::vector<double>& meanAlpha,
                                 const std::vector<double>& stdErrAlpha, double alphaRef, double bias) {
  if (dt.size() != meanAlpha.size() || dt.size() != stdErrAlpha.size()) {
    throw Error(ErrorKind::InvalidArgument, "dt and alpha lists differ in length");
  }
  DtConvergence out;
  out.dt = dt;
  for (std::size_t k = 0; k < dt.size(); ++k) {
    out.eDt.push_back(std::abs(1.0 - (meanAlpha[k] - bias) / alphaRef));
    out.eDtErr.push_back(stdErrAlpha[k] / alphaRef);
  }
  out.fit = fit_loglog(out.dt, out.eDt);
  std::vector<std::size_t> idx(dt.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dt[a] < dt[b]; });
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (out.eDt[idx[k]] < out.eDt[idx[k - 1]]) out.fitUnreliable = true;
  }
  return out;
}

DtConvergence dt_convergence_rate(const AmsConfig& base, const std::vector<double>& dtList, std::uint32_t realizations,
                                  double alphaRef, int threads, double bias) {
  std::vector<double> mean, err;
  for (double dt : dtList) {
    AmsConfig cfg = base;
    cfg.scheme.dt = dt;
    const EnsembleSummary s = summarize(run_ams_ensemble(cfg, 0, realizations, threads));
    mean.push_back(s.meanAlpha);
    err.push_back(s.stdErrAlpha);
  }
  return dt_convergence_fit(dtList, mean, err, alphaRef, bias);
}

DurationStatistics duration_statistics(const std::vector<int>& Ns, const std::vector<std::vector<double>>& perN,
                                       std::optional<double> tauRef) {
  if (Ns.size() != perN.size() || Ns.empty()) throw Error(ErrorKind::InvalidArgument, "one sample per N required");
  DurationStatistics out;
  double gammaSum = 0.0;
  for (std::size_t k = 0; k < Ns.size(); ++k) {
    const Moments m = moments(perN[k]);
    out.N.push_back(Ns[k]);
    out.meanTau.push_back(m.mean);
    out.stdTau.push_back(std::sqrt(m.sampleVariance));
    if (tauRef) {
      out.bias.push_back(m.mean - *tauRef);
      gammaSum += std::sqrt(m.sampleVariance) * std::sqrt(static_cast<double>(Ns[k])) / *tauRef;
    }
  }
  if (tauRef) {
    out.gammaTau = gammaSum / static_cast<double>(Ns.size());
    if (Ns.size() >= 2) {
      std::vector<double> absBias;
      for (double b : out.bias) absBias.push_back(std::abs(b));
      if (std::all_of(absBias.begin(), absBias.end(), [](double b) { return b > 0.0; })) {
        out.biasFit = fit_loglog(out.N, absBias);
      }
    }
  }
  return out;
}

LinearFit n_convergence_rate(const std::vector<double>& Ns, const std::vector<double>& values, double limit) {
  if (Ns.size() < 4) throw Error(ErrorKind::InsufficientSweep, "need at least four values of N");
  std::vector<double> gap;
  for (double v : values) gap.push_back(std::abs(v - limit));
  return fit_loglog(Ns, gap);
}

NConvergenceRates n_convergence_rates(const std::vector<double>& Ns, const std::vector<double>& meanKOverN,
                                      double kLimit, const std::vector<double>& meanTau, TauAsymptote asymptote,
                                      double tauRef) {
  if (Ns.size() < 4) throw Error(ErrorKind::InsufficientSweep, "need at least four values of N");
  NConvergenceRates out;
  out.alpha = n_convergence_rate(Ns, meanKOverN, kLimit);
  if (asymptote == TauAsymptote::Reference) {
    out.tau = n_convergence_rate(Ns, meanTau, tauRef);
  } else {
    // The largest N stands in for the limit and is left out of the fit.
    const auto last = static_cast<std::size_t>(std::max_element(Ns.begin(), Ns.end()) - Ns.begin());
    std::vector<double> n, t;
    for (std::size_t k = 0; k < Ns.size(); ++k) {
      if (k == last) continue;
      n.push_back(Ns[k]);
      t.push_back(meanTau[k]);
    }
    std::vector<double> gap;
    for (double v : t) gap.push_back(std::abs(v - meanTau[last]));
    out.tau = fit_loglog(n, gap);
  }
  return out;
}

double kn_bias(const std::vector<AmsOutcome>& records, double lnAlphaRef) {
  double sum = 0.0;
  std::size_t count = 0;
  int N = 0;
  for (const auto& rec : records) {
    if (rec.extinction) continue;
    sum += rec.iterations_equivalent();
    N = rec.N;
    ++count;
  }
  if (count == 0) throw Error(ErrorKind::DegenerateSample, "no usable records");
  return sum / static_cast<double>(count) / N - std::abs(lnAlphaRef);
}

ComplexityEstimate complexity_estimate(int N, int n, double alpha, double dInit, double dBranch, double a, double b,
                                       int r) {
  if (N < 2 || n < 1 || n >= N || !(alpha > 0.0) || r < 1) {
    throw Error(ErrorKind::InvalidArgument, "complexity parameters out of range");
  }
  ComplexityEstimate out;
  const double logN = std::log(static_cast<double>(N));
  out.K = std::log(alpha * N / r) / std::log(1.0 - static_cast<double>(n) / N);
  if (out.K < 0.0) out.K = 0.0;
  out.cost = N * (dInit + a * logN) + out.K * (n * dBranch + b * logN);
  return out;
}

}  // namespace ams
