#pragma once

// Three-state absorbing chain: 1 = A, 2 = B (absorbing), 3 = metastable D.
// Everything is templated on the scalar so it can run in long double or an
// autodiff type as well as double.

#include <cmath>
#include <limits>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ams/error.hpp"

namespace ams {

enum class RatePreset { LinBeta, LogBeta };

std::string_view to_string(RatePreset preset);
RatePreset rate_preset_from_string(std::string_view name);

template <typename Scalar>
struct ThreeLevelModel {
  Scalar A, B, C;

  /// A = B = 1/beta (LinBeta) or 1/ln(beta) (LogBeta), C = exp(-beta).
  static ThreeLevelModel from_preset(RatePreset preset, Scalar beta) {
    using std::exp;
    using std::log;
    const Scalar rate = preset == RatePreset::LinBeta ? Scalar(1) / beta : Scalar(1) / log(beta);
    return {rate, rate, exp(-beta)};
  }
};

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

namespace detail {

template <typename Scalar>
void require_positive(const ThreeLevelModel<Scalar>& m) {
  if (!(m.A > Scalar(0) && m.B > Scalar(0) && m.C > Scalar(0))) {
    throw Error(ErrorKind::InvalidArgument, "three-level rates must be positive");
  }
}

template <typename Scalar>
Scalar spectral_gap(const ThreeLevelModel<Scalar>& m) {
  using std::abs;
  const Scalar gap = m.A + m.B - m.C;
  if (abs(gap) < Scalar(1e-12)) throw Error(ErrorKind::DegenerateSpectrum, "A + B = C");
  return gap;
}

// 1 - (1 + x) exp(-x), without the cancellation at small x.
template <typename Scalar>
Scalar gamma2_tail(Scalar x) {
  using std::exp;
  using std::expm1;
  return -expm1(-x) - x * exp(-x);
}

// int_0^L t exp(-a t) dt
template <typename Scalar>
Scalar truncated_first_moment(Scalar a, Scalar L) {
  return gamma2_tail(a * L) / (a * a);
}

}  // namespace detail

template <typename Scalar>
Matrix3<Scalar> absorbing_matrix(const ThreeLevelModel<Scalar>& m) {
  detail::require_positive(m);
  Matrix3<Scalar> M;
  M << -(m.A + m.B), Scalar(0), Scalar(0),
       m.A,          Scalar(0), m.C,
       m.B,          Scalar(0), -m.C;
  return M;
}

/// {0, -(A+B), -C}
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> absorbing_eigenvalues(const ThreeLevelModel<Scalar>& m) {
  return {Scalar(0), -(m.A + m.B), -m.C};
}

template <typename Scalar>
struct SpectralWeights {
  Scalar g1, g2;
};

template <typename Scalar>
SpectralWeights<Scalar> spectral_weights(const ThreeLevelModel<Scalar>& m) {
  const Scalar gap = detail::spectral_gap(m);
  const Scalar s = m.A + m.B;
  return {m.B / gap, (m.B * m.C + m.A * (m.C - s)) / (s * gap)};
}

/// exp(M t) in closed form. Column j is the distribution at t starting from state j.
template <typename Scalar>
Matrix3<Scalar> transition_matrix(const ThreeLevelModel<Scalar>& m, Scalar t) {
  using std::exp;
  detail::require_positive(m);
  const auto [g1, g2] = spectral_weights(m);
  const Scalar fast = exp(-(m.A + m.B) * t);
  const Scalar slow = exp(-m.C * t);
  Matrix3<Scalar> T;
  T << fast,                            Scalar(0), Scalar(0),
       Scalar(1) - g1 * slow + g2 * fast, Scalar(1), Scalar(1) - slow,
       g1 * (slow - fast),              Scalar(0), slow;
  return T;
}

/// Density of the 1 -> 2 absorption time, d/dt T_21(t).
template <typename Scalar>
Scalar duration_pdf(const ThreeLevelModel<Scalar>& m, Scalar t) {
  using std::exp;
  const Scalar gap = detail::spectral_gap(m);
  const Scalar s = m.A + m.B;
  return m.B * m.C / gap * exp(-m.C * t) + s * (m.A - m.C) / gap * exp(-s * t);
}

/// (1 / (A+B)) (1 + B / C)
template <typename Scalar>
Scalar mean_duration(const ThreeLevelModel<Scalar>& m) {
  detail::require_positive(m);
  return (Scalar(1) + m.B / m.C) / (m.A + m.B);
}

template <typename Scalar>
struct TruncatedMean {
  Scalar exact;        // int_0^L t T'_12(t) dt
  Scalar largeCutoff;  // same with exp(-(A+B) L) dropped
  Scalar smallC;       // leading terms in C L
};

template <typename Scalar>
TruncatedMean<Scalar> truncated_mean_duration(const ThreeLevelModel<Scalar>& m, Scalar cutoff) {
  const Scalar gap = detail::spectral_gap(m);
  const Scalar s = m.A + m.B;
  const Scalar slowPart = m.B * m.C / gap * detail::truncated_first_moment(m.C, cutoff);
  TruncatedMean<Scalar> out;
  out.exact = slowPart + s * (m.A - m.C) / gap * detail::truncated_first_moment(s, cutoff);
  out.largeCutoff = ((m.A - m.C) * m.C + m.B * s * detail::gamma2_tail(m.C * cutoff)) / (m.C * s * gap);
  out.smallC = (m.A / s + m.C * m.B * (cutoff * cutoff / Scalar(2) - Scalar(1) / (s * s))) / s;
  return out;
}

/// Bound on |exact - largeCutoff|: the dropped exp(-(A+B) L) term.
template <typename Scalar>
Scalar large_cutoff_error(const ThreeLevelModel<Scalar>& m, Scalar cutoff) {
  using std::abs;
  using std::exp;
  const Scalar s = m.A + m.B;
  return abs(m.A - m.C) / (s * abs(detail::spectral_gap(m))) * (Scalar(1) + s * cutoff) * exp(-s * cutoff);
}

template <typename Scalar>
struct InflexionBeta {
  Scalar value;        // LinBeta: closed form; LogBeta: Newton root
  Scalar firstOrder;   // LogBeta: first-order approximation; LinBeta: same as value
  int iterations = 0;
};

/// LinBeta: 2 ln L + ln 2. LogBeta: root of b - ln b = 2 ln L + ln 2.
template <typename Scalar>
InflexionBeta<Scalar> inflexion_beta(Scalar cutoff, RatePreset preset, Scalar tol = Scalar(1e-10),
                                     int maxIter = 100) {
  using std::abs;
  using std::log;
  if (!(cutoff > Scalar(1))) throw Error(ErrorKind::InvalidArgument, "cut-off must exceed 1");
  const Scalar lin = Scalar(2) * log(cutoff) + log(Scalar(2));
  if (preset == RatePreset::LinBeta) return {lin, lin, 0};
  const Scalar firstOrder = lin + log(lin) / (Scalar(1) - Scalar(1) / lin);
  Scalar b = firstOrder;
  for (int it = 1; it <= maxIter; ++it) {
    const Scalar f = b - log(b) - lin;
    const Scalar step = f / (Scalar(1) - Scalar(1) / b);
    b -= step;
    if (!(b > Scalar(1))) break;
    if (abs(b - log(b) - lin) < tol) return {b, firstOrder, it};
  }
  throw Error(ErrorKind::SolverFailed, "Newton iteration for the inflexion did not converge");
}

template <typename Scalar>
struct TauSweepRow {
  Scalar cutoff, beta, tauLambda, tau;
};

template <typename Scalar>
struct TauSweepPeak {
  Scalar cutoff, argmaxBeta, maxTau;
  Scalar argminBeta;  // first local minimum after the peak, or NaN
};

/// tau_L(beta) for each cut-off over the beta grid, rows in (cutoff, beta) order.
template <typename Scalar>
std::vector<TauSweepRow<Scalar>> sweep_tau_vs_beta(RatePreset preset, const std::vector<Scalar>& cutoffs,
                                                   const std::vector<Scalar>& betas) {
  std::vector<TauSweepRow<Scalar>> rows;
  rows.reserve(cutoffs.size() * betas.size());
  for (const Scalar L : cutoffs) {
    for (const Scalar beta : betas) {
      const auto m = ThreeLevelModel<Scalar>::from_preset(preset, beta);
      rows.push_back({L, beta, truncated_mean_duration(m, L).exact, mean_duration(m)});
    }
  }
  return rows;
}

/// Per cut-off maximum of tau_L over the beta grid (first attainment).
template <typename Scalar>
std::vector<TauSweepPeak<Scalar>> sweep_peaks(const std::vector<TauSweepRow<Scalar>>& rows) {
  std::vector<TauSweepPeak<Scalar>> peaks;
  std::size_t begin = 0;
  while (begin < rows.size()) {
    std::size_t end = begin;
    while (end < rows.size() && rows[end].cutoff == rows[begin].cutoff) ++end;
    std::size_t best = begin;
    for (std::size_t k = begin; k < end; ++k) {
      if (rows[k].tauLambda > rows[best].tauLambda) best = k;
    }
    Scalar argmin = std::numeric_limits<Scalar>::quiet_NaN();
    for (std::size_t k = best + 1; k + 1 < end; ++k) {
      if (rows[k].tauLambda <= rows[k - 1].tauLambda && rows[k].tauLambda <= rows[k + 1].tauLambda) {
        argmin = rows[k].beta;
        break;
      }
    }
    peaks.push_back({rows[begin].cutoff, rows[best].beta, rows[best].tauLambda, argmin});
    begin = end;
  }
  return peaks;
}

}  // namespace ams
