#pragma once

// Truncated Fock-space representation of single-mode bosonic states.
//
// Conventions used throughout:
//   a|n> = sqrt(n)|n-1>,  a†|n> = sqrt(n+1)|n+1>
//   coherent state  c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!)
//   squeezed vacuum S(xi)|0>, xi = r e^{i theta}, has only even components
//     c_{2m} = (cosh r)^{-1/2} sqrt((2m)!)/(2^m m!) (-e^{i theta} tanh r)^m
//
// Every constructor accounts for the mass it truncates away.  A state of
// cutoff D is accepted when (series mass not captured below slot D-2) plus
// (mass sitting in the last two "guard" slots) stays below the tail
// tolerance, so downstream two-step ladder sums never reach into levels the
// truncation has corrupted.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "noncl/errors.hpp"

namespace noncl {

using cplx = std::complex<double>;

inline constexpr double kDefaultTailTol = 1e-12;
inline constexpr int kDefaultCutoffCap = 4096;
inline constexpr int kMinCutoff = 4;

// The three moments that fully determine the pure-state measure.
struct Moments {
  double nbar = 0.0;  // <a†a>
  cplx alpha{0.0, 0.0};  // <a>
  cplx xi{0.0, 0.0};     // <a²>
};

namespace detail {

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline cplx coherent_overlap(cplx aj, cplx ak) {
  // <alpha_k | alpha_j>
  return std::exp(-0.5 * std::norm(aj) - 0.5 * std::norm(ak) + std::conj(ak) * aj);
}

// Raw coherent amplitude series, normalized over the infinite ladder.
inline Eigen::VectorXcd coherent_series(cplx alpha, int dim) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
  double t = std::norm(alpha);
  if (t == 0.0) {
    c[0] = 1.0;
    return c;
  }
  double logmag = std::log(std::abs(alpha));
  double phase = std::arg(alpha);
  for (int n = 0; n < dim; ++n) {
    double lm = -0.5 * t + n * logmag - 0.5 * log_factorial(n);
    c[n] = std::polar(std::exp(lm), n * phase);
  }
  return c;
}

inline Eigen::VectorXcd squeezed_vacuum_series(double r, double theta, int dim) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
  if (r == 0.0) {
    c[0] = 1.0;
    return c;
  }
  double th = std::tanh(r);
  double logth = std::log(th);
  double logsech = -std::log(std::cosh(r));
  for (int m = 0; 2 * m < dim; ++m) {
    double lm = 0.5 * log_factorial(2 * m) - m * std::log(2.0) - log_factorial(m) +
                m * logth + 0.5 * logsech;
    // (-e^{i theta})^m carries the phase
    c[2 * m] = std::polar(std::exp(lm), m * (theta + M_PI));
  }
  return c;
}

}  // namespace detail

class PureFockState {
 public:
  explicit PureFockState(Eigen::VectorXcd amps) : amps_(std::move(amps)) {
    if (amps_.size() < 2) fail(errc::cutoff_too_small, "cutoff must be at least 2");
    double n2 = amps_.squaredNorm();
    if (std::abs(n2 - 1.0) > 1e-12)
      fail(errc::not_normalized, "amplitude vector has squared norm " + std::to_string(n2));
  }

  int cutoff() const { return static_cast<int>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  cplx amp(int n) const { return n < amps_.size() ? amps_[n] : cplx{0.0, 0.0}; }

  // Mass sitting in the last two retained levels.
  double guard_mass() const {
    int d = cutoff();
    return std::norm(amps_[d - 2]) + std::norm(amps_[d - 1]);
  }

 private:
  Eigen::VectorXcd amps_;
};

namespace detail {

// Accept a raw series whose infinite-ladder norm is exactly 1: the mass lost
// to truncation plus the guard-band mass must stay below tol.
inline PureFockState finalize_series(Eigen::VectorXcd raw, double tol, const char* what) {
  int d = static_cast<int>(raw.size());
  double kept = raw.squaredNorm();
  double loss = std::max(0.0, 1.0 - kept);
  double guard = std::norm(raw[d - 2]) + std::norm(raw[d - 1]);
  if (loss + guard > tol)
    fail(errc::tail_mass_exceeded,
         std::string(what) + " at cutoff " + std::to_string(d) + ": tail mass " +
             std::to_string(loss + guard) + " exceeds " + std::to_string(tol));
  raw /= std::sqrt(kept);
  return PureFockState(std::move(raw));
}

}  // namespace detail

inline PureFockState make_fock(int n, int cutoff) {
  if (n < 0) fail(errc::bad_parameter, "fock index must be nonnegative");
  if (cutoff < 2 || n >= cutoff - 1)
    fail(errc::cutoff_too_small,
         "fock state |" + std::to_string(n) + "> needs cutoff > " + std::to_string(n + 1));
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(cutoff);
  c[n] = 1.0;
  return PureFockState(std::move(c));
}

inline PureFockState make_fock_superposition(int n, int cutoff) {
  if (n < 1) fail(errc::bad_parameter, "fock superposition needs n >= 1");
  if (cutoff < 2 || n >= cutoff - 1)
    fail(errc::cutoff_too_small, "(|0>+|" + std::to_string(n) + ">)/sqrt(2) needs cutoff > " +
                                     std::to_string(n + 1));
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(cutoff);
  c[0] = c[n] = 1.0 / std::sqrt(2.0);
  return PureFockState(std::move(c));
}

inline PureFockState make_coherent(cplx alpha, int cutoff, double tail_tol = kDefaultTailTol) {
  if (cutoff < 2) fail(errc::cutoff_too_small, "cutoff must be at least 2");
  return detail::finalize_series(detail::coherent_series(alpha, cutoff), tail_tol, "coherent");
}

enum class CatVariant { even, odd, three_headed, four_headed };

inline PureFockState make_cat(cplx alpha, CatVariant variant, int cutoff,
                              double tail_tol = kDefaultTailTol) {
  if (cutoff < 2) fail(errc::cutoff_too_small, "cutoff must be at least 2");
  std::vector<std::pair<cplx, cplx>> parts;  // (weight, amplitude)
  const cplx i{0.0, 1.0};
  switch (variant) {
    case CatVariant::even:
      parts = {{1.0, alpha}, {1.0, -alpha}};
      break;
    case CatVariant::odd:
      parts = {{1.0, alpha}, {-1.0, -alpha}};
      break;
    case CatVariant::three_headed:
      parts = {{1.0, alpha}, {1.0, cplx{0.0, 0.0}}, {1.0, -alpha}};
      break;
    case CatVariant::four_headed:
      parts = {{1.0, alpha}, {-1.0, i * alpha}, {1.0, -alpha}, {-1.0, -i * alpha}};
      break;
  }
  // Exact norm from the overlap algebra; the infinite series then has norm 1.
  cplx gram{0.0, 0.0};
  for (const auto& [wj, aj] : parts)
    for (const auto& [wk, ak] : parts)
      gram += wj * std::conj(wk) * detail::coherent_overlap(aj, ak);
  if (gram.real() < 1e-12)
    fail(errc::zero_norm, "cat superposition cancels identically");
  Eigen::VectorXcd raw = Eigen::VectorXcd::Zero(cutoff);
  for (const auto& [w, a] : parts) raw += w * detail::coherent_series(a, cutoff);
  raw /= std::sqrt(gram.real());
  return detail::finalize_series(std::move(raw), tail_tol, "cat");
}

namespace detail {

inline const Moments& check_cauchy_schwarz(const Moments& m) {
  if (std::norm(m.alpha) > m.nbar + 1e-10)
    fail(errc::internal_consistency, "|<a>|^2 exceeds <a†a>");
  return m;
}

}  // namespace detail

inline Moments moments_pure(const PureFockState& state) {
  const auto& c = state.amplitudes();
  int d = state.cutoff();
  Moments m;
  for (int n = 0; n < d; ++n) m.nbar += n * std::norm(c[n]);
  for (int n = 0; n + 1 < d; ++n) m.alpha += std::sqrt(n + 1.0) * std::conj(c[n]) * c[n + 1];
  for (int n = 0; n + 2 < d; ++n)
    m.xi += std::sqrt((n + 1.0) * (n + 2.0)) * std::conj(c[n]) * c[n + 2];
  return detail::check_cauchy_schwarz(m);
}

inline PureFockState photon_add(const PureFockState& state, double tail_tol = kDefaultTailTol) {
  const auto& c = state.amplitudes();
  int d = state.cutoff();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d + 1);
  double norm2 = 0.0;  // <a a†> = 1 + nbar
  for (int n = 0; n < d; ++n) {
    out[n + 1] = std::sqrt(n + 1.0) * c[n];
    norm2 += (n + 1.0) * std::norm(c[n]);
  }
  out /= std::sqrt(norm2);
  double guard = std::norm(out[d - 1]) + std::norm(out[d]);
  if (guard > tail_tol)
    fail(errc::tail_mass_exceeded, "photon addition pushed tail mass to " + std::to_string(guard));
  return PureFockState(std::move(out));
}

inline PureFockState displace(const PureFockState& state, cplx beta,
                              double tail_tol = kDefaultTailTol) {
  if (beta == cplx{0.0, 0.0}) return state;
  int d = state.cutoff();
  // A state occupied near its cutoff spreads by about |beta| sqrt(D) levels,
  // so the headroom scales with both the displacement and the dimension.
  double b = std::abs(beta);
  int pad = std::max(20, static_cast<int>(std::ceil(4.0 * b * b + 4.0 * b * std::sqrt(d))) + 8);
  int dp = d + pad;
  // D(beta) = exp(beta a† - beta* a) = exp(iH) with H Hermitian.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dp, dp);
  const cplx mi{0.0, -1.0};
  for (int n = 0; n + 1 < dp; ++n) {
    h(n + 1, n) = mi * beta * std::sqrt(n + 1.0);
    h(n, n + 1) = std::conj(h(n + 1, n));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd in = Eigen::VectorXcd::Zero(dp);
  in.head(d) = state.amplitudes();
  Eigen::VectorXcd phases =
      (cplx{0.0, 1.0} * es.eigenvalues().cast<cplx>().array()).exp().matrix();
  Eigen::VectorXcd out =
      es.eigenvectors() * phases.asDiagonal() * (es.eigenvectors().adjoint() * in);
  double n2 = out.squaredNorm();
  if (std::abs(n2 - 1.0) > 1e-10)
    fail(errc::internal_consistency,
         "displacement lost unitarity: norm deviation " + std::to_string(std::abs(n2 - 1.0)));
  out /= std::sqrt(n2);
  double guard = std::norm(out[dp - 2]) + std::norm(out[dp - 1]);
  if (guard > tail_tol)
    fail(errc::tail_mass_exceeded,
         "displaced state spills past padded cutoff " + std::to_string(dp));
  return PureFockState(std::move(out));
}

inline PureFockState make_squeezed_coherent(cplx alpha, double r, double theta, int cutoff,
                                            double tail_tol = kDefaultTailTol) {
  if (r < 0.0) fail(errc::bad_parameter, "squeezing magnitude must be nonnegative");
  if (cutoff < 2) fail(errc::cutoff_too_small, "cutoff must be at least 2");
  Eigen::VectorXcd raw = detail::squeezed_vacuum_series(r, theta, cutoff);
  double loss = std::max(0.0, 1.0 - raw.squaredNorm());
  if (alpha == cplx{0.0, 0.0})
    return detail::finalize_series(std::move(raw), tail_tol, "squeezed vacuum");

  PureFockState sv = detail::finalize_series(std::move(raw), tail_tol, "squeezed vacuum");
  PureFockState shifted = displace(sv, alpha, tail_tol);
  // Trim back to the requested cutoff; the discarded mass counts as tail.
  Eigen::VectorXcd head = shifted.amplitudes().head(cutoff);
  double kept = head.squaredNorm();
  double trimmed = std::max(0.0, 1.0 - kept);
  double guard = std::norm(head[cutoff - 2]) + std::norm(head[cutoff - 1]);
  if (loss + trimmed + guard > tail_tol)
    fail(errc::tail_mass_exceeded, "squeezed coherent state does not fit cutoff " +
                                       std::to_string(cutoff));
  head /= std::sqrt(kept);
  return PureFockState(std::move(head));
}

// ---------------------------------------------------------------------------
// Density matrices

class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) { validate(); }

  static DensityMatrix from_pure(const PureFockState& s) {
    const auto& c = s.amplitudes();
    return DensityMatrix(c * c.adjoint());
  }

  static DensityMatrix diagonal(const Eigen::VectorXd& p) {
    for (int i = 0; i < p.size(); ++i)
      if (p[i] < -1e-12) fail(errc::not_a_distribution, "negative weight");
    if (std::abs(p.sum() - 1.0) > 1e-10)
      fail(errc::not_a_distribution, "weights sum to " + std::to_string(p.sum()));
    return DensityMatrix(p.cwiseMax(0.0).cast<cplx>().asDiagonal().toDenseMatrix());
  }

  // Convex mixture of pure states, padded to a common cutoff.
  static DensityMatrix mixture(const std::vector<std::pair<double, PureFockState>>& parts) {
    if (parts.empty()) fail(errc::bad_parameter, "empty mixture");
    int d = 0;
    double wsum = 0.0;
    for (const auto& [w, s] : parts) {
      if (w < 0.0) fail(errc::not_a_distribution, "negative mixture weight");
      wsum += w;
      d = std::max(d, s.cutoff());
    }
    if (std::abs(wsum - 1.0) > 1e-10)
      fail(errc::not_a_distribution, "mixture weights sum to " + std::to_string(wsum));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& [w, s] : parts) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
      v.head(s.cutoff()) = s.amplitudes();
      m += w * (v * v.adjoint());
    }
    return DensityMatrix(std::move(m));
  }

  int cutoff() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& entries() const { return m_; }

 private:
  void validate() const {
    if (m_.rows() != m_.cols() || m_.rows() < 2)
      fail(errc::not_a_density_matrix, "matrix must be square with dimension >= 2");
    double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12)
      fail(errc::not_a_density_matrix, "hermiticity deviation " + std::to_string(herm));
    double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > 1e-10)
      fail(errc::not_a_density_matrix, "trace " + std::to_string(tr));
    // Diagonal matrices do not need an eigensolve for the PSD check.
    double offdiag = (m_ - Eigen::MatrixXcd(m_.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
    double lambda_min;
    if (offdiag == 0.0) {
      lambda_min = m_.diagonal().real().minCoeff();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
      lambda_min = es.eigenvalues().minCoeff();
    }
    if (lambda_min < -1e-10)
      fail(errc::not_a_density_matrix, "negative eigenvalue " + std::to_string(lambda_min));
  }

  Eigen::MatrixXcd m_;
};

inline Moments moments_mixed(const DensityMatrix& rho) {
  const auto& m = rho.entries();
  int d = rho.cutoff();
  Moments out;
  for (int n = 0; n < d; ++n) out.nbar += n * m(n, n).real();
  for (int n = 1; n < d; ++n) out.alpha += std::sqrt(static_cast<double>(n)) * m(n, n - 1);
  for (int n = 2; n < d; ++n)
    out.xi += std::sqrt(n * (n - 1.0)) * m(n, n - 2);
  return detail::check_cauchy_schwarz(out);
}

// ---------------------------------------------------------------------------
// Named families and cutoff selection

enum class Family {
  coherent,
  fock,
  fock_superposition,
  squeezed_vacuum,
  squeezed_coherent,
  even_cat,
  odd_cat,
  three_headed_cat,
  four_headed_cat,
};

struct FamilyParams {
  cplx alpha{0.0, 0.0};
  double r = 0.0;
  double theta = 0.0;
  int n = 0;
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::coherent:           return "coherent";
    case Family::fock:               return "fock";
    case Family::fock_superposition: return "fock-superposition";
    case Family::squeezed_vacuum:    return "squeezed-vacuum";
    case Family::squeezed_coherent:  return "squeezed-coherent";
    case Family::even_cat:           return "even-cat";
    case Family::odd_cat:            return "odd-cat";
    case Family::three_headed_cat:   return "three-headed-cat";
    case Family::four_headed_cat:    return "four-headed-cat";
  }
  return "unknown";
}

inline PureFockState build_state(Family f, const FamilyParams& p, int cutoff,
                                 double tail_tol = kDefaultTailTol) {
  switch (f) {
    case Family::coherent:           return make_coherent(p.alpha, cutoff, tail_tol);
    case Family::fock:               return make_fock(p.n, cutoff);
    case Family::fock_superposition: return make_fock_superposition(p.n, cutoff);
    case Family::squeezed_vacuum:
      return make_squeezed_coherent(cplx{0.0, 0.0}, p.r, p.theta, cutoff, tail_tol);
    case Family::squeezed_coherent:
      return make_squeezed_coherent(p.alpha, p.r, p.theta, cutoff, tail_tol);
    case Family::even_cat:           return make_cat(p.alpha, CatVariant::even, cutoff, tail_tol);
    case Family::odd_cat:            return make_cat(p.alpha, CatVariant::odd, cutoff, tail_tol);
    case Family::three_headed_cat:
      return make_cat(p.alpha, CatVariant::three_headed, cutoff, tail_tol);
    case Family::four_headed_cat:
      return make_cat(p.alpha, CatVariant::four_headed, cutoff, tail_tol);
  }
  fail(errc::unknown_family, "unhandled family");
}

// Smallest cutoff at which the family fits the tail tolerance: double until a
// candidate fits, then bisect down to the minimum.
inline int auto_cutoff(Family f, const FamilyParams& p, double tail_tol = kDefaultTailTol,
                       int cap = kDefaultCutoffCap) {
  auto fits = [&](int d) {
    try {
      PureFockState s = build_state(f, p, d, tail_tol);
      return s.guard_mass() <= tail_tol;
    } catch (const error& e) {
      if (e.code() == errc::tail_mass_exceeded || e.code() == errc::cutoff_too_small) return false;
      throw;
    }
  };
  int lo = kMinCutoff;
  // Fock-type families never fit below n+3, so skip the doubling ramp there.
  if (f == Family::fock || f == Family::fock_superposition) lo = std::max(lo, p.n + 3);
  int hi = lo;
  while (!fits(hi)) {
    if (hi >= cap)
      fail(errc::cutoff_cap_exceeded, std::string(family_name(f)) +
                                          " needs cutoff beyond cap " + std::to_string(cap));
    lo = hi + 1;
    hi = std::min(2 * hi, cap);
  }
  // Invariant: fits(hi), and everything below lo fails.
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (fits(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return hi;
}

}  // namespace noncl
