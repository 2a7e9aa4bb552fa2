#pragma once

// Exact coherent-superposition algebra and the closed-form measure catalogue
// for the named state families, including the photon-addition table.
//
// For a superposition sum_k c_k |alpha_k> all moments reduce to finite sums
// over the overlap kernel f_jk = <alpha_k|alpha_j>, so no truncation enters.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "noncl/errors.hpp"
#include "noncl/fock.hpp"

namespace noncl {

struct CoherentSuperposition {
  struct Term {
    cplx coeff;
    cplx alpha;
  };
  std::vector<Term> terms;
};

inline cplx overlap(cplx alpha_j, cplx alpha_k) {
  return detail::coherent_overlap(alpha_j, alpha_k);
}

// Gram norm <psi|psi> of the (possibly unnormalized) superposition.
inline double superposition_norm2(const CoherentSuperposition& s) {
  if (s.terms.empty()) fail(errc::bad_parameter, "superposition needs at least one term");
  cplx g{0.0, 0.0};
  for (const auto& tj : s.terms)
    for (const auto& tk : s.terms)
      g += tj.coeff * std::conj(tk.coeff) * overlap(tj.alpha, tk.alpha);
  return g.real();
}

// Rescale the coefficients so the Gram norm is exactly 1; the applied factor
// (1/sqrt(norm2)) is reported through `factor` when requested.
inline CoherentSuperposition normalize(CoherentSuperposition s, double* factor = nullptr) {
  double n2 = superposition_norm2(s);
  if (n2 < 1e-12) fail(errc::zero_norm, "superposition cancels identically");
  double f = 1.0 / std::sqrt(n2);
  for (auto& t : s.terms) t.coeff *= f;
  if (factor) *factor = f;
  return s;
}

inline Moments exact_moments(const CoherentSuperposition& s) {
  double n2 = superposition_norm2(s);
  if (std::abs(n2 - 1.0) > 1e-12)
    fail(errc::not_normalized, "superposition has norm^2 " + std::to_string(n2));
  cplx a{0.0, 0.0}, x{0.0, 0.0}, n{0.0, 0.0};
  for (const auto& tj : s.terms)
    for (const auto& tk : s.terms) {
      cplx w = tj.coeff * std::conj(tk.coeff) * overlap(tj.alpha, tk.alpha);
      a += w * tj.alpha;
      x += w * tj.alpha * tj.alpha;
      n += w * tj.alpha * std::conj(tk.alpha);
    }
  if (std::abs(n.imag()) > 1e-12)
    fail(errc::internal_consistency, "nbar came out complex");
  return Moments{n.real(), a, x};
}

// Truncated Fock expansion, for cross-checks against the numeric oracle.
inline PureFockState to_fock(const CoherentSuperposition& s, int cutoff,
                             double tail_tol = kDefaultTailTol) {
  double n2 = superposition_norm2(s);
  if (n2 < 1e-12) fail(errc::zero_norm, "superposition cancels identically");
  Eigen::VectorXcd raw = Eigen::VectorXcd::Zero(cutoff);
  for (const auto& t : s.terms) raw += t.coeff * detail::coherent_series(t.alpha, cutoff);
  raw /= std::sqrt(n2);
  return detail::finalize_series(std::move(raw), tail_tol, "coherent superposition");
}

// ---------------------------------------------------------------------------
// Closed-form catalogue

struct ClosedFormReport {
  Family family;
  double nbar;
  double n;
  double n_per_energy;  // n / nbar, zero when nbar vanishes
};

namespace detail {

inline double cat_np(double t) { return 2.0 + 2.0 * std::exp(-2.0 * t); }
inline double cat_nm(double t) { return 2.0 - 2.0 * std::exp(-2.0 * t); }

inline ClosedFormReport report(Family f, double nbar, double n) {
  return ClosedFormReport{f, nbar, n, nbar > 0.0 ? n / nbar : 0.0};
}

}  // namespace detail

inline ClosedFormReport closed_form(Family f, const FamilyParams& p) {
  double t = std::norm(p.alpha);
  double s = std::sinh(p.r), c = std::cosh(p.r);
  switch (f) {
    case Family::coherent:
      return detail::report(f, t, 0.0);
    case Family::fock:
      if (p.n < 0) fail(errc::bad_parameter, "fock index must be nonnegative");
      return detail::report(f, p.n, p.n);
    case Family::fock_superposition: {
      if (p.n < 1) fail(errc::bad_parameter, "fock superposition needs n >= 1");
      // (|0>+|n>)/sqrt(2): alpha-bar = delta_{n,1}/2, xi-bar = delta_{n,2}/sqrt(2)
      double nbar = p.n / 2.0;
      double abar = (p.n == 1) ? 0.5 : 0.0;
      double xbar = (p.n == 2) ? 1.0 / std::sqrt(2.0) : 0.0;
      return detail::report(f, nbar, nbar - abar * abar + std::abs(xbar - abar * abar));
    }
    case Family::squeezed_vacuum:
      if (p.r < 0.0) fail(errc::bad_parameter, "squeezing must be nonnegative");
      return detail::report(f, s * s, s * s + c * s);
    case Family::squeezed_coherent:
      if (p.r < 0.0) fail(errc::bad_parameter, "squeezing must be nonnegative");
      return detail::report(f, t + s * s, s * s + c * s);
    case Family::even_cat: {
      double nbar = t * std::tanh(t);
      return detail::report(f, nbar, t * (1.0 + detail::cat_nm(t) / detail::cat_np(t)));
    }
    case Family::odd_cat: {
      if (t == 0.0) fail(errc::zero_norm, "odd cat vanishes at alpha = 0");
      double nbar = t / std::tanh(t);
      return detail::report(f, nbar, t * (1.0 + detail::cat_np(t) / detail::cat_nm(t)));
    }
    case Family::three_headed_cat: {
      if (t == 0.0) return detail::report(f, 0.0, 0.0);  // reduces to vacuum
      double n3h = 3.0 + 4.0 * std::exp(-t / 2.0) + 2.0 * std::exp(-2.0 * t);
      double nbar = t * detail::cat_nm(t) / n3h;
      double nper = 1.0 + (detail::cat_np(t) + 2.0 * std::exp(-t / 2.0)) / detail::cat_nm(t);
      return detail::report(f, nbar, nbar * nper);
    }
    case Family::four_headed_cat: {
      // N equals nbar exactly: the pi/2 rotation symmetry kills both <a> and <a²>.
      double n4h = 4.0 - 8.0 * std::exp(-t) * std::cos(t) + 4.0 * std::exp(-2.0 * t);
      if (n4h < 1e-12) fail(errc::zero_norm, "four-headed cat vanishes");
      double nbar = 4.0 * t * (1.0 - std::exp(-2.0 * t) + 2.0 * std::exp(-t) * std::sin(t)) / n4h;
      return detail::report(f, nbar, nbar);
    }
  }
  fail(errc::unknown_family, "unhandled family");
}

// Limit of N per unit energy as the energy grows, holding the family's shape
// parameter fixed (for squeezed coherent states the ratio 2|alpha|^2/sinh 2r).
inline double class_limit(Family f, const FamilyParams& p) {
  switch (f) {
    case Family::coherent: return 0.0;
    case Family::fock:
    case Family::fock_superposition:
    case Family::four_headed_cat: return 1.0;
    case Family::squeezed_vacuum:
    case Family::even_cat:
    case Family::odd_cat:
    case Family::three_headed_cat: return 2.0;
    case Family::squeezed_coherent: {
      if (p.r <= 0.0) return 0.0;
      double kappa = 2.0 * std::norm(p.alpha) / std::sinh(2.0 * p.r);
      return 2.0 / (1.0 + kappa);
    }
  }
  fail(errc::unknown_family, "unhandled family");
}

enum class StateClass { class1, class2, class3, classical };

inline const char* state_class_name(StateClass c) {
  switch (c) {
    case StateClass::class1:    return "class-1";
    case StateClass::class2:    return "class-2";
    case StateClass::class3:    return "class-3";
    case StateClass::classical: return "classical";
  }
  return "unknown";
}

inline StateClass class_of(double limit_value) {
  if (limit_value < -1e-9) fail(errc::negative_input, "per-energy limit cannot be negative");
  if (std::abs(limit_value - 2.0) <= 1e-9) return StateClass::class1;
  if (std::abs(limit_value) <= 1e-9) return StateClass::classical;
  if (limit_value >= 1.0 && limit_value < 2.0) return StateClass::class2;
  if (limit_value > 0.0 && limit_value < 1.0) return StateClass::class3;
  fail(errc::bad_parameter, "per-energy limit " + std::to_string(limit_value) +
                                " outside [0, 2]");
}

// ---------------------------------------------------------------------------
// Photon-addition table

struct Table1Row {
  double n;
  double n_per_energy;
  double n_added;
  double n_added_per_energy;
};

// Closed forms for the measure before and after single-photon addition.
//
// Per-energy values divide by the mean excitation number of the state they
// describe.  For the photon-added coherent state that energy is
// (t^2+3t+1)/(1+t), t = |alpha|^2, which makes N[a†] per energy equal to
// 1/(1+3t+t^2); the commonly quoted 1/(1+t)^2 assumes the addition raises
// the energy by exactly one photon, which only holds for Fock states.
inline Table1Row table1(Family f, const FamilyParams& p) {
  double t = std::norm(p.alpha);
  switch (f) {
    case Family::coherent:
      return Table1Row{0.0, 0.0, 1.0 / (1.0 + t), 1.0 / (1.0 + 3.0 * t + t * t)};
    case Family::squeezed_vacuum: {
      if (p.r < 0.0) fail(errc::bad_parameter, "squeezing must be nonnegative");
      double e2r = std::exp(2.0 * p.r);
      double s2 = std::sinh(p.r) * std::sinh(p.r);
      double nbar_added = 3.0 * s2 + 1.0;
      double per = s2 > 0.0 ? 1.0 + std::sqrt(1.0 + 1.0 / s2) : 0.0;
      double per_added =
          1.0 + std::sqrt(1.0 + 1.0 / nbar_added - 2.0 / (nbar_added * nbar_added));
      return Table1Row{0.5 * (e2r - 1.0), per, 0.5 * (3.0 * e2r - 1.0), per_added};
    }
    case Family::even_cat:
    case Family::odd_cat: {
      if (t == 0.0 && f == Family::odd_cat)
        fail(errc::zero_norm, "odd cat vanishes at alpha = 0");
      // ratio = N_-/N_+ for the even cat, N_+/N_- for the odd cat
      double ratio = f == Family::even_cat ? detail::cat_nm(t) / detail::cat_np(t)
                                           : detail::cat_np(t) / detail::cat_nm(t);
      double n = t * (1.0 + ratio);
      double per = t > 0.0 ? 1.0 + 1.0 / ratio : 0.0;
      double top = t * (t + 3.0) * (1.0 + ratio) + 1.0;
      return Table1Row{n, per, top / (t * ratio + 1.0), top / (t * (t + 3.0 * ratio) + 1.0)};
    }
    default:
      fail(errc::unknown_family,
           std::string(family_name(f)) + " has no photon-addition table entry");
  }
}

}  // namespace noncl
