#pragma once

// Mixed-state nonclassicality through ensemble decompositions.
//
// Any decomposition of rho = sum_i lambda_i |v_i><v_i| is generated by an
// isometry U (orthonormal rows): member j is phi_j = (1/sqrt(q_j)) sum_i
// U_ij sqrt(lambda_i) |v_i> with weight q_j = sum_i |U_ij|^2 lambda_i.  The
// minimizer walks the isometry manifold by composing Givens rotations on the
// member columns, which keeps the constraint exact at every iterate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "noncl/errors.hpp"
#include "noncl/fock.hpp"
#include "noncl/measures.hpp"

namespace noncl {

// ---------------------------------------------------------------------------
// Fock-diagonal mixtures

class DiagonalFockMixture {
 public:
  explicit DiagonalFockMixture(Eigen::VectorXd p) : p_(std::move(p)) {
    if (p_.size() < 1) fail(errc::not_a_distribution, "empty distribution");
    for (int i = 0; i < p_.size(); ++i) {
      if (p_[i] < -1e-12) fail(errc::not_a_distribution, "negative weight");
      p_[i] = std::max(p_[i], 0.0);
    }
    if (std::abs(p_.sum() - 1.0) > 1e-12)
      fail(errc::not_a_distribution, "weights sum to " + std::to_string(p_.sum()));
  }

  const Eigen::VectorXd& weights() const { return p_; }
  int cutoff() const { return static_cast<int>(p_.size()); }

  double mean_excitation() const {
    double s = 0.0;
    for (int i = 0; i < p_.size(); ++i) s += i * p_[i];
    return s;
  }

 private:
  Eigen::VectorXd p_;
};

inline DensityMatrix to_density(const DiagonalFockMixture& mix) {
  Eigen::VectorXd p = mix.weights();
  if (p.size() < 2) {
    p.conservativeResize(2);
    p[1] = 0.0;
  }
  return DensityMatrix::diagonal(p);
}

inline DiagonalFockMixture thermal_distribution(double nbar, int cutoff,
                                                double tail_tol = kDefaultTailTol) {
  if (nbar < 0.0) fail(errc::bad_parameter, "thermal occupation must be nonnegative");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(cutoff);
  if (nbar == 0.0) {
    p[0] = 1.0;
    return DiagonalFockMixture(std::move(p));
  }
  double x = nbar / (nbar + 1.0);
  for (int i = 0; i < cutoff; ++i) p[i] = (1.0 - x) * std::pow(x, i);
  double tail = std::pow(x, cutoff);
  if (tail > tail_tol)
    fail(errc::tail_mass_exceeded, "thermal tail " + std::to_string(tail));
  p /= p.sum();
  return DiagonalFockMixture(std::move(p));
}

// Completely phase-damped squeezed vacuum: only even levels survive.
inline DiagonalFockMixture phase_damped_squeezed_vacuum(double r, int cutoff,
                                                        double tail_tol = kDefaultTailTol) {
  if (r < 0.0) fail(errc::bad_parameter, "squeezing must be nonnegative");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(cutoff);
  if (r == 0.0) {
    p[0] = 1.0;
    return DiagonalFockMixture(std::move(p));
  }
  double logth = std::log(std::tanh(r));
  double logsech = -std::log(std::cosh(r));
  for (int m = 0; 2 * m < cutoff; ++m) {
    double lp = detail::log_factorial(2 * m) - 2.0 * detail::log_factorial(m) -
                2.0 * m * std::log(2.0) + 2.0 * m * logth + logsech;
    p[2 * m] = std::exp(lp);
  }
  double tail = std::max(0.0, 1.0 - p.sum());
  if (tail > tail_tol)
    fail(errc::tail_mass_exceeded, "phase-damped squeezed vacuum tail " + std::to_string(tail));
  p /= p.sum();
  return DiagonalFockMixture(std::move(p));
}

// Single-photon-added thermal state, p_i = (i/nbar^2) (nbar/(nbar+1))^{i+1}.
inline DiagonalFockMixture photon_added_thermal(double nbar_th, int cutoff,
                                                double tail_tol = kDefaultTailTol) {
  if (nbar_th <= 0.0) fail(errc::bad_parameter, "thermal occupation must be positive");
  double x = nbar_th / (nbar_th + 1.0);
  double logx = std::log(x);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(cutoff);
  for (int i = 1; i < cutoff; ++i)
    p[i] = std::exp(std::log(static_cast<double>(i)) - 2.0 * std::log(nbar_th) +
                    (i + 1.0) * logx);
  double tail = std::max(0.0, 1.0 - p.sum());
  if (tail > tail_tol)
    fail(errc::tail_mass_exceeded, "photon-added thermal tail " + std::to_string(tail));
  p /= p.sum();
  return DiagonalFockMixture(std::move(p));
}

// ---------------------------------------------------------------------------
// Deterministic random numbers (pinned algorithm, reproducible everywhere)

namespace detail {

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : sm_{seed} {}

  double uniform() { return static_cast<double>(sm_.next() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 1.0 - uniform();  // (0, 1]
    double v = uniform();
    double m = std::sqrt(-2.0 * std::log(u));
    spare_ = m * std::sin(2.0 * M_PI * v);
    have_spare_ = true;
    return m * std::cos(2.0 * M_PI * v);
  }

  cplx cnormal() {
    double re = normal();
    double im = normal();
    return cplx{re, im};
  }

 private:
  SplitMix64 sm_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Isometries and decompositions

class Isometry {
 public:
  static Isometry from_matrix(Eigen::MatrixXcd u, double tol = 1e-10) {
    if (u.rows() < 1 || u.cols() < u.rows())
      fail(errc::dimension_mismatch, "isometry needs at least as many columns as rows");
    double dev = (u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.rows()))
                     .cwiseAbs()
                     .maxCoeff();
    if (dev > tol)
      fail(errc::not_isometry, "row orthonormality deviation " + std::to_string(dev));
    return Isometry(std::move(u));
  }

  static Isometry identity(int rows, int cols) {
    if (cols < rows) fail(errc::dimension_mismatch, "isometry needs cols >= rows");
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(rows, cols);
    u.leftCols(rows) = Eigen::MatrixXcd::Identity(rows, rows);
    return Isometry(std::move(u));
  }

  static Isometry haar(int rows, int cols, std::uint64_t seed) {
    if (cols < rows) fail(errc::dimension_mismatch, "isometry needs cols >= rows");
    detail::Rng rng(seed);
    Eigen::MatrixXcd g(cols, rows);
    for (int j = 0; j < rows; ++j)
      for (int i = 0; i < cols; ++i) g(i, j) = rng.cnormal();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(cols, rows);
    return Isometry(q.adjoint());
  }

  // The four-member construction for a mixture of |n> and |n+1>: row 0 feeds
  // |n>, row 1 feeds |n+1>, with angles theta_j = theta + (j mod 2) pi/2 and
  // phases phi_j = phi + (j >= 2) pi/2.
  static Isometry two_fock_members(double theta, double phi) {
    Eigen::MatrixXcd u(2, 4);
    double inv = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < 4; ++j) {
      double th = theta + (j % 2) * M_PI / 2.0;
      double ph = phi + (j / 2) * M_PI / 2.0;
      u(0, j) = inv * std::sin(th);
      u(1, j) = inv * std::cos(th) * std::polar(1.0, ph);
    }
    return Isometry(std::move(u));
  }

  const Eigen::MatrixXcd& matrix() const { return u_; }
  int rows() const { return static_cast<int>(u_.rows()); }
  int cols() const { return static_cast<int>(u_.cols()); }

 private:
  explicit Isometry(Eigen::MatrixXcd u) : u_(std::move(u)) {}
  Eigen::MatrixXcd u_;
};

struct EnsembleDecomposition {
  std::vector<double> weights;
  std::vector<PureFockState> members;
};

struct SupportBasis {
  Eigen::VectorXd evals;   // descending, above the support floor
  Eigen::MatrixXcd evecs;  // cutoff x support
};

inline SupportBasis support_of(const DensityMatrix& rho, double support_eps = 1e-12) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries());
  if (es.info() != Eigen::Success)
    fail(errc::not_a_density_matrix, "eigendecomposition failed");
  int d = rho.cutoff();
  std::vector<int> keep;
  for (int i = d - 1; i >= 0; --i)
    if (es.eigenvalues()[i] > support_eps) keep.push_back(i);
  if (keep.empty()) fail(errc::not_a_density_matrix, "no support above floor");
  SupportBasis sb;
  sb.evals.resize(static_cast<int>(keep.size()));
  sb.evecs.resize(d, static_cast<int>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) {
    sb.evals[static_cast<int>(k)] = es.eigenvalues()[keep[k]];
    sb.evecs.col(static_cast<int>(k)) = es.eigenvectors().col(keep[k]);
  }
  return sb;
}

namespace detail {

inline EnsembleDecomposition members_from_columns(const Eigen::MatrixXcd& fock_members) {
  EnsembleDecomposition out;
  for (int j = 0; j < fock_members.cols(); ++j) {
    Eigen::VectorXcd m = fock_members.col(j);
    double q = m.squaredNorm();
    if (q <= 1e-14) continue;
    out.weights.push_back(q);
    out.members.emplace_back(Eigen::VectorXcd(m / std::sqrt(q)));
  }
  if (out.members.empty()) fail(errc::internal_consistency, "decomposition has no members");
  return out;
}

}  // namespace detail

inline EnsembleDecomposition decompose(const DensityMatrix& rho, const Isometry& u,
                                       double support_eps = 1e-12) {
  SupportBasis sb = support_of(rho, support_eps);
  if (u.rows() != sb.evals.size())
    fail(errc::dimension_mismatch, "isometry has " + std::to_string(u.rows()) +
                                       " rows for support dimension " +
                                       std::to_string(sb.evals.size()));
  Eigen::MatrixXcd d = sb.evals.cwiseSqrt().cast<cplx>().asDiagonal() * u.matrix();
  return detail::members_from_columns(sb.evecs * d);
}

namespace detail {

inline std::vector<int> support_levels(const Eigen::VectorXd& p) {
  std::vector<int> idx;
  for (int i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) idx.push_back(i);
  return idx;
}

}  // namespace detail

// Diagonal overload: isometry row k feeds the k-th occupied Fock level of p
// (in increasing order), which keeps hand-built isometries unambiguous.
inline EnsembleDecomposition decompose(const DiagonalFockMixture& mix, const Isometry& u) {
  const Eigen::VectorXd& p = mix.weights();
  std::vector<int> idx = detail::support_levels(p);
  if (u.rows() != static_cast<int>(idx.size()))
    fail(errc::dimension_mismatch, "isometry needs one row per occupied level, got " +
                                       std::to_string(u.rows()) + " for " +
                                       std::to_string(idx.size()));
  int dim = std::max<int>(2, static_cast<int>(p.size()));
  Eigen::MatrixXcd members = Eigen::MatrixXcd::Zero(dim, u.cols());
  for (int j = 0; j < u.cols(); ++j)
    for (size_t k = 0; k < idx.size(); ++k)
      members(idx[k], j) = std::sqrt(p[idx[k]]) * u.matrix()(static_cast<int>(k), j);
  return detail::members_from_columns(members);
}

inline double objective(const EnsembleDecomposition& e) {
  if (e.weights.size() != e.members.size() || e.members.empty())
    fail(errc::bad_parameter, "malformed ensemble");
  double s1 = 0.0;
  cplx s2{0.0, 0.0};
  for (size_t j = 0; j < e.members.size(); ++j) {
    Moments m = moments_pure(e.members[j]);
    s1 += e.weights[j] * (m.nbar - std::norm(m.alpha));
    s2 += e.weights[j] * (m.xi - m.alpha * m.alpha);
  }
  return s1 + std::abs(s2);
}

inline double closed_form_two_fock(int n, double p) {
  if (n < 0) fail(errc::bad_parameter, "fock index must be nonnegative");
  if (p < 0.0 || p > 1.0) fail(errc::bad_parameter, "probability outside [0, 1]");
  return (n + 1.0) * (1.0 - p) * (1.0 - p) + n * p;
}

inline DensityMatrix two_fock_mixture(int n, double p, int cutoff = 0) {
  if (n < 0) fail(errc::bad_parameter, "fock index must be nonnegative");
  if (p < 0.0 || p > 1.0) fail(errc::bad_parameter, "probability outside [0, 1]");
  int d = cutoff > 0 ? cutoff : n + 3;
  if (d < n + 2) fail(errc::cutoff_too_small, "two-fock mixture needs cutoff > n+1");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  w[n] = p;
  w[n + 1] = 1.0 - p;
  return DensityMatrix::diagonal(w);
}

struct SumRules {
  double sum_nbar;
  cplx sum_alpha;
  cplx sum_xi;
};

// Weighted moment sums sum_j q_j nbar_j, sum_j q_j abar_j, sum_j q_j xibar_j
// for the decomposition induced by U.  Computed without dividing by q_j, so
// zero-weight members cause no harm.  Rows follow the occupied levels of p.
inline SumRules diagonal_sum_rules(const DiagonalFockMixture& mix, const Isometry& u) {
  const Eigen::VectorXd& p = mix.weights();
  std::vector<int> idx = detail::support_levels(p);
  if (u.rows() != static_cast<int>(idx.size()))
    fail(errc::dimension_mismatch, "isometry needs one row per occupied level");
  SumRules out{0.0, {0.0, 0.0}, {0.0, 0.0}};
  const Eigen::MatrixXcd& m = u.matrix();
  for (int j = 0; j < u.cols(); ++j) {
    for (size_t k = 0; k < idx.size(); ++k) {
      int i = idx[k];
      out.sum_nbar += std::norm(m(static_cast<int>(k), j)) * p[i] * i;
      // ladder couplings need both levels occupied
      if (k >= 1 && idx[k - 1] == i - 1)
        out.sum_alpha += m(static_cast<int>(k), j) * std::conj(m(static_cast<int>(k - 1), j)) *
                         std::sqrt(p[i] * p[i - 1] * i);
      if (k >= 1 && idx[k - 1] == i - 2)
        out.sum_xi += m(static_cast<int>(k), j) * std::conj(m(static_cast<int>(k - 1), j)) *
                      std::sqrt(p[i] * p[i - 2] * i * (i - 1.0));
      if (k >= 2 && idx[k - 2] == i - 2)
        out.sum_xi += m(static_cast<int>(k), j) * std::conj(m(static_cast<int>(k - 2), j)) *
                      std::sqrt(p[i] * p[i - 2] * i * (i - 1.0));
    }
  }
  return out;
}

// Root of the unclamped diagonal metrological-power sum for the
// photon-added thermal family, located by bisection.
inline double w_threshold(double lo, double hi, double tol, int cutoff = 400) {
  if (!(lo < hi) || tol <= 0.0) fail(errc::bad_parameter, "bad bracket or tolerance");
  auto g = [cutoff](double nbar_th) {
    Eigen::VectorXd p = photon_added_thermal(nbar_th, cutoff).weights();
    double s = 0.0;
    for (int i = 1; i < p.size(); ++i) {
      double denom = p[i] + p[i - 1];
      if (denom <= 0.0) continue;
      s += i * p[i] * (p[i] - p[i - 1]) / denom;
    }
    return s;
  };
  double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0))
    fail(errc::no_sign_change, "sum has the same sign at both bracket ends");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Convex-roof minimizer

struct RoofOptions {
  int ensemble_size = 0;  // members in the decomposition; 0 picks 2 * support
  int restarts = 32;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  int support_cap = 24;
  int max_sweeps = 600;  // per restart
};

struct RoofResult {
  double n_upper;
  EnsembleDecomposition best;
};

namespace detail {

// One restart of the manifold search.  Columns of the coefficient matrix
// d = diag(sqrt(lambda)) U are the unnormalized members expressed in the
// eigenbasis; right-multiplying d by unitaries reaches every decomposition,
// so the walk composes two-column Givens moves (a real and an imaginary
// rotation per column pair).  Cached operator products make one trial cost
// O(support).
class RoofSearch {
 public:
  RoofSearch(const Eigen::VectorXd& evals, const Eigen::MatrixXcd& nh,
             const Eigen::MatrixXcd& ah, const Eigen::MatrixXcd& xh, int members)
      : evals_(evals), nh_(nh), ah_(ah), xh_(xh), l_(static_cast<int>(evals.size())),
        k_(members) {}

  void start_identity() {
    d_ = Eigen::MatrixXcd::Zero(l_, k_);
    for (int i = 0; i < l_; ++i) d_(i, i) = std::sqrt(evals_[i]);
    resync();
  }

  void start_haar(Rng& rng) {
    Eigen::MatrixXcd g(k_, l_);
    for (int j = 0; j < l_; ++j)
      for (int i = 0; i < k_; ++i) g(i, j) = rng.cnormal();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(k_, l_);
    d_ = evals_.cwiseSqrt().cast<cplx>().asDiagonal() * q.adjoint();
    resync();
  }

  double descend(double tol, int max_sweeps) {
    // |sum of xi - alpha^2| has a conical kink at zero: single-coordinate
    // moves off the cancellation surface change it linearly and get rejected
    // even when the smooth part could still improve.  Replacing |S2| with
    // sqrt(|S2|^2 + mu^2) during the search makes the valley quadratic; mu
    // shrinks with the step, so the bias dies away and the reported value is
    // always the exact objective of the final ensemble.
    const double step_min = 1e-6;
    const double shrink_gain = std::max(1e-13, 1e-4 * tol);
    const int level_cap = 30;  // zigzag guard
    int sweeps = 0;
    // Re-running the ladder from the converged point escapes shallow
    // coordinate-wise stalls left behind by the first pass.
    for (double step0 : {0.5, 0.05, 0.005}) {
      double step = step0;
      int at_level = 0;
      while (step >= step_min && sweeps < max_sweeps) {
        if (mu_ != 0.05 * step) {
          mu_ = 0.05 * step;
          objective_ = smoothed(s1_, s2_);
        }
        double before = objective_;
        sweep(step);
        ++sweeps;
        ++at_level;
        if (before - objective_ <= shrink_gain || at_level >= level_cap) {
          step *= 0.5;
          at_level = 0;
          resync();  // also flushes accumulated rounding between step levels
        }
      }
    }
    mu_ = 0.0;
    resync();
    return objective_;
  }

  const Eigen::MatrixXcd& coefficients() const { return d_; }
  double objective() const { return objective_; }

 private:
  struct Stats {
    double q = 0.0;
    double nq = 0.0;
    cplx aq{0.0, 0.0};
    cplx xq{0.0, 0.0};
  };

  static void contributions(const Stats& st, double& s1, cplx& s2) {
    if (st.q <= 1e-14) {
      s1 = 0.0;
      s2 = cplx{0.0, 0.0};
      return;
    }
    s1 = st.nq - std::norm(st.aq) / st.q;
    s2 = st.xq - st.aq * st.aq / st.q;
  }

  Stats column_stats(const cplx* u, const cplx* yn, const cplx* ya, const cplx* yx) const {
    Stats st;
    cplx nq{0.0, 0.0};
    for (int i = 0; i < l_; ++i) {
      cplx ui = std::conj(u[i]);
      st.q += std::norm(u[i]);
      nq += ui * yn[i];
      st.aq += ui * ya[i];
      st.xq += ui * yx[i];
    }
    st.nq = nq.real();
    return st;
  }

  void resync() {
    u_.assign(static_cast<size_t>(l_) * k_, cplx{});
    yn_.assign(u_.size(), cplx{});
    ya_.assign(u_.size(), cplx{});
    yx_.assign(u_.size(), cplx{});
    stats_.assign(k_, Stats{});
    for (int j = 0; j < k_; ++j) {
      Eigen::VectorXcd col = d_.col(j);
      Eigen::VectorXcd yn = nh_ * col, ya = ah_ * col, yx = xh_ * col;
      for (int i = 0; i < l_; ++i) {
        u_[idx(i, j)] = col[i];
        yn_[idx(i, j)] = yn[i];
        ya_[idx(i, j)] = ya[i];
        yx_[idx(i, j)] = yx[i];
      }
      stats_[j] = column_stats(&u_[idx(0, j)], &yn_[idx(0, j)], &ya_[idx(0, j)],
                               &yx_[idx(0, j)]);
    }
    s1_ = 0.0;
    s2_ = cplx{0.0, 0.0};
    for (int j = 0; j < k_; ++j) {
      double c1;
      cplx c2;
      contributions(stats_[j], c1, c2);
      s1_ += c1;
      s2_ += c2;
    }
    objective_ = smoothed(s1_, s2_);
  }

  double smoothed(double s1, cplx s2) const {
    return s1 + std::sqrt(std::norm(s2) + mu_ * mu_);
  }

  size_t idx(int i, int j) const { return static_cast<size_t>(j) * l_ + i; }

  // Try rotating columns (i, j) by `angle` in the given plane kind (0: real,
  // 1: imaginary).  Commits and returns true when the objective drops.
  bool try_move(int ci, int cj, int kind, double angle) {
    double c = std::cos(angle);
    double s = std::sin(angle);
    cplx w = kind == 0 ? cplx{s, 0.0} : cplx{0.0, s};
    cplx wc = std::conj(w);

    cplx* ui = &u_[idx(0, ci)];
    cplx* uj = &u_[idx(0, cj)];
    cplx* yni = &yn_[idx(0, ci)];
    cplx* ynj = &yn_[idx(0, cj)];
    cplx* yai = &ya_[idx(0, ci)];
    cplx* yaj = &ya_[idx(0, cj)];
    cplx* yxi = &yx_[idx(0, ci)];
    cplx* yxj = &yx_[idx(0, cj)];

    scratch_.resize(static_cast<size_t>(8) * l_);
    cplx* nui = scratch_.data();
    cplx* nuj = nui + l_;
    cplx* nyni = nuj + l_;
    cplx* nynj = nyni + l_;
    cplx* nyai = nynj + l_;
    cplx* nyaj = nyai + l_;
    cplx* nyxi = nyaj + l_;
    cplx* nyxj = nyxi + l_;
    for (int i = 0; i < l_; ++i) {
      nui[i] = c * ui[i] - w * uj[i];
      nuj[i] = wc * ui[i] + c * uj[i];
      nyni[i] = c * yni[i] - w * ynj[i];
      nynj[i] = wc * yni[i] + c * ynj[i];
      nyai[i] = c * yai[i] - w * yaj[i];
      nyaj[i] = wc * yai[i] + c * yaj[i];
      nyxi[i] = c * yxi[i] - w * yxj[i];
      nyxj[i] = wc * yxi[i] + c * yxj[i];
    }
    Stats sti = column_stats(nui, nyni, nyai, nyxi);
    Stats stj = column_stats(nuj, nynj, nyaj, nyxj);

    double o1i, o1j, n1i, n1j;
    cplx o2i, o2j, n2i, n2j;
    contributions(stats_[ci], o1i, o2i);
    contributions(stats_[cj], o1j, o2j);
    contributions(sti, n1i, n2i);
    contributions(stj, n1j, n2j);
    double s1 = s1_ - o1i - o1j + n1i + n1j;
    cplx s2 = s2_ - o2i - o2j + n2i + n2j;
    double cand = smoothed(s1, s2);
    if (cand >= objective_ - 1e-13 * (1.0 + std::abs(objective_))) return false;

    std::copy(nui, nui + l_, ui);
    std::copy(nuj, nuj + l_, uj);
    std::copy(nyni, nyni + l_, yni);
    std::copy(nynj, nynj + l_, ynj);
    std::copy(nyai, nyai + l_, yai);
    std::copy(nyaj, nyaj + l_, yaj);
    std::copy(nyxi, nyxi + l_, yxi);
    std::copy(nyxj, nyxj + l_, yxj);
    stats_[ci] = sti;
    stats_[cj] = stj;
    s1_ = s1;
    s2_ = s2;
    objective_ = cand;
    for (int i = 0; i < l_; ++i) {
      d_(i, ci) = ui[i];
      d_(i, cj) = uj[i];
    }
    return true;
  }

  void sweep(double step) {
    for (int cj = 1; cj < k_; ++cj)
      for (int ci = 0; ci < cj; ++ci)
        for (int kind = 0; kind < 2; ++kind) {
          if (!try_move(ci, cj, kind, step)) try_move(ci, cj, kind, -step);
        }
  }

  const Eigen::VectorXd& evals_;
  const Eigen::MatrixXcd& nh_;
  const Eigen::MatrixXcd& ah_;
  const Eigen::MatrixXcd& xh_;
  int l_;
  int k_;
  Eigen::MatrixXcd d_;
  std::vector<cplx> u_, yn_, ya_, yx_;
  std::vector<Stats> stats_;
  std::vector<cplx> scratch_;
  double s1_ = 0.0;
  cplx s2_{0.0, 0.0};
  double mu_ = 0.0;
  double objective_ = 0.0;
};

}  // namespace detail

inline RoofResult minimize(const DensityMatrix& rho, const RoofOptions& opts = {}) {
  SupportBasis sb = support_of(rho);
  int l1 = static_cast<int>(sb.evals.size());
  if (l1 > opts.support_cap)
    fail(errc::dimension_too_large, "support dimension " + std::to_string(l1) +
                                        " exceeds optimizer cap " +
                                        std::to_string(opts.support_cap));
  int k1 = opts.ensemble_size > 0 ? opts.ensemble_size : 2 * l1;
  if (k1 < l1)
    fail(errc::bad_parameter, "ensemble size must be at least the support dimension");
  if (opts.restarts < 1) fail(errc::bad_parameter, "need at least one restart");

  // Operator blocks in the eigenbasis.
  int d = rho.cutoff();
  const Eigen::MatrixXcd& v = sb.evecs;
  Eigen::MatrixXcd av = Eigen::MatrixXcd::Zero(d, l1);
  Eigen::MatrixXcd nv = Eigen::MatrixXcd::Zero(d, l1);
  Eigen::MatrixXcd xv = Eigen::MatrixXcd::Zero(d, l1);
  for (int n = 0; n < d; ++n) {
    if (n + 1 < d) av.row(n) = std::sqrt(n + 1.0) * v.row(n + 1);
    nv.row(n) = static_cast<double>(n) * v.row(n);
    if (n + 2 < d) xv.row(n) = std::sqrt((n + 1.0) * (n + 2.0)) * v.row(n + 2);
  }
  Eigen::MatrixXcd nh = v.adjoint() * nv;
  Eigen::MatrixXcd ah = v.adjoint() * av;
  Eigen::MatrixXcd xh = v.adjoint() * xv;

  detail::RoofSearch search(sb.evals, nh, ah, xh, k1);
  double best = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd best_d;
  for (int rst = 0; rst < opts.restarts; ++rst) {
    if (rst == 0) {
      search.start_identity();
    } else {
      detail::Rng rng(detail::SplitMix64{opts.seed + 0x9E37u * static_cast<std::uint64_t>(rst)}
                          .next());
      search.start_haar(rng);
    }
    double f = search.descend(opts.tol, opts.max_sweeps);
    if (f < best) {
      best = f;
      best_d = search.coefficients();
    }
  }

  EnsembleDecomposition ens = detail::members_from_columns(sb.evecs * best_d);
  double n_upper = detail::clamp_nonneg(objective(ens), "roof upper bound");
  return RoofResult{n_upper, std::move(ens)};
}

}  // namespace noncl
