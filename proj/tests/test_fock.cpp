#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "noncl/fock.hpp"
#include "noncl/measures.hpp"

using namespace noncl;

namespace {

template <typename Fn>
errc thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  FAIL("expected a noncl::error");
  return errc::internal_consistency;
}

// Independent series oracle: Poisson weights summed directly.
double poisson_weight(double t, int n) {
  return std::exp(-t + n * std::log(t) - std::lgamma(n + 1.0));
}

}  // namespace

TEST_CASE("fock states") {
  PureFockState vac = make_fock(0, 8);
  CHECK(std::abs(vac.amp(0) - cplx{1.0, 0.0}) == 0.0);
  CHECK(moments_pure(vac).nbar == 0.0);

  Moments m = moments_pure(make_fock(3, 16));
  CHECK(m.nbar == Catch::Approx(3.0).margin(1e-14));
  CHECK(std::abs(m.alpha) == 0.0);
  CHECK(std::abs(m.xi) == 0.0);

  CHECK(thrown_code([] { make_fock(3, 3); }) == errc::cutoff_too_small);
  CHECK(thrown_code([] { make_fock(-1, 8); }) == errc::bad_parameter);
}

TEST_CASE("coherent states") {
  CHECK(moments_pure(make_coherent(0.0, 8)).nbar == 0.0);

  PureFockState s = make_coherent(1.5, 40);
  Moments m = moments_pure(s);
  CHECK(m.nbar == Catch::Approx(2.25).margin(1e-10));
  CHECK(std::abs(m.alpha - cplx{1.5, 0.0}) < 1e-10);
  CHECK(std::abs(m.xi - cplx{2.25, 0.0}) < 1e-10);
  CHECK(ort_pure(m) < 1e-10);

  // complex amplitude: eigenvalue relations give the moments directly
  m = moments_pure(make_coherent(cplx{1.0, 1.0}, 50));
  CHECK(m.nbar == Catch::Approx(2.0).margin(1e-10));
  CHECK(std::abs(m.alpha - cplx{1.0, 1.0}) < 1e-10);
  CHECK(std::abs(m.xi - cplx{0.0, 2.0}) < 1e-10);

  // brute-force weights agree with the constructor
  double t = 2.25, sum = 0.0;
  for (int n = 0; n < 40; ++n)
    sum += std::abs(std::norm(s.amp(n)) - poisson_weight(t, n));
  CHECK(sum < 1e-10);

  CHECK(thrown_code([] { make_coherent(3.0, 12); }) == errc::tail_mass_exceeded);
}

TEST_CASE("squeezed coherent states") {
  CHECK(moments_pure(make_squeezed_coherent(0.0, 0.0, 0.0, 8)).nbar == 0.0);

  double r = 1.0;
  double closed = std::sinh(r) * std::sinh(r) + std::cosh(r) * std::sinh(r);

  // the example cutoff carries a visible but small tail
  PureFockState sv60 = make_squeezed_coherent(0.0, r, 0.0, 60, 1e-6);
  CHECK(ort_pure(moments_pure(sv60)) == Catch::Approx(closed).margin(1e-5));

  int d = auto_cutoff(Family::squeezed_vacuum, {.r = r});
  PureFockState sv = make_squeezed_coherent(0.0, r, 0.0, d);
  for (int n = 1; n < sv.cutoff(); n += 2) CHECK(std::abs(sv.amp(n)) == 0.0);
  CHECK(ort_pure(moments_pure(sv)) == Catch::Approx(closed).margin(1e-8));

  // displacement leaves the measure alone
  PureFockState displaced = make_squeezed_coherent(2.0, r, 0.0, 80, 1e-6);
  CHECK(ort_pure(moments_pure(displaced)) ==
        Catch::Approx(ort_pure(moments_pure(sv))).margin(1e-8));

  CHECK(thrown_code([] { make_squeezed_coherent(0.0, -0.5, 0.0, 40); }) == errc::bad_parameter);
  CHECK(thrown_code([] { make_squeezed_coherent(0.0, 2.0, 0.0, 20); }) ==
        errc::tail_mass_exceeded);
}

TEST_CASE("cat states") {
  PureFockState even0 = make_cat(0.0, CatVariant::even, 8);
  CHECK(std::abs(even0.amp(0) - cplx{1.0, 0.0}) < 1e-14);

  CHECK(thrown_code([] { make_cat(0.0, CatVariant::odd, 8); }) == errc::zero_norm);

  double t = 4.0;
  double np = 2.0 + 2.0 * std::exp(-2.0 * t), nm = 2.0 - 2.0 * std::exp(-2.0 * t);
  Moments m = moments_pure(make_cat(2.0, CatVariant::even, 40));
  CHECK(ort_pure(m) / m.nbar == Catch::Approx(1.0 + np / nm).margin(1e-8));
  CHECK(m.nbar == Catch::Approx(t * nm / np).margin(1e-10));
  CHECK(std::abs(m.alpha) < 1e-12);
  CHECK(m.xi.real() == Catch::Approx(4.0).margin(1e-10));

  Moments m4 = moments_pure(make_cat(2.0, CatVariant::four_headed, 40));
  CHECK(ort_pure(m4) / m4.nbar == Catch::Approx(1.0).margin(1e-8));

  Moments m3 = moments_pure(make_cat(2.0, CatVariant::three_headed, 40));
  CHECK(ort_pure(m3) / m3.nbar ==
        Catch::Approx(1.0 + (np + 2.0 * std::exp(-t / 2.0)) / nm).margin(1e-8));
}

TEST_CASE("fock superpositions") {
  Moments m = moments_pure(make_fock_superposition(2, 16));
  CHECK(ort_pure(m) / m.nbar == Catch::Approx(1.0 + 1.0 / std::sqrt(2.0)).margin(1e-12));

  m = moments_pure(make_fock_superposition(5, 16));
  CHECK(ort_pure(m) / m.nbar == Catch::Approx(1.0).margin(1e-12));

  m = moments_pure(make_fock_superposition(1, 16));
  CHECK(std::abs(m.alpha - cplx{0.5, 0.0}) < 1e-14);
  CHECK(ort_pure(m) == Catch::Approx(0.5).margin(1e-12));
  CHECK(ort_pure(m) / m.nbar == Catch::Approx(1.0).margin(1e-12));

  CHECK(thrown_code([] { make_fock_superposition(9, 8); }) == errc::cutoff_too_small);
}

TEST_CASE("photon addition") {
  PureFockState one = photon_add(make_fock(0, 8));
  CHECK(std::abs(one.amp(1) - cplx{1.0, 0.0}) < 1e-14);

  double t = 1.69;
  PureFockState added = photon_add(make_coherent(1.3, 50));
  CHECK(ort_pure(moments_pure(added)) == Catch::Approx(1.0 / (1.0 + t)).margin(1e-9));

  double r = 1.0;
  PureFockState sv = make_squeezed_coherent(0.0, r, 0.0, 160);
  CHECK(ort_pure(moments_pure(photon_add(sv))) ==
        Catch::Approx(0.5 * (3.0 * std::exp(2.0 * r) - 1.0)).margin(1e-8));

  // norm of a† psi is 1 + nbar
  double nbar = moments_pure(sv).nbar;
  double norm2 = 0.0;
  for (int n = 0; n < sv.cutoff(); ++n) norm2 += (n + 1.0) * std::norm(sv.amp(n));
  CHECK(norm2 == Catch::Approx(1.0 + nbar).margin(1e-10));

  // shifting a state that already fills its guard band must fail
  CHECK(thrown_code([] { photon_add(make_fock(22, 24)); }) == errc::tail_mass_exceeded);
}

TEST_CASE("displacement") {
  PureFockState one = make_fock(1, 24);
  CHECK((displace(one, 0.0).amplitudes() - one.amplitudes()).norm() == 0.0);

  PureFockState moved = displace(one, 1.3);
  CHECK(ort_pure(moments_pure(moved)) == Catch::Approx(1.0).margin(1e-9));
  Moments m = moments_pure(moved);
  CHECK(std::abs(m.alpha - cplx{1.3, 0.0}) < 1e-9);

  PureFockState sv = make_squeezed_coherent(0.0, 1.0, 0.0, 120);
  CHECK(ort_pure(moments_pure(displace(sv, 2.0, 1e-9))) ==
        Catch::Approx(ort_pure(moments_pure(sv))).margin(1e-9));

  // retained subspace stays orthonormal
  int d = 10;
  cplx beta{0.7, -0.4};
  std::vector<Eigen::VectorXcd> images;
  for (int n = 0; n < d; ++n) images.push_back(displace(make_fock(n, 16), beta).amplitudes());
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      cplx dot = images[a].dot(images[b]);
      worst = std::max(worst, std::abs(dot - (a == b ? cplx{1.0, 0.0} : cplx{0.0, 0.0})));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("mixed-state moments") {
  PureFockState s = make_coherent(cplx{0.8, 0.3}, 40);
  Moments a = moments_pure(s);
  Moments b = moments_mixed(DensityMatrix::from_pure(s));
  CHECK(std::abs(a.nbar - b.nbar) < 1e-12);
  CHECK(std::abs(a.alpha - b.alpha) < 1e-12);
  CHECK(std::abs(a.xi - b.xi) < 1e-12);

  // geometric weights built right here
  int d = 60;
  Eigen::VectorXd p(d);
  for (int i = 0; i < d; ++i) p[i] = 0.5 * std::pow(0.5, i);
  p /= p.sum();
  Moments th = moments_mixed(DensityMatrix::diagonal(p));
  CHECK(th.nbar == Catch::Approx(1.0).margin(1e-12));
  CHECK(std::abs(th.alpha) == 0.0);
  CHECK(std::abs(th.xi) == 0.0);
}

TEST_CASE("density matrix validation") {
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(3, 3);
  bad(0, 0) = 1.0;
  bad(0, 1) = cplx{0.1, 0.0};  // not hermitian
  CHECK(thrown_code([&] { DensityMatrix{Eigen::MatrixXcd(bad)}; }) ==
        errc::not_a_density_matrix);

  Eigen::MatrixXcd offtrace = Eigen::MatrixXcd::Identity(3, 3);
  CHECK(thrown_code([&] { DensityMatrix{Eigen::MatrixXcd(offtrace)}; }) ==
        errc::not_a_density_matrix);

  Eigen::MatrixXcd indefinite = Eigen::MatrixXcd::Zero(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK(thrown_code([&] { DensityMatrix{Eigen::MatrixXcd(indefinite)}; }) ==
        errc::not_a_density_matrix);

  Eigen::VectorXcd unnormalized = Eigen::VectorXcd::Ones(4);
  CHECK(thrown_code([&] { PureFockState{Eigen::VectorXcd(unnormalized)}; }) ==
        errc::not_normalized);
}

TEST_CASE("automatic cutoff selection") {
  CHECK(auto_cutoff(Family::coherent, {.alpha = 0.0}) == kMinCutoff);

  // smallest D whose truncated Poisson tail (including the guard band) fits
  double t = 9.0;
  int expected = 0;
  for (int d = 4; d < 200 && expected == 0; ++d) {
    double kept = 0.0;
    for (int n = 0; n <= d - 3; ++n) kept += poisson_weight(t, n);
    if (1.0 - kept < 1e-12) expected = d;
  }
  CHECK(auto_cutoff(Family::coherent, {.alpha = 3.0}) == expected);

  CHECK(thrown_code([] { auto_cutoff(Family::squeezed_vacuum, {.r = 5.0}); }) ==
        errc::cutoff_cap_exceeded);

  CHECK(auto_cutoff(Family::fock, {.n = 7}) == 10);
}
