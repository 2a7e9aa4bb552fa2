#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "noncl/analytic.hpp"
#include "noncl/checks.hpp"
#include "noncl/measures.hpp"
#include "noncl/roof.hpp"

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

}  // namespace

TEST_CASE("pure-state measure from moments") {
  // coherent moments collapse the expression to zero
  CHECK(ort_pure(Moments{2.25, cplx{1.5, 0.0}, cplx{2.25, 0.0}}) == 0.0);
  CHECK(ort_pure(Moments{4.0, {}, {}}) == 4.0);

  double r = 1.0, s = std::sinh(r), c = std::cosh(r);
  Moments sv{s * s, {}, cplx{-c * s, 0.0}};
  CHECK(ort_pure(sv) == Catch::Approx(s * s + c * s).margin(1e-14));

  // slightly negative values are rounding, strongly negative ones are bugs
  CHECK(ort_pure(Moments{1.0, cplx{1.0, 0.0}, cplx{1.0, 0.0}}) == 0.0);
  CHECK(thrown_code([] { ort_pure(Moments{-1.0, {}, {}}); }) == errc::internal_consistency);
}

TEST_CASE("quadrature variance") {
  for (double mu : {0.0, 0.9, 2.4}) CHECK(quadrature_variance(Moments{}, mu) == 0.5);

  double r = 1.0, s = std::sinh(r), c = std::cosh(r);
  Moments sv{s * s, {}, cplx{-c * s, 0.0}};
  // theta = 0 puts the stretched quadrature at mu = 0
  CHECK(quadrature_variance(sv, 0.0) ==
        Catch::Approx(std::exp(2.0 * r) / 2.0).margin(1e-12));
  CHECK(optimal_quadrature_angle(sv) == Catch::Approx(0.0).margin(1e-12));
  CHECK(quadrature_variance(sv, optimal_quadrature_angle(sv)) ==
        Catch::Approx(ort_pure(sv) + 0.5).margin(1e-12));

  // scan oracle agrees with the closed-form maximum
  detail::Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Moments m = moments_pure(detail::random_state(rng, 20));
    CHECK(std::abs(detail::scan_max_variance(m) - (ort_pure(m) + 0.5)) < 1e-9);
  }
}

TEST_CASE("quadrature QFI") {
  CHECK(qfi_quadrature(DensityMatrix::from_pure(make_coherent(1.3, 50))).f_x ==
        Catch::Approx(2.0).margin(1e-9));
  CHECK(qfi_quadrature(DensityMatrix::from_pure(make_fock(1, 10))).f_x ==
        Catch::Approx(6.0).margin(1e-10));

  double nth = 1.0;
  DensityMatrix th = to_density(thermal_distribution(nth, 60));
  CHECK(qfi_quadrature(th).f_x == Catch::Approx(2.0 / (2.0 * nth + 1.0)).margin(1e-9));
  CHECK(metrological_power(th) == 0.0);

  // projector QFI is four times the best variance, and mu_star matches
  detail::Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    PureFockState s = detail::random_state(rng, 16);
    Moments m = moments_pure(s);
    QuadratureQfi q = qfi_quadrature(DensityMatrix::from_pure(s));
    CHECK(q.f_x == Catch::Approx(4.0 * (ort_pure(m) + 0.5)).margin(1e-8));
    CHECK(quadrature_variance(m, q.mu_star) ==
          Catch::Approx(ort_pure(m) + 0.5).margin(1e-8));
  }
}

TEST_CASE("metrological power") {
  CHECK(metrological_power(DensityMatrix::from_pure(make_coherent(1.0, 40))) <= 1e-12);

  // equality with the measure on a pure battery
  std::vector<PureFockState> battery;
  for (int n = 1; n <= 4; ++n) battery.push_back(make_fock(n, 12));
  battery.push_back(make_cat(std::sqrt(2.0), CatVariant::even, 50));
  battery.push_back(make_cat(std::sqrt(2.0), CatVariant::odd, 50));
  battery.push_back(make_cat(2.0, CatVariant::three_headed, 60));
  battery.push_back(make_cat(1.5, CatVariant::four_headed, 50));
  battery.push_back(make_squeezed_coherent(0.0, 0.5, 0.0, 80));
  battery.push_back(make_squeezed_coherent(0.0, 1.0, 0.3, 150));
  battery.push_back(make_fock_superposition(2, 12));
  battery.push_back(photon_add(make_coherent(1.0, 50)));
  for (const PureFockState& s : battery) {
    double w = metrological_power(DensityMatrix::from_pure(s));
    CHECK(std::abs(w - ort_pure(moments_pure(s))) < 1e-8);
  }

  // photon-added thermal state loses its advantage above the threshold
  CHECK(metrological_power(to_density(photon_added_thermal(1.0, 150, 1e-10))) == 0.0);
}

TEST_CASE("diagonal metrological power") {
  Eigen::VectorXd fock = Eigen::VectorXd::Zero(9);
  fock[5] = 1.0;
  CHECK(metrological_power_diagonal(fock) == Catch::Approx(5.0).margin(1e-13));

  CHECK(metrological_power_diagonal(thermal_distribution(0.7, 120).weights()) == 0.0);
  CHECK(metrological_power_diagonal(photon_added_thermal(0.3, 200).weights()) > 0.0);
  CHECK(metrological_power_diagonal(photon_added_thermal(0.6, 200).weights()) == 0.0);

  // agrees with the eigendecomposition route once the cutoff has headroom
  detail::Rng rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    int dim = 12 + 4 * trial;
    DiagonalFockMixture mix = detail::random_distribution(rng, dim);
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(dim + 2);
    padded.head(dim) = mix.weights();
    CHECK(std::abs(metrological_power_diagonal(mix.weights()) -
                   metrological_power(DensityMatrix::diagonal(padded))) < 1e-8);
  }

  Eigen::VectorXd bad = Eigen::VectorXd::Ones(4);
  CHECK(thrown_code([&] { metrological_power_diagonal(bad); }) == errc::not_a_distribution);
}

TEST_CASE("interferometer QFI") {
  DensityMatrix fock2 = DensityMatrix::from_pure(make_fock(2, 10));
  MziReport none = mzi_qfi(fock2, 0.0);
  CHECK(none.f_theta == Catch::Approx(2.0).margin(1e-12));  // no reference beam: nbar

  // classical probe sits exactly at the shot-noise value
  DensityMatrix coh = DensityMatrix::from_pure(make_coherent(1.2, 40));
  for (double ar : {0.5, 2.0, 3.0}) {
    MziReport rep = mzi_qfi(coh, ar);
    CHECK(std::abs(rep.f_theta - rep.n_total) < 1e-9);
  }

  // squeezed probe: advantage grows with the reference power and with r
  DensityMatrix sv1 = DensityMatrix::from_pure(make_squeezed_coherent(0.0, 1.0, 0.0, 150));
  MziReport rep = mzi_qfi(sv1, std::sqrt(10.0));
  CHECK(rep.f_theta > rep.n_total);
  DensityMatrix sv15 = DensityMatrix::from_pure(make_squeezed_coherent(0.0, 1.5, 0.0, 400));
  MziReport rep15 = mzi_qfi(sv15, std::sqrt(10.0));
  CHECK(rep15.f_theta / rep15.n_total > rep.f_theta / rep.n_total);
}

TEST_CASE("comparison measure Q") {
  CHECK(measure_Q_pure(moments_pure(make_coherent(1.1, 40))) < 1e-12);
  CHECK(measure_Q_pure(moments_pure(make_fock(3, 10))) == Catch::Approx(6.0).margin(1e-13));
  double r = std::asinh(std::sqrt(3.0));
  CHECK(measure_Q_pure(moments_pure(make_squeezed_coherent(0.0, r, 0.0, 300))) ==
        Catch::Approx(6.0).margin(1e-9));
  Moments cat = moments_pure(make_cat(2.0, CatVariant::even, 50));
  CHECK(measure_Q_pure(cat) == Catch::Approx(2.0 * cat.nbar).margin(1e-12));
}
