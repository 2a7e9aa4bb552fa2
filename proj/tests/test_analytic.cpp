#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "noncl/analytic.hpp"
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

}  // namespace

TEST_CASE("overlap kernel") {
  CHECK(std::abs(overlap(cplx{0.7, -1.2}, cplx{0.7, -1.2}) - cplx{1.0, 0.0}) < 1e-15);
  CHECK(overlap(2.0, -2.0).real() == Catch::Approx(std::exp(-8.0)).epsilon(1e-14));
  // |<beta|alpha>|^2 = e^{-|alpha-beta|^2}
  CHECK(std::norm(overlap(cplx{1.0, 0.0}, cplx{0.0, 1.0})) ==
        Catch::Approx(std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("exact superposition moments") {
  CoherentSuperposition single{{{1.0, cplx{0.8, -0.5}}}};
  Moments m = exact_moments(single);
  CHECK(m.nbar == Catch::Approx(std::norm(cplx{0.8, -0.5})).margin(1e-14));
  CHECK(std::abs(m.alpha - cplx{0.8, -0.5}) < 1e-14);
  CHECK(std::abs(m.xi - cplx{0.8, -0.5} * cplx{0.8, -0.5}) < 1e-14);

  // even cat against the truncated oracle
  CoherentSuperposition cat = normalize({{{1.0, 2.0}, {1.0, -2.0}}});
  Moments exact = exact_moments(cat);
  Moments numeric = moments_pure(make_cat(2.0, CatVariant::even, 60));
  CHECK(std::abs(exact.nbar - numeric.nbar) < 1e-10);
  CHECK(std::abs(exact.alpha - numeric.alpha) < 1e-10);
  CHECK(std::abs(exact.xi - numeric.xi) < 1e-10);

  // large separation: nbar -> |alpha|^2, alpha-bar -> 0, nbar - |xi| -> 0
  CoherentSuperposition wide = normalize({{{1.0, 4.0}, {1.0, -4.0}}});
  Moments mw = exact_moments(wide);
  CHECK(std::abs(mw.alpha) < 1e-12);
  CHECK(mw.nbar == Catch::Approx(16.0).margin(1e-10));
  CHECK(mw.nbar - std::abs(mw.xi) == Catch::Approx(0.0).margin(1e-10));

  CoherentSuperposition unnormalized{{{2.0, 1.0}}};
  CHECK(thrown_code([&] { exact_moments(unnormalized); }) == errc::not_normalized);
  CHECK(thrown_code([] { normalize({{{1.0, 0.7}, {-1.0, 0.7}}}); }) == errc::zero_norm);

  double factor = 0.0;
  normalize({{{3.0, 0.0}}}, &factor);
  CHECK(factor == Catch::Approx(1.0 / 3.0).margin(1e-15));
}

TEST_CASE("closed-form catalogue") {
  double r = 1.0, s = std::sinh(r);
  ClosedFormReport sv = closed_form(Family::squeezed_vacuum, {.r = r});
  CHECK(sv.n_per_energy == Catch::Approx(1.0 + std::sqrt(1.0 + 1.0 / (s * s))).margin(1e-12));

  ClosedFormReport fock = closed_form(Family::fock, {.n = 4});
  CHECK(fock.n == 4.0);
  CHECK(fock.n_per_energy == 1.0);

  double t = 4.0;
  ClosedFormReport even = closed_form(Family::even_cat, {.alpha = 2.0});
  double expected = 1.0 + (2.0 + 2.0 * std::exp(-8.0)) / (2.0 - 2.0 * std::exp(-8.0));
  CHECK(even.n_per_energy == Catch::Approx(expected).margin(1e-12));
  CHECK(even.nbar == Catch::Approx(t * std::tanh(t)).margin(1e-12));

  // numeric oracle closes the loop for every family
  for (auto [f, p, d] : std::vector<std::tuple<Family, FamilyParams, int>>{
           {Family::coherent, {.alpha = cplx{1.1, 0.4}}, 60},
           {Family::fock, {.n = 4}, 12},
           {Family::fock_superposition, {.n = 2}, 12},
           {Family::squeezed_vacuum, {.r = 0.8}, 120},
           {Family::squeezed_coherent, {.alpha = 1.2, .r = 0.8}, 120},
           {Family::even_cat, {.alpha = 1.7}, 60},
           {Family::even_cat, {.alpha = cplx{0.9, 0.8}}, 60},
           {Family::odd_cat, {.alpha = 1.7}, 60},
           {Family::three_headed_cat, {.alpha = 2.0}, 60},
           {Family::four_headed_cat, {.alpha = 2.0}, 60},
           {Family::four_headed_cat, {.alpha = cplx{1.1, 1.0}}, 60}}) {
    ClosedFormReport rep = closed_form(f, p);
    Moments m = moments_pure(build_state(f, p, d, 1e-10));
    INFO(family_name(f));
    CHECK(std::abs(rep.n - ort_pure(m)) < 1e-8);
    CHECK(std::abs(rep.nbar - m.nbar) < 1e-8);
  }
}

TEST_CASE("class boundaries") {
  CHECK(class_of(class_limit(Family::squeezed_vacuum, {})) == StateClass::class1);
  CHECK(class_of(class_limit(Family::even_cat, {})) == StateClass::class1);
  CHECK(class_of(class_limit(Family::four_headed_cat, {})) == StateClass::class2);
  CHECK(class_of(class_limit(Family::fock, {})) == StateClass::class2);
  CHECK(class_of(class_limit(Family::coherent, {})) == StateClass::classical);

  // high-energy squeezed coherent states split on 2|alpha|^2 vs sinh 2r
  double r = 3.0;
  double edge = std::sqrt(0.5 * std::sinh(2.0 * r));
  CHECK(class_of(class_limit(Family::squeezed_coherent, {.alpha = edge * 1.2, .r = r})) ==
        StateClass::class3);
  CHECK(class_of(class_limit(Family::squeezed_coherent, {.alpha = edge * 0.8, .r = r})) ==
        StateClass::class2);

  CHECK(class_of(2.0 + 5e-10) == StateClass::class1);
  CHECK(class_of(0.0) == StateClass::classical);
  CHECK(class_of(1.0) == StateClass::class2);
  CHECK(thrown_code([] { class_of(-0.5); }) == errc::negative_input);
}

TEST_CASE("photon-addition table") {
  Table1Row coh = table1(Family::coherent, {.alpha = 1.0});
  CHECK(coh.n == 0.0);
  CHECK(coh.n_added == Catch::Approx(0.5).margin(1e-14));
  // per energy of a† |alpha=1>: N/(nbar of the added state) = 1/5
  CHECK(coh.n_added_per_energy == Catch::Approx(0.2).margin(1e-14));

  Table1Row sv = table1(Family::squeezed_vacuum, {.r = 1.0});
  CHECK(sv.n_added == Catch::Approx(0.5 * (3.0 * std::exp(2.0) - 1.0)).margin(1e-12));

  // near nbar = 2 a single photon roughly doubles the cat's nonclassicality
  Table1Row cat = table1(Family::even_cat, {.alpha = std::sqrt(2.0)});
  CHECK(cat.n_added / cat.n == Catch::Approx(1.7945628147).margin(1e-9));

  CHECK(thrown_code([] { table1(Family::three_headed_cat, {.alpha = 1.0}); }) ==
        errc::unknown_family);

  // every table entry must match the ladder-operator pipeline
  auto pipeline_gap = [](Family f, FamilyParams p, int d) {
    Table1Row row = table1(f, p);
    PureFockState base = build_state(f, p, d, 1e-12);
    PureFockState added = photon_add(base);
    Moments mb = moments_pure(base), ma = moments_pure(added);
    double nb = ort_pure(mb), na = ort_pure(ma);
    return std::max({std::abs(row.n - nb),
                     std::abs(row.n_per_energy - (mb.nbar > 0.0 ? nb / mb.nbar : 0.0)),
                     std::abs(row.n_added - na),
                     std::abs(row.n_added_per_energy - na / ma.nbar)});
  };
  CHECK(pipeline_gap(Family::coherent, {.alpha = 1.0}, 60) < 1e-8);
  CHECK(pipeline_gap(Family::squeezed_vacuum, {.r = 1.0}, 200) < 1e-8);
  CHECK(pipeline_gap(Family::even_cat, {.alpha = std::sqrt(2.0)}, 60) < 1e-8);
  CHECK(pipeline_gap(Family::odd_cat, {.alpha = std::sqrt(2.0)}, 60) < 1e-8);
}
