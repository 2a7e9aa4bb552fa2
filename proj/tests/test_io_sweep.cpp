#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>

#include "noncl/io.hpp"
#include "noncl/sweep.hpp"

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

int column_index(const SweepTable& t, const std::string& name) {
  for (size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return static_cast<int>(i);
  FAIL("no column " + name);
  return -1;
}

}  // namespace

TEST_CASE("density matrix JSON round-trip") {
  DensityMatrix rho = DensityMatrix::mixture(
      {{0.7, make_coherent(cplx{0.4, 0.2}, 24)}, {0.3, make_fock(1, 24)}});
  nlohmann::json j = density_to_json(rho);
  DensityMatrix back = density_from_json(j);
  CHECK((back.entries() - rho.entries()).cwiseAbs().maxCoeff() == 0.0);
  // serialize -> parse -> serialize is byte-stable
  CHECK(density_to_json(back).dump() == j.dump());

  CHECK(thrown_code([] { density_from_json(nlohmann::json{{"dim", 2}}); }) == errc::io_failure);
  nlohmann::json short_entries{{"dim", 2}, {"entries", {{1.0, 0.0}}}};
  CHECK(thrown_code([&] { density_from_json(short_entries); }) == errc::io_failure);
}

TEST_CASE("csv output is byte-stable") {
  SweepSpec spec{FigureId::fig7, 0.1, 0.6, 12};
  std::string a = to_csv(run_sweep(spec));
  std::string b = to_csv(run_sweep(spec));
  CHECK(a == b);
  CHECK(a.find("nbar_th,w\n") == 0);
  CHECK(a.back() == '\n');
  // 12 significant digits, '.' decimal separator
  CHECK(format_sig(1.0 / 3.0) == "0.333333333333");
  CHECK(format_sig(2.0) == "2");
}

TEST_CASE("fig3 dataset") {
  SweepTable t = run_sweep(default_spec(FigureId::fig3));
  REQUIRE(t.rows.size() == 100);
  int c_nbar = column_index(t, "nbar");
  int c_even = column_index(t, "even_cat");
  int c_odd = column_index(t, "odd_cat");
  int c_three = column_index(t, "three_headed_cat");
  int c_four = column_index(t, "four_headed_cat");
  int c_fock = column_index(t, "fock");
  int c_sup = column_index(t, "fock_superposition");
  int c_sv = column_index(t, "squeezed_vacuum");

  const std::vector<double>* at2 = nullptr;
  const std::vector<double>* at50 = nullptr;
  for (const auto& row : t.rows) {
    if (std::abs(row[c_nbar] - 2.0) < 1e-12) at2 = &row;
    if (std::abs(row[c_nbar] - 50.0) < 1e-12) at50 = &row;
  }
  REQUIRE(at2 != nullptr);
  REQUIRE(at50 != nullptr);

  // class-1 curves approach 2; the four-headed cat and fock states sit at 1
  for (int c : {c_even, c_odd, c_three}) CHECK(std::abs((*at50)[c] - 2.0) < 1e-3);
  CHECK((*at2)[c_four] == 1.0);
  CHECK((*at2)[c_fock] == 1.0);
  CHECK((*at2)[c_even] > (*at2)[c_four] + 0.01);
  CHECK((*at2)[c_sv] == Catch::Approx(1.0 + std::sqrt(1.5)).margin(1e-12));
  // nbar = 2 means n = 4, away from the delta at n = 2
  CHECK((*at2)[c_sup] == 1.0);

  // the superposition spike sits at nbar = 1
  for (const auto& row : t.rows)
    if (std::abs(row[c_nbar] - 1.0) < 1e-12)
      CHECK(row[c_sup] == Catch::Approx(1.0 + 1.0 / std::sqrt(2.0)).margin(1e-12));

  // odd cat exists only above nbar = 1
  for (const auto& row : t.rows)
    if (row[c_nbar] <= 1.0) CHECK(std::isnan(row[c_odd]));
}

TEST_CASE("fig4 dataset crosses shot noise at the boundary") {
  SweepTable t = run_sweep(default_spec(FigureId::fig4));
  int c_u = column_index(t, "alpha2_over_half_sinh2r");
  int c_n = column_index(t, "n_per_energy");
  for (const auto& row : t.rows) {
    if (std::abs(row[c_u] - 1.0) < 1e-12) CHECK(row[c_n] == Catch::Approx(1.0).margin(1e-12));
    if (row[c_u] < 1.0 - 1e-12) CHECK(row[c_n] > 1.0);
    if (row[c_u] > 1.0 + 1e-12) CHECK(row[c_n] < 1.0);
  }
}

TEST_CASE("fig5 and fig6 datasets") {
  SweepTable t5 = run_sweep(default_spec(FigureId::fig5));
  int c_nbar = column_index(t5, "nbar");
  int c_n = column_index(t5, "n");
  int c_added = column_index(t5, "n_added");
  for (const auto& row : t5.rows) CHECK(row[c_added] > row[c_n]);
  // near nbar = 2 the added state roughly doubles the measure
  double best = 1e300, ratio = 0.0;
  for (const auto& row : t5.rows)
    if (std::abs(row[c_nbar] - 2.0) < best) {
      best = std::abs(row[c_nbar] - 2.0);
      ratio = row[c_added] / row[c_n];
    }
  CHECK(ratio == Catch::Approx(1.79).margin(0.05));

  SweepTable t6 = run_sweep(default_spec(FigureId::fig6));
  int c_per = column_index(t6, "n_per_energy");
  int c_addper = column_index(t6, "n_added_per_energy");
  for (const auto& row : t6.rows) CHECK(row[c_addper] < row[c_per]);
}

TEST_CASE("fig7 dataset") {
  SweepTable t = run_sweep(default_spec(FigureId::fig7));
  int c_n = column_index(t, "nbar_th");
  int c_w = column_index(t, "w");
  double last_positive = -1.0;
  int crossings = 0;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i][c_w] > 0.0) last_positive = t.rows[i][c_n];
    if (i > 0 && t.rows[i - 1][c_w] > 0.0) {
      if (t.rows[i][c_w] == 0.0)
        ++crossings;
      else
        CHECK(t.rows[i][c_w] < t.rows[i - 1][c_w]);  // strictly decreasing while positive
    }
  }
  CHECK(last_positive < 0.4572);
  CHECK(crossings == 1);
}

TEST_CASE("sweep validation") {
  CHECK(thrown_code([] { run_sweep(SweepSpec{FigureId::fig7, 1.0, 0.5, 10}); }) ==
        errc::bad_parameter);
  CHECK(thrown_code([] { run_sweep(SweepSpec{FigureId::fig7, 0.1, 0.5, 1}); }) ==
        errc::bad_parameter);
  CHECK(thrown_code([] { write_text_file("/nonexistent-dir/out.csv", "x"); }) ==
        errc::io_failure);
}
