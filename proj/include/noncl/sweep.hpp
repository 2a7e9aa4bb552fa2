#pragma once

// Figure-reproduction datasets.  Each figure becomes a CSV table with a fixed
// column order; grids are linear in the quantity on the x axis.
//
//   fig3  nbar vs N per unit energy for the named pure families
//   fig4  squeezed coherent states at r = 5, abscissa 2|alpha|^2 / sinh 2r
//   fig5  even cat: N before and after single-photon addition, vs nbar
//   fig6  the same curves per unit energy
//   fig7  photon-added thermal state: metrological power vs nbar_th

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "noncl/analytic.hpp"
#include "noncl/errors.hpp"
#include "noncl/io.hpp"
#include "noncl/measures.hpp"
#include "noncl/roof.hpp"

namespace noncl {

enum class FigureId { fig3, fig4, fig5, fig6, fig7 };

inline const char* figure_name(FigureId f) {
  switch (f) {
    case FigureId::fig3: return "fig3";
    case FigureId::fig4: return "fig4";
    case FigureId::fig5: return "fig5";
    case FigureId::fig6: return "fig6";
    case FigureId::fig7: return "fig7";
  }
  return "unknown";
}

inline std::optional<FigureId> parse_figure(const std::string& name) {
  for (FigureId f : {FigureId::fig3, FigureId::fig4, FigureId::fig5, FigureId::fig6,
                     FigureId::fig7})
    if (name == figure_name(f)) return f;
  return std::nullopt;
}

struct SweepSpec {
  FigureId figure;
  double start;
  double stop;
  int points;
};

inline SweepSpec default_spec(FigureId f) {
  switch (f) {
    case FigureId::fig3: return {f, 0.5, 50.0, 100};
    case FigureId::fig4: return {f, 0.5, 1.5, 101};
    case FigureId::fig5: return {f, 0.25, 10.0, 40};
    case FigureId::fig6: return {f, 0.25, 10.0, 40};
    case FigureId::fig7: return {f, 0.05, 1.0, 96};
  }
  fail(errc::bad_parameter, "unhandled figure");
}

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

namespace detail {

// Invert a strictly increasing function by expanding the bracket upward and
// bisecting; good to ~1e-13 relative.
inline double solve_increasing(const std::function<double(double)>& f, double target,
                               double hi_guess) {
  double lo = 0.0, hi = std::max(hi_guess, 1e-6);
  while (f(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) fail(errc::internal_consistency, "bracket expansion ran away");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double even_cat_t_from_nbar(double nbar) {
  return solve_increasing([](double t) { return t * std::tanh(t); }, nbar,
                          std::max(1.0, nbar));
}

inline double odd_cat_t_from_nbar(double nbar) {
  // nbar = t coth t decreases to 1 as t -> 0
  if (nbar <= 1.0) return std::numeric_limits<double>::quiet_NaN();
  return solve_increasing([](double t) { return t / std::tanh(t); }, nbar,
                          std::max(1.0, nbar));
}

inline double three_headed_t_from_nbar(double nbar) {
  auto f = [](double t) {
    return t * cat_nm(t) / (3.0 + 4.0 * std::exp(-t / 2.0) + 2.0 * std::exp(-2.0 * t));
  };
  return solve_increasing(f, nbar, std::max(1.0, 1.5 * nbar));
}

}  // namespace detail

inline SweepTable run_sweep(const SweepSpec& spec) {
  if (spec.points < 2 || !(spec.start < spec.stop))
    fail(errc::bad_parameter, "sweep grid needs points >= 2 and start < stop");
  std::vector<double> grid(spec.points);
  double step = (spec.stop - spec.start) / (spec.points - 1);
  for (int i = 0; i < spec.points; ++i) grid[i] = spec.start + i * step;

  SweepTable out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  switch (spec.figure) {
    case FigureId::fig3: {
      out.columns = {"nbar",            "even_cat", "odd_cat",
                     "three_headed_cat", "four_headed_cat", "fock",
                     "fock_superposition", "squeezed_vacuum"};
      for (double nbar : grid) {
        double even = closed_form(Family::even_cat,
                                  {.alpha = std::sqrt(detail::even_cat_t_from_nbar(nbar))})
                          .n_per_energy;
        double odd_t = detail::odd_cat_t_from_nbar(nbar);
        double odd = std::isnan(odd_t)
                         ? nan
                         : closed_form(Family::odd_cat, {.alpha = std::sqrt(odd_t)}).n_per_energy;
        double three =
            closed_form(Family::three_headed_cat,
                        {.alpha = std::sqrt(detail::three_headed_t_from_nbar(nbar))})
                .n_per_energy;
        // (|0>+|n>)/sqrt(2) exists only at half-integer nbar
        double n2 = 2.0 * nbar;
        double fsup = std::abs(n2 - std::round(n2)) < 1e-9
                          ? closed_form(Family::fock_superposition,
                                        {.n = static_cast<int>(std::lround(n2))})
                                .n_per_energy
                          : nan;
        double sv = 1.0 + std::sqrt(1.0 + 1.0 / nbar);
        out.rows.push_back({nbar, even, odd, three, 1.0, 1.0, fsup, sv});
      }
      break;
    }
    case FigureId::fig4: {
      out.columns = {"alpha2_over_half_sinh2r", "n_per_energy"};
      const double r = 5.0;
      double half_sinh2r = 0.5 * std::sinh(2.0 * r);
      for (double u : grid) {
        double alpha = std::sqrt(u * half_sinh2r);
        double nper =
            closed_form(Family::squeezed_coherent, {.alpha = alpha, .r = r}).n_per_energy;
        out.rows.push_back({u, nper});
      }
      break;
    }
    case FigureId::fig5:
    case FigureId::fig6: {
      bool per = spec.figure == FigureId::fig6;
      out.columns = per ? std::vector<std::string>{"nbar", "n_per_energy",
                                                   "n_added_per_energy"}
                        : std::vector<std::string>{"nbar", "n", "n_added"};
      for (double nbar : grid) {
        double t = detail::even_cat_t_from_nbar(nbar);
        Table1Row row = table1(Family::even_cat, {.alpha = std::sqrt(t)});
        if (per)
          out.rows.push_back({nbar, row.n_per_energy, row.n_added_per_energy});
        else
          out.rows.push_back({nbar, row.n, row.n_added});
      }
      break;
    }
    case FigureId::fig7: {
      out.columns = {"nbar_th", "w"};
      for (double nth : grid) {
        DiagonalFockMixture mix = photon_added_thermal(nth, 400);
        out.rows.push_back({nth, metrological_power_diagonal(mix.weights())});
      }
      break;
    }
  }
  return out;
}

inline std::string to_csv(const SweepTable& table) {
  std::string out;
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_sig(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace noncl
