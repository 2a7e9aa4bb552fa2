// Command-line front end: closed-form and Fock-oracle measures for the named
// state families, figure-reproduction sweeps, the convex-roof optimizer, and
// the invariant check suites.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "noncl/noncl.hpp"

namespace {

using noncl::cplx;

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUnknownFamily = 2;
constexpr int kExitBadParameters = 3;
constexpr int kExitIo = 4;
constexpr int kExitResourceCap = 5;

int exit_code_for(noncl::errc code) {
  switch (code) {
    case noncl::errc::unknown_family:
      return kExitUnknownFamily;
    case noncl::errc::io_failure:
      return kExitIo;
    case noncl::errc::dimension_too_large:
    case noncl::errc::cutoff_cap_exceeded:
      return kExitResourceCap;
    case noncl::errc::internal_consistency:
      return kExitInvariant;
    default:
      return kExitBadParameters;
  }
}

// CI can pin any knob through the environment; an env var beats the flag.
void env_override(const char* name, double& value) {
  if (const char* v = std::getenv(name)) value = std::atof(v);
}
void env_override(const char* name, int& value) {
  if (const char* v = std::getenv(name)) value = std::atoi(v);
}
void env_override(const char* name, std::uint64_t& value) {
  if (const char* v = std::getenv(name)) value = std::strtoull(v, nullptr, 10);
}

struct ResultRecord {
  std::string family;
  std::string provenance;  // closed-form | fock-oracle | roof-upper-bound
  noncl::FamilyParams params;
  cplx alpha_r{0.0, 0.0};
  int cutoff = 0;
  double n = 0.0;
  double n_per_energy = 0.0;
  double w = 0.0;
  double f_x = 0.0;
  double f_theta = 0.0;
};

const char* kRecordHeader =
    "family,provenance,alpha_re,alpha_im,r,theta,n_index,alpha_r_re,alpha_r_im,cutoff,"
    "N,N_per_energy,W,F_X,F_theta";

std::string record_csv_row(const ResultRecord& r) {
  using noncl::format_sig;
  std::string row = r.family + "," + r.provenance;
  for (double v : {r.params.alpha.real(), r.params.alpha.imag(), r.params.r, r.params.theta,
                   static_cast<double>(r.params.n), r.alpha_r.real(), r.alpha_r.imag(),
                   static_cast<double>(r.cutoff), r.n, r.n_per_energy, r.w, r.f_x, r.f_theta})
    row += "," + format_sig(v);
  return row;
}

nlohmann::json record_json(const ResultRecord& r) {
  return nlohmann::json{{"family", r.family},
                        {"provenance", r.provenance},
                        {"alpha", {r.params.alpha.real(), r.params.alpha.imag()}},
                        {"r", r.params.r},
                        {"theta", r.params.theta},
                        {"n_index", r.params.n},
                        {"alpha_r", {r.alpha_r.real(), r.alpha_r.imag()}},
                        {"cutoff", r.cutoff},
                        {"N", r.n},
                        {"N_per_energy", r.n_per_energy},
                        {"W", r.w},
                        {"F_X", r.f_x},
                        {"F_theta", r.f_theta}};
}

void emit(const std::vector<ResultRecord>& records, const std::string& format,
          const std::string& out_path) {
  std::string text;
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) arr.push_back(record_json(r));
    text = arr.dump(2) + "\n";
  } else {
    text = std::string(kRecordHeader) + "\n";
    for (const auto& r : records) text += record_csv_row(r) + "\n";
  }
  if (out_path.empty())
    std::cout << text;
  else
    noncl::write_text_file(out_path, text);
}

noncl::Family family_or_die(const std::string& name) {
  std::optional<noncl::Family> f = noncl::parse_family(name);
  if (!f) noncl::fail(noncl::errc::unknown_family, "no family named '" + name + "'");
  return *f;
}

double mzi_from(double f_x, double nbar, cplx alpha_r) {
  double ar2 = std::norm(alpha_r);
  return (ar2 + nbar) + 0.5 * ar2 * (f_x - 2.0);
}

struct MeasureArgs {
  std::string family;
  std::string alpha = "0";
  std::string alpha_r = "0";
  double r = 0.0;
  double theta = 0.0;
  int n = 0;
  int cutoff = 0;  // 0 selects automatically
  double tail_tol = noncl::kDefaultTailTol;
  std::string format = "csv";
  std::string out;
};

int run_measure(const MeasureArgs& args) {
  noncl::Family fam = family_or_die(args.family);
  noncl::FamilyParams params{noncl::parse_complex(args.alpha), args.r, args.theta, args.n};
  cplx alpha_r = noncl::parse_complex(args.alpha_r);

  noncl::ClosedFormReport cf = noncl::closed_form(fam, params);
  ResultRecord closed{args.family, "closed-form", params, alpha_r, 0,
                      cf.n,        cf.n_per_energy, cf.n,  4.0 * (cf.n + 0.5),
                      mzi_from(4.0 * (cf.n + 0.5), cf.nbar, alpha_r)};

  int d = args.cutoff > 0 ? args.cutoff : noncl::auto_cutoff(fam, params, args.tail_tol);
  noncl::PureFockState state = noncl::build_state(fam, params, d, args.tail_tol);
  noncl::Moments m = noncl::moments_pure(state);
  noncl::MeasureReport rep = noncl::measure_pure(state);
  ResultRecord oracle{args.family, "fock-oracle", params, alpha_r, d,
                      rep.n,       rep.n_per_energy, rep.w, rep.f_x,
                      mzi_from(rep.f_x, m.nbar, alpha_r)};

  emit({closed, oracle}, args.format, args.out);

  double gap = std::abs(closed.n - oracle.n);
  double per_gap = cf.nbar > 1e-6 ? std::abs(closed.n_per_energy - oracle.n_per_energy) : 0.0;
  if (gap > 1e-8 || per_gap > 1e-8) {
    std::cerr << "provenance mismatch: closed-form and fock-oracle differ by "
              << noncl::format_sig(std::max(gap, per_gap)) << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

struct Table1Args {
  std::string family;
  std::string alpha = "0";
  double r = 0.0;
  int cutoff = 0;
  double tail_tol = noncl::kDefaultTailTol;
  std::string format = "csv";
  std::string out;
};

int run_table1(const Table1Args& args) {
  noncl::Family fam = family_or_die(args.family);
  noncl::FamilyParams params{noncl::parse_complex(args.alpha), args.r, 0.0, 0};
  noncl::Table1Row row = noncl::table1(fam, params);

  int d = args.cutoff > 0 ? args.cutoff : noncl::auto_cutoff(fam, params, args.tail_tol);
  noncl::PureFockState base = noncl::build_state(fam, params, d, args.tail_tol);
  noncl::PureFockState added = noncl::photon_add(base, args.tail_tol * 16.0);
  noncl::Moments mb = noncl::moments_pure(base);
  noncl::Moments ma = noncl::moments_pure(added);
  double nb = noncl::ort_pure(mb), na = noncl::ort_pure(ma);
  double nb_per = mb.nbar > 0.0 ? nb / mb.nbar : 0.0;
  double na_per = na / ma.nbar;

  std::string text;
  const char* header = "family,provenance,alpha_re,alpha_im,r,cutoff,N,N_per_energy,"
                       "N_added,N_added_per_energy";
  auto rowtext = [&](const char* prov, int cut, double a, double b, double c, double e) {
    std::string s = args.family + std::string(",") + prov;
    for (double v : {params.alpha.real(), params.alpha.imag(), params.r,
                     static_cast<double>(cut), a, b, c, e})
      s += "," + noncl::format_sig(v);
    return s;
  };
  if (args.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    arr.push_back({{"family", args.family}, {"provenance", "closed-form"},
                   {"N", row.n}, {"N_per_energy", row.n_per_energy},
                   {"N_added", row.n_added}, {"N_added_per_energy", row.n_added_per_energy}});
    arr.push_back({{"family", args.family}, {"provenance", "fock-oracle"}, {"cutoff", d},
                   {"N", nb}, {"N_per_energy", nb_per},
                   {"N_added", na}, {"N_added_per_energy", na_per}});
    text = arr.dump(2) + "\n";
  } else {
    text = std::string(header) + "\n" +
           rowtext("closed-form", 0, row.n, row.n_per_energy, row.n_added,
                   row.n_added_per_energy) + "\n" +
           rowtext("fock-oracle", d, nb, nb_per, na, na_per) + "\n";
  }
  if (args.out.empty())
    std::cout << text;
  else
    noncl::write_text_file(args.out, text);

  double worst = std::max({std::abs(row.n - nb), std::abs(row.n_per_energy - nb_per),
                           std::abs(row.n_added - na),
                           std::abs(row.n_added_per_energy - na_per)});
  if (worst > 1e-8) {
    std::cerr << "provenance mismatch: table entries differ from the pipeline by "
              << noncl::format_sig(worst) << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

struct SweepArgs {
  std::string figure;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  std::string out;
};

int run_sweep_cmd(const SweepArgs& args) {
  std::optional<noncl::FigureId> fig = noncl::parse_figure(args.figure);
  if (!fig) noncl::fail(noncl::errc::bad_parameter, "no figure named '" + args.figure + "'");
  noncl::SweepSpec spec = noncl::default_spec(*fig);
  if (args.points > 0) spec.points = args.points;
  if (args.start != 0.0 || args.stop != 0.0) {
    spec.start = args.start;
    spec.stop = args.stop;
  }
  std::string csv = noncl::to_csv(noncl::run_sweep(spec));
  if (args.out.empty())
    std::cout << csv;
  else
    noncl::write_text_file(args.out, csv);
  return kExitOk;
}

struct RoofArgs {
  std::string input;
  int n = -1;
  double p = -1.0;
  double r = -1.0;
  double nbar = -1.0;
  int cutoff = 0;
  double tail_tol = noncl::kDefaultTailTol;
  int ensemble_size = 0;
  int restarts = 32;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  int support_cap = 64;
  std::string format = "text";
  std::string out;
};

int run_roof(const RoofArgs& args) {
  std::optional<noncl::DensityMatrix> rho;
  std::optional<noncl::DiagonalFockMixture> diag;
  if (args.input.rfind("file:", 0) == 0) {
    rho = noncl::read_density_file(args.input.substr(5));
  } else if (args.input == "two-fock") {
    if (args.n < 0 || args.p < 0.0)
      noncl::fail(noncl::errc::bad_parameter, "two-fock needs --n and --p");
    rho = noncl::two_fock_mixture(args.n, args.p, args.cutoff);
  } else if (args.input == "phase-damped-sv") {
    if (args.r < 0.0) noncl::fail(noncl::errc::bad_parameter, "phase-damped-sv needs --r");
    diag = noncl::phase_damped_squeezed_vacuum(args.r, args.cutoff > 0 ? args.cutoff : 80,
                                               args.tail_tol);
  } else if (args.input == "photon-added-thermal") {
    if (args.nbar < 0.0)
      noncl::fail(noncl::errc::bad_parameter, "photon-added-thermal needs --nbar");
    diag = noncl::photon_added_thermal(args.nbar, args.cutoff > 0 ? args.cutoff : 200,
                                       args.tail_tol);
  } else if (args.input == "thermal") {
    if (args.nbar < 0.0) noncl::fail(noncl::errc::bad_parameter, "thermal needs --nbar");
    diag = noncl::thermal_distribution(args.nbar, args.cutoff > 0 ? args.cutoff : 100,
                                       args.tail_tol);
  } else {
    noncl::fail(noncl::errc::unknown_family, "no mixture named '" + args.input + "'");
  }

  double w, f_x;
  if (diag) {
    w = noncl::metrological_power_diagonal(diag->weights());
    rho = noncl::to_density(*diag);
    f_x = 2.0 + 4.0 * w;  // exact for diagonal states when W > 0
    if (w == 0.0) f_x = noncl::qfi_quadrature(*rho).f_x;
  } else {
    f_x = noncl::qfi_quadrature(*rho).f_x;
    w = std::max(f_x - 2.0, 0.0) / 4.0;
  }
  double nbar = noncl::moments_mixed(*rho).nbar;

  noncl::RoofOptions opts;
  opts.ensemble_size = args.ensemble_size;
  opts.restarts = args.restarts;
  opts.seed = args.seed;
  opts.tol = args.tol;
  opts.support_cap = args.support_cap;
  noncl::RoofResult res = noncl::minimize(*rho, opts);

  std::string text;
  if (args.format == "json") {
    nlohmann::json members = nlohmann::json::array();
    for (size_t j = 0; j < res.best.members.size(); ++j) {
      noncl::Moments m = noncl::moments_pure(res.best.members[j]);
      members.push_back({{"q", res.best.weights[j]},
                         {"nbar", m.nbar},
                         {"alpha", {m.alpha.real(), m.alpha.imag()}},
                         {"xi", {m.xi.real(), m.xi.imag()}}});
    }
    text = nlohmann::json{{"input", args.input},
                          {"provenance", "roof-upper-bound"},
                          {"n_upper", res.n_upper},
                          {"n_upper_per_energy", nbar > 0.0 ? res.n_upper / nbar : 0.0},
                          {"w", w},
                          {"f_x", f_x},
                          {"gap", res.n_upper - w},
                          {"members", std::move(members)}}
               .dump(2) +
           "\n";
  } else {
    if (args.format == "csv") {
      ResultRecord rec{args.input, "roof-upper-bound", {}, {0.0, 0.0}, rho->cutoff(),
                       res.n_upper,  nbar > 0.0 ? res.n_upper / nbar : 0.0,
                       w,            f_x,
                       nbar};
      text = std::string(kRecordHeader) + "\n" + record_csv_row(rec) + "\n\n";
    }
    text += "n_upper = " + noncl::format_sig(res.n_upper) + "\n" +
            "w = " + noncl::format_sig(w) + "\n" +
            "gap = " + noncl::format_sig(res.n_upper - w) + "\n";
    if (args.format == "csv") text += "index,q,nbar,alpha_re,alpha_im,xi_re,xi_im\n";
    for (size_t j = 0; j < res.best.members.size(); ++j) {
      noncl::Moments m = noncl::moments_pure(res.best.members[j]);
      if (args.format == "csv") {
        text += std::to_string(j);
        for (double v : {res.best.weights[j], m.nbar, m.alpha.real(), m.alpha.imag(),
                         m.xi.real(), m.xi.imag()})
          text += "," + noncl::format_sig(v);
        text += "\n";
      } else {
        text += "member " + std::to_string(j) + ": q = " + noncl::format_sig(res.best.weights[j]) +
                ", nbar = " + noncl::format_sig(m.nbar) + ", alpha = (" +
                noncl::format_sig(m.alpha.real()) + ", " + noncl::format_sig(m.alpha.imag()) +
                "), xi = (" + noncl::format_sig(m.xi.real()) + ", " +
                noncl::format_sig(m.xi.imag()) + ")\n";
      }
    }
  }
  if (args.out.empty())
    std::cout << text;
  else
    noncl::write_text_file(args.out, text);
  return kExitOk;
}

int run_check(const std::string& suite, std::uint64_t seed) {
  std::vector<noncl::CheckResult> results;
  if (suite == "pure")
    results = noncl::check_pure(seed);
  else if (suite == "mixed")
    results = noncl::check_mixed(seed);
  else if (suite == "roof")
    results = noncl::check_roof(seed);
  else if (suite == "all")
    results = noncl::check_all(seed);
  else
    noncl::fail(noncl::errc::bad_parameter, "no suite named '" + suite + "'");
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    if (!r.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
            << " (" << results.size() << " total)\n";
  return failures == 0 ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonclassicality measures for single-mode bosonic states"};
  app.require_subcommand(1);

  MeasureArgs margs;
  CLI::App* measure = app.add_subcommand("measure", "Measure a named pure-state family");
  measure->add_option("family", margs.family, "family name")->required();
  measure->add_option("--alpha", margs.alpha, "coherent amplitude, re or re,im");
  measure->add_option("--alpha-r", margs.alpha_r, "interferometer reference amplitude");
  measure->add_option("--r", margs.r, "squeezing magnitude");
  measure->add_option("--theta", margs.theta, "squeezing phase");
  measure->add_option("--n", margs.n, "fock index");
  measure->add_option("--cutoff", margs.cutoff, "fock cutoff, 0 = automatic");
  measure->add_option("--tail-tol", margs.tail_tol, "tail-mass tolerance");
  measure->add_option("--format", margs.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  measure->add_option("--out", margs.out, "output path, default stdout");

  Table1Args targs;
  CLI::App* table = app.add_subcommand("table1", "Photon-addition closed forms vs the pipeline");
  table->add_option("family", targs.family, "coherent, squeezed-vacuum, even-cat or odd-cat")
      ->required();
  table->add_option("--alpha", targs.alpha, "coherent amplitude");
  table->add_option("--r", targs.r, "squeezing magnitude");
  table->add_option("--cutoff", targs.cutoff, "fock cutoff, 0 = automatic");
  table->add_option("--tail-tol", targs.tail_tol, "tail-mass tolerance");
  table->add_option("--format", targs.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  table->add_option("--out", targs.out, "output path, default stdout");

  SweepArgs sargs;
  CLI::App* sweep = app.add_subcommand("sweep", "Emit a figure-reproduction dataset");
  sweep->add_option("--figure", sargs.figure, "fig3, fig4, fig5, fig6 or fig7")->required();
  sweep->add_option("--start", sargs.start, "grid start");
  sweep->add_option("--stop", sargs.stop, "grid stop");
  sweep->add_option("--points", sargs.points, "grid points");
  sweep->add_option("--out", sargs.out, "output path, default stdout");

  RoofArgs rargs;
  CLI::App* roof = app.add_subcommand("roof", "Convex-roof upper bound for a mixed state");
  roof->add_option("input", rargs.input,
                   "two-fock | phase-damped-sv | photon-added-thermal | thermal | file:PATH")
      ->required();
  roof->add_option("--n", rargs.n, "fock index for two-fock");
  roof->add_option("--p", rargs.p, "weight of |n><n| for two-fock");
  roof->add_option("--r", rargs.r, "squeezing for phase-damped-sv");
  roof->add_option("--nbar", rargs.nbar, "thermal occupation");
  roof->add_option("--cutoff", rargs.cutoff, "fock cutoff, 0 = family default");
  roof->add_option("--tail-tol", rargs.tail_tol, "tail-mass tolerance");
  roof->add_option("--ensemble-size", rargs.ensemble_size,
                   "decomposition members, 0 = twice the support");
  roof->add_option("--restarts", rargs.restarts, "optimizer restarts");
  roof->add_option("--seed", rargs.seed, "optimizer seed");
  roof->add_option("--tol", rargs.tol, "optimizer tolerance");
  roof->add_option("--support-cap", rargs.support_cap, "largest support dimension accepted");
  roof->add_option("--format", rargs.format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  roof->add_option("--out", rargs.out, "output path, default stdout");

  std::string suite = "all";
  std::uint64_t check_seed = 1;
  CLI::App* check = app.add_subcommand("check", "Run the invariant check suites");
  check->add_option("suite", suite, "pure, mixed, roof or all");
  check->add_option("--seed", check_seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitBadParameters;
  }

  env_override("NONCL_CUTOFF", margs.cutoff);
  env_override("NONCL_CUTOFF", targs.cutoff);
  env_override("NONCL_CUTOFF", rargs.cutoff);
  env_override("NONCL_TAIL_TOL", margs.tail_tol);
  env_override("NONCL_TAIL_TOL", targs.tail_tol);
  env_override("NONCL_TAIL_TOL", rargs.tail_tol);
  env_override("NONCL_TOL", rargs.tol);
  env_override("NONCL_SEED", rargs.seed);
  env_override("NONCL_SEED", check_seed);
  env_override("NONCL_RESTARTS", rargs.restarts);
  env_override("NONCL_ENSEMBLE_SIZE", rargs.ensemble_size);
  env_override("NONCL_SUPPORT_CAP", rargs.support_cap);

  try {
    if (measure->parsed()) return run_measure(margs);
    if (table->parsed()) return run_table1(targs);
    if (sweep->parsed()) return run_sweep_cmd(sargs);
    if (roof->parsed()) return run_roof(rargs);
    if (check->parsed()) return run_check(suite, check_seed);
  } catch (const noncl::error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitBadParameters;
}
