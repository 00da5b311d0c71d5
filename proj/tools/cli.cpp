#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hwr/hwr.hpp"

namespace hwr::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  std::string func;
  std::string data;
  std::string model;
  std::string out;
  int d = 0;
  int m = 2;
  std::optional<int> n;
  std::optional<int> n2;
  int nu = 1;
  double eps = 0.01;
  std::optional<std::size_t> samples;
  double oversample = 2.0;
  std::uint64_t seed = 0;
  int threads = 0;
  bool strict = false;
  std::size_t test_samples = 100000;
  int n_min = 0;
  int n_max = 0;
  int max_iter = 200;
};

// Usage errors are input problems; everything else is numerical.
int exit_code(Errc c) {
  switch (c) {
    case Errc::Underdetermined:
    case Errc::ZeroVariance:
    case Errc::NonFiniteInput:
    case Errc::SizeOverflow:
    case Errc::DegenerateSelection:
      return 2;
    default:
      return 1;
  }
}

ExecPolicy policy(const Options& o) { return ExecPolicy{o.threads, o.strict}; }

FitConfig base_config(const Options& o) {
  FitConfig cfg;
  cfg.m = o.m;
  cfg.n = o.n;
  cfg.n2 = o.n2;
  cfg.nu = o.nu;
  cfg.epsilon = o.eps;
  cfg.seed = o.seed;
  cfg.oversample = o.oversample;
  cfg.solver.max_iter = o.max_iter;
  cfg.exec = policy(o);
  return cfg;
}

void write_output(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty())
    out << text;
  else
    write_file_atomic(o.out, text);
}

std::string labels_string(const SubsetFamily& U) {
  std::string s = "{";
  for (std::size_t i = 0; i < U.members().size(); ++i) s += (i ? "," : "") + U.members()[i].to_string();
  return s + "}";
}

json family_json(const SubsetFamily& U) {
  json a = json::array();
  for (const Subset u : U.members()) a.push_back(u.labels());
  return a;
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

// Training data: either a CSV file or samples of a built-in function.
struct Input {
  SampleSet X;
  std::optional<TestFunction> f;
};

Input load_input(const Options& o, const SubsetFamily* family_for_rule, std::ostream& err) {
  if (o.func.empty() == o.data.empty()) throw Error(Errc::InvalidArgument, "give exactly one of --func and --data");
  Input in;
  if (!o.data.empty()) {
    auto csv = read_samples_csv(o.data, true);
    if (csv.wrapped) err << "warning: wrapped " << csv.wrapped << " coordinates into [-1/2, 1/2)\n";
    if (o.d != 0 && o.d != csv.samples.d) throw Error(Errc::DimensionMismatch, "--d does not match the CSV header");
    in.X = std::move(csv.samples);
    return in;
  }
  in.f = builtin(o.func, o.d);
  std::size_t M = 0;
  if (o.samples) {
    M = *o.samples;
  } else {
    if (!o.n || !family_for_rule)
      throw Error(Errc::InvalidArgument, "--samples is required unless --n fixes the level for the oversampling rule");
    const auto N = count_columns(in.f->dim, *o.n, *family_for_rule);
    M = static_cast<std::size_t>(std::ceil(o.oversample * static_cast<double>(N) * std::log(static_cast<double>(N))));
    M = std::max<std::size_t>(M, N);
  }
  in.X = sample_function(*in.f, M, o.seed);
  return in;
}

json solve_json(const SolveReport& r) {
  return {{"iterations", r.iterations},
          {"residual_norm", r.residual_norm},
          {"normal_residual_norm", r.normal_residual_norm},
          {"stop", to_string(r.stop)}};
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const int d_hint = o.func.empty() ? o.d : builtin(o.func, o.d).dim;
  const auto full = d_hint > 0 ? std::optional(SubsetFamily::power_set(d_hint)) : std::nullopt;
  Input in = load_input(o, full ? &*full : nullptr, err);
  FitConfig cfg = base_config(o);
  if (!cfg.n) cfg.n = auto_level(in.X.d, SubsetFamily::power_set(in.X.d), in.X.size());
  const auto fit = fit_hyperbolic(in.X, cfg);
  print_warnings(fit.warnings, err);
  if (!o.out.empty()) save_model(o.out, fit.model, {o.seed, "fit"});

  json summary = {{"m", o.m},
                  {"d", in.X.d},
                  {"n", *cfg.n},
                  {"N", fit.model.index_set().size()},
                  {"M", in.X.size()},
                  {"solve", solve_json(fit.report)}};
  err << "fit: m=" << o.m << " d=" << in.X.d << " n=" << *cfg.n << " N=" << fit.model.index_set().size()
      << " M=" << in.X.size() << " iterations=" << fit.report.iterations << " stop=" << to_string(fit.report.stop) << "\n";
  if (in.f) {
    const double e = rmse(fit.model, *in.f, o.test_samples, o.seed, policy(o));
    summary["rmse"] = e;
    err << "rmse: " << e << " on " << o.test_samples << " held-out nodes\n";
  }
  out << summary.dump() << "\n";
  return 0;
}

int cmd_anova_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const int d_hint = o.func.empty() ? o.d : builtin(o.func, o.d).dim;
  const auto Unu = d_hint > 0 ? std::optional(SubsetFamily::up_to_order(d_hint, std::min(o.nu, d_hint))) : std::nullopt;
  Input in = load_input(o, Unu ? &*Unu : nullptr, err);
  const FitConfig cfg = base_config(o);
  const auto fit = fit_anova(in.X, cfg);
  print_warnings(fit.warnings, err);
  if (!o.out.empty()) save_model(o.out, fit.model, {o.seed, fit.stages.size() == 2 ? "stage2" : "stage1"});

  json stages = json::array();
  for (std::size_t s = 0; s < fit.stages.size(); ++s) {
    const auto& st = fit.stages[s];
    json e = {{"level", st.level}, {"N", st.columns}, {"nonzeros", st.nonzeros}, {"family", family_json(st.family)},
              {"solve", solve_json(st.solve)}};
    if (st.anova) e["anova"] = anova_report_to_json(*st.anova);
    if (in.f) e["rmse"] = rmse(st.model, *in.f, o.test_samples, o.seed, policy(o));
    stages.push_back(std::move(e));
  }
  const json summary = {{"M", in.X.size()}, {"selected", family_json(*fit.active)}, {"stages", std::move(stages)}};
  err << "selected U: " << labels_string(*fit.active) << "\n";
  for (std::size_t s = 0; s < fit.stages.size(); ++s) {
    err << "stage " << s + 1 << ": n=" << fit.stages[s].level << " N=" << fit.stages[s].columns;
    if (summary["stages"][s].contains("rmse")) err << " rmse=" << summary["stages"][s]["rmse"].get<double>();
    err << "\n";
  }
  out << summary.dump() << "\n";
  return 0;
}

int cmd_gsi(const Options& o, std::ostream& out, std::ostream&) {
  if (o.model.empty()) throw Error(Errc::InvalidArgument, "--model is required");
  const auto loaded = load_model(o.model);
  const GramBlockTable grams(loaded.model.basis(), loaded.model.index_set().max_level());
  AnovaReport rep;
  try {
    rep = sensitivity_indices(loaded.model, grams, policy(o));
  } catch (const Error& e) {
    if (e.code() != Errc::ZeroVariance) throw;
    rep = variance_report(loaded.model, grams, policy(o));
  }
  write_output(o, out, anova_report_to_json(rep).dump(1) + "\n");
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.model.empty() || o.data.empty()) throw Error(Errc::InvalidArgument, "--model and --data are required");
  const auto loaded = load_model(o.model);
  auto csv = read_samples_csv(o.data, false);
  if (csv.wrapped) err << "warning: wrapped " << csv.wrapped << " coordinates into [-1/2, 1/2)\n";
  if (csv.samples.d != loaded.model.dim()) throw Error(Errc::DimensionMismatch, "data dimension differs from the model");
  const auto v = loaded.model.evaluate_many(csv.samples.nodes, policy(o));
  std::string text = "y\n";
  char buf[32];
  for (double e : v) {
    std::snprintf(buf, sizeof buf, "%.17g\n", e);
    text += buf;
  }
  write_output(o, out, text);
  if (csv.samples.has_values()) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += (v[i] - csv.samples.values[i]) * (v[i] - csv.samples.values[i]);
    err << "rmse: " << std::sqrt(s / static_cast<double>(v.size())) << "\n";
  }
  return 0;
}

int cmd_convergence(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.func.empty()) throw Error(Errc::InvalidArgument, "--func is required");
  const auto f = builtin(o.func, o.d);
  StudyOptions so;
  so.oversample = o.oversample;
  so.M = o.samples;
  so.M_test = o.test_samples;
  so.solver.max_iter = o.max_iter;
  so.exec = policy(o);
  auto study = convergence_study(f, o.m, o.n_min, o.n_max, o.seed, so);
  if (o.strict)
    for (auto& r : study.rows) r.seconds = 0.0;  // wall time would break byte-identical output
  std::ostringstream csv;
  write_study_csv(csv, study.rows);
  write_output(o, out, csv.str());
  if (study.rows.size() >= 2) err << "slope: " << study.slope << " (log2 rmse per level, upper half)\n";
  return 0;
}

int cmd_diagnose(const Options& o, std::ostream& out, std::ostream&) {
  if (!o.n) throw Error(Errc::InvalidArgument, "--n is required");
  const int d = o.func.empty() ? o.d : builtin(o.func, o.d).dim;
  if (d < 1) throw Error(Errc::InvalidArgument, "--d or --func is required");
  const WaveletBasis basis(SplineOrder{o.m});
  auto idx = std::make_shared<const HyperbolicIndexSet>(build_hyperbolic(d, *o.n));
  const auto N = idx->size();
  const std::size_t M =
      o.samples ? *o.samples
                : std::max<std::size_t>(N, static_cast<std::size_t>(std::ceil(o.oversample * static_cast<double>(N) *
                                                                              std::log(static_cast<double>(N)))));
  const auto X = sample_uniform(d, M, o.seed);
  const auto diag = spectral_diagnostics(basis, idx, X, policy(o));
  const json j = {{"m", o.m},
                  {"d", d},
                  {"n", *o.n},
                  {"N", N},
                  {"M", M},
                  {"R_n", diag.R_n},
                  {"R_bound", static_cast<double>(N) * std::pow(basis.c_psi(), d)},
                  {"min_eig", diag.min_eig},
                  {"max_eig", diag.max_eig},
                  {"gamma_d", std::pow(basis.gamma(), d)},
                  {"delta_d", std::pow(basis.delta(), d)},
                  {"lanczos_steps", diag.iterations}};
  write_output(o, out, j.dump(1) + "\n");
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Hyperbolic wavelet regression with ANOVA-based term selection"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* c) {
    c->add_option("--m", o.m, "spline order of the wavelet (1..10)")->check(CLI::Range(1, 10));
    c->add_option("--seed", o.seed, "seed for all random streams");
    c->add_option("--threads", o.threads, "worker threads (0: hardware default)")->check(CLI::NonNegativeNumber);
    c->add_flag("--strict-deterministic", o.strict, "serial kernels and fixed summation order");
    c->add_option("--out", o.out, "output file (written atomically)");
  };
  auto data_source = [&](CLI::App* c) {
    c->add_option("--func", o.func, "built-in test function");
    c->add_option("--data", o.data, "CSV with columns x1..xd,y")->check(CLI::ExistingFile);
    c->add_option("--d", o.d, "dimension")->check(CLI::Range(0, Subset::kMaxDim));
    c->add_option("--samples", o.samples, "number of training samples")->check(CLI::PositiveNumber);
    c->add_option("--oversample", o.oversample, "c in M = c N ln N")->check(CLI::PositiveNumber);
    c->add_option("--test-samples", o.test_samples, "held-out nodes for the RMSE")->check(CLI::PositiveNumber);
    c->add_option("--max-iter", o.max_iter, "LSQR iteration cap")->check(CLI::PositiveNumber);
  };

  auto* fit = app.add_subcommand("fit", "hyperbolic wavelet regression on J_n");
  common(fit);
  data_source(fit);
  fit->add_option("--n", o.n, "level")->check(CLI::NonNegativeNumber);

  auto* afit = app.add_subcommand("anova-fit", "two-stage ANOVA regression");
  common(afit);
  data_source(afit);
  afit->add_option("--n", o.n, "stage-1 level (default: largest with M > N ln N)")->check(CLI::NonNegativeNumber);
  afit->add_option("--n2", o.n2, "stage-2 level (default: largest with M > N ln N)")->check(CLI::NonNegativeNumber);
  afit->add_option("--nu", o.nu, "superposition dimension")->check(CLI::PositiveNumber);
  afit->add_option("--eps", o.eps, "selection threshold in (0, 1)")->check(CLI::Range(0.0, 1.0));

  auto* gsi = app.add_subcommand("gsi", "sensitivity indices of a saved model");
  common(gsi);
  gsi->add_option("--model", o.model, "model JSON")->required()->check(CLI::ExistingFile);

  auto* ev = app.add_subcommand("eval", "evaluate a saved model at CSV nodes");
  common(ev);
  ev->add_option("--model", o.model, "model JSON")->required()->check(CLI::ExistingFile);
  ev->add_option("--data", o.data, "CSV with columns x1..xd[,y]")->required()->check(CLI::ExistingFile);

  auto* conv = app.add_subcommand("convergence", "RMSE against level for a built-in function");
  common(conv);
  data_source(conv);
  conv->add_option("--n-min", o.n_min, "first level")->required()->check(CLI::NonNegativeNumber);
  conv->add_option("--n-max", o.n_max, "last level")->required()->check(CLI::NonNegativeNumber);

  auto* diag = app.add_subcommand("diagnose", "row norms and extreme eigenvalues of (1/M) A^T A");
  common(diag);
  diag->add_option("--func", o.func, "built-in test function (sets d)");
  diag->add_option("--d", o.d, "dimension")->check(CLI::Range(0, Subset::kMaxDim));
  diag->add_option("--n", o.n, "level")->required()->check(CLI::NonNegativeNumber);
  diag->add_option("--samples", o.samples, "number of nodes")->check(CLI::PositiveNumber);
  diag->add_option("--oversample", o.oversample, "c in M = c N ln N")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (!(o.eps > 0.0 && o.eps < 1.0)) {
    err << "error: --eps must lie in (0, 1)\n";
    return 1;
  }

  try {
    if (o.threads > 0) set_default_threads(o.threads);
    if (*fit) return cmd_fit(o, out, err);
    if (*afit) return cmd_anova_fit(o, out, err);
    if (*gsi) return cmd_gsi(o, out, err);
    if (*ev) return cmd_eval(o, out, err);
    if (*conv) return cmd_convergence(o, out, err);
    if (*diag) return cmd_diagnose(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace hwr::cli
