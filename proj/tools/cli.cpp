#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "largen/analysis.hpp"
#include "largen/dynamics.hpp"
#include "largen/error.hpp"
#include "largen/floquet.hpp"
#include "largen/format.hpp"
#include "largen/json_io.hpp"
#include "largen/potential.hpp"
#include "largen/scan.hpp"
#include "largen/thermal.hpp"

namespace largen::cli {

namespace {

using nlohmann::json;

struct ModelOptions {
  std::optional<std::string> coeffs;
  std::optional<double> w;
  std::optional<double> lambda;
  std::optional<std::string> beta;
  std::optional<double> s;
};

struct IntegratorOptions {
  std::optional<double> rtol;
  std::optional<double> atol;
  std::optional<double> energy_tol;
  std::optional<double> max_step;
  std::optional<double> stride;
};

struct Options {
  std::string config_path;
  std::string out_path;
  ModelOptions model;
  IntegratorOptions integ;

  // gap
  std::optional<long> oracle;
  // simulate / beats
  std::optional<double> t_end;
  std::optional<double> n_periods;
  std::optional<double> late_fraction;
  std::string envelope_csv;
  bool control = false;
  // floquet
  std::optional<double> period;
  // floquet / scan
  std::optional<double> assert_stable;
  // scan
  std::string grid_path;
  std::vector<std::string> w_axis, lambda_axis, beta_axis, s_axis, coeffs_axis;
  int jobs = 1;
  std::optional<std::size_t> max_points;
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, "invalid JSON in '" + path + "': " + e.what());
  }
}

double json_real(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_real(v.get<std::string>());
  throw Error(ErrorKind::Config, "config key '" + key + "' must be a number");
}

// Fills options that were not given on the command line from the config file.
template <class T>
void fill(std::optional<T>& opt, const json& cfg, const std::string& key) {
  if (opt || !cfg.contains(key)) return;
  const json& v = cfg.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (v.is_string())
      opt = v.get<std::string>();
    else if (v.is_number())
      opt = format_real(v.get<double>());
    else
      throw Error(ErrorKind::Config, "config key '" + key + "' must be a string");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw Error(ErrorKind::Config, "config key '" + key + "' must be an integer");
    opt = v.get<T>();
  } else {
    opt = json_real(v, key);
  }
}

void apply_config(Options& o) {
  if (o.config_path.empty()) return;
  const json cfg = load_json_file(o.config_path);
  if (!cfg.is_object()) throw Error(ErrorKind::Config, "config file must hold a JSON object");
  fill(o.model.coeffs, cfg, "coeffs");
  fill(o.model.w, cfg, "w");
  fill(o.model.lambda, cfg, "lambda");
  fill(o.model.beta, cfg, "beta");
  fill(o.model.s, cfg, "s");
  fill(o.integ.rtol, cfg, "rtol");
  fill(o.integ.atol, cfg, "atol");
  fill(o.integ.energy_tol, cfg, "energy_tol");
  fill(o.integ.max_step, cfg, "max_step");
  fill(o.integ.stride, cfg, "stride");
  fill(o.oracle, cfg, "oracle");
  fill(o.t_end, cfg, "t_end");
  fill(o.n_periods, cfg, "n_periods");
  fill(o.late_fraction, cfg, "late_fraction");
  fill(o.period, cfg, "period");
  fill(o.assert_stable, cfg, "assert_stable");
  if (o.out_path.empty() && cfg.contains("out")) o.out_path = cfg.at("out").get<std::string>();
  if (o.envelope_csv.empty() && cfg.contains("envelope_csv")) o.envelope_csv = cfg.at("envelope_csv").get<std::string>();
}

Potential make_potential(const ModelOptions& m) {
  if (m.coeffs && (m.w || m.lambda))
    throw Error(ErrorKind::Config, "give either --coeffs or --w/--lambda, not both");
  if (m.coeffs) return Potential::parse(*m.coeffs);
  if (!m.w) throw Error(ErrorKind::Config, "potential missing: pass --coeffs or --w [--lambda]");
  return Potential::quartic(*m.w, m.lambda.value_or(0.0));
}

double require_beta(const ModelOptions& m) {
  if (!m.beta) throw Error(ErrorKind::Config, "--beta is required (a positive number or inf)");
  return parse_real(*m.beta);
}

double require_s(const ModelOptions& m) {
  if (!m.s) throw Error(ErrorKind::Config, "--s is required");
  return *m.s;
}

IntegratorConfig make_integrator(const IntegratorOptions& o) {
  IntegratorConfig c;
  if (o.rtol) c.rtol = *o.rtol;
  if (o.atol) c.atol = *o.atol;
  if (o.energy_tol) c.energy_tol = *o.energy_tol;
  if (o.max_step) c.max_step = *o.max_step;
  if (o.stride) c.output_stride = *o.stride;
  c.validate();
  return c;
}

// Period of x(t); for a static condensate the u-oscillation period 2 pi / omega_eff.
double reference_period(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config) {
  if (setup.s <= kDegenerateThreshold) return 2.0 * std::numbers::pi / setup.omega_eff;
  return period_by_events(setup, model, config).period;
}

double run_length(const Options& o, const PerturbedSetup& setup, const Potential& model,
                  const IntegratorConfig& config, double default_periods) {
  if (o.t_end && o.n_periods) throw Error(ErrorKind::Config, "give either --t-end or --n-periods, not both");
  if (o.t_end) return *o.t_end;
  const double n = o.n_periods.value_or(default_periods);
  if (!(n > 0.0)) throw Error(ErrorKind::Config, "--n-periods must be > 0");
  return n * reference_period(setup, model, config);
}

// Writes to --out when given, otherwise to the command's stdout.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::Config, "cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int command_gap(Options& o, std::ostream& out) {
  apply_config(o);
  const Potential model = make_potential(o.model);
  const double beta = require_beta(o.model);
  const double x0 = solve_gap_equation(model, beta);
  const double omega = std::sqrt(2.0 * model.derivative(x0));
  const double residual = std::abs(gap_residual(model, beta, x0));
  Output sink(o.out_path, out);
  sink.get() << "x0=" << format_real(x0) << " omega=" << format_real(omega) << " residual=" << format_real(residual);
  if (o.oracle) {
    if (std::isinf(beta)) throw Error(ErrorKind::Config, "--oracle needs a finite --beta");
    sink.get() << " oracle=" << format_real(matsubara_x0(omega, beta, *o.oracle));
  }
  sink.get() << '\n';
  return kExitOk;
}

int command_simulate(Options& o, std::ostream& out) {
  apply_config(o);
  const Potential model = make_potential(o.model);
  const PerturbedSetup setup = build_setup(model, require_beta(o.model), require_s(o.model));
  const IntegratorConfig config = make_integrator(o.integ);
  const double t_end = run_length(o, setup, model, config, 10.0);
  const Trajectory traj = integrate(setup, model, config, t_end);

  Output sink(o.out_path, out);
  std::ostream& os = sink.get();
  os << "t,x,x_dot,u,u_dot,energy_x\n";
  for (const Sample& s : traj.samples) {
    os << format_real(s.state.t) << ',' << format_real(s.state.x) << ',' << format_real(s.state.x_dot) << ','
       << format_real(s.state.u) << ',' << format_real(s.state.u_dot) << ',' << format_real(s.energy_x) << '\n';
  }
  return kExitOk;
}

int command_floquet(Options& o, std::ostream& out) {
  apply_config(o);
  const Potential model = make_potential(o.model);
  const PerturbedSetup setup = build_setup(model, require_beta(o.model), require_s(o.model));
  const IntegratorConfig config = make_integrator(o.integ);

  double period = 0.0;
  double x_f = setup.x0;
  if (o.period) {
    period = *o.period;
    if (setup.s > kDegenerateThreshold) x_f = turning_point_root(setup, model);
  } else {
    const PeriodEstimate est = period_by_events(setup, model, config);
    period = est.period;
    x_f = est.x_f;
  }
  MonodromyResult result = monodromy_matrix(setup, model, config, period);
  result.classification = classify_stability(result);

  Output sink(o.out_path, out);
  sink.get() << dump_json(to_json(result, x_f), 2) << '\n';
  if (o.assert_stable &&
      (result.classification == Stability::Resonant || !(result.max_abs_multiplier_deviation() < *o.assert_stable)))
    return kExitResonance;
  return kExitOk;
}

int command_beats(Options& o, std::ostream& out) {
  apply_config(o);
  const Potential model = make_potential(o.model);
  const PerturbedSetup setup = build_setup(model, require_beta(o.model), require_s(o.model));
  const IntegratorConfig config = make_integrator(o.integ);
  const double t_end = run_length(o, setup, model, config, 50.0);
  const Trajectory traj =
      o.control ? integrate_frozen_control(setup, model, config, t_end) : integrate(setup, model, config, t_end);
  const EnvelopeSeries env = extract_envelope(traj);
  const BeatReport report = beat_report(env, o.late_fraction.value_or(kDefaultLateFraction));

  if (!o.envelope_csv.empty()) {
    std::ofstream csv(o.envelope_csv);
    if (!csv) throw Error(ErrorKind::Config, "cannot write '" + o.envelope_csv + "'");
    csv << "t,amplitude\n";
    for (const auto& p : env.extrema) csv << format_real(p.t) << ',' << format_real(p.amplitude) << '\n';
  }
  Output sink(o.out_path, out);
  sink.get() << dump_json(to_json(report), 2) << '\n';
  return kExitOk;
}

std::vector<double> parse_axis(const std::vector<std::string>& items) {
  std::vector<double> v;
  for (const auto& s : items) v.push_back(parse_real(s));
  return v;
}

int command_scan(Options& o, std::ostream& out, std::ostream& err) {
  json base = json::object();
  if (!o.grid_path.empty()) base = load_json_file(o.grid_path);
  if (!o.config_path.empty()) {
    for (const auto& [k, v] : load_json_file(o.config_path).items()) {
      if (!base.contains(k)) base[k] = v;
    }
  }
  const bool inline_axes = !o.w_axis.empty() || !o.lambda_axis.empty() || !o.beta_axis.empty() ||
                           !o.s_axis.empty() || !o.coeffs_axis.empty();
  GridSpec grid = base.empty() && !inline_axes ? GridSpec::default_grid() : GridSpec::from_json(base);
  if (!o.w_axis.empty()) grid.w = parse_axis(o.w_axis);
  if (!o.lambda_axis.empty()) grid.lambda = parse_axis(o.lambda_axis);
  if (!o.beta_axis.empty()) grid.beta = parse_axis(o.beta_axis);
  if (!o.s_axis.empty()) grid.s = parse_axis(o.s_axis);
  if (!o.coeffs_axis.empty()) grid.coeffs = o.coeffs_axis;
  if (o.integ.rtol) grid.integrator.rtol = *o.integ.rtol;
  if (o.integ.atol) grid.integrator.atol = *o.integ.atol;
  if (o.max_points) grid.max_points = *o.max_points;
  if (!o.assert_stable && base.contains("assert_stable")) o.assert_stable = json_real(base.at("assert_stable"), "assert_stable");
  if (o.out_path.empty() && base.contains("out")) o.out_path = base.at("out").get<std::string>();

  const std::vector<ScanRecord> records = run_scan(grid, o.jobs);
  {
    Output sink(o.out_path, out);
    write_scan_csv(sink.get(), records, grid.generic());
  }
  const auto failed = std::count_if(records.begin(), records.end(), [](const ScanRecord& r) { return r.error.has_value(); });
  for (const auto& r : records) {
    if (r.error) err << "warning: grid point " << r.index << " failed: " << *r.error << '\n';
  }
  if (o.assert_stable) {
    if (failed > 0) throw Error(ErrorKind::Numerical, std::to_string(failed) + " grid point(s) failed; cannot certify stability");
    if (!assert_no_resonance(records, *o.assert_stable)) {
      err << "resonance assertion failed at tolerance " << format_real(*o.assert_stable) << '\n';
      return kExitResonance;
    }
  }
  return kExitOk;
}

void add_model_options(CLI::App* sub, Options& o, bool need_s) {
  sub->add_option("--coeffs", o.model.coeffs, "Potential V(x) as comma-separated k:c pairs, e.g. 1:0.5,2:0.25");
  sub->add_option("--w", o.model.w, "Quadratic frequency w: adds the term w^2 x / 2");
  sub->add_option("--lambda", o.model.lambda, "Quartic coupling lambda: adds the term lambda x^2 / 4 (default 0)");
  sub->add_option("--beta", o.model.beta, "Inverse temperature (positive number or inf)");
  if (need_s) sub->add_option("--s", o.model.s, "Perturbation strength s = xi^2 / N (>= 0)");
  sub->add_option("--config", o.config_path, "JSON config file; command-line flags take precedence");
  sub->add_option("--out", o.out_path, "Output path (default: standard output)");
}

void add_integrator_options(CLI::App* sub, Options& o) {
  sub->add_option("--rtol", o.integ.rtol, "Relative local error tolerance (default 1e-10)");
  sub->add_option("--atol", o.integ.atol, "Absolute local error tolerance (default 1e-12)");
  sub->add_option("--energy-tol", o.integ.energy_tol, "Allowed relative drift of the x-energy (default 1e-8)");
  sub->add_option("--max-step", o.integ.max_step, "Largest integrator step (default unbounded)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Large-N O(N) model: perturbed thermal state dynamics and Floquet stability", "largen"};
  app.require_subcommand(1);
  Options o;

  auto* gap = app.add_subcommand("gap", "Solve the thermal gap equation for x0");
  add_model_options(gap, o, false);
  gap->add_option("--oracle", o.oracle, "Also print the Matsubara-sum value with this many modes n_max");

  auto* simulate = app.add_subcommand("simulate", "Integrate x(t) and u(t); CSV t,x,x_dot,u,u_dot,energy_x");
  add_model_options(simulate, o, true);
  add_integrator_options(simulate, o);
  simulate->add_option("--t-end", o.t_end, "Final time");
  simulate->add_option("--n-periods", o.n_periods, "Run length in periods of x(t) (default 10)");
  simulate->add_option("--stride", o.integ.stride, "Output sampling interval (default: 64 samples per fastest period)");

  auto* floquet = app.add_subcommand("floquet", "Monodromy matrix and Floquet multipliers over one period; JSON");
  add_model_options(floquet, o, true);
  add_integrator_options(floquet, o);
  floquet->add_option("--period", o.period, "Use this period instead of the event-located one");
  floquet->add_option("--assert-stable", o.assert_stable,
                      "Exit with code 4 if resonant or if max ||lambda|-1|| is not below this tolerance");

  auto* beats = app.add_subcommand("beats", "Envelope of u(t) and beat metrics; JSON");
  add_model_options(beats, o, true);
  add_integrator_options(beats, o);
  beats->add_option("--t-end", o.t_end, "Final time");
  beats->add_option("--n-periods", o.n_periods, "Run length in periods of x(t) (default 50)");
  beats->add_option("--stride", o.integ.stride, "Output sampling interval (default: 64 samples per fastest period)");
  beats->add_option("--late-fraction", o.late_fraction, "Final fraction of the run used for recurrence (default 0.2)");
  beats->add_option("--envelope-csv", o.envelope_csv, "Also write the envelope series (t,amplitude) to this path");
  beats->add_flag("--control", o.control, "Freeze the u-equation coefficient at 2 V'(x_init) (rigid-oscillation control)");

  auto* scan = app.add_subcommand("scan", "Floquet survey over a parameter grid; CSV");
  scan->add_option("--grid", o.grid_path, "JSON grid file (axes w, lambda | coeffs, beta, s)");
  scan->add_option("--config", o.config_path, "JSON config file; grid file and flags take precedence");
  scan->add_option("--w", o.w_axis, "Comma-separated w axis")->delimiter(',');
  scan->add_option("--lambda", o.lambda_axis, "Comma-separated lambda axis")->delimiter(',');
  scan->add_option("--beta", o.beta_axis, "Comma-separated beta axis (inf allowed)")->delimiter(',');
  scan->add_option("--s", o.s_axis, "Comma-separated s axis")->delimiter(',');
  scan->add_option("--coeffs", o.coeffs_axis, "Generic potential k:c[,k:c...]; repeat for several potentials");
  scan->add_option("--rtol", o.integ.rtol, "Relative local error tolerance (default 1e-10)");
  scan->add_option("--atol", o.integ.atol, "Absolute local error tolerance (default 1e-12)");
  scan->add_option("--jobs", o.jobs, "Worker threads (output order does not depend on it)");
  scan->add_option("--max-points", o.max_points, "Grid size cap (default 100000)");
  scan->add_option("--assert-stable", o.assert_stable,
                   "Exit with code 4 if any point is resonant or has max ||lambda|-1|| >= this tolerance");
  scan->add_option("--out", o.out_path, "Output path (default: standard output)");
  scan->footer("Without --grid, --config or axis flags the built-in 192-point grid is used.");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (gap->parsed()) return command_gap(o, out);
    if (simulate->parsed()) return command_simulate(o, out);
    if (floquet->parsed()) return command_floquet(o, out);
    if (beats->parsed()) return command_beats(o, out);
    if (scan->parsed()) return command_scan(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace largen::cli
