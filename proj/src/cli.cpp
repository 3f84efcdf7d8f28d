#include "liegauge/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <stdexcept>

#include <CLI11.hpp>

#include "liegauge/algebra_io.hpp"
#include "liegauge/cohomology.hpp"
#include "liegauge/errors.hpp"

namespace liegauge {
namespace {

double default_radius(const LieAlgebra& alg, const RunConfig& config) {
  if (config.radius) return *config.radius;
  return config.frame == FrameKind::exp_chart ? exp_chart_default_radius(alg) : 0.4;
}

nlohmann::json norms_json(const DiagnosticNorms& n) {
  return {{"norm_tau", n.tau},
          {"norm_A", n.gauge},
          {"norm_DT", n.dt},
          {"norm_dDT", n.ddt},
          {"norm_nablaT_residual", n.nabla_residual},
          {"norm_metric_skew", n.metric_skew},
          {"norm_riemann", n.riemann}};
}

DiagnosticsReport field_report(const LieAlgebra& alg, const RunConfig& config, double step,
                               const std::vector<Eigen::VectorXd>& samples, double radius) {
  if (!classify(alg).semisimple)
    throw DegenerateKilling("field diagnostics need a semisimple algebra; '" + alg.name() + "' is not");
  const FrameField frame = frame_field(alg, config.frame, {config.seed, config.frame_scale});
  const Chart chart = make_chart(alg.dim(), step, radius, samples);
  const FieldOptions options{config.threads};
  return residual_report(bracket_field_from_frame(alg, frame, chart, options), options);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.algebra.empty() == config.spec_path.empty())
    throw std::invalid_argument("exactly one of --algebra and --spec is required");
  if (config.samples < 1) throw std::invalid_argument("--samples must be at least 1");
  if (config.levels < 2 || config.levels > 4) throw std::invalid_argument("--levels must be between 2 and 4");
  if (!(config.step > 0.0)) throw std::invalid_argument("--h must be positive");
  if (config.radius && !(*config.radius > config.step)) throw std::invalid_argument("--radius must exceed --h");
  if (config.threads < 1) throw std::invalid_argument("--threads must be at least 1");
  if (config.cocycles < 1) throw std::invalid_argument("--cocycles must be at least 1");
}

LieAlgebra resolve_algebra(const RunConfig& config) {
  return config.spec_path.empty() ? named_algebra(config.algebra) : load_algebra_file(config.spec_path);
}

nlohmann::json run_algebra_verify(const RunConfig& config) {
  const LieAlgebra alg = resolve_algebra(config);
  const KillingMetric km = killing_metric(alg);
  const Classification cl = classify(km);
  nlohmann::json doc{{"algebra", alg.name()},
                     {"dim", alg.dim()},
                     {"jacobi_residual", jacobi_residual(alg)},
                     {"ad_invariance_residual", ad_invariance_residual(alg)},
                     {"killing_signature", {cl.signature.first, cl.signature.second}},
                     {"semisimple", cl.semisimple},
                     {"compact_type", cl.compact_type}};
  if (cl.semisimple || config.require_dual_basis) {
    const DualBasisPair pair = dual_basis(km);
    doc["dual_basis_pairing_error"] = pairing_error(pair, km.gram);
    doc["dual_basis_completeness_error"] = completeness_error(pair, km.gram);
  } else {
    doc["dual_basis_pairing_error"] = nullptr;
  }
  return doc;
}

nlohmann::json run_cohomology(const RunConfig& config) {
  const LieAlgebra alg = resolve_algebra(config);
  const CohomologyDims dims = cohomology_dims(alg);
  const bool semisimple = classify(alg).semisimple;
  nlohmann::json doc{{"algebra", alg.name()}, {"dim", alg.dim()},      {"h0", dims.h0},
                     {"h1", dims.h1},         {"h2", dims.h2},         {"semisimple", semisimple}};
  if (!semisimple && !config.require_homotopy) return doc;
  if (!semisimple) dual_basis(killing_metric(alg));  // throws DegenerateKilling

  std::mt19937_64 rng(config.seed);
  double homotopy_err = 0.0;
  double coclosed_err = 0.0;
  for (int t = 0; t < config.cocycles; ++t) {
    const Cochain omega = coboundary(alg, random_cochain(alg.dim(), 1, rng));
    const double scale = omega.max_abs();
    if (scale == 0.0) continue;
    const Cochain a = homotopy(alg, omega);
    homotopy_err = std::max(homotopy_err, (coboundary(alg, a).flat() - omega.flat()).cwiseAbs().maxCoeff() / scale);
    coclosed_err = std::max(coclosed_err, codifferential(alg, a).max_abs() / scale);
  }
  doc["cocycles"] = config.cocycles;
  doc["seed"] = config.seed;
  doc["homotopy_max_relative_error"] = homotopy_err;
  doc["coclosedness_max_error"] = coclosed_err;
  return doc;
}

FieldRun run_field_check(const RunConfig& config) {
  const LieAlgebra alg = resolve_algebra(config);
  const double radius = default_radius(alg, config);
  if (!(radius > 2.0 * config.step)) throw std::invalid_argument("--radius must exceed 2 * --h");
  const auto samples = sample_points(alg.dim(), radius - 2.0 * config.step, config.samples, config.seed);
  FieldRun run{field_report(alg, config, config.step, samples, radius), {}};
  run.summary = {{"algebra", alg.name()},
                 {"frame", std::string(to_string(config.frame))},
                 {"seed", config.seed},
                 {"h", config.step},
                 {"radius", radius},
                 {"samples", config.samples},
                 {"reported_points", run.report.points.size()},
                 {"max", norms_json(run.report.max)}};
  return run;
}

nlohmann::json observed_order(double coarse, double fine) {
  if (coarse == 0.0 && fine == 0.0) return "exact";
  if (fine == 0.0 || coarse == 0.0) return nullptr;
  return std::log2(coarse / fine);
}

nlohmann::json run_convergence(const RunConfig& config) {
  const LieAlgebra alg = resolve_algebra(config);
  const double radius = default_radius(alg, config);
  if (!(radius > 2.0 * config.step)) throw std::invalid_argument("--radius must exceed 2 * --h");
  // Same points at every level, placed for the coarsest stencil.
  const auto samples = sample_points(alg.dim(), radius - 2.0 * config.step, config.samples, config.seed);

  nlohmann::json levels = nlohmann::json::array();
  std::vector<DiagnosticNorms> maxima;
  double h = config.step;
  for (int level = 0; level < config.levels; ++level, h *= 0.5) {
    const DiagnosticsReport report = field_report(alg, config, h, samples, radius);
    maxima.push_back(report.max);
    levels.push_back({{"h", h}, {"reported_points", report.points.size()}, {"max", norms_json(report.max)}});
  }

  nlohmann::json orders = nlohmann::json::array();
  for (std::size_t l = 0; l + 1 < maxima.size(); ++l) {
    const auto& a = maxima[l];
    const auto& b = maxima[l + 1];
    orders.push_back({{"from_h", levels[l]["h"]},
                      {"to_h", levels[l + 1]["h"]},
                      {"norm_tau", observed_order(a.tau, b.tau)},
                      {"norm_A", observed_order(a.gauge, b.gauge)},
                      {"norm_DT", observed_order(a.dt, b.dt)},
                      {"norm_dDT", observed_order(a.ddt, b.ddt)},
                      {"norm_nablaT_residual", observed_order(a.nabla_residual, b.nabla_residual)},
                      {"norm_metric_skew", observed_order(a.metric_skew, b.metric_skew)},
                      {"norm_riemann", observed_order(a.riemann, b.riemann)}});
  }
  return {{"algebra", alg.name()},
          {"frame", std::string(to_string(config.frame))},
          {"seed", config.seed},
          {"radius", radius},
          {"samples", config.samples},
          {"levels", levels},
          {"orders", orders}};
}

void write_diagnostics_csv(std::ostream& out, const DiagnosticsReport& report, int dim) {
  out << "point_id";
  for (int i = 1; i <= dim; ++i) out << ",x_" << i;
  out << ",norm_tau,norm_A,norm_DT,norm_dDT,norm_nablaT_residual,norm_metric_skew,norm_riemann\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.16e", v);
    out << ',' << buf;
  };
  for (const auto& p : report.points) {
    out << p.point_id;
    for (int i = 0; i < dim; ++i) put(p.x[i]);
    const auto& n = p.norms;
    for (double v : {n.tau, n.gauge, n.dt, n.ddt, n.nabla_residual, n.metric_skew, n.riemann}) put(v);
    out << '\n';
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lie bracket fields, adjoint cohomology and Aut(g)-structure torsion diagnostics", "liegauge"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  RunConfig cfg;
  std::string frame_name = "exp_chart";
  double radius = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    auto* alg = sub->add_option("--algebra", cfg.algebra, "named algebra (so3, su2, sl2r, heisenberg3, abelianN, so4)");
    auto* spec = sub->add_option("--spec", cfg.spec_path, "algebra spec JSON file");
    alg->excludes(spec);
    sub->add_option("--seed", cfg.seed, "seed for every random draw");
    sub->add_option("--out", cfg.out, "output file");
  };
  auto field_opts = [&](CLI::App* sub) {
    sub->add_option("--frame", frame_name, "identity | exp_chart | random_smooth | scaled");
    sub->add_option("--scale", cfg.frame_scale, "generator scale (random_smooth) or factor (scaled)");
    sub->add_option("--h", cfg.step, "finite-difference step");
    sub->add_option("--radius", radius, "chart radius (sup norm)");
    sub->add_option("--samples", cfg.samples, "number of sample points");
    sub->add_option("--threads", cfg.threads, "worker threads");
  };

  auto* verify = app.add_subcommand("verify", "algebraic identities, Killing metric, dual basis");
  common(verify);
  verify->add_flag("--dual-basis", cfg.require_dual_basis, "fail (exit 3) if no dual basis exists");
  auto* cohom = app.add_subcommand("cohomology", "H^0..H^2 with adjoint coefficients and the explicit primitive");
  common(cohom);
  cohom->add_option("--cocycles", cfg.cocycles, "random cocycles in the homotopy batch");
  cohom->add_flag("--homotopy", cfg.require_homotopy, "fail (exit 3) if the primitive cannot be built");
  auto* field = app.add_subcommand("field", "per-point torsion diagnostics of a frame-generated bracket field");
  common(field);
  field_opts(field);
  auto* converge = app.add_subcommand("converge", "step-refinement study of the field diagnostics");
  common(converge);
  field_opts(converge);
  converge->add_option("--levels", cfg.levels, "refinement levels (2-4)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSpec;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    cfg.subcommand = chosen->get_name();
    if (auto* opt = chosen->get_option_no_throw("--radius"); opt && opt->count()) cfg.radius = radius;
    cfg.frame = parse_frame_kind(frame_name);
    validate(cfg);

    std::string text;
    if (cfg.subcommand == "verify") {
      text = run_algebra_verify(cfg).dump(2);
    } else if (cfg.subcommand == "cohomology") {
      text = run_cohomology(cfg).dump(2);
    } else if (cfg.subcommand == "field") {
      const FieldRun run = run_field_check(cfg);
      if (!cfg.out.empty()) {
        std::ofstream csv(cfg.out, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write '" + cfg.out + "'");
        write_diagnostics_csv(csv, run.report, resolve_algebra(cfg).dim());
      }
      out << run.summary.dump(2) << '\n';
      return kExitOk;
    } else {
      text = run_convergence(cfg).dump(2);
    }
    if (!cfg.out.empty()) write_text(cfg.out, text + '\n');
    out << text << '\n';
    return kExitOk;
  } catch (const SpecError& e) {
    err << "spec error: " << e.what() << '\n';
    return kExitSpec;
  } catch (const std::invalid_argument& e) {
    err << "invalid arguments: " << e.what() << '\n';
    return kExitSpec;
  } catch (const DegenerateKilling& e) {
    err << "algebraic precondition failed: " << e.what() << '\n';
    return kExitAlgebraic;
  } catch (const ConditioningError& e) {
    err << "numerical conditioning failure: " << e.what() << '\n';
    return kExitConditioning;
  }
}

}  // namespace liegauge
