#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "absorbkit/absorb.hpp"
#include "absorbkit/io.hpp"
#include "absorbkit/metrics.hpp"
#include "absorbkit/synth.hpp"

namespace {

using namespace absorbkit;

struct SynthGaussianArgs {
  std::size_t n = 150;
  std::size_t dim = 2;
  double cov_scale = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct SynthNonlinearArgs {
  std::string shape = "sine";
  std::size_t n = 400;
  double noise = 0.05;
  std::uint64_t seed = 0;
  std::string out;
};

struct ContaminateArgs {
  std::string in;
  double rate = 0.1;
  double noise = 0.0;  // 0 = derive from the data
  std::uint64_t seed = 0;
  std::string out;
  std::string mask;
};

struct AbsorbArgs {
  std::string in;
  AbsorbConfig config;
  std::string backend = "gmm:1";
  std::string out;
  std::string report;
  std::string snapshots_dir;
};

struct EvaluateArgs {
  std::string clean;
  std::string contaminated;
  std::string denoised;
  double cov_reg = 1e-6;
  std::string out;
};

struct PipelineArgs {
  std::string kind = "gaussian";
  std::size_t n = 150;
  std::size_t dim = 2;
  double jitter = 0.05;
  double rate = 0.1;
  double noise = 0.0;
  AbsorbConfig config;
  std::string backend = "gmm:1";
  std::string outdir;
  bool snapshots = false;
};

void write_mask(const ContaminationReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const bool flagged : report.outlier_mask) {
    out << (flagged ? 1 : 0) << '\n';
  }
}

void run_synth_gaussian(const SynthGaussianArgs& args) {
  const Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(args.dim));
  const Eigen::MatrixXd cov =
      args.cov_scale *
      Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(args.dim),
                                static_cast<Eigen::Index>(args.dim));
  save_csv(gen_gaussian(args.n, mean, cov, args.seed), args.out);
}

void run_synth_nonlinear(const SynthNonlinearArgs& args) {
  NonlinearShape shape;
  if (args.shape == "sine") {
    shape = NonlinearShape::SineCurve;
  } else if (args.shape == "moons") {
    shape = NonlinearShape::TwoMoons;
  } else {
    throw ConfigInvalid("unknown shape: " + args.shape + " (expected sine or moons)");
  }
  save_csv(gen_nonlinear(args.n, shape, args.noise, args.seed), args.out);
}

ContaminationReport run_contaminate(const ContaminateArgs& args) {
  const Dataset clean = load_csv(args.in).dataset;
  const double sigma = args.noise > 0.0 ? args.noise : default_noise_sigma(clean);
  auto [contaminated, report] = contaminate(clean, args.rate, sigma, args.seed);
  save_csv(contaminated, args.out);
  if (!args.mask.empty()) write_mask(report, args.mask);
  return report;
}

std::vector<std::string> write_snapshots(const AbsorbResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (std::size_t s = 0; s < result.snapshots.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof(name), "iter_%03zu.csv", s + 1);
    const std::string path = (std::filesystem::path(dir) / name).string();
    save_csv(result.snapshots[s], path);
    paths.push_back(path);
  }
  return paths;
}

void run_absorb(AbsorbArgs& args) {
  args.config.density_backend = parse_backend(args.backend);
  const Dataset input = load_csv(args.in).dataset;
  const AbsorbResult result = run(input, args.config, !args.snapshots_dir.empty());
  save_csv(result.denoised, args.out);

  if (!args.report.empty()) {
    ReportExtras extras;
    if (!args.snapshots_dir.empty()) {
      extras.snapshot_paths = write_snapshots(result, args.snapshots_dir);
    }
    write_run_report(result, args.config, std::nullopt, args.report, extras);
  } else if (!args.snapshots_dir.empty()) {
    write_snapshots(result, args.snapshots_dir);
  }
}

void run_evaluate(const EvaluateArgs& args) {
  const Dataset clean = load_csv(args.clean).dataset;
  const Dataset contaminated = load_csv(args.contaminated).dataset;
  const Dataset denoised = load_csv(args.denoised).dataset;

  const double before = dataset_divergence(clean, contaminated, args.cov_reg);
  const double after = dataset_divergence(clean, denoised, args.cov_reg);

  nlohmann::json doc;
  doc["divergence_before"] = before;
  doc["divergence_after"] = after;
  doc["divergence_ratio"] = before != 0.0 ? nlohmann::json(after / before) : nlohmann::json();

  std::ofstream out(args.out);
  if (!out) throw IoError("cannot open for writing: " + args.out);
  out << doc.dump(2) << '\n';
}

void run_pipeline(PipelineArgs& args) {
  args.config.density_backend = parse_backend(args.backend);
  const std::filesystem::path dir(args.outdir);
  std::filesystem::create_directories(dir);

  Dataset clean;
  if (args.kind == "gaussian") {
    const Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(args.dim));
    const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(
        static_cast<Eigen::Index>(args.dim), static_cast<Eigen::Index>(args.dim));
    clean = gen_gaussian(args.n, mean, cov, args.config.seed);
  } else if (args.kind == "sine") {
    clean = gen_nonlinear(args.n, NonlinearShape::SineCurve, args.jitter, args.config.seed);
  } else if (args.kind == "moons") {
    clean = gen_nonlinear(args.n, NonlinearShape::TwoMoons, args.jitter, args.config.seed);
  } else {
    throw ConfigInvalid("unknown kind: " + args.kind + " (expected gaussian, sine or moons)");
  }
  save_csv(clean, (dir / "clean.csv").string());

  const double sigma = args.noise > 0.0 ? args.noise : default_noise_sigma(clean);
  auto [contaminated, report] = contaminate(clean, args.rate, sigma, args.config.seed + 1);
  save_csv(contaminated, (dir / "contaminated.csv").string());
  write_mask(report, (dir / "mask.csv").string());

  const AbsorbResult result = run(contaminated, args.config, args.snapshots);
  save_csv(result.denoised, (dir / "denoised.csv").string());

  ReportExtras extras;
  extras.divergence_before =
      dataset_divergence(clean, contaminated, args.config.cov_regularization);
  extras.divergence_after =
      dataset_divergence(clean, result.denoised, args.config.cov_regularization);
  if (args.snapshots) {
    extras.snapshot_paths = write_snapshots(result, (dir / "snapshots").string());
  }
  write_run_report(result, args.config, report, (dir / "report.json").string(), extras);

  std::cout << "divergence_before=" << *extras.divergence_before
            << " divergence_after=" << *extras.divergence_after
            << " ratio=" << (*extras.divergence_after / *extras.divergence_before) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outlier absorbing: density-weighted nearest-neighbor denoising"};
  app.require_subcommand(1);

  SynthGaussianArgs gauss_args;
  SynthNonlinearArgs nonlinear_args;
  ContaminateArgs cont_args;
  AbsorbArgs absorb_args;
  EvaluateArgs eval_args;
  PipelineArgs pipe_args;

  auto* synth = app.add_subcommand("synth", "Generate synthetic datasets");
  synth->require_subcommand(1);

  auto* gauss = synth->add_subcommand("gaussian", "Sample an isotropic Gaussian cloud");
  gauss->add_option("--n", gauss_args.n, "Sample count")->default_val(150);
  gauss->add_option("--dim", gauss_args.dim, "Dimension")->default_val(2);
  gauss->add_option("--cov-scale", gauss_args.cov_scale, "Isotropic covariance scale");
  gauss->add_option("--seed", gauss_args.seed, "Random seed");
  gauss->add_option("--out", gauss_args.out, "Output CSV")->required();
  gauss->callback([&] { run_synth_gaussian(gauss_args); });

  auto* nonlinear = synth->add_subcommand("nonlinear", "Sample a jittered 1-D manifold");
  nonlinear->add_option("--shape", nonlinear_args.shape, "sine or moons");
  nonlinear->add_option("--n", nonlinear_args.n, "Sample count")->default_val(400);
  nonlinear->add_option("--noise", nonlinear_args.noise, "Jitter sigma");
  nonlinear->add_option("--seed", nonlinear_args.seed, "Random seed");
  nonlinear->add_option("--out", nonlinear_args.out, "Output CSV")->required();
  nonlinear->callback([&] { run_synth_nonlinear(nonlinear_args); });

  auto* cont = app.add_subcommand("contaminate", "Add Gaussian noise to a random subset of rows");
  cont->add_option("--in", cont_args.in, "Input CSV")->required();
  cont->add_option("--rate", cont_args.rate, "Fraction of rows to perturb")->required();
  cont->add_option("--noise", cont_args.noise,
                   "Noise sigma (default: 6 std of the largest-variance direction)");
  cont->add_option("--seed", cont_args.seed, "Random seed");
  cont->add_option("--out", cont_args.out, "Output CSV")->required();
  cont->add_option("--mask", cont_args.mask, "Optional 0/1 outlier mask file");
  cont->callback([&] { run_contaminate(cont_args); });

  auto* absorb = app.add_subcommand("absorb", "Run the outlier absorbing loop");
  absorb->add_option("--in", absorb_args.in, "Input CSV")->required();
  absorb->add_option("--k", absorb_args.config.k, "Neighbor count")->default_val(10);
  absorb->add_option("--epsilon", absorb_args.config.epsilon, "Convergence threshold")
      ->default_val(1e-3);
  absorb->add_option("--max-iter", absorb_args.config.max_iterations, "Iteration cap")
      ->default_val(50);
  absorb->add_option("--backend", absorb_args.backend, "gmm:<m>, kde:scott or kde:<h>");
  absorb->add_option("--cov-reg", absorb_args.config.cov_regularization,
                     "Covariance regularization");
  absorb->add_option("--seed", absorb_args.config.seed, "Random seed");
  absorb->add_option("--out", absorb_args.out, "Denoised CSV")->required();
  absorb->add_option("--report", absorb_args.report, "Run report JSON");
  absorb->add_option("--snapshots", absorb_args.snapshots_dir,
                     "Directory for per-iteration position snapshots");
  absorb->callback([&] { run_absorb(absorb_args); });

  auto* evaluate = app.add_subcommand("evaluate", "Divergence before/after absorbing");
  evaluate->add_option("--clean", eval_args.clean, "Clean reference CSV")->required();
  evaluate->add_option("--contaminated", eval_args.contaminated, "Contaminated CSV")->required();
  evaluate->add_option("--denoised", eval_args.denoised, "Denoised CSV")->required();
  evaluate->add_option("--cov-reg", eval_args.cov_reg, "Covariance regularization");
  evaluate->add_option("--out", eval_args.out, "Evaluation report JSON")->required();
  evaluate->callback([&] { run_evaluate(eval_args); });

  auto* pipeline =
      app.add_subcommand("pipeline", "synth -> contaminate -> absorb -> evaluate in one call");
  pipeline->add_option("--kind", pipe_args.kind, "gaussian, sine or moons");
  pipeline->add_option("--n", pipe_args.n, "Sample count")->default_val(150);
  pipeline->add_option("--dim", pipe_args.dim, "Dimension (gaussian only)")->default_val(2);
  pipeline->add_option("--jitter", pipe_args.jitter, "Manifold jitter (nonlinear kinds)");
  pipeline->add_option("--rate", pipe_args.rate, "Contamination rate")->default_val(0.1);
  pipeline->add_option("--noise", pipe_args.noise, "Contamination sigma (default: derived)");
  pipeline->add_option("--k", pipe_args.config.k, "Neighbor count")->default_val(10);
  pipeline->add_option("--epsilon", pipe_args.config.epsilon, "Convergence threshold")
      ->default_val(1e-3);
  pipeline->add_option("--max-iter", pipe_args.config.max_iterations, "Iteration cap")
      ->default_val(50);
  pipeline->add_option("--backend", pipe_args.backend, "gmm:<m>, kde:scott or kde:<h>");
  pipeline->add_option("--cov-reg", pipe_args.config.cov_regularization,
                       "Covariance regularization");
  pipeline->add_option("--seed", pipe_args.config.seed, "Random seed");
  pipeline->add_option("--outdir", pipe_args.outdir, "Output directory")->required();
  pipeline->add_flag("--snapshots", pipe_args.snapshots, "Write per-iteration snapshots");
  pipeline->callback([&] { run_pipeline(pipe_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
