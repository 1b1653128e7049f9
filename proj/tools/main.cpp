// Copyright 2026 The deltaline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deltaline/deltaline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

// exit-code contract: 0 success, 2 user/config error, 3 solver error,
// 4 I/O error
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void print_validation(const deltaline::ValidationReport& rep) {
  if (rep.ok()) {
    std::cout << "configuration ok\n";
  } else {
    std::cout << "configuration invalid:\n";
    for (const auto& v : rep.violations) std::cout << "  violation: " << v << "\n";
  }
  for (const auto& w : rep.warnings) std::cout << "  warning: " << w << "\n";
}

int cmd_validate(const std::string& config_path) {
  const deltaline::Json j = deltaline::load_json_file(config_path);
  const deltaline::Config cfg = deltaline::parse_config(j, config_path);
  const deltaline::ValidationReport rep = deltaline::validate(cfg.atom, cfg.drives);
  print_validation(rep);
  return rep.ok() ? kExitOk : kExitConfig;
}

int cmd_steady(const std::string& config_path, const std::string& out_path,
               deltaline::Method method) {
  using namespace deltaline;
  const Config cfg = load_config_file(config_path);
  for (const auto& w : validate(cfg.atom, cfg.drives).warnings)
    std::cerr << "warning: " << w << "\n";

  const Liouvillian generator = build_liouvillian(cfg.atom, cfg.drives);
  const DensityMatrix rho = solve_steady(generator);
  const ConvergenceReport conv = steady_convergence_report(generator);
  const Complex rho21 = rho(1, 0);
  const double ig_na = std::abs(emission_amplitude(cfg.atom, rho21)) * 1e9;

  std::cout << "steady state (numeric):\n";
  std::cout << "  rho11 = " << fmt4(rho(0, 0).real()) << "\n";
  std::cout << "  rho22 = " << fmt4(rho(1, 1).real()) << "\n";
  std::cout << "  rho33 = " << fmt4(rho(2, 2).real()) << "\n";
  std::cout << "  rho21 = " << fmt4(std::abs(rho21)) << " * exp("
            << fmt4(std::arg(rho21)) << " i)\n";
  std::cout << "  |I_g| = " << fmt4(ig_na) << " nA\n";
  std::cout << "  spectral gap = " << fmt4(conv.spectral_gap)
            << " rad/us (solve residual " << fmt4(conv.residual) << ")\n";

  Json report = {{"config", config_to_json(cfg)},
                 {"spectral_gap_rad_per_us", conv.spectral_gap},
                 {"solve_residual", conv.residual},
                 {"rho11", rho(0, 0).real()},
                 {"rho22", rho(1, 1).real()},
                 {"rho33", rho(2, 2).real()},
                 {"rho21_re", rho21.real()},
                 {"rho21_im", rho21.imag()},
                 {"ig_na", ig_na}};

  if (cfg.drives.probe_on()) {
    const FieldAmplitudes f = total_field(cfg.atom, cfg.drives, rho21);
    std::cout << "probe response:\n";
    std::cout << "  |I_t| = " << fmt4(std::abs(f.i_total_right) * 1e9) << " nA\n";
    std::cout << "  t     = " << fmt4(f.t.real()) << " + " << fmt4(f.t.imag())
              << " i\n";
    std::cout << "  |t|^2 = " << fmt4(std::norm(f.t)) << "\n";
    report["it_na"] = std::abs(f.i_total_right) * 1e9;
    report["t_re"] = f.t.real();
    report["t_im"] = f.t.imag();
    report["t2"] = std::norm(f.t);
  }

  if (method != Method::kNumeric) {
    try {
      if (cfg.drives.probe_on()) {
        const ProbeCorrection pc = probe_coherence_correction(cfg.atom, cfg.drives);
        const FieldAmplitudes f = total_field(cfg.atom, cfg.drives, pc.rho21_prime);
        const InterferenceFactors fac = interference_intensity(cfg.atom, cfg.drives);
        std::cout << "first-order probe response (closed form):\n";
        std::cout << "  alpha = " << fmt4(fac.alpha) << ", Theta = " << fmt4(fac.theta)
                  << ", |t|^2 = " << fmt4(std::norm(f.t)) << "\n";
        report["analytic"] = {{"alpha", fac.alpha},
                              {"theta", fac.theta},
                              {"bracket", fac.bracket},
                              {"t2", std::norm(f.t)}};
      } else {
        const ResonantSummary s = resonant_summary(cfg.atom, cfg.drives);
        std::cout << "resonant closed forms (strong-cascade limit):\n";
        std::cout << "  A = " << fmt4(s.a_norm) << " MHz^3, rho22 = " << fmt4(s.rho22)
                  << ", |rho21| = " << fmt4(std::abs(s.rho21)) << ", |I_g| = "
                  << fmt4(std::abs(emission_amplitude(cfg.atom, s.rho21)) * 1e9)
                  << " nA\n";
        report["analytic"] = {
            {"a_norm", s.a_norm},
            {"rho11", s.rho11},
            {"rho22", s.rho22},
            {"rho33", s.rho33},
            {"rho21_re", s.rho21.real()},
            {"rho21_im", s.rho21.imag()},
            {"ig_na", std::abs(emission_amplitude(cfg.atom, s.rho21)) * 1e9}};
      }
    } catch (const deltaline::DomainError& e) {
      std::cout << "closed forms unavailable here: " << e.what() << "\n";
    }
  }

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << report.dump(2) << "\n";
    if (!out) throw IoError("failed while writing " + out_path);
  }
  return kExitOk;
}

int cmd_figure(const std::string& id_string, const std::string& out_dir,
               unsigned threads) {
  using namespace deltaline;
  const FigureId id = parse_figure_id(id_string);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw IoError("cannot create output directory " + out_dir);

  const SweepResult res = figure(id, threads);

  const auto csv_path = std::filesystem::path(out_dir) / (id_string + ".csv");
  const auto meta_path = std::filesystem::path(out_dir) / (id_string + ".meta.json");
  {
    std::ofstream out(csv_path);
    if (!out) throw IoError("cannot write " + csv_path.string());
    write_csv(res, out);
    if (!out) throw IoError("failed while writing " + csv_path.string());
  }
  {
    std::ofstream out(meta_path);
    if (!out) throw IoError("cannot write " + meta_path.string());
    write_sidecar(res, out);
    if (!out) throw IoError("failed while writing " + meta_path.string());
  }
  std::cout << "figure " << id_string << ": " << figure_summary(id, res) << "\n";
  std::cout << "wrote " << csv_path.string() << " and " << meta_path.string() << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_path,
              unsigned threads) {
  using namespace deltaline;
  const SweepSpec spec = parse_sweep_spec(load_json_file(spec_path), spec_path);
  const SweepResult res = run_sweep(spec, threads);

  std::filesystem::path csv_path(out_path);
  std::filesystem::path meta_path(out_path);
  if (meta_path.extension() == ".csv") meta_path.replace_extension();
  meta_path += ".meta.json";

  {
    std::ofstream out(csv_path);
    if (!out) throw IoError("cannot write " + csv_path.string());
    write_csv(res, out);
    if (!out) throw IoError("failed while writing " + csv_path.string());
  }
  {
    std::ofstream out(meta_path);
    if (!out) throw IoError("cannot write " + meta_path.string());
    write_sidecar(res, out);
    if (!out) throw IoError("failed while writing " + meta_path.string());
  }

  // a point counts as failed only when it produced no values at all;
  // off-domain analytic columns alongside good numeric ones are partial
  const std::size_t failed = res.meta.at("failed_points").get<std::size_t>();
  const std::size_t partial =
      res.meta.at("points_with_partial_errors").get<std::size_t>();
  std::cout << "sweep: " << res.points() << " points, " << failed << " failed, "
            << partial << " with partial errors\n";
  std::cout << "wrote " << csv_path.string() << " and " << meta_path.string() << "\n";
  if (failed == res.points()) {
    std::cerr << "error: every grid point failed (first: " << res.errors.front()
              << ")\n";
    return kExitSolver;
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"driven cyclic three-level atom coupled to an open 1D "
               "transmission line: steady states, emission and probe "
               "transmission"};
  app.require_subcommand(1);

  std::string config_path, steady_out, figure_out = ".", sweep_out, fig_id;
  std::string method_name = "numeric";
  unsigned threads = 0;

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check a configuration file");
  validate_cmd->add_option("--config", config_path, "JSON configuration")->required();

  CLI::App* steady_cmd =
      app.add_subcommand("steady", "solve one steady state and report observables");
  steady_cmd->add_option("--config", config_path, "JSON configuration")->required();
  steady_cmd->add_option("--out", steady_out, "write a JSON report here");
  steady_cmd->add_option("--method", method_name, "numeric | analytic | both")
      ->check(CLI::IsMember({"numeric", "analytic", "both"}));

  CLI::App* figure_cmd =
      app.add_subcommand("figure", "emit a canonical dataset (CSV + sidecar)");
  figure_cmd->add_option("id", fig_id, "3a, 3b, 4a, 4b, 5a, 5b or 5b-inset")
      ->required();
  figure_cmd->add_option("--out", figure_out, "output directory");
  figure_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a parameter sweep from a spec file");
  sweep_cmd->add_option("--config", config_path, "JSON sweep specification")
      ->required();
  sweep_cmd->add_option("--out", sweep_out, "output CSV path")->required();
  sweep_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (threads == 0) {
    if (const char* env = std::getenv("DELTALINE_THREADS"))
      threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  }

  try {
    if (*validate_cmd) return cmd_validate(config_path);
    if (*steady_cmd) {
      deltaline::Method method = deltaline::Method::kNumeric;
      if (method_name == "analytic") method = deltaline::Method::kAnalytic;
      if (method_name == "both") method = deltaline::Method::kBoth;
      return cmd_steady(config_path, steady_out, method);
    }
    if (*figure_cmd) return cmd_figure(fig_id, figure_out, threads);
    if (*sweep_cmd) return cmd_sweep(config_path, sweep_out, threads);
  } catch (const deltaline::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const deltaline::DegenerateSteadyState& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const deltaline::NonPhysicalResult& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const deltaline::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
