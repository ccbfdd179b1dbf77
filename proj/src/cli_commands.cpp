#include "autorvo/cli_commands.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "CLI11.hpp"
#include "autorvo/bench.hpp"
#include "autorvo/errors.hpp"
#include "autorvo/eval.hpp"
#include "autorvo/parallel.hpp"
#include "autorvo/scenario_io.hpp"
#include "autorvo/trajectory_io.hpp"

namespace autorvo::cli {

namespace {

std::vector<sim::Override> parse_overrides(const std::vector<std::string>& raw) {
  std::vector<sim::Override> out;
  for (const auto& s : raw) out.push_back(sim::parse_override(s));
  return out;
}

void require_file(const std::filesystem::path& p, const char* what) {
  if (!std::filesystem::is_regular_file(p)) {
    throw ParseError(std::string(what) + " '" + p.string() + "' does not exist");
  }
}

void ensure_dir(const std::filesystem::path& p) {
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec || !std::filesystem::is_directory(p)) {
    throw ValidationError("output directory '" + p.string() + "' is not writable");
  }
}

// Maps exceptions to exit codes; library errors are user input problems.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_file(args.scenario, "scenario");
    const auto overrides = parse_overrides(args.overrides);
    const sim::Scenario scenario = sim::load_scenario_file(args.scenario, overrides);
    ensure_dir(args.out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    sim::RunOptions options;
    options.workers = worker_count();
    const sim::TrajectoryLog log = sim::run(scenario, options);
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0;

    sim::write_text_file(args.out_dir / "trajectory.csv", sim::trajectory_csv(log));
    sim::write_text_file(args.out_dir / "trajectory.json", sim::trajectory_json(log).dump(2) + "\n");
    const sim::Json summary = {{"steps", log.steps},
                               {"agents", log.agents.size()},
                               {"arrivals", log.arrivals},
                               {"audit_events", log.total_overlaps()},
                               {"emergencies", log.emergencies},
                               {"wall_time_s", wall.count()}};
    sim::write_text_file(args.out_dir / "summary.json", summary.dump(2) + "\n");

    char buf[256];
    std::snprintf(buf, sizeof buf, "steps %d, agents %zu, arrivals %d, audit events %d, wall %.3f s\n",
                  log.steps, log.agents.size(), log.arrivals, log.total_overlaps(), wall.count());
    out << buf;
    if (log.total_overlaps() > 0) {
      const auto& e = log.audit.front();
      err << "audit: " << log.total_overlaps() << " overlap events, first at step " << e.step << " ("
          << e.a << ", " << e.b << ")\n";
      return kExitAudit;
    }
    return kExitOk;
  });
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_file(args.reference_csv, "reference csv");
    require_file(args.reference_json, "reference sidecar");
    require_file(args.scenario, "scenario");
    require_file(args.configs, "configs");
    const auto overrides = parse_overrides(args.overrides);
    const sim::Scenario scenario = sim::load_scenario_file(args.scenario, overrides);
    const auto reference = eval::load_reference(args.reference_csv, args.reference_json);
    const auto configs = eval::parse_configs(sim::read_text_file(args.configs), scenario.nav);
    const auto rows = eval::compare_algorithms(reference, scenario, configs, worker_count());
    const std::string table = eval::comparison_table(rows, args.scenario.stem().string());
    out << table;
    if (!args.out_dir.empty()) {
      ensure_dir(args.out_dir);
      sim::write_text_file(args.out_dir / "report.txt", table);
      sim::write_text_file(args.out_dir / "report.json", eval::comparison_json(rows).dump(2) + "\n");
    }
    return kExitOk;
  });
}

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_file(args.scenario, "scenario");
    const sim::Scenario scenario = sim::load_scenario_file(args.scenario);
    const bench::Report report = bench::run(scenario, args.neighbors, args.samples, args.reps);
    const std::string csv = bench::report_csv(report);
    if (args.csv.empty()) {
      out << csv;
    } else {
      sim::write_text_file(args.csv, csv);
    }
    err << bench::report_summary(report);
    return kExitOk;
  });
}

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_file(args.scenario, "scenario");
    const auto overrides = parse_overrides(args.overrides);
    const sim::Scenario scenario = sim::load_scenario_file(args.scenario, overrides);
    const auto syn = eval::make_synthetic_reference(scenario, scenario.nav, args.options, worker_count());
    ensure_dir(args.out_dir);
    sim::write_text_file(args.out_dir / "reference.csv", eval::reference_csv(syn.reference));
    sim::write_text_file(args.out_dir / "reference.json", eval::reference_sidecar(syn.reference).dump(2) + "\n");
    sim::write_text_file(args.out_dir / "scenario.json", sim::scenario_to_json(syn.scenario).dump(2) + "\n");
    out << "reference: " << syn.reference.agents.size() << " agents, " << args.options.frames << " frames\n";
    return kExitOk;
  });
}

int cmd_validate(const std::filesystem::path& scenario, const std::vector<std::string>& overrides,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_file(scenario, "scenario");
    const auto parsed = parse_overrides(overrides);
    const sim::Scenario s = sim::load_scenario_file(scenario, parsed);
    out << "ok: " << s.agents.size() << " agents, " << s.obstacles.size() << " obstacles\n";
    out << sim::Json::parse(s.config_echo).dump(2) << "\n";
    return kExitOk;
  });
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local navigation simulator for heterogeneous road agents"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "simulate a scenario and export trajectories");
  run->add_option("scenario", run_args.scenario)->required();
  run->add_option("-o,--out", run_args.out_dir, "output directory")->required();
  run->add_option("--set", run_args.overrides, "dotted override key=value (repeatable)");

  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "score configurations against a reference");
  ev->add_option("reference_csv", eval_args.reference_csv)->required();
  ev->add_option("reference_json", eval_args.reference_json)->required();
  ev->add_option("scenario", eval_args.scenario)->required();
  ev->add_option("configs", eval_args.configs)->required();
  ev->add_option("-o,--out", eval_args.out_dir, "write report.txt and report.json here");
  ev->add_option("--set", eval_args.overrides, "dotted override key=value (repeatable)");

  BenchArgs bench_args;
  auto* be = app.add_subcommand("bench", "time plan_step over neighbor and sample sweeps");
  be->add_option("scenario", bench_args.scenario)->required();
  be->add_option("--neighbors", bench_args.neighbors)->delimiter(',');
  be->add_option("--samples", bench_args.samples)->delimiter(',');
  be->add_option("--reps", bench_args.reps);
  be->add_option("--csv", bench_args.csv, "write CSV here instead of stdout");

  SynthArgs synth_args;
  auto* sy = app.add_subcommand("synth", "write a synthetic reference window from a scenario");
  sy->add_option("scenario", synth_args.scenario)->required();
  sy->add_option("-o,--out", synth_args.out_dir, "output directory")->required();
  sy->add_option("--warmup", synth_args.options.warmup, "seconds simulated before the window");
  sy->add_option("--frames", synth_args.options.frames);
  sy->add_option("--fps", synth_args.options.frame_rate);
  sy->add_option("--noise", synth_args.options.noise_sigma, "Gaussian position noise (m)");
  sy->add_option("--seed", synth_args.options.seed);
  sy->add_option("--set", synth_args.overrides, "dotted override key=value (repeatable)");

  std::filesystem::path validate_path;
  std::vector<std::string> validate_overrides;
  auto* va = app.add_subcommand("validate", "check a scenario file");
  va->add_option("scenario", validate_path)->required();
  va->add_option("--set", validate_overrides, "dotted override key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  if (*run) return cmd_run(run_args, out, err);
  if (*ev) return cmd_eval(eval_args, out, err);
  if (*be) return cmd_bench(bench_args, out, err);
  if (*sy) return cmd_synth(synth_args, out, err);
  return cmd_validate(validate_path, validate_overrides, out, err);
}

}  // namespace autorvo::cli
