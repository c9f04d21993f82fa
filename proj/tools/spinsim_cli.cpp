// spinsim: six-spin dipolar cluster simulator.
//
// Subcommands: eigen, spectrum, measure, theory, run. Exit codes: 0 success,
// 2 parse/config error, 3 numerical failure, 4 I/O failure.
#include "CLI11.hpp"

#include "spinsim/config.hpp"
#include "spinsim/csv_export.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/measurement.hpp"
#include "spinsim/pulse_program.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

namespace {

using namespace spinsim;

struct Initial {
  int s = 3;
  int mz = 3;
};

Initial parse_initial(const std::string& text) {
  const size_t comma = text.find(',');
  if (comma == std::string::npos)
    throw ConfigError("--initial wants S,MZ (e.g. 3,3), got '" + text + "'");
  Initial init;
  try {
    init.s = std::stoi(text.substr(0, comma));
    init.mz = std::stoi(text.substr(comma + 1));
  } catch (const std::exception&) {
    throw ConfigError("--initial wants integers S,MZ, got '" + text + "'");
  }
  return init;
}

std::string label_path(const Initial& init) {
  return std::to_string(init.s) + "_" + std::to_string(init.mz);
}

std::filesystem::path ensure_outdir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " +
                        ec.message());
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pulse program: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> initials;
  std::string protocol = "adiabatic";
  double dt_us = 0.0;  // 0 = keep config
  int jobs = 1;
};

ExperimentConfig effective_config(const CommonArgs& args) {
  ExperimentConfig cfg;
  if (!args.config_path.empty()) cfg = load_config(args.config_path);
  if (!args.out_dir.empty()) cfg.paths.output_dir = args.out_dir;
  if (args.dt_us > 0.0) cfg.propagation.dt = args.dt_us * 1e-6;
  return cfg;
}

std::vector<Initial> effective_initials(const CommonArgs& args) {
  std::vector<Initial> out;
  for (const std::string& s : args.initials) out.push_back(parse_initial(s));
  if (out.empty()) out.push_back(Initial{3, 3});
  return out;
}

// Fan the per-initial work items over --jobs threads; results keep order.
void run_parallel(int jobs, int n, const std::function<void(int)>& work) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
  const int nthreads = std::min(jobs, n);
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          work(i);
        } catch (...) {
          errors[static_cast<size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

int cmd_eigen(const CommonArgs& args) {
  const ExperimentConfig cfg = effective_config(args);
  const ClusterOps ops = make_cluster_ops(cfg.cluster);
  const EigenSystem es = classify_eigenstates(ops);
  const auto out = ensure_outdir(cfg.paths.output_dir);
  export_eigen_table(es, (out / "eigen.csv").string());

  std::printf("%4s %4s %14s %10s %8s %4s\n", "idx", "M_Z", "freq_hz", "S^2",
              "s_eff", "k");
  for (size_t i = 0; i < es.states.size(); ++i) {
    const EigenState& st = es.states[i];
    std::printf("%4zu %+4d %14.4f %10.4f %8.4f %4d\n", i, st.mz,
                st.energy / (2.0 * std::numbers::pi), st.s_squared, st.s_eff,
                st.k);
  }
  std::printf("\nwrote %s\n", (out / "eigen.csv").string().c_str());
  return 0;
}

int cmd_theory(const CommonArgs& args) {
  const ExperimentConfig cfg = effective_config(args);
  const auto out = ensure_outdir(cfg.paths.output_dir);
  for (const Initial& init : effective_initials(args)) {
    const MeasurementReport rep = measure_mx_oracle(init.s, init.mz);
    std::fputs(report_text(rep).c_str(), stdout);
    std::fputs("\n", stdout);
    export_distribution(
        rep, (out / ("theory_" + label_path(init) + ".csv")).string());
  }
  return 0;
}

int cmd_spectrum(const CommonArgs& args) {
  const ExperimentConfig cfg = effective_config(args);
  const ClusterOps ops = make_cluster_ops(cfg.cluster);
  const EigenSystem es = classify_eigenstates(ops);
  const TransitionTable tt = transition_table(es);
  const auto out = ensure_outdir(cfg.paths.output_dir);

  struct Item {
    std::string name;
    DensityMatrix rho;
  };
  std::vector<Item> items;
  if (args.initials.empty()) {
    items.push_back(
        {"thermal", thermal_equilibrium(cfg.measurement.thermal_epsilon)});
  } else {
    for (const std::string& s : args.initials) {
      const Initial init = parse_initial(s);
      items.push_back({label_path(init),
                       pseudopure(es, resolve_initial(es, init.s, init.mz))});
    }
  }
  for (const Item& item : items) {
    const Spectrum stick = stick_spectrum(item.rho, es, tt);
    const Spectrum fid = fid_spectrum(item.rho, es, ops, tt, cfg.acquisition);
    export_stick_spectrum(stick, (out / ("stick_" + item.name + ".csv")).string());
    export_sampled_spectrum(fid,
                            (out / ("spectrum_" + item.name + ".csv")).string());
    if (fid.aliasing_warning)
      std::fprintf(stderr,
                   "warning: transitions beyond Nyquist; spectrum aliased\n");
    int kept = 0;
    for (const StickEntry& s : stick.sticks)
      if (std::abs(s.intensity) > 1e-12) ++kept;
    std::printf("%s: %d sticks, %d sampled points\n", item.name.c_str(), kept,
                cfg.acquisition.points);
  }
  return 0;
}

int cmd_measure(const CommonArgs& args) {
  const ExperimentConfig cfg = effective_config(args);
  const ClusterOps ops = make_cluster_ops(cfg.cluster);
  const EigenSystem es = classify_eigenstates(ops);
  const auto out = ensure_outdir(cfg.paths.output_dir);
  const std::vector<Initial> initials = effective_initials(args);

  std::vector<MeasurementReport> reports(initials.size());
  run_parallel(args.jobs, static_cast<int>(initials.size()), [&](int i) {
    const Initial& init = initials[static_cast<size_t>(i)];
    MeasurementReport rep;
    if (args.protocol == "adiabatic") {
      rep = measure_mx_adiabatic(ops, es, init.s, init.mz, cfg.propagation,
                                 LockSegment{},
                                 cfg.measurement.thermal_epsilon);
    } else if (args.protocol == "hardpulse") {
      rep = measure_mx_hardpulse(ops, es, init.s, init.mz);
    } else if (args.protocol == "oracle") {
      rep = measure_mx_oracle(init.s, init.mz);
    } else {
      throw ConfigError("unknown protocol '" + args.protocol + "'");
    }
    reports[static_cast<size_t>(i)] = rep;
    export_distribution(
        rep, (out / ("measure_" + args.protocol + "_" +
                     label_path(init) + ".csv"))
                 .string());
  });
  for (const MeasurementReport& rep : reports) {
    std::fputs(report_text(rep).c_str(), stdout);
    std::fputs("\n", stdout);
  }
  return 0;
}

int cmd_run(const CommonArgs& args, const std::string& program_arg) {
  const ExperimentConfig cfg = effective_config(args);
  const PulseProgram prog = is_builtin_program(program_arg)
                                ? builtin_program(program_arg)
                                : parse_pulse_program(read_file(program_arg));
  const ClusterOps ops = make_cluster_ops(cfg.cluster);
  const EigenSystem es = classify_eigenstates(ops);
  const TransitionTable tt = transition_table(es);
  const auto out = ensure_outdir(cfg.paths.output_dir);
  const std::vector<Initial> initials = effective_initials(args);
  const AcquireParams acq = prog.acquire_params(cfg.acquisition);

  bool has_lock = false, has_gradient = false;
  for (const PulseSegment& seg : prog.segments) {
    if (std::holds_alternative<LockSegment>(seg)) has_lock = true;
    if (std::holds_alternative<GradientSegment>(seg)) has_gradient = true;
  }

  std::vector<MeasurementReport> reports(initials.size());
  run_parallel(args.jobs, static_cast<int>(initials.size()), [&](int i) {
    const Initial& init = initials[static_cast<size_t>(i)];
    const std::string tag = label_path(init);
    DensityMatrix rho = pseudopure(es, resolve_initial(es, init.s, init.mz));
    AdiabaticityReport lockrep;
    for (const PulseSegment& seg : prog.segments)
      rho = apply_segment(rho, ops, seg, cfg.propagation,
                          has_lock ? &lockrep : nullptr);

    MeasurementReport rep;
    char buf[32];
    std::snprintf(buf, sizeof buf, "(%d,%+d)", init.s, init.mz);
    rep.initial_label = buf;
    rep.max_leakage = lockrep.max_leakage;
    if (has_lock) {
      rep.protocol = "adiabatic";
      rep.distribution = invert_from_sticks(rho, ops, es,
                                            cfg.measurement.thermal_epsilon,
                                            cfg.measurement.total);
    } else if (has_gradient) {
      rep.protocol = "hardpulse";
      for (int b = 0; b < rho.rho.n; ++b)
        rep.distribution.at_m(mz_of_basis_state(b, ops.couplings.N)) +=
            std::real(rho.rho(b, b));
    } else {
      rep.protocol = "run";
      rep.distribution = project_measurement(rho, ops.sz).to_distribution();
    }
    rep.theory = theory_distribution(init.s, init.mz);
    rep.direct_distribution = rep.distribution;
    rep.sx2 = expectation_sx2(rep.distribution);
    rep.sx2_theory = 0.5 * (init.s * (init.s + 1) - init.mz * init.mz);
    for (int m = -3; m <= 3; ++m)
      rep.linf_error = std::max(
          rep.linf_error,
          std::abs(rep.distribution.at_m(m) - rep.theory.at_m(m)));
    rep.linf_direct = rep.linf_error;

    // Eigenbasis populations for the populated-state diagnostic.
    CVec tmp(static_cast<size_t>(rho.rho.n));
    for (const EigenState& st : es.states) {
      matvec(rho.rho, st.vec, tmp);
      const double p = std::real(dotc(st.vec, tmp));
      rep.eigen_populations.push_back(p);
      if (p > 1e-3) ++rep.populated_states;
    }
    const std::array<int, 7> hs = highspin_states(es);
    for (int m = -3; m <= 3; ++m)
      rep.highspin_total +=
          rep.eigen_populations[static_cast<size_t>(hs[m + 3])];

    if (prog.has_acquire) {
      const Spectrum fid = fid_spectrum(rho, es, ops, tt, acq);
      export_sampled_spectrum(fid,
                              (out / ("spectrum_" + tag + ".csv")).string());
      const Spectrum stick = stick_spectrum(rho, es, tt);
      export_stick_spectrum(stick, (out / ("stick_" + tag + ".csv")).string());
      if (fid.aliasing_warning)
        std::fprintf(stderr,
                     "warning: transitions beyond Nyquist; spectrum aliased\n");
    }
    export_distribution(rep,
                        (out / ("distribution_" + tag + ".csv")).string());
    reports[static_cast<size_t>(i)] = rep;
  });
  for (const MeasurementReport& rep : reports) {
    std::fputs(report_text(rep).c_str(), stdout);
    std::fputs("\n", stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"six-spin dipolar cluster simulator"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string program_arg;

  auto add_common = [&](CLI::App* sub, bool with_protocol) {
    sub->add_option("--config", args.config_path, "experiment config file");
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--initial", args.initials,
                    "initial state S,MZ (repeatable)");
    sub->add_option("--dt-us", args.dt_us, "integration step in microseconds");
    sub->add_option("--jobs", args.jobs, "parallel runs over initial states")
        ->check(CLI::PositiveNumber);
    if (with_protocol)
      sub->add_option("--protocol", args.protocol,
                      "adiabatic | hardpulse | oracle");
  };

  CLI::App* eigen = app.add_subcommand("eigen", "eigensystem table");
  add_common(eigen, false);
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "thermal or pseudopure spectra");
  add_common(spectrum, false);
  CLI::App* measure =
      app.add_subcommand("measure", "measurement protocol end-to-end");
  add_common(measure, true);
  CLI::App* theory = app.add_subcommand("theory", "analytic distributions");
  add_common(theory, false);
  CLI::App* run = app.add_subcommand("run", "arbitrary pulse program");
  add_common(run, false);
  run->add_option("program", program_arg,
                  "pulse program path or builtin (fig1, fig2d)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eigen->parsed()) return cmd_eigen(args);
    if (spectrum->parsed()) return cmd_spectrum(args);
    if (measure->parsed()) return cmd_measure(args);
    if (theory->parsed()) return cmd_theory(args);
    if (run->parsed()) return cmd_run(args, program_arg);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 0;
}
