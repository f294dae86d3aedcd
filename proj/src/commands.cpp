#include "npfs/commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "npfs/analysis.hpp"
#include "npfs/errors.hpp"
#include "npfs/output.hpp"
#include "npfs/util.hpp"

namespace npfs {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot open output file: " + path.string());
    out << text;
    if (!out) throw NumericalError("short write: " + path.string());
}

std::filesystem::path prepare_out_dir(const RunOptions& opts) {
    std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string snapshot_name(int n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snapshot_%06d.bin", n);
    return buf;
}

}  // namespace

int cmd_run(const ParsedConfig& cfg, const RunOptions& opts) {
    const auto dir = prepare_out_dir(opts);
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory traj = solve_trajectory(cfg.scenario, opts.threads);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_text(dir / "timeseries.csv", timeseries_csv(traj));
    write_text(dir / "metadata.txt", run_metadata(cfg, wall));
    if (opts.snapshot_every > 0) {
        for (int n = 0; n <= traj.steps(); n += opts.snapshot_every) {
            write_snapshot((dir / snapshot_name(n)).string(), traj.state(n));
        }
    }
    std::cout << "run: " << traj.steps() << " steps in " << format_double(wall)
              << " s, outputs in " << dir.string() << "\n";
    return 0;
}

int cmd_converge(const ParsedConfig& cfg, const RunOptions& opts) {
    if (!cfg.study.present) {
        throw ConfigError("converge: config has no [study] section");
    }
    const auto dir = prepare_out_dir(opts);
    const RateTable table =
        convergence_study(cfg.scenario, cfg.study.n_list, cfg.study.n_ref, opts.threads);
    const std::string csv = rate_table_csv(table);
    write_text(dir / "rate_table.csv", csv);
    std::cout << csv;
    return 0;
}

int cmd_check(const ParsedConfig& cfg, const RunOptions& opts) {
    Trajectory traj = solve_trajectory(cfg.scenario, opts.threads);
    if (opts.corrupt_step >= 0) {
        if (opts.corrupt_step > traj.steps()) {
            throw ConfigError("check: --corrupt-step beyond the last state");
        }
        traj.state(opts.corrupt_step).phi[0] += 1.0;  // fault injection for testing
    }

    const auto checks = invariant_suite(traj, cfg.scenario.nl);
    bool all_pass = true;
    for (const InvariantCheck& c : checks) {
        all_pass = all_pass && c.pass;
        std::printf("%-28s %s  residual=%.3e  (tol %.0e)\n", c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.residual, c.tolerance);
    }

    const EstimateReport er = apriori_report(traj);
    std::printf("monitors: E1=%.6g E2=%.6g E3=%.6g E4=%.6g E5=%.6g E6=%.6g under=%.6g\n",
                er.e1, er.e2, er.e3, er.e4, er.e5, er.e6, er.under);
    if (!all_pass) {
        std::cout << "check: FAILED\n";
        return 3;
    }
    std::cout << "check: all invariants pass\n";
    return 0;
}

}  // namespace npfs
