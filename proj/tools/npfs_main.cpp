// Command-line driver: run | converge | check on an INI scenario file.
#include <cstring>
#include <iostream>
#include <string>

#include "npfs/commands.hpp"
#include "npfs/errors.hpp"
#include "npfs/output.hpp"

namespace {

void print_usage() {
    std::cout <<
        "usage: npfs <command> <config.ini> [options]\n"
        "\n"
        "commands:\n"
        "  run       solve the scenario; writes metadata.txt, timeseries.csv\n"
        "            and optional field snapshots\n"
        "  converge  run the [study] refinement ladder; writes rate_table.csv\n"
        "  check     solve and verify the invariant battery (exit 3 on failure)\n"
        "\n"
        "options:\n"
        "  --out <dir>         output directory (default: out)\n"
        "  --threads <n>       cell-parallel worker threads (default: 1)\n"
        "  --snapshots <k>     write a binary snapshot every k steps (run only)\n"
        "  --corrupt-step <n>  testing hook: damage state n before `check`\n"
        "\n"
        "exit codes: 0 ok, 1 usage/config error, 2 numerical failure,\n"
        "            3 invariant failure\n";
}

int parse_positive(const char* flag, const char* value) {
    if (!value) throw npfs::ConfigError(std::string(flag) + " needs a value");
    const int v = std::stoi(value);
    if (v < 0) throw npfs::ConfigError(std::string(flag) + " must be nonnegative");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace npfs;
    try {
        if (argc >= 2 && (std::strcmp(argv[1], "--help") == 0 || std::strcmp(argv[1], "-h") == 0)) {
            print_usage();
            return 0;
        }
        if (argc < 3) {
            print_usage();
            return 1;
        }
        const std::string command = argv[1];
        const std::string config_path = argv[2];

        RunOptions opts;
        for (int i = 3; i < argc; ++i) {
            const std::string flag = argv[i];
            const char* value = i + 1 < argc ? argv[i + 1] : nullptr;
            if (flag == "--out") {
                if (!value) throw ConfigError("--out needs a value");
                opts.out_dir = value;
                ++i;
            } else if (flag == "--threads") {
                opts.threads = std::max(1, parse_positive("--threads", value));
                ++i;
            } else if (flag == "--snapshots") {
                opts.snapshot_every = parse_positive("--snapshots", value);
                ++i;
            } else if (flag == "--corrupt-step") {
                opts.corrupt_step = parse_positive("--corrupt-step", value);
                ++i;
            } else {
                throw ConfigError("unknown option: " + flag);
            }
        }

        const ParsedConfig cfg = parse_config(config_path);
        if (command == "run") return cmd_run(cfg, opts);
        if (command == "converge") return cmd_converge(cfg, opts);
        if (command == "check") return cmd_check(cfg, opts);
        throw ConfigError("unknown command: " + command);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
