#pragma once

#include <string>
#include <vector>

#include "npfs/scheme.hpp"

namespace npfs {

/// Optional [study] section driving the convergence study.
struct StudySpec {
    bool present = false;
    std::vector<int> n_list;
    int n_ref = 0;
};

/// A parsed scenario file plus its canonical echo. Parsing the echo again
/// reproduces an identical scenario.
struct ParsedConfig {
    Scenario scenario;
    StudySpec study;
    std::string canonical;
};

/// Parse an INI-style scenario file. Sections: [domain], [time], [kernel],
/// [nonlinearity], [forcing], [initial], [study]. Unknown sections or keys
/// are rejected with the offending line number; all structural validation
/// (kernel symmetry, nonlinearity shape, step admissibility) runs here.
ParsedConfig parse_config(const std::string& path);
ParsedConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical config text for a parsed scenario (the round-trip form).
std::string config_echo(const ParsedConfig& cfg);

}  // namespace npfs
