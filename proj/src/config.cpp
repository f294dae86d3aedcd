#include "npfs/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "npfs/errors.hpp"
#include "npfs/util.hpp"

namespace npfs {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

/// One parsed section: ordered key -> (value, line).
using Section = std::map<std::string, Entry>;

class ConfigDoc {
public:
    ConfigDoc(const std::string& text, std::string origin) : origin_(std::move(origin)) {
        static const char* known_sections[] = {"domain", "time",    "kernel", "nonlinearity",
                                               "forcing", "initial", "study"};
        std::istringstream in(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto cut = line.find_first_of("#;");
            if (cut != std::string::npos) line = line.substr(0, cut);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(lineno, "malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                bool known = false;
                for (const char* s : known_sections) known = known || section == s;
                if (!known) fail(lineno, "unknown section [" + section + "]");
                if (!sections_.emplace(section, Section{}).second) {
                    fail(lineno, "duplicate section [" + section + "]");
                }
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(lineno, "expected key = value");
            if (section.empty()) fail(lineno, "key outside any section");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) fail(lineno, "empty key");
            auto [it, inserted] = sections_[section].emplace(key, Entry{value, lineno});
            if (!inserted) fail(lineno, "duplicate key '" + key + "'");
        }
    }

    bool has_section(const std::string& name) const { return sections_.count(name) > 0; }

    std::optional<std::string> get(const std::string& section, const std::string& key) {
        auto sit = sections_.find(section);
        if (sit == sections_.end()) return std::nullopt;
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return std::nullopt;
        kit->second.used = true;
        return kit->second.value;
    }

    std::string require(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        if (!v) {
            throw ConfigError(origin_ + ": missing required key '" + key + "' in [" + section +
                              "]");
        }
        return *v;
    }

    /// After all keys were consumed, reject leftovers (unknown keys).
    void finish() const {
        for (const auto& [sname, sec] : sections_) {
            for (const auto& [key, entry] : sec) {
                if (!entry.used) {
                    throw ConfigError(origin_ + ":" + std::to_string(entry.line) +
                                      ": unknown key '" + key + "' in [" + sname + "]");
                }
            }
        }
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(origin_ + ":" + std::to_string(line) + ": " + msg);
    }

    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::map<std::string, Section> sections_;
};

double parse_double(const std::string& s, const std::string& what) {
    const char* c = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(c, &end);
    if (end == c || *end != '\0' || !std::isfinite(v)) {
        throw ConfigError("invalid number '" + s + "' for " + what);
    }
    return v;
}

long parse_int(const std::string& s, const std::string& what) {
    const char* c = s.c_str();
    char* end = nullptr;
    const long v = std::strtol(c, &end, 10);
    if (end == c || *end != '\0') {
        throw ConfigError("invalid integer '" + s + "' for " + what);
    }
    return v;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const std::string& tok : split_ws(s)) out.push_back(parse_double(tok, what));
    return out;
}

/// "kind key=value ..." preset expressions.
class Expr {
public:
    Expr(const std::string& text, std::string what) : what_(std::move(what)) {
        auto toks = split_ws(text);
        if (toks.empty()) throw ConfigError(what_ + ": empty preset expression");
        kind_ = toks[0];
        for (std::size_t k = 1; k < toks.size(); ++k) {
            const auto eq = toks[k].find('=');
            if (eq == std::string::npos) {
                throw ConfigError(what_ + ": expected key=value, got '" + toks[k] + "'");
            }
            const bool fresh =
                params_.emplace(toks[k].substr(0, eq),
                                std::make_pair(toks[k].substr(eq + 1), false)).second;
            if (!fresh) {
                throw ConfigError(what_ + ": duplicate parameter '" + toks[k].substr(0, eq) + "'");
            }
        }
    }

    const std::string& kind() const { return kind_; }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        auto it = params_.find(key);
        if (it == params_.end()) {
            if (fallback) return *fallback;
            throw ConfigError(what_ + ": missing parameter '" + key + "' for " + kind_);
        }
        it->second.second = true;
        return parse_double(it->second.first, what_ + "." + key);
    }

    int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
        auto it = params_.find(key);
        if (it == params_.end()) {
            if (fallback) return *fallback;
            throw ConfigError(what_ + ": missing parameter '" + key + "' for " + kind_);
        }
        it->second.second = true;
        return static_cast<int>(parse_int(it->second.first, what_ + "." + key));
    }

    void finish() const {
        for (const auto& [key, v] : params_) {
            if (!v.second) {
                throw ConfigError(what_ + ": unknown parameter '" + key + "' for " + kind_);
            }
        }
    }

private:
    std::string what_;
    std::string kind_;
    std::map<std::string, std::pair<std::string, bool>> params_;
};

ProfileSpec parse_profile(const std::string& text, const std::string& what) {
    Expr e(text, what);
    ProfileSpec p;
    if (e.kind() == "zero") {
        p = ProfileSpec::zero();
    } else if (e.kind() == "constant") {
        p = ProfileSpec::constant(e.number("value"));
    } else if (e.kind() == "cosine") {
        p = ProfileSpec::cosine(e.number("amp"), e.integer("kx"), e.integer("ky", 0),
                                e.number("offset", 0.0));
    } else if (e.kind() == "gaussian") {
        p = ProfileSpec::gaussian(e.number("amp"), e.number("cx"), e.number("cy", 0.0),
                                  e.number("width"));
        if (!(p.width > 0.0)) throw ConfigError(what + ": gaussian width must be positive");
    } else {
        throw ConfigError(what + ": unknown profile '" + e.kind() +
                          "' (expected zero|constant|cosine|gaussian)");
    }
    e.finish();
    return p;
}

TemporalSpec parse_temporal(const std::string& text, const std::string& what) {
    Expr e(text, what);
    TemporalSpec t;
    if (e.kind() == "one") {
        t = TemporalSpec::one();
    } else if (e.kind() == "poly") {
        std::vector<double> coeffs;
        for (int k = 0; k <= 5; ++k) {
            coeffs.push_back(e.number("c" + std::to_string(k), 0.0));
        }
        while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
        t = TemporalSpec::poly(std::move(coeffs));
    } else if (e.kind() == "cosine") {
        t = TemporalSpec::cosine(e.number("amp"), e.number("omega"), e.number("phase", 0.0));
    } else if (e.kind() == "sine") {
        t = TemporalSpec::sine(e.number("amp"), e.number("omega"));
    } else {
        throw ConfigError(what + ": unknown temporal preset '" + e.kind() +
                          "' (expected one|poly|cosine|sine)");
    }
    e.finish();
    return t;
}

Nonlinearity::Terms parse_beta(const std::string& text) {
    Nonlinearity::Terms terms;
    for (const std::string& tok : split_ws(text)) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("nonlinearity.beta: expected power:coefficient, got '" + tok + "'");
        }
        const int power = static_cast<int>(parse_int(tok.substr(0, colon), "beta power"));
        const double coeff = parse_double(tok.substr(colon + 1), "beta coefficient");
        terms.emplace_back(power, coeff);
    }
    return terms;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text, const std::string& origin) {
    ConfigDoc doc(text, origin);

    // [domain]
    const int dim = static_cast<int>(parse_int(doc.require("domain", "dim"), "domain.dim"));
    if (dim != 1 && dim != 2) throw ConfigError(origin + ": domain.dim must be 1 or 2");
    const auto lengths = parse_double_list(doc.require("domain", "lengths"), "domain.lengths");
    const auto cells_raw = parse_double_list(doc.require("domain", "cells"), "domain.cells");
    if (static_cast<int>(lengths.size()) != dim || static_cast<int>(cells_raw.size()) != dim) {
        throw ConfigError(origin + ": domain.lengths and domain.cells need one value per axis");
    }
    std::vector<int> cells;
    for (double c : cells_raw) {
        if (c != static_cast<int>(c)) throw ConfigError(origin + ": domain.cells must be integers");
        cells.push_back(static_cast<int>(c));
    }
    const Grid grid = dim == 1 ? Grid::line(lengths[0], cells[0])
                               : Grid::box(lengths[0], lengths[1], cells[0], cells[1]);

    // [time]
    const double T = parse_double(doc.require("time", "T"), "time.T");
    const int n_steps = static_cast<int>(parse_int(doc.require("time", "N"), "time.N"));

    // [kernel]
    const std::string kind = doc.require("kernel", "kind");
    KernelSpec kspec;
    if (kind == "constant") {
        kspec = KernelSpec::constant(parse_double(doc.require("kernel", "value"), "kernel.value"));
    } else if (kind == "gaussian") {
        kspec = KernelSpec::gaussian(
            parse_double(doc.require("kernel", "amplitude"), "kernel.amplitude"),
            parse_double(doc.require("kernel", "width"), "kernel.width"));
    } else if (kind == "tabulated") {
        kspec = KernelSpec::tabulated(
            parse_double_list(doc.require("kernel", "samples"), "kernel.samples"));
    } else {
        throw ConfigError(origin + ": kernel.kind must be constant|gaussian|tabulated");
    }
    ConvPlan plan = ConvPlan::Fft;
    if (auto p = doc.get("kernel", "plan")) {
        if (*p == "fft") {
            plan = ConvPlan::Fft;
        } else if (*p == "direct") {
            plan = ConvPlan::Direct;
        } else {
            throw ConfigError(origin + ": kernel.plan must be fft|direct");
        }
    }

    // [nonlinearity]
    Nonlinearity::Terms beta_terms;
    if (auto b = doc.get("nonlinearity", "beta")) beta_terms = parse_beta(*b);
    const double pi_b =
        doc.get("nonlinearity", "pi_b") ? parse_double(*doc.get("nonlinearity", "pi_b"), "pi_b")
                                        : 0.0;
    const double pi_c =
        doc.get("nonlinearity", "pi_c") ? parse_double(*doc.get("nonlinearity", "pi_c"), "pi_c")
                                        : 0.0;
    const double radius = doc.get("nonlinearity", "check_radius")
                              ? parse_double(*doc.get("nonlinearity", "check_radius"),
                                             "check_radius")
                              : 10.0;
    const Nonlinearity nl(beta_terms, pi_b, pi_c, radius);

    // [forcing]
    ForcingSpec forcing;
    if (auto s = doc.get("forcing", "spatial")) forcing.spatial = parse_profile(*s, "forcing.spatial");
    if (auto t = doc.get("forcing", "temporal")) {
        forcing.temporal = parse_temporal(*t, "forcing.temporal");
    }

    // [initial]
    ProfileSpec theta0, phi0, v0;
    if (auto s = doc.get("initial", "theta0")) theta0 = parse_profile(*s, "initial.theta0");
    if (auto s = doc.get("initial", "phi0")) phi0 = parse_profile(*s, "initial.phi0");
    if (auto s = doc.get("initial", "v0")) v0 = parse_profile(*s, "initial.v0");

    // [study]
    StudySpec study;
    if (doc.has_section("study")) {
        study.present = true;
        for (double n : parse_double_list(doc.require("study", "N_list"), "study.N_list")) {
            if (n < 1 || n != static_cast<int>(n)) {
                throw ConfigError(origin + ": study.N_list must contain positive integers");
            }
            study.n_list.push_back(static_cast<int>(n));
        }
        study.n_ref = static_cast<int>(parse_int(doc.require("study", "N_ref"), "study.N_ref"));
        for (int n : study.n_list) {
            if (study.n_ref % n != 0) {
                throw ConfigError(origin + ": study.N_ref must be a multiple of every N in "
                                           "study.N_list (got N=" +
                                  std::to_string(n) + ", N_ref=" + std::to_string(study.n_ref) +
                                  ")");
            }
        }
    }

    doc.finish();

    ParsedConfig cfg{Scenario{grid, T, n_steps, kspec, plan, nl, forcing, theta0, phi0, v0},
                     study, ""};
    cfg.scenario.validate();  // admissibility and initial-data checks
    cfg.canonical = config_echo(cfg);
    return cfg;
}

ParsedConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string config_echo(const ParsedConfig& cfg) {
    const Scenario& s = cfg.scenario;
    std::ostringstream out;
    out << "[domain]\n";
    out << "dim = " << s.grid.dim() << "\n";
    out << "lengths =";
    for (int a = 0; a < s.grid.dim(); ++a) out << " " << format_double(s.grid.length(a));
    out << "\ncells =";
    for (int a = 0; a < s.grid.dim(); ++a) out << " " << s.grid.cells(a);
    out << "\n\n[time]\n";
    out << "T = " << format_double(s.T) << "\n";
    out << "N = " << s.steps << "\n";

    out << "\n[kernel]\n";
    out << "kind = " << s.kernel.kind_name() << "\n";
    switch (s.kernel.kind) {
        case KernelSpec::Kind::Constant:
            out << "value = " << format_double(s.kernel.value) << "\n";
            break;
        case KernelSpec::Kind::Gaussian:
            out << "amplitude = " << format_double(s.kernel.amplitude) << "\n";
            out << "width = " << format_double(s.kernel.width) << "\n";
            break;
        case KernelSpec::Kind::Tabulated:
            out << "samples =";
            for (double v : s.kernel.samples) out << " " << format_double(v);
            out << "\n";
            break;
    }
    out << "plan = " << (s.plan == ConvPlan::Fft ? "fft" : "direct") << "\n";

    out << "\n[nonlinearity]\n";
    if (!s.nl.beta_terms().empty()) {
        out << "beta =";
        for (const auto& [p, c] : s.nl.beta_terms()) out << " " << p << ":" << format_double(c);
        out << "\n";
    }
    out << "pi_b = " << format_double(s.nl.pi_slope()) << "\n";
    out << "pi_c = " << format_double(s.nl.pi_offset()) << "\n";
    out << "check_radius = " << format_double(s.nl.check_radius()) << "\n";

    out << "\n[forcing]\n";
    out << "spatial = " << s.forcing.spatial.to_expr() << "\n";
    out << "temporal = " << s.forcing.temporal.to_expr() << "\n";

    out << "\n[initial]\n";
    out << "theta0 = " << s.theta0.to_expr() << "\n";
    out << "phi0 = " << s.phi0.to_expr() << "\n";
    out << "v0 = " << s.v0.to_expr() << "\n";

    if (cfg.study.present) {
        out << "\n[study]\n";
        out << "N_list =";
        for (int n : cfg.study.n_list) out << " " << n;
        out << "\nN_ref = " << cfg.study.n_ref << "\n";
    }
    return out.str();
}

}  // namespace npfs
