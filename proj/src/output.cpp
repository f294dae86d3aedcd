#include "npfs/output.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "npfs/errors.hpp"
#include "npfs/util.hpp"

namespace npfs {

const char* version_string() { return "npfs 0.1.0"; }

std::string timeseries_csv(const Trajectory& traj) {
    std::ostringstream out;
    out << "n,t,theta_H,theta_V,phi_linf,v_linf,z_H,mass\n";
    const double h = traj.h();
    for (int n = 0; n <= traj.steps(); ++n) {
        const StepState& s = traj.state(n);
        out << n << ',' << format_double(n * h) << ',' << format_double(l2_norm(s.theta)) << ','
            << format_double(v_norm(s.theta)) << ',' << format_double(linf_norm(s.phi)) << ','
            << format_double(linf_norm(s.v)) << ','
            << format_double(s.z_defined ? l2_norm(s.z) : 0.0) << ','
            << format_double(integral(s.theta) + integral(s.phi)) << '\n';
    }
    return out.str();
}

std::string rate_table_csv(const RateTable& table) {
    std::ostringstream out;
    out << "h,N,v_sup,v_l2,phi_sup,theta_sup,grad_l2,total\n";
    for (const RateRow& r : table.rows) {
        out << format_double(r.h) << ',' << r.steps << ',' << format_double(r.metrics.v_sup)
            << ',' << format_double(r.metrics.v_l2) << ',' << format_double(r.metrics.phi_sup)
            << ',' << format_double(r.metrics.theta_sup) << ','
            << format_double(r.metrics.grad_l2) << ',' << format_double(r.metrics.total())
            << '\n';
    }
    if (table.degenerate) {
        out << "# slope: degenerate (all errors zero)\n";
    } else if (!table.has_fit) {
        out << "# slope: not fitted (needs at least two nonzero rows)\n";
    } else {
        out << "# slope = " << format_double(table.slope) << "\n";
        out << "# M_hat = " << format_double(table.m_hat) << "\n";
    }
    return out.str();
}

std::string run_metadata(const ParsedConfig& cfg, double wall_seconds) {
    std::ostringstream out;
    out << "# " << version_string() << " run metadata\n";
    out << "# wall_seconds = " << format_double(wall_seconds) << "\n";
    out << "# the remainder of this file is the canonical config echo\n";
    out << cfg.canonical;
    return out.str();
}

void write_snapshot(const std::string& path, const StepState& state) {
    static_assert(sizeof(double) == 8);
    if constexpr (std::endian::native != std::endian::little) {
        throw NumericalError("snapshots are defined little-endian; unsupported host byte order");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot open snapshot file: " + path);

    const Grid& g = state.theta.grid();
    out.write("NPFS1", 5);
    auto put_u32 = [&](std::uint32_t v) {
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    };
    put_u32(static_cast<std::uint32_t>(g.dim()));
    for (int a = 0; a < g.dim(); ++a) put_u32(static_cast<std::uint32_t>(g.cells(a)));
    put_u32(4);
    for (const Field* f : {&state.theta, &state.phi, &state.v, &state.z}) {
        out.write(reinterpret_cast<const char*>(f->values().data()),
                  static_cast<std::streamsize>(f->size() * sizeof(double)));
    }
    if (!out) throw NumericalError("short write on snapshot file: " + path);
}

}  // namespace npfs
