#include "vvlab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vvlab::io {

std::string format_g17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("failed to open for writing: " + path.string());
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(line);
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& s, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) {
        throw std::runtime_error("not a number in " + context + ": '" + s + "'");
    }
    return v;
}

}  // namespace

void write_state_csv(const std::filesystem::path& path, const nssolver::Grid& grid,
                     const nssolver::FieldState& state) {
    std::ofstream out = open_out(path);
    out << "x,rho,m,u\n";
    for (int i = 0; i < grid.n_cells; ++i) {
        out << format_g17(grid.center(i)) << ',' << format_g17(state.rho[i]) << ','
            << format_g17(state.m[i]) << ',' << format_g17(state.m[i] / state.rho[i]) << '\n';
    }
}

void write_profile_csv(const std::filesystem::path& path, const nssolver::Grid& grid,
                       const nssolver::FieldState& state, const gasdyn::ExactWave& wave) {
    if (!(state.t > 0.0)) {
        throw std::invalid_argument("write_profile_csv: state time must be > 0");
    }
    std::ofstream out = open_out(path);
    out << "x,rho_eps,rho_exact,m_eps,m_exact\n";
    for (int i = 0; i < grid.n_cells; ++i) {
        const double x = grid.center(i);
        const gasdyn::WavePoint ex = gasdyn::eval_exact_wave(wave, x / state.t);
        out << format_g17(x) << ',' << format_g17(state.rho[i]) << ',' << format_g17(ex.rho)
            << ',' << format_g17(state.m[i]) << ',' << format_g17(ex.m) << '\n';
    }
}

void write_sweep_csv(const std::filesystem::path& path, double gamma,
                     std::span<const limitlab::SweepRecord> records) {
    std::ofstream out = open_out(path);
    out << "# gamma=" << format_g17(gamma) << '\n';
    out << "epsilon,mu,delta,err_rho_inf,err_m_inf,ratio_rho,ratio_m,"
           "energy_peak,dissipation_total,runtime_s\n";
    for (const limitlab::SweepRecord& r : records) {
        out << format_g17(r.epsilon) << ',' << format_g17(r.mu) << ',' << format_g17(r.delta)
            << ',' << format_g17(r.err_rho_inf) << ',' << format_g17(r.err_m_inf) << ','
            << format_g17(r.ratio_rho) << ',' << format_g17(r.ratio_m) << ','
            << format_g17(r.energy_peak) << ',' << format_g17(r.dissipation_total) << ','
            << format_g17(r.runtime_s) << '\n';
    }
}

SweepCsv read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("failed to open for reading: " + path.string());
    }
    SweepCsv result;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto pos = line.find("gamma=");
            if (pos != std::string::npos) {
                result.gamma = parse_double(line.substr(pos + 6), "sweep preamble");
            }
            continue;
        }
        if (!have_header) {
            have_header = true;  // column header line
            continue;
        }
        const std::vector<std::string> cols = split(line, ',');
        if (cols.size() != 10) {
            throw std::runtime_error("malformed sweep CSV row: '" + line + "'");
        }
        limitlab::SweepRecord r;
        r.epsilon = parse_double(cols[0], "epsilon");
        r.mu = parse_double(cols[1], "mu");
        r.delta = parse_double(cols[2], "delta");
        r.err_rho_inf = parse_double(cols[3], "err_rho_inf");
        r.err_m_inf = parse_double(cols[4], "err_m_inf");
        r.ratio_rho = parse_double(cols[5], "ratio_rho");
        r.ratio_m = parse_double(cols[6], "ratio_m");
        r.energy_peak = parse_double(cols[7], "energy_peak");
        r.dissipation_total = parse_double(cols[8], "dissipation_total");
        r.runtime_s = parse_double(cols[9], "runtime_s");
        result.records.push_back(r);
    }
    if (!have_header) {
        throw std::runtime_error("sweep CSV has no header: " + path.string());
    }
    return result;
}

}  // namespace vvlab::io
