#include "vvlab/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vvlab/io.hpp"

namespace vvlab::cli {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') {
        throw std::invalid_argument("config key '" + key + "': expected a number, got '" + value +
                                    "'");
    }
    return x;
}

int parse_int(const std::string& key, const std::string& value) {
    const double x = parse_number(key, value);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x) {
        throw std::invalid_argument("config key '" + key + "': expected an integer, got '" +
                                    value + "'");
    }
    return i;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number(key, item));
    }
    if (out.empty()) {
        throw std::invalid_argument("config key '" + key + "': expected a comma-separated list");
    }
    return out;
}

}  // namespace

limitlab::SweepConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line is not 'key = value': '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config line has an empty key: '" + line + "'");
        }
        if (!kv.emplace(key, value).second) {
            throw std::invalid_argument("config key '" + key + "' appears more than once");
        }
    }

    const auto required = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw std::invalid_argument("config key '" + key + "' is missing");
        }
        return it->second;
    };
    const auto known = {"gamma",     "rho_plus", "u_plus", "epsilons",        "h",
                        "t_end",     "c_mu",     "cfl",    "cells_per_delta", "order",
                        "sample_times"};
    for (const auto& [key, value] : kv) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("config key '" + key + "' is not recognized");
        }
    }

    const double gamma = parse_number("gamma", required("gamma"));
    if (!(gamma > 1.0)) {
        throw std::invalid_argument("config key 'gamma': must be > 1 (gas exponent), got " +
                                    std::to_string(gamma));
    }
    limitlab::SweepConfig config{
        gasdyn::GasModel(gamma),
        {parse_number("rho_plus", required("rho_plus")),
         parse_number("u_plus", required("u_plus"))},
        parse_list("epsilons", required("epsilons")),
        parse_number("h", required("h")),
        parse_number("t_end", required("t_end")),
        {},
        1.0,
        50,
        2,
        0.45,
    };
    if (kv.count("c_mu")) {
        config.c_mu = parse_number("c_mu", kv.at("c_mu"));
    }
    if (kv.count("cells_per_delta")) {
        config.cells_per_delta = parse_int("cells_per_delta", kv.at("cells_per_delta"));
    }
    if (kv.count("order")) {
        config.order = parse_int("order", kv.at("order"));
    }
    if (kv.count("cfl")) {
        config.cfl = parse_number("cfl", kv.at("cfl"));
    }
    if (kv.count("sample_times")) {
        config.sample_times = parse_list("sample_times", kv.at("sample_times"));
    } else {
        config.sample_times = limitlab::default_sample_times(config.h, config.t_end);
    }
    limitlab::validate(config);  // includes per-epsilon schedule feasibility
    return config;
}

namespace {

json rate_fit_json(const limitlab::RateModel& model, const limitlab::RateFit& fit) {
    json j;
    j["model"] = {{"exponent", model.exponent}, {"log_power", model.log_power}};
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["residual"] = fit.residual;
    j["ratio_series"] = fit.ratio_series;
    return j;
}

json fits_json(double gamma, const std::vector<limitlab::SweepRecord>& records) {
    const gasdyn::GasModel gas(gamma);
    std::vector<double> eps;
    std::vector<double> err_rho;
    std::vector<double> err_m;
    for (const auto& r : records) {
        eps.push_back(r.epsilon);
        err_rho.push_back(r.err_rho_inf);
        err_m.push_back(r.err_m_inf);
    }
    const limitlab::RateModel dm = limitlab::density_rate_model(gas);
    const limitlab::RateModel mm = limitlab::momentum_rate_model(gas);
    json j;
    j["gamma"] = gamma;
    j["density"] = rate_fit_json(dm, limitlab::fit_rate(eps, err_rho, dm));
    j["momentum"] = rate_fit_json(mm, limitlab::fit_rate(eps, err_m, mm));
    return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("failed to open for writing: " + path.string());
    }
    out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("failed to open for reading: " + path.string());
    }
    return json::parse(in);
}

struct SweepOptions {
    std::string config_path;
    std::string out_dir;
    int jobs = 1;
    bool force = false;
    int verbosity = 0;
};

int cmd_sweep(const SweepOptions& opt) {
    std::ifstream in(opt.config_path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + opt.config_path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const limitlab::SweepConfig config = parse_config(buffer.str());

    const RunManifest manifest{opt.config_path, opt.out_dir, std::max(opt.jobs, 1),
                               opt.verbosity};
    std::filesystem::create_directories(manifest.output_dir);
    const std::filesystem::path manifest_path = manifest.output_dir / "manifest.json";
    if (std::filesystem::exists(manifest_path) && !opt.force) {
        const json existing = read_json(manifest_path);
        if (existing.value("status", "") == "completed") {
            throw std::runtime_error("output directory already holds a completed run: " +
                                     manifest_path.string() + " (use --force to overwrite)");
        }
    }

    json mj;
    mj["command"] = "sweep";
    mj["config"] = manifest.config_path.string();
    mj["output_dir"] = manifest.output_dir.string();
    mj["parallelism"] = manifest.parallelism;
    mj["gamma"] = config.gas.gamma();
    mj["epsilons"] = config.epsilons;
    mj["status"] = "running";
    write_json(manifest_path, mj);

    const std::size_t n = config.epsilons.size();
    std::vector<limitlab::CaseResult> results(n);
    const int jobs = std::min<int>(manifest.parallelism, static_cast<int>(n));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            results[i] = limitlab::run_case_full(config, config.epsilons[i]);
            if (opt.verbosity > 0) {
                std::cout << "case " << i << " done (epsilon = " << config.epsilons[i] << ")\n";
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                    try {
                        results[i] = limitlab::run_case_full(config, config.epsilons[i]);
                    } catch (...) {
                        const std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) {
                            first_error = std::current_exception();
                        }
                    }
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        if (first_error) {
            std::rethrow_exception(first_error);
        }
    }

    std::vector<limitlab::SweepRecord> records;
    records.reserve(n);
    for (const auto& r : results) {
        records.push_back(r.record);
    }
    io::write_sweep_csv(manifest.output_dir / "sweep.csv", config.gas.gamma(), records);

    const gasdyn::ExactWave exact = gasdyn::build_exact_wave(config.gas, config.right);
    json case_list = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "profile_%03zu.csv", i);
        io::write_profile_csv(manifest.output_dir / name, results[i].grid,
                              results[i].final_state, exact);
        const limitlab::SweepRecord& r = records[i];
        json c;
        c["epsilon"] = r.epsilon;
        c["mu"] = r.mu;
        c["delta"] = r.delta;
        c["err_rho_inf"] = r.err_rho_inf;
        c["err_m_inf"] = r.err_m_inf;
        c["bound_ratio"] = r.bound_ratio;
        c["min_rho"] = r.min_rho;
        c["max_speed"] = r.max_speed;
        c["phi_inf_max"] = r.phi_inf_max;
        c["apriori_phi_ok"] = r.phi_inf_max <= std::pow(r.epsilon, 1.0 / 6.0);
        c["profile"] = name;
        c["runtime_s"] = r.runtime_s;
        case_list.push_back(c);
    }

    write_json(manifest.output_dir / "fit.json", fits_json(config.gas.gamma(), records));

    mj["status"] = "completed";
    mj["cases"] = case_list;
    write_json(manifest_path, mj);

    for (const auto& r : records) {
        std::cout << "epsilon=" << io::format_g17(r.epsilon) << " mu=" << r.mu
                  << " err_rho_inf=" << r.err_rho_inf << " err_m_inf=" << r.err_m_inf
                  << " ratio_rho=" << r.ratio_rho << " (" << r.runtime_s << " s)\n";
    }
    std::cout << "sweep written to " << manifest.output_dir.string() << '\n';
    return 0;
}

struct WaveFixtureOptions {
    double gamma = 3.0;
    double rho_plus = 1.0;
    double u_plus = 0.0;
    double mu = 0.05;
    double delta = 0.1;
    double t = 1.0;
};

struct WavesOptions : WaveFixtureOptions {
    std::string xi_range = "-2:2:401";
    std::string out_path = "waves.csv";
};

int cmd_waves(const WavesOptions& opt) {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    if (std::sscanf(opt.xi_range.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2 ||
        !(lo < hi)) {
        throw std::runtime_error("--xi-range expects lo:hi:count with lo < hi and count >= 2");
    }
    const gasdyn::GasModel gas(opt.gamma);
    const gasdyn::ExactWave exact = gasdyn::build_exact_wave(gas, {opt.rho_plus, opt.u_plus});
    const gasdyn::CutoffWave cut = gasdyn::build_cutoff_wave(exact, opt.mu);
    const smoothwave::ApproxWave aw = smoothwave::build_approx_wave(cut, opt.delta);

    std::ofstream out(opt.out_path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("failed to open for writing: " + opt.out_path);
    }
    out << "xi,rho_exact,u_exact,m_exact,rho_cutoff,u_cutoff,m_cutoff,"
           "rho_approx,u_approx,m_approx\n";
    for (int i = 0; i < count; ++i) {
        const double xi = lo + (hi - lo) * i / (count - 1);
        const gasdyn::WavePoint e = gasdyn::eval_exact_wave(exact, xi);
        const gasdyn::WavePoint c = gasdyn::eval_cutoff_wave(cut, xi);
        const smoothwave::ApproxPoint a = smoothwave::eval_approx_wave(aw, xi * opt.t, opt.t);
        out << io::format_g17(xi) << ',' << io::format_g17(e.rho) << ',' << io::format_g17(e.u)
            << ',' << io::format_g17(e.m) << ',' << io::format_g17(c.rho) << ','
            << io::format_g17(c.u) << ',' << io::format_g17(c.m) << ',' << io::format_g17(a.rho)
            << ',' << io::format_g17(a.u) << ',' << io::format_g17(a.rho * a.u) << '\n';
    }
    std::cout << "wrote " << count << " rows to " << opt.out_path << '\n';
    return 0;
}

struct VerifyOptions : WaveFixtureOptions {
    std::string out_path = "verify.json";
};

json burgers_report_json(const smoothwave::BurgersEstimateReport& r) {
    json j;
    j["p"] = std::isinf(r.p) ? json("inf") : json(r.p);
    j["norm_wx"] = r.norm_wx;
    j["norm_wxx"] = r.norm_wxx;
    j["env_wx"] = r.env_wx;
    j["env_wxx"] = r.env_wxx;
    j["ratio_wx"] = r.ratio_wx;
    j["ratio_wxx"] = r.ratio_wxx;
    j["sup_wxx_over_wx"] = r.sup_wxx_over_wx;
    j["pointwise_bound"] = r.pointwise_bound;
    j["pointwise_ok"] = r.pointwise_ok;
    j["sup_gap_inviscid"] = r.sup_gap_inviscid;
    j["env_gap"] = r.env_gap;
    j["ratio_gap"] = r.ratio_gap;
    return j;
}

int cmd_verify(const VerifyOptions& opt) {
    const gasdyn::GasModel gas(opt.gamma);
    const gasdyn::ExactWave exact = gasdyn::build_exact_wave(gas, {opt.rho_plus, opt.u_plus});
    const gasdyn::CutoffWave cut = gasdyn::build_cutoff_wave(exact, opt.mu);
    const smoothwave::ApproxWave aw = smoothwave::build_approx_wave(cut, opt.delta);

    json j;
    j["gamma"] = opt.gamma;
    j["rho_plus"] = opt.rho_plus;
    j["u_plus"] = opt.u_plus;
    j["mu"] = opt.mu;
    j["delta"] = opt.delta;
    j["t"] = opt.t;

    json burgers = json::array();
    const double ps[3] = {1.0, 2.0, std::numeric_limits<double>::infinity()};
    bool pointwise_ok = true;
    for (const double p : ps) {
        const auto r = smoothwave::verify_burgers_estimates(aw.profile, opt.t, p);
        pointwise_ok = pointwise_ok && r.pointwise_ok;
        burgers.push_back(burgers_report_json(r));
    }
    j["burgers_estimates"] = burgers;

    std::vector<double> xs(257);
    const double lo = aw.profile.w_minus * opt.t - 10.0 * opt.delta;
    const double hi = aw.profile.w_plus * opt.t + 10.0 * opt.delta;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / (xs.size() - 1);
    }
    const auto wi = smoothwave::verify_wave_identities(aw, xs, opt.t);
    j["wave_identities"] = {{"max_sigma2_rel_dev", wi.max_sigma2_rel_dev},
                            {"max_slope_identity_res", wi.max_slope_identity_res},
                            {"fd_order_u", wi.fd_order_u},
                            {"fd_order_rho", wi.fd_order_rho},
                            {"sup_gap_cutoff", wi.sup_gap_cutoff},
                            {"env_gap", wi.env_gap},
                            {"ratio_gap", wi.ratio_gap}};

    const limitlab::CutoffGap gap = limitlab::cutoff_gap(cut);
    const gasdyn::CutoffWave cut_half = gasdyn::build_cutoff_wave(exact, 0.5 * opt.mu);
    const limitlab::CutoffGap gap_half = limitlab::cutoff_gap(cut_half);
    j["cutoff_gap"] = {{"mu", opt.mu},
                       {"gap_rho", gap.rho},
                       {"gap_m", gap.m},
                       {"gap_rho_half", gap_half.rho},
                       {"gap_m_half", gap_half.m},
                       {"ratio_rho", gap.rho / gap_half.rho},
                       {"ratio_m", gap.m / gap_half.m}};

    write_json(opt.out_path, j);
    std::cout << "pointwise |w_xx| <= (4/delta) w_x: " << (pointwise_ok ? "ok" : "VIOLATED")
              << " (bound " << 4.0 / opt.delta << ")\n"
              << "sigma2 max relative deviation: " << wi.max_sigma2_rel_dev << '\n'
              << "cutoff gap rho: " << gap.rho << " (mu = " << opt.mu << ")\n"
              << "report written to " << opt.out_path << '\n';
    return 0;
}

struct FitOptions {
    std::string input_path;
    double gamma = 0.0;  // 0: take from the CSV preamble
    std::string out_path = "fit.json";
};

int cmd_fit(const FitOptions& opt) {
    const io::SweepCsv csv = io::read_sweep_csv(opt.input_path);
    const double gamma = opt.gamma > 0.0 ? opt.gamma : csv.gamma;
    if (!(gamma > 1.0)) {
        throw std::runtime_error("gamma unavailable: CSV has no preamble, pass --gamma");
    }
    const json j = fits_json(gamma, csv.records);
    write_json(opt.out_path, j);
    std::cout << "density slope = " << j["density"]["slope"].get<double>()
              << ", momentum slope = " << j["momentum"]["slope"].get<double>() << '\n'
              << "fit written to " << opt.out_path << '\n';
    return 0;
}

void add_fixture_flags(CLI::App* cmd, WaveFixtureOptions& opt) {
    cmd->add_option("--gamma", opt.gamma, "gas exponent (> 1)");
    cmd->add_option("--rho-plus", opt.rho_plus, "right-state density");
    cmd->add_option("--u-plus", opt.u_plus, "right-state velocity");
    cmd->add_option("--mu", opt.mu, "cut-off density level");
    cmd->add_option("--delta", opt.delta, "smoothing length");
    cmd->add_option("--t", opt.t, "evaluation time");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"vvlab: vanishing-viscosity laboratory for 1-D isentropic gas dynamics"};
    app.require_subcommand(1);

    SweepOptions sweep_opt;
    CLI::App* sweep = app.add_subcommand("sweep", "run a full viscosity sweep");
    sweep->add_option("--config", sweep_opt.config_path, "flat key = value config file")
        ->required();
    sweep->add_option("--out", sweep_opt.out_dir, "output directory")->required();
    sweep->add_option("--jobs", sweep_opt.jobs, "max concurrent cases");
    sweep->add_flag("--force", sweep_opt.force, "overwrite a completed run");
    sweep->add_flag("-v,--verbose", sweep_opt.verbosity, "per-case progress output");

    WavesOptions waves_opt;
    CLI::App* waves = app.add_subcommand("waves", "dump exact/cut-off/approximate profiles");
    add_fixture_flags(waves, waves_opt);
    waves->add_option("--xi-range", waves_opt.xi_range, "similarity range lo:hi:count");
    waves->add_option("--out", waves_opt.out_path, "output CSV path");

    VerifyOptions verify_opt;
    CLI::App* verify = app.add_subcommand("verify", "wave estimate and identity reports");
    add_fixture_flags(verify, verify_opt);
    verify->add_option("--out", verify_opt.out_path, "output JSON path");

    FitOptions fit_opt;
    CLI::App* fit = app.add_subcommand("fit", "re-fit convergence rates from a sweep CSV");
    fit->add_option("--input", fit_opt.input_path, "sweep CSV path")->required();
    fit->add_option("--gamma", fit_opt.gamma, "gas exponent (default: CSV preamble)");
    fit->add_option("--out", fit_opt.out_path, "output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed()) {
            return cmd_sweep(sweep_opt);
        }
        if (waves->parsed()) {
            return cmd_waves(waves_opt);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_opt);
        }
        if (fit->parsed()) {
            return cmd_fit(fit_opt);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace vvlab::cli
