// Command-line front end for the jumpwave shared library. Everything
// numerical goes through the C API in jumpwave.h; this file only parses
// arguments and formats CSV/JSON artifacts.

#include <jumpwave.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

constexpr int kExitBadConfig = 1;
constexpr int kExitDiverged = 2;

struct ScenariosDeleter {
    void operator()(jw_scenarios* s) const { jw_scenarios_close(s); }
};
struct SolutionDeleter {
    void operator()(jw_solution* s) const { jw_solution_close(s); }
};
using ScenariosPtr = std::unique_ptr<jw_scenarios, ScenariosDeleter>;
using SolutionPtr = std::unique_ptr<jw_solution, SolutionDeleter>;

int exit_code_for(const jw_error& err) {
    return err.code == JW_EDIVERGED ? kExitDiverged : kExitBadConfig;
}

[[noreturn]] void fail(const jw_error& err) {
    std::cerr << "error: " << err.message << "\n";
    std::exit(exit_code_for(err));
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ScenariosPtr open_scenarios(const std::string& path) {
    jw_error err{};
    jw_scenarios* raw = nullptr;
    if (jw_scenarios_open(path.c_str(), &raw, &err) != JW_OK) fail(err);
    return ScenariosPtr(raw);
}

SolutionPtr open_solution(const std::string& path) {
    jw_error err{};
    jw_solution* raw = nullptr;
    if (jw_solution_open(path.c_str(), &raw, &err) != JW_OK) fail(err);
    return SolutionPtr(raw);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(kExitBadConfig);
    }
    f << content;
}

struct Probe {
    double spot;
    double time;
};

std::vector<Probe> parse_probes(const std::vector<std::string>& raw) {
    // Default to the four standard validation probes.
    if (raw.empty()) {
        return {{90.0, 0.75}, {100.0, 0.50}, {110.0, 0.25}, {150.0, 0.75}};
    }
    std::vector<Probe> probes;
    for (const std::string& item : raw) {
        std::size_t sep = item.find_first_of(":,");
        if (sep == std::string::npos) {
            std::cerr << "error: probe '" << item << "' must look like SPOT:TIME\n";
            std::exit(kExitBadConfig);
        }
        try {
            probes.push_back({std::stod(item.substr(0, sep)), std::stod(item.substr(sep + 1))});
        } catch (const std::exception&) {
            std::cerr << "error: probe '" << item << "' must look like SPOT:TIME\n";
            std::exit(kExitBadConfig);
        }
    }
    return probes;
}

jw_method method_from_name(const std::string& name) {
    if (name == "series") return JW_METHOD_SERIES;
    if (name == "carr-madan") return JW_METHOD_CARR_MADAN;
    if (name == "bs") return JW_METHOD_BS;
    if (name == "mc") return JW_METHOD_MC;
    std::cerr << "error: unknown method '" << name << "'\n";
    std::exit(kExitBadConfig);
}

// --out on the command line wins; JUMPWAVE_OUT fills in when absent.
std::string resolve_out(const std::string& cli_value, const char* fallback) {
    if (!cli_value.empty()) return cli_value;
    if (const char* env = std::getenv("JUMPWAVE_OUT")) return env;
    return fallback;
}

int cmd_fit(const std::string& scenario_file, const std::string& id, std::uint64_t seed,
            const std::string& out_dir, bool verbose) {
    ScenariosPtr scenarios = open_scenarios(scenario_file);
    jw_error err{};
    jw_solution* raw = nullptr;
    if (jw_fit(scenarios.get(), id.c_str(), seed, verbose ? 1 : 0, &raw, &err) != JW_OK) {
        fail(err);
    }
    SolutionPtr solution(raw);
    if (jw_solution_save(solution.get(), out_dir.c_str(), &err) != JW_OK) fail(err);
    std::cerr << "fit: scenario " << id << " seed " << seed << " -> " << out_dir
              << " (final loss " << jw_solution_final_loss(solution.get()) << ")\n";
    return 0;
}

int cmd_price(const std::string& scenario_file, const std::string& id,
              const std::string& solution_path, const std::string& method_name,
              const std::vector<std::string>& probe_args, std::uint64_t seed,
              std::int64_t mc_paths, const std::string& out_file) {
    SolutionPtr solution;
    if (!solution_path.empty()) solution = open_solution(solution_path);
    ScenariosPtr scenarios;
    if (!scenario_file.empty()) scenarios = open_scenarios(scenario_file);

    const bool have_method = !method_name.empty();
    if (!solution && !have_method) {
        std::cerr << "error: need --solution and/or --method\n";
        return kExitBadConfig;
    }
    if (have_method && !solution && !scenarios) {
        std::cerr << "error: --method without --solution needs --scenario-file and --id\n";
        return kExitBadConfig;
    }
    jw_method method = have_method ? method_from_name(method_name) : JW_METHOD_SERIES;

    std::vector<Probe> probes = parse_probes(probe_args);
    std::ostringstream csv;
    csv << "spot,time";
    if (solution) csv << ",surrogate";
    if (have_method) csv << "," << method_name;
    if (solution && have_method) csv << ",abs_error,rel_error_pct";
    csv << "\n";

    bool any_error = false;
    for (const Probe& p : probes) {
        csv << fmt(p.spot) << "," << fmt(p.time);
        jw_error err{};
        double model = 0.0, ref = 0.0;
        bool row_ok = true;

        if (solution) {
            if (jw_solution_price(solution.get(), p.spot, p.time, &model, &err) != JW_OK) {
                csv << ",OUT_OF_DOMAIN";
                row_ok = false;
            } else {
                csv << "," << fmt(model);
            }
        }
        if (have_method && row_ok) {
            jw_status rc;
            if (solution) {
                rc = jw_solution_reference_price(solution.get(), method, p.spot, p.time,
                                                 mc_paths, seed, &ref, &err);
            } else {
                rc = jw_reference_price(scenarios.get(), id.c_str(), method, p.spot, p.time,
                                        mc_paths, seed, &ref, &err);
            }
            if (rc != JW_OK) {
                csv << ",OUT_OF_DOMAIN";
                row_ok = false;
            } else {
                csv << "," << fmt(ref);
            }
        }
        if (solution && have_method && row_ok) {
            const double abs_err = std::abs(model - ref);
            csv << "," << fmt(abs_err) << "," << fmt(100.0 * abs_err / ref);
        }
        csv << "\n";
        if (!row_ok) any_error = true;
    }

    if (out_file.empty()) {
        std::cout << csv.str();
    } else {
        write_file(out_file, csv.str());
    }
    return any_error ? kExitBadConfig : 0;
}

int cmd_table(const std::string& scenario_file, std::uint64_t seed, const std::string& out_dir,
              bool verbose) {
    ScenariosPtr scenarios = open_scenarios(scenario_file);
    fs::create_directories(out_dir);

    std::ostringstream probes_csv;
    probes_csv << "scenario,spot,time,surrogate,series,carr_madan,abs_error,rel_error_pct\n";
    std::ostringstream risk_csv;
    risk_csv << jw_risk_csv_header();

    const Probe probes[4] = {{90.0, 0.75}, {100.0, 0.50}, {110.0, 0.25}, {150.0, 0.75}};
    bool any_failed = false;

    const int count = jw_scenarios_count(scenarios.get());
    for (int idx = 0; idx < count; ++idx) {
        const char* id = jw_scenarios_id(scenarios.get(), idx);
        jw_error err{};
        jw_solution* raw = nullptr;
        if (jw_fit(scenarios.get(), id, seed, verbose ? 1 : 0, &raw, &err) != JW_OK) {
            std::cerr << "scenario " << id << " failed: " << err.message << "\n";
            any_failed = true;
            continue;
        }
        SolutionPtr solution(raw);

        for (const Probe& p : probes) {
            double model = 0.0, series = 0.0, cm = 0.0;
            if (jw_solution_price(solution.get(), p.spot, p.time, &model, &err) != JW_OK ||
                jw_solution_reference_price(solution.get(), JW_METHOD_SERIES, p.spot, p.time, 0,
                                            seed, &series, &err) != JW_OK ||
                jw_solution_reference_price(solution.get(), JW_METHOD_CARR_MADAN, p.spot,
                                            p.time, 0, seed, &cm, &err) != JW_OK) {
                std::cerr << "scenario " << id << " probe failed: " << err.message << "\n";
                any_failed = true;
                continue;
            }
            const double abs_err = std::abs(model - series);
            probes_csv << id << "," << fmt(p.spot) << "," << fmt(p.time) << "," << fmt(model)
                       << "," << fmt(series) << "," << fmt(cm) << "," << fmt(abs_err) << ","
                       << fmt(100.0 * abs_err / series) << "\n";
        }

        char* row = nullptr;
        if (jw_risk_csv_row(scenarios.get(), id, solution.get(), seed, &row, &err) != JW_OK) {
            std::cerr << "scenario " << id << " risk failed: " << err.message << "\n";
            any_failed = true;
            continue;
        }
        risk_csv << row;
        jw_string_free(row);
        std::cerr << "scenario " << id << ": done\n";
    }

    write_file((fs::path(out_dir) / "probes.csv").string(), probes_csv.str());
    write_file((fs::path(out_dir) / "risk.csv").string(), risk_csv.str());
    return any_failed ? kExitBadConfig : 0;
}

int cmd_plotdata(const std::string& solution_path, int n_spot, int n_time,
                 const std::string& out_dir) {
    SolutionPtr solution = open_solution(solution_path);
    fs::create_directories(out_dir);
    jw_error err{};

    double s_lo = 0.0, s_hi = 0.0, t_lo = 0.0, t_hi = 0.0;
    if (jw_solution_domain(solution.get(), &s_lo, &s_hi, &t_lo, &t_hi, &err) != JW_OK) {
        fail(err);
    }

    auto spot_at = [&](int i) {
        return s_lo + (s_hi - s_lo) * static_cast<double>(i) / (n_spot - 1);
    };
    auto time_at = [&](int j) {
        return t_lo + (t_hi - t_lo) * static_cast<double>(j) / (n_time - 1);
    };

    std::ostringstream surface;
    surface << "spot,time,price\n";
    std::ostringstream error_surface;
    error_surface << "spot,time,surrogate,series,abs_error\n";
    for (int j = 0; j < n_time; ++j) {
        for (int i = 0; i < n_spot; ++i) {
            const double s = spot_at(i);
            const double t = time_at(j);
            double model = 0.0, series = 0.0;
            if (jw_solution_price(solution.get(), s, t, &model, &err) != JW_OK) fail(err);
            if (jw_solution_reference_price(solution.get(), JW_METHOD_SERIES, s, t, 0, 0,
                                            &series, &err) != JW_OK) {
                fail(err);
            }
            surface << fmt(s) << "," << fmt(t) << "," << fmt(model) << "\n";
            error_surface << fmt(s) << "," << fmt(t) << "," << fmt(model) << "," << fmt(series)
                          << "," << fmt(std::abs(model - series)) << "\n";
        }
    }
    write_file((fs::path(out_dir) / "price_surface.csv").string(), surface.str());
    write_file((fs::path(out_dir) / "error_surface.csv").string(), error_surface.str());

    std::ostringstream greeks;
    greeks << "spot,time,delta,gamma,theta\n";
    const double scan_times[3] = {t_lo, 0.5 * (t_lo + t_hi), t_lo + 0.75 * (t_hi - t_lo)};
    for (double t : scan_times) {
        for (int i = 0; i < n_spot; ++i) {
            const double s = spot_at(i);
            double delta = 0.0, gamma = 0.0, theta = 0.0;
            if (jw_solution_greeks(solution.get(), s, t, &delta, &gamma, &theta, &err) != JW_OK) {
                fail(err);
            }
            greeks << fmt(s) << "," << fmt(t) << "," << fmt(delta) << "," << fmt(gamma) << ","
                   << fmt(theta) << "\n";
        }
    }
    write_file((fs::path(out_dir) / "greeks.csv").string(), greeks.str());

    // Loss history comes from the fit artifact when one is alongside.
    fs::path src(solution_path);
    if (!fs::is_directory(src)) src = src.parent_path();
    fs::path history = src / "loss_history.csv";
    if (fs::exists(history)) {
        fs::copy_file(history, fs::path(out_dir) / "loss_history.csv",
                      fs::copy_options::overwrite_existing);
    }
    return 0;
}

int cmd_risk(const std::string& scenario_file, const std::string& id,
             const std::string& solution_path, std::uint64_t seed,
             const std::string& out_file) {
    ScenariosPtr scenarios = open_scenarios(scenario_file);
    SolutionPtr solution;
    if (!solution_path.empty()) solution = open_solution(solution_path);

    jw_error err{};
    char* json = nullptr;
    if (jw_risk_json(scenarios.get(), id.c_str(), solution.get(), seed, &json, &err) != JW_OK) {
        fail(err);
    }
    std::string text = json;
    jw_string_free(json);

    if (out_file.empty()) {
        std::cout << text;
    } else {
        write_file(out_file, text);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jumpwave: wavelet-collocation pricing for jump-diffusion European calls"};
    app.require_subcommand(1);

    std::string scenario_file, id, out, solution_path, method;
    std::uint64_t seed = 1;
    int threads = 0;
    bool verbose = false;
    std::vector<std::string> probe_args;
    std::int64_t mc_paths = 1000000;
    int nx = 50, nt = 50;

    if (const char* env = std::getenv("JUMPWAVE_THREADS")) threads = std::atoi(env);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario-file", scenario_file, "scenario file path");
        cmd->add_option("--id", id, "scenario id");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--out", out, "output file or directory");
        cmd->add_option("--threads", threads,
                        "worker cap (reserved; current build runs single-threaded)");
    };

    CLI::App* fit_cmd = app.add_subcommand("fit", "train a scenario surrogate");
    add_common(fit_cmd);
    fit_cmd->add_flag("--verbose", verbose, "log training progress to stderr");

    CLI::App* price_cmd = app.add_subcommand("price", "price probes with surrogate/reference");
    add_common(price_cmd);
    price_cmd->add_option("--solution", solution_path, "solution file or fit directory");
    price_cmd->add_option("--method", method, "series|carr-madan|bs|mc");
    price_cmd->add_option("--probe", probe_args, "probe SPOT:TIME (repeatable)");
    price_cmd->add_option("--mc-paths", mc_paths, "Monte-Carlo path count");

    CLI::App* table_cmd = app.add_subcommand("table", "fit all scenarios, emit comparison CSVs");
    add_common(table_cmd);
    table_cmd->add_flag("--verbose", verbose, "log training progress to stderr");

    CLI::App* plot_cmd = app.add_subcommand("plot-data", "emit plot-ready CSV grids");
    add_common(plot_cmd);
    plot_cmd->add_option("--solution", solution_path, "solution file or fit directory")
        ->required();
    plot_cmd->add_option("--nx", nx, "spot grid size");
    plot_cmd->add_option("--nt", nt, "time grid size");

    CLI::App* risk_cmd = app.add_subcommand("risk", "emit a risk report JSON");
    add_common(risk_cmd);
    risk_cmd->add_option("--solution", solution_path, "price with a trained solution");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitBadConfig;
    }

    (void)threads; // deterministic single-threaded build

    try {
        if (fit_cmd->parsed()) {
            if (scenario_file.empty() || id.empty()) {
                std::cerr << "error: fit needs --scenario-file and --id\n";
                return kExitBadConfig;
            }
            return cmd_fit(scenario_file, id, seed, resolve_out(out, "fit_out"), verbose);
        }
        if (price_cmd->parsed()) {
            return cmd_price(scenario_file, id, solution_path, method, probe_args, seed,
                             mc_paths, out);
        }
        if (table_cmd->parsed()) {
            if (scenario_file.empty()) {
                std::cerr << "error: table needs --scenario-file\n";
                return kExitBadConfig;
            }
            return cmd_table(scenario_file, seed, resolve_out(out, "table_out"), verbose);
        }
        if (plot_cmd->parsed()) {
            return cmd_plotdata(solution_path, nx, nt, resolve_out(out, "plot_out"));
        }
        if (risk_cmd->parsed()) {
            if (scenario_file.empty() || id.empty()) {
                std::cerr << "error: risk needs --scenario-file and --id\n";
                return kExitBadConfig;
            }
            return cmd_risk(scenario_file, id, solution_path, seed, out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }
    return kExitBadConfig;
}
