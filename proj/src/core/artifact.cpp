#include "artifact.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace jumpwave {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::pair<Solution, TrainReport> run_fit(const Scenario& scenario, std::uint64_t seed,
                                         bool verbose) {
    scenario.validate();
    TrainingSets sets = sample_training_sets(scenario.market, scenario.sizes, seed,
                                             scenario.sobol_skip);
    WaveletFamily family = build_family(scenario.market, scenario.family);
    LogGrid grid = LogGrid::make(scenario.market, scenario.grid.n, scenario.grid.pad);
    TrainConfig cfg = scenario.train;
    cfg.seed = seed;
    return fit(scenario.market, family, sets, scenario.weights, grid, cfg, verbose);
}

std::string serialize_solution(const Solution& solution) {
    std::ostringstream out;
    out << "jumpwave solution 1\n";
    const MarketParams& m = solution.params;
    out << "market " << fmt(m.r) << " " << fmt(m.sigma) << " " << fmt(m.strike) << " "
        << fmt(m.maturity) << " " << fmt(m.lambda) << " " << fmt(m.mu_j) << " "
        << fmt(m.sigma_j) << " " << fmt(m.s_min) << " " << fmt(m.s_max) << "\n";
    out << "atoms " << solution.family.size() << "\n";
    for (const WaveletAtom& a : solution.family.atoms) {
        out << fmt(a.j_x) << " " << fmt(a.k_x) << " " << fmt(a.j_t) << " " << fmt(a.k_t) << "\n";
    }
    out << "bias " << fmt(solution.b) << "\n";
    out << "coefficients " << solution.c.size() << "\n";
    for (Eigen::Index i = 0; i < solution.c.size(); ++i) {
        out << fmt(solution.c[i]) << "\n";
    }
    return out.str();
}

Solution parse_solution(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    int version = 0;
    in >> word;
    require(word == "jumpwave", "not a jumpwave solution file");
    in >> word >> version;
    require(word == "solution" && version == 1, "unsupported solution file version");

    Solution sol;
    in >> word;
    require(word == "market", "expected market line");
    MarketParams& m = sol.params;
    in >> m.r >> m.sigma >> m.strike >> m.maturity >> m.lambda >> m.mu_j >> m.sigma_j >>
        m.s_min >> m.s_max;

    std::size_t n_atoms = 0;
    in >> word >> n_atoms;
    require(word == "atoms" && n_atoms > 0, "expected atom count");
    sol.family.atoms.resize(n_atoms);
    for (WaveletAtom& a : sol.family.atoms) {
        in >> a.j_x >> a.k_x >> a.j_t >> a.k_t;
    }
    sol.family.x_lo = m.x_min();
    sol.family.x_hi = m.x_max();
    sol.family.t_lo = 0.0;
    sol.family.t_hi = m.maturity;

    // Rebuild the deduplicated x-profile index.
    std::map<std::pair<double, double>, int> profiles;
    for (WaveletAtom& a : sol.family.atoms) {
        auto key = std::make_pair(a.j_x, a.k_x);
        auto it = profiles.find(key);
        if (it == profiles.end()) {
            it = profiles.emplace(key, static_cast<int>(sol.family.x_profiles.size())).first;
            sol.family.x_profiles.push_back({a.j_x, a.k_x});
        }
        a.x_profile = it->second;
    }

    in >> word >> sol.b;
    require(word == "bias", "expected bias line");
    std::size_t n_coeff = 0;
    in >> word >> n_coeff;
    require(word == "coefficients" && n_coeff == n_atoms,
            "coefficient count must match atom count");
    sol.c.resize(static_cast<Eigen::Index>(n_coeff));
    for (Eigen::Index i = 0; i < sol.c.size(); ++i) in >> sol.c[i];
    require(static_cast<bool>(in), "truncated solution file");
    sol.params.validate();
    return sol;
}

Solution load_solution(const std::string& path) {
    namespace fs = std::filesystem;
    fs::path p(path);
    if (fs::is_directory(p)) p /= "solution.txt";
    return parse_solution(read_text_file(p.string()));
}

std::string train_report_json(const TrainReport& report) {
    nlohmann::json j;
    j["seed"] = report.seed;
    j["n_atoms"] = report.n_atoms;
    j["initial_loss"] = report.initial_loss;
    j["final_loss"] = report.final_loss;
    j["stages"] = nlohmann::json::array();
    for (const StageReport& s : report.stages) {
        nlohmann::json js;
        js["name"] = s.name;
        js["termination"] = s.termination;
        js["best_loss"] = s.best_loss;
        js["steps"] = s.loss_history.size();
        js["loss_history"] = s.loss_history;
        if (!s.lr_trace.empty()) js["lr_trace"] = s.lr_trace;
        j["stages"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

std::string loss_history_csv(const TrainReport& report) {
    std::ostringstream out;
    out << "stage,step,loss,lr\n";
    for (const StageReport& s : report.stages) {
        for (std::size_t i = 0; i < s.loss_history.size(); ++i) {
            out << s.name << "," << i + 1 << "," << fmt(s.loss_history[i]) << ",";
            if (i < s.lr_trace.size()) out << fmt(s.lr_trace[i]);
            out << "\n";
        }
    }
    return out.str();
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw invalid_input("cannot open for writing: " + path);
    f << content;
    if (!f) throw numeric_error("failed writing: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw invalid_input("cannot open file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

void write_fit_artifact(const std::string& dir, const std::string& scenario_id,
                        std::uint64_t seed, const Solution& solution,
                        const TrainReport& report) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    fs::path base(dir);

    std::map<std::string, std::string> files;
    files["solution.txt"] = serialize_solution(solution);
    files["train_report.json"] = train_report_json(report);
    files["loss_history.csv"] = loss_history_csv(report);

    nlohmann::json manifest;
    manifest["artifact"] = "jumpwave-fit";
    manifest["scenario"] = scenario_id;
    manifest["seed"] = seed;
    for (const auto& [name, content] : files) {
        write_text_file((base / name).string(), content);
        manifest["files"][name] = content_hash(content);
    }
    write_text_file((base / "manifest.json").string(), manifest.dump(2) + "\n");
}

std::string risk_csv_header() {
    return "scenario,pricer,mean_rel_error_pct,var,cvar,level,n_paths,seed\n";
}

std::string risk_csv_row(const RiskReport& report, const std::string& pricer_tag) {
    std::ostringstream out;
    out << report.scenario_id << "," << pricer_tag << "," << fmt(report.mean_rel_error_pct)
        << "," << fmt(report.var) << "," << fmt(report.cvar) << "," << fmt(report.level) << ","
        << report.n_paths << "," << report.seed << "\n";
    return out.str();
}

std::string risk_report_json(const RiskReport& report, const std::string& pricer_tag) {
    nlohmann::json j;
    j["scenario"] = report.scenario_id;
    j["pricer"] = pricer_tag;
    j["mean_rel_error_pct"] = report.mean_rel_error_pct;
    j["var"] = report.var;
    j["cvar"] = report.cvar;
    j["level"] = report.level;
    j["n_paths"] = report.n_paths;
    j["seed"] = report.seed;
    j["loss_quantiles"] = {{"q05", report.loss_q05}, {"q50", report.loss_q50},
                           {"q95", report.loss_q95}};
    return j.dump(2) + "\n";
}

} // namespace jumpwave
