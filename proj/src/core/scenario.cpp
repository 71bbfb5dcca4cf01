#include "scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace jumpwave {

void Scenario::validate() const {
    require(!id.empty(), "scenario id must be nonempty");
    market.validate();
    require(sizes.n_collocation >= 1 && sizes.n_terminal >= 1 && sizes.n_boundary >= 1,
            "training set sizes must be positive");
    train.validate();
    require(grid.n >= 16 && is_power_of_two(grid.n), "grid.n must be a power of two >= 16");
    require(risk.horizon > 0.0 && risk.horizon < market.maturity,
            "risk.horizon must lie in (0, maturity)");
    require(risk.n_paths >= 1, "risk.n_paths must be positive");
    require(risk.level > 0.0 && risk.level < 1.0, "risk.level must lie in (0, 1)");
}

namespace {

class ParseError : public invalid_input {
public:
    ParseError(int line, const std::string& msg)
        : invalid_input("scenario file line " + std::to_string(line) + ": " + msg) {}
};

double parse_double(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ParseError(line, "field '" + key + "': expected a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t used = 0;
        long long n = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return n;
    } catch (const std::exception&) {
        throw ParseError(line, "field '" + key + "': expected an integer, got '" + v + "'");
    }
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

void apply_field(Scenario& sc, const std::string& key, const std::string& val, int line) {
    auto num = [&] { return parse_double(val, line, key); };
    auto integer = [&] { return parse_int(val, line, key); };

    if (key == "provenance") sc.provenance = val;
    else if (key == "note") sc.note = val;
    else if (key == "market.r") sc.market.r = num();
    else if (key == "market.sigma") sc.market.sigma = num();
    else if (key == "market.strike") sc.market.strike = num();
    else if (key == "market.maturity") sc.market.maturity = num();
    else if (key == "market.lambda") sc.market.lambda = num();
    else if (key == "market.mu_j") sc.market.mu_j = num();
    else if (key == "market.sigma_j") sc.market.sigma_j = num();
    else if (key == "market.s_min") sc.market.s_min = num();
    else if (key == "market.s_max") sc.market.s_max = num();
    else if (key == "family.jx_min") sc.family.j_x_min = num();
    else if (key == "family.jx_levels") sc.family.j_x_levels = static_cast<int>(integer());
    else if (key == "family.jt_min") sc.family.j_t_min = num();
    else if (key == "family.jt_levels") sc.family.j_t_levels = static_cast<int>(integer());
    else if (key == "family.spacing") sc.family.spacing = num();
    else if (key == "family.margin") sc.family.margin = static_cast<int>(integer());
    else if (key == "family.max_atoms") sc.family.max_atoms = static_cast<std::size_t>(integer());
    else if (key == "points.collocation") sc.sizes.n_collocation = static_cast<std::size_t>(integer());
    else if (key == "points.terminal") sc.sizes.n_terminal = static_cast<std::size_t>(integer());
    else if (key == "points.boundary") sc.sizes.n_boundary = static_cast<std::size_t>(integer());
    else if (key == "points.sobol_skip") sc.sobol_skip = static_cast<std::size_t>(integer());
    else if (key == "weights.pde") sc.weights.w_pde = num();
    else if (key == "weights.ic") sc.weights.w_ic = num();
    else if (key == "weights.bc") sc.weights.w_bc = num();
    else if (key == "grid.n") sc.grid.n = static_cast<std::size_t>(integer());
    else if (key == "grid.pad") sc.grid.pad = num();
    else if (key == "train.stage1.lr") sc.train.stage1.lr = num();
    else if (key == "train.stage1.epochs") sc.train.stage1.epochs = static_cast<int>(integer());
    else if (key == "train.stage1.patience") sc.train.stage1.plateau_patience = static_cast<int>(integer());
    else if (key == "train.stage1.factor") sc.train.stage1.lr_factor = num();
    else if (key == "train.stage1.min_lr") sc.train.stage1.min_lr = num();
    else if (key == "train.stage2.lr") sc.train.stage2.lr = num();
    else if (key == "train.stage2.epochs") sc.train.stage2.epochs = static_cast<int>(integer());
    else if (key == "train.stage2.patience") sc.train.stage2.plateau_patience = static_cast<int>(integer());
    else if (key == "train.stage2.factor") sc.train.stage2.lr_factor = num();
    else if (key == "train.stage2.min_lr") sc.train.stage2.min_lr = num();
    else if (key == "train.stage2.clip_norm") sc.train.stage2.clip_norm = num();
    else if (key == "train.stage3.max_iterations") sc.train.stage3.max_iterations = static_cast<int>(integer());
    else if (key == "train.stage3.memory") sc.train.stage3.memory = static_cast<int>(integer());
    else if (key == "train.stage3.c1") sc.train.stage3.c1 = num();
    else if (key == "train.stage3.c2") sc.train.stage3.c2 = num();
    else if (key == "train.stage3.tolerance") sc.train.stage3.tolerance = num();
    else if (key == "train.precondition") sc.train.precondition = integer() != 0;
    else if (key == "risk.spot0") sc.risk.spot0 = num();
    else if (key == "risk.horizon_days") sc.risk.horizon = num() / 252.0;
    else if (key == "risk.n_paths") sc.risk.n_paths = integer();
    else if (key == "risk.level") sc.risk.level = num();
    else throw ParseError(line, "unknown field '" + key + "'");
}

} // namespace

std::vector<Scenario> parse_scenario_file(const std::string& text) {
    std::vector<Scenario> scenarios;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool in_scenario = false;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
            std::string header = trim(line.substr(1, line.size() - 2));
            if (header.rfind("scenario", 0) != 0) {
                throw ParseError(line_no, "unknown section '" + header + "'");
            }
            std::string id = trim(header.substr(8));
            if (id.empty()) throw ParseError(line_no, "scenario section needs an id");
            for (const Scenario& s : scenarios) {
                if (s.id == id) throw ParseError(line_no, "duplicate scenario id '" + id + "'");
            }
            Scenario sc;
            sc.id = id;
            scenarios.push_back(std::move(sc));
            in_scenario = true;
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, "expected 'key = value', got '" + line + "'");
        }
        if (!in_scenario) throw ParseError(line_no, "field outside any [scenario] section");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) throw ParseError(line_no, "empty key or value");
        apply_field(scenarios.back(), key, val, line_no);
    }

    if (scenarios.empty()) throw invalid_input("scenario file declares no scenarios");
    for (Scenario& sc : scenarios) sc.validate();
    return scenarios;
}

std::vector<Scenario> load_scenario_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw invalid_input("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_scenario_file(buf.str());
}

std::string serialize_scenarios(const std::vector<Scenario>& scenarios) {
    std::ostringstream out;
    char buf[64];
    auto w = [&out, &buf](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << key << " = " << buf << "\n";
    };
    for (const Scenario& sc : scenarios) {
        out << "[scenario " << sc.id << "]\n";
        out << "provenance = " << sc.provenance << "\n";
        if (!sc.note.empty()) out << "note = " << sc.note << "\n";
        w("market.r", sc.market.r);
        w("market.sigma", sc.market.sigma);
        w("market.strike", sc.market.strike);
        w("market.maturity", sc.market.maturity);
        w("market.lambda", sc.market.lambda);
        w("market.mu_j", sc.market.mu_j);
        w("market.sigma_j", sc.market.sigma_j);
        w("market.s_min", sc.market.s_min);
        w("market.s_max", sc.market.s_max);
        w("family.jx_min", sc.family.j_x_min);
        out << "family.jx_levels = " << sc.family.j_x_levels << "\n";
        w("family.jt_min", sc.family.j_t_min);
        out << "family.jt_levels = " << sc.family.j_t_levels << "\n";
        w("family.spacing", sc.family.spacing);
        out << "family.margin = " << sc.family.margin << "\n";
        out << "family.max_atoms = " << sc.family.max_atoms << "\n";
        out << "points.collocation = " << sc.sizes.n_collocation << "\n";
        out << "points.terminal = " << sc.sizes.n_terminal << "\n";
        out << "points.boundary = " << sc.sizes.n_boundary << "\n";
        out << "points.sobol_skip = " << sc.sobol_skip << "\n";
        w("weights.pde", sc.weights.w_pde);
        w("weights.ic", sc.weights.w_ic);
        w("weights.bc", sc.weights.w_bc);
        out << "grid.n = " << sc.grid.n << "\n";
        w("grid.pad", sc.grid.pad);
        w("train.stage1.lr", sc.train.stage1.lr);
        out << "train.stage1.epochs = " << sc.train.stage1.epochs << "\n";
        out << "train.stage1.patience = " << sc.train.stage1.plateau_patience << "\n";
        w("train.stage1.factor", sc.train.stage1.lr_factor);
        w("train.stage1.min_lr", sc.train.stage1.min_lr);
        w("train.stage2.lr", sc.train.stage2.lr);
        out << "train.stage2.epochs = " << sc.train.stage2.epochs << "\n";
        out << "train.stage2.patience = " << sc.train.stage2.plateau_patience << "\n";
        w("train.stage2.factor", sc.train.stage2.lr_factor);
        w("train.stage2.min_lr", sc.train.stage2.min_lr);
        w("train.stage2.clip_norm", sc.train.stage2.clip_norm);
        out << "train.stage3.max_iterations = " << sc.train.stage3.max_iterations << "\n";
        out << "train.stage3.memory = " << sc.train.stage3.memory << "\n";
        w("train.stage3.c1", sc.train.stage3.c1);
        w("train.stage3.c2", sc.train.stage3.c2);
        w("train.stage3.tolerance", sc.train.stage3.tolerance);
        out << "train.precondition = " << (sc.train.precondition ? 1 : 0) << "\n";
        w("risk.spot0", sc.risk.spot0);
        w("risk.horizon_days", sc.risk.horizon * 252.0);
        out << "risk.n_paths = " << sc.risk.n_paths << "\n";
        w("risk.level", sc.risk.level);
        out << "\n";
    }
    return out.str();
}

const Scenario& find_scenario(const std::vector<Scenario>& scenarios, const std::string& id) {
    for (const Scenario& s : scenarios) {
        if (s.id == id) return s;
    }
    throw invalid_input("scenario id not found: " + id);
}

} // namespace jumpwave
