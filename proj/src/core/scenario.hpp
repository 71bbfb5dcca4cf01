#pragma once

#include "common.hpp"
#include "jump.hpp"
#include "market.hpp"
#include "risk.hpp"
#include "sobol.hpp"
#include "trainer.hpp"
#include "wavelet.hpp"

#include <string>
#include <vector>

namespace jumpwave {

struct GridConfig {
    std::size_t n = 2048;
    double pad = -1.0; // auto
};

// One named market scenario with everything a run needs.
struct Scenario {
    std::string id;
    std::string provenance = "user";
    std::string note;
    MarketParams market;
    FamilyConfig family;
    TrainingSizes sizes;
    std::size_t sobol_skip = 0;
    LossWeights weights;
    GridConfig grid;
    TrainConfig train;
    RiskConfig risk;

    void validate() const;
};

// Plain-text key-value scenario file: `[scenario <id>]` headers followed by
// `key = value` lines, `#` comments. Parse errors carry line numbers.
std::vector<Scenario> parse_scenario_file(const std::string& text);
std::vector<Scenario> load_scenario_file(const std::string& path);

std::string serialize_scenarios(const std::vector<Scenario>& scenarios);

const Scenario& find_scenario(const std::vector<Scenario>& scenarios, const std::string& id);

} // namespace jumpwave
