#pragma once

#include "common.hpp"
#include "risk.hpp"
#include "scenario.hpp"
#include "solution.hpp"
#include "trainer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace jumpwave {

// sampler -> build family -> grid -> fit, with the seed overriding the
// scenario's training seed.
std::pair<Solution, TrainReport> run_fit(const Scenario& scenario, std::uint64_t seed,
                                         bool verbose = false);

std::string serialize_solution(const Solution& solution);
Solution parse_solution(const std::string& text);
Solution load_solution(const std::string& path); // file or artifact directory

// Deterministic JSON train report; wall times are deliberately left out so
// re-runs with the same seed hash identically (they go to the progress log).
std::string train_report_json(const TrainReport& report);
std::string loss_history_csv(const TrainReport& report);

// FNV-1a 64-bit content hash, hex encoded.
std::string content_hash(const std::string& bytes);

// Writes solution.txt, train_report.json, loss_history.csv and a
// manifest.json declaring every file with its content hash.
void write_fit_artifact(const std::string& dir, const std::string& scenario_id,
                        std::uint64_t seed, const Solution& solution,
                        const TrainReport& report);

std::string risk_csv_header();
std::string risk_csv_row(const RiskReport& report, const std::string& pricer_tag);
std::string risk_report_json(const RiskReport& report, const std::string& pricer_tag);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace jumpwave
