#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <jumpwave.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

namespace {

const char* kTinyScenario = R"([scenario tiny]
provenance = test
market.r = 0.05
market.sigma = 0.20
market.strike = 100.0
market.maturity = 1.0
market.lambda = 0.10
market.mu_j = -0.005
market.sigma_j = 0.10
market.s_min = 20.0
market.s_max = 300.0
family.jx_min = 1.5
family.jx_levels = 2
family.jt_min = 1.5
family.jt_levels = 2
points.collocation = 128
points.terminal = 64
points.boundary = 32
grid.n = 512
train.stage1.epochs = 50
train.stage2.epochs = 20
train.stage3.max_iterations = 50
risk.n_paths = 2000
)";

std::string scenario_path() {
    const char* env = std::getenv("JW_SCENARIO_FILE");
    REQUIRE(env != nullptr);
    return env;
}

} // namespace

TEST_CASE("version string") {
    CHECK(std::string(jw_version()) == "0.1.0");
}

TEST_CASE("scenario handles: open, enumerate, market access, errors") {
    jw_error err{};
    jw_scenarios* s = nullptr;
    REQUIRE(jw_scenarios_open(scenario_path().c_str(), &s, &err) == JW_OK);
    CHECK(jw_scenarios_count(s) == 6);
    CHECK(jw_scenarios_id(s, 0) != nullptr);
    CHECK(jw_scenarios_id(s, 99) == nullptr);

    double r = 0.0, sigma = 0.0, strike = 0.0, maturity = 0.0, lambda = 0.0;
    double mu_j = 0.0, sigma_j = 0.0, s_min = 0.0, s_max = 0.0;
    REQUIRE(jw_scenarios_market(s, "low_jump_intensity", &r, &sigma, &strike, &maturity,
                                &lambda, &mu_j, &sigma_j, &s_min, &s_max, &err) == JW_OK);
    CHECK(r == 0.05);
    CHECK(strike == 100.0);
    CHECK(lambda == 0.10);

    CHECK(jw_scenarios_market(s, "no_such_id", &r, &sigma, &strike, &maturity, &lambda, &mu_j,
                              &sigma_j, &s_min, &s_max, &err) == JW_EINVAL);
    CHECK(err.code == JW_EINVAL);
    CHECK(err.message[0] != '\0');
    jw_scenarios_close(s);

    jw_scenarios* missing = nullptr;
    CHECK(jw_scenarios_open("/nonexistent/file.txt", &missing, &err) == JW_EIO);

    jw_scenarios* bad = nullptr;
    CHECK(jw_scenarios_from_text("[scenario x]\nmarket.r = oops\n", &bad, &err) == JW_EPARSE);
    CHECK(std::string(err.message).find("line") != std::string::npos);
}

TEST_CASE("reference pricing through the C API") {
    jw_error err{};
    jw_scenarios* s = nullptr;
    REQUIRE(jw_scenarios_open(scenario_path().c_str(), &s, &err) == JW_OK);

    double series = 0.0, cm = 0.0, bs = 0.0, mc = 0.0;
    REQUIRE(jw_reference_price(s, "low_jump_intensity", JW_METHOD_SERIES, 100.0, 0.5, 0, 1,
                               &series, &err) == JW_OK);
    REQUIRE(jw_reference_price(s, "low_jump_intensity", JW_METHOD_CARR_MADAN, 100.0, 0.5, 0, 1,
                               &cm, &err) == JW_OK);
    REQUIRE(jw_reference_price(s, "low_jump_intensity", JW_METHOD_BS, 100.0, 0.5, 0, 1, &bs,
                               &err) == JW_OK);
    REQUIRE(jw_reference_price(s, "low_jump_intensity", JW_METHOD_MC, 100.0, 0.5, 200000, 1,
                               &mc, &err) == JW_OK);

    CHECK(std::abs(series - cm) <= 1e-4);
    CHECK(std::abs(series - mc) <= 0.2);
    CHECK(bs < series); // jumps add variance here
    jw_scenarios_close(s);
}

TEST_CASE("fit / save / load / price / greeks / risk via the C API") {
    namespace fs = std::filesystem;
    jw_error err{};
    jw_scenarios* s = nullptr;
    REQUIRE(jw_scenarios_from_text(kTinyScenario, &s, &err) == JW_OK);

    jw_solution* sol = nullptr;
    REQUIRE(jw_fit(s, "tiny", 7, 0, &sol, &err) == JW_OK);
    CHECK(jw_solution_n_atoms(sol) > 0);
    CHECK(std::isfinite(jw_solution_final_loss(sol)));

    double price = 0.0;
    REQUIRE(jw_solution_price(sol, 100.0, 0.5, &price, &err) == JW_OK);
    CHECK(std::isfinite(price));

    CHECK(jw_solution_price(sol, 5.0, 0.5, &price, &err) == JW_EDOMAIN);

    double delta = 0.0, gamma = 0.0, theta = 0.0;
    REQUIRE(jw_solution_greeks(sol, 100.0, 0.5, &delta, &gamma, &theta, &err) == JW_OK);
    CHECK(std::isfinite(delta));

    double s_lo = 0.0, s_hi = 0.0, t_lo = 0.0, t_hi = 0.0;
    REQUIRE(jw_solution_domain(sol, &s_lo, &s_hi, &t_lo, &t_hi, &err) == JW_OK);
    CHECK(s_lo == 20.0);
    CHECK(s_hi == 300.0);

    fs::path dir = fs::temp_directory_path() / "jw_capi_artifact";
    fs::remove_all(dir);
    REQUIRE(jw_solution_save(sol, dir.string().c_str(), &err) == JW_OK);
    CHECK(fs::exists(dir / "solution.txt"));
    CHECK(fs::exists(dir / "train_report.json"));
    CHECK(fs::exists(dir / "loss_history.csv"));
    CHECK(fs::exists(dir / "manifest.json"));

    jw_solution* loaded = nullptr;
    REQUIRE(jw_solution_open(dir.string().c_str(), &loaded, &err) == JW_OK);
    double price2 = 0.0;
    REQUIRE(jw_solution_price(loaded, 100.0, 0.5, &price2, &err) == JW_OK);
    CHECK(price2 == price);
    // Loaded solutions carry no training report.
    CHECK(std::isnan(jw_solution_final_loss(loaded)));
    char* json = nullptr;
    CHECK(jw_solution_report_json(loaded, &json, &err) == JW_EINVAL);

    REQUIRE(jw_solution_report_json(sol, &json, &err) == JW_OK);
    CHECK(std::string(json).find("final_loss") != std::string::npos);
    jw_string_free(json);

    char* csv = nullptr;
    REQUIRE(jw_solution_history_csv(sol, &csv, &err) == JW_OK);
    CHECK(std::string(csv).rfind("stage,step,loss,lr", 0) == 0);
    jw_string_free(csv);

    jw_risk_result risk{};
    REQUIRE(jw_risk(s, "tiny", sol, 3, &risk, &err) == JW_OK);
    CHECK(risk.cvar >= risk.var);
    CHECK(risk.n_paths == 2000);

    jw_risk_result risk_series{};
    REQUIRE(jw_risk(s, "tiny", nullptr, 3, &risk_series, &err) == JW_OK);
    CHECK(risk_series.cvar >= risk_series.var);
    CHECK(risk_series.mean_rel_error_pct < 0.01); // Carr-Madan vs series

    char* row = nullptr;
    REQUIRE(jw_risk_csv_row(s, "tiny", nullptr, 3, &row, &err) == JW_OK);
    CHECK(std::string(row).rfind("tiny,series,", 0) == 0);
    jw_string_free(row);
    CHECK(std::string(jw_risk_csv_header()).rfind("scenario,", 0) == 0);

    char* rjson = nullptr;
    REQUIRE(jw_risk_json(s, "tiny", nullptr, 3, &rjson, &err) == JW_OK);
    CHECK(std::string(rjson).find("\"cvar\"") != std::string::npos);
    jw_string_free(rjson);

    jw_solution_close(loaded);
    jw_solution_close(sol);
    jw_scenarios_close(s);
    fs::remove_all(dir);
}

TEST_CASE("same seed reproduces identical fits through the C API") {
    jw_error err{};
    jw_scenarios* s = nullptr;
    REQUIRE(jw_scenarios_from_text(kTinyScenario, &s, &err) == JW_OK);

    jw_solution* a = nullptr;
    jw_solution* b = nullptr;
    REQUIRE(jw_fit(s, "tiny", 21, 0, &a, &err) == JW_OK);
    REQUIRE(jw_fit(s, "tiny", 21, 0, &b, &err) == JW_OK);

    double pa = 0.0, pb = 0.0;
    REQUIRE(jw_solution_price(a, 97.0, 0.3, &pa, &err) == JW_OK);
    REQUIRE(jw_solution_price(b, 97.0, 0.3, &pb, &err) == JW_OK);
    CHECK(pa == pb);
    CHECK(jw_solution_final_loss(a) == jw_solution_final_loss(b));

    jw_solution_close(a);
    jw_solution_close(b);
    jw_scenarios_close(s);
}
