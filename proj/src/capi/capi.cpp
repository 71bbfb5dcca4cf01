#include "jumpwave.h"

#include "core/artifact.hpp"
#include "core/pricers.hpp"
#include "core/risk.hpp"
#include "core/scenario.hpp"
#include "core/solution.hpp"
#include "core/trainer.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

using namespace jumpwave;

struct jw_scenarios {
    std::vector<Scenario> scenarios;
};

struct jw_solution {
    Solution solution;
    TrainReport report;
    bool has_report = false;
    std::string scenario_id;
};

namespace {

void set_error(jw_error* err, jw_status code, const char* msg) {
    if (!err) return;
    err->code = code;
    std::strncpy(err->message, msg, sizeof(err->message) - 1);
    err->message[sizeof(err->message) - 1] = '\0';
}

void clear_error(jw_error* err) {
    set_error(err, JW_OK, "");
}

// Runs fn, translating exceptions to status codes.
template <typename Fn>
jw_status guarded(jw_error* err, jw_status parse_as, Fn&& fn) {
    try {
        clear_error(err);
        fn();
        return JW_OK;
    } catch (const invalid_input& e) {
        jw_status code = parse_as;
        if (std::strstr(e.what(), "outside") != nullptr) code = JW_EDOMAIN;
        else if (std::strstr(e.what(), "cannot open") != nullptr) code = JW_EIO;
        set_error(err, code, e.what());
        return code;
    } catch (const numeric_error& e) {
        set_error(err, JW_EDIVERGED, e.what());
        return JW_EDIVERGED;
    } catch (const std::exception& e) {
        set_error(err, JW_EINTERNAL, e.what());
        return JW_EINTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

const Scenario& get_scenario(const jw_scenarios* s, const char* id) {
    require(s != nullptr && id != nullptr, "null scenario handle or id");
    return find_scenario(s->scenarios, id);
}

double reference_price_impl(const MarketParams& params, jw_method method, double spot,
                            double t, std::int64_t n_paths, std::uint64_t seed) {
    const double tau = params.maturity - t;
    require(tau >= 0.0, "probe time is past maturity");
    if (tau <= 1e-12) return std::max(spot - params.strike, 0.0); // expiry
    switch (method) {
        case JW_METHOD_SERIES:
            return merton_series_call(params, spot, tau);
        case JW_METHOD_CARR_MADAN:
            return carr_madan_call(params, spot, tau).price;
        case JW_METHOD_BS:
            return black_scholes_call(spot, params.strike, params.r, params.sigma, tau);
        case JW_METHOD_MC:
            return monte_carlo_call(params, spot, tau, n_paths > 0 ? n_paths : 1000000, seed)
                .price;
    }
    throw invalid_input("unknown pricing method");
}

// Shared risk path: surrogate-vs-series probe error when a solution is
// supplied, Carr-Madan-vs-series otherwise.
RiskReport make_risk_report(const Scenario& sc, const jw_solution* sol, std::uint64_t seed,
                            std::string& pricer_tag) {
    static const double probe_spots[4] = {90.0, 100.0, 110.0, 150.0};
    static const double probe_times[4] = {0.75, 0.50, 0.25, 0.75};

    std::vector<double> model(4), reference(4);
    for (int i = 0; i < 4; ++i) {
        const double tau = sc.market.maturity - probe_times[i];
        reference[static_cast<std::size_t>(i)] =
            merton_series_call(sc.market, probe_spots[i], tau);
        model[static_cast<std::size_t>(i)] =
            sol ? sol->solution.price(probe_spots[i], probe_times[i])
                : carr_madan_call(sc.market, probe_spots[i], tau).price;
    }
    const double mre = mean_relative_error(model, reference);

    PriceFn price;
    if (sol) {
        const Solution& surrogate = sol->solution;
        price = [&surrogate](double spot, double t) {
            return surrogate.value_extended(std::log(spot), t);
        };
        pricer_tag = "surrogate";
    } else {
        const MarketParams params = sc.market;
        price = [params](double spot, double t) {
            return merton_series_call(params, spot, params.maturity - t);
        };
        pricer_tag = "series";
    }
    return risk_report(sc.market, price, sc.id, mre, sc.risk, seed);
}

} // namespace

extern "C" {

const char* jw_version(void) {
    return "0.1.0";
}

jw_status jw_scenarios_open(const char* path, jw_scenarios** out, jw_error* err) {
    return guarded(err, JW_EPARSE, [&] {
        require(path != nullptr && out != nullptr, "null argument");
        auto* handle = new jw_scenarios{load_scenario_file(path)};
        *out = handle;
    });
}

jw_status jw_scenarios_from_text(const char* text, jw_scenarios** out, jw_error* err) {
    return guarded(err, JW_EPARSE, [&] {
        require(text != nullptr && out != nullptr, "null argument");
        auto* handle = new jw_scenarios{parse_scenario_file(text)};
        *out = handle;
    });
}

void jw_scenarios_close(jw_scenarios* s) {
    delete s;
}

int jw_scenarios_count(const jw_scenarios* s) {
    return s ? static_cast<int>(s->scenarios.size()) : 0;
}

const char* jw_scenarios_id(const jw_scenarios* s, int idx) {
    if (!s || idx < 0 || idx >= static_cast<int>(s->scenarios.size())) return nullptr;
    return s->scenarios[static_cast<std::size_t>(idx)].id.c_str();
}

jw_status jw_scenarios_market(const jw_scenarios* s, const char* id, double* r, double* sigma,
                              double* strike, double* maturity, double* lambda, double* mu_j,
                              double* sigma_j, double* s_min, double* s_max, jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        const Scenario& sc = get_scenario(s, id);
        if (r) *r = sc.market.r;
        if (sigma) *sigma = sc.market.sigma;
        if (strike) *strike = sc.market.strike;
        if (maturity) *maturity = sc.market.maturity;
        if (lambda) *lambda = sc.market.lambda;
        if (mu_j) *mu_j = sc.market.mu_j;
        if (sigma_j) *sigma_j = sc.market.sigma_j;
        if (s_min) *s_min = sc.market.s_min;
        if (s_max) *s_max = sc.market.s_max;
    });
}

jw_status jw_fit(const jw_scenarios* s, const char* id, uint64_t seed, int verbose,
                 jw_solution** out, jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        require(out != nullptr, "null output pointer");
        const Scenario& sc = get_scenario(s, id);
        auto [solution, report] = run_fit(sc, seed, verbose != 0);
        auto* handle = new jw_solution{std::move(solution), std::move(report), true, sc.id};
        *out = handle;
    });
}

jw_status jw_solution_save(const jw_solution* sol, const char* dir, jw_error* err) {
    return guarded(err, JW_EIO, [&] {
        require(sol != nullptr && dir != nullptr, "null argument");
        require(sol->has_report, "solution has no training report to save");
        write_fit_artifact(dir, sol->scenario_id, sol->report.seed, sol->solution, sol->report);
    });
}

jw_status jw_solution_open(const char* path, jw_solution** out, jw_error* err) {
    return guarded(err, JW_EPARSE, [&] {
        require(path != nullptr && out != nullptr, "null argument");
        auto* handle = new jw_solution{load_solution(path), {}, false, ""};
        *out = handle;
    });
}

void jw_solution_close(jw_solution* sol) {
    delete sol;
}

int jw_solution_n_atoms(const jw_solution* sol) {
    return sol ? static_cast<int>(sol->solution.family.size()) : 0;
}

double jw_solution_final_loss(const jw_solution* sol) {
    if (!sol || !sol->has_report) return std::numeric_limits<double>::quiet_NaN();
    return sol->report.final_loss;
}

jw_status jw_solution_domain(const jw_solution* sol, double* s_lo, double* s_hi, double* t_lo,
                             double* t_hi, jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        require(sol != nullptr, "null solution handle");
        if (s_lo) *s_lo = sol->solution.params.s_min;
        if (s_hi) *s_hi = sol->solution.params.s_max;
        if (t_lo) *t_lo = sol->solution.family.t_lo;
        if (t_hi) *t_hi = sol->solution.family.t_hi;
    });
}

jw_status jw_solution_price(const jw_solution* sol, double spot, double t, double* price,
                            jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        require(sol != nullptr && price != nullptr, "null argument");
        *price = sol->solution.price(spot, t);
    });
}

jw_status jw_solution_greeks(const jw_solution* sol, double spot, double t, double* delta,
                             double* gamma, double* theta, jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        require(sol != nullptr, "null solution handle");
        GreeksAt g = greeks(sol->solution, spot, t);
        if (delta) *delta = g.delta;
        if (gamma) *gamma = g.gamma;
        if (theta) *theta = g.theta;
    });
}

jw_status jw_solution_reference_price(const jw_solution* sol, jw_method method, double spot,
                                      double t, int64_t n_paths, uint64_t seed, double* price,
                                      jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        require(sol != nullptr && price != nullptr, "null argument");
        *price = reference_price_impl(sol->solution.params, method, spot, t, n_paths, seed);
    });
}

jw_status jw_reference_price(const jw_scenarios* s, const char* id, jw_method method,
                             double spot, double t, int64_t n_paths, uint64_t seed,
                             double* price, jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        require(price != nullptr, "null output pointer");
        const Scenario& sc = get_scenario(s, id);
        *price = reference_price_impl(sc.market, method, spot, t, n_paths, seed);
    });
}

jw_status jw_risk(const jw_scenarios* s, const char* id, const jw_solution* sol, uint64_t seed,
                  jw_risk_result* out, jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        require(out != nullptr, "null output pointer");
        const Scenario& sc = get_scenario(s, id);
        std::string tag;
        RiskReport rep = make_risk_report(sc, sol, seed, tag);
        out->mean_rel_error_pct = rep.mean_rel_error_pct;
        out->var = rep.var;
        out->cvar = rep.cvar;
        out->level = rep.level;
        out->n_paths = rep.n_paths;
    });
}

jw_status jw_risk_json(const jw_scenarios* s, const char* id, const jw_solution* sol,
                       uint64_t seed, char** json_out, jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        require(json_out != nullptr, "null output pointer");
        const Scenario& sc = get_scenario(s, id);
        std::string tag;
        RiskReport rep = make_risk_report(sc, sol, seed, tag);
        *json_out = dup_string(risk_report_json(rep, tag));
    });
}

jw_status jw_risk_csv_row(const jw_scenarios* s, const char* id, const jw_solution* sol,
                          uint64_t seed, char** row_out, jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        require(row_out != nullptr, "null output pointer");
        const Scenario& sc = get_scenario(s, id);
        std::string tag;
        RiskReport rep = make_risk_report(sc, sol, seed, tag);
        *row_out = dup_string(risk_csv_row(rep, tag));
    });
}

const char* jw_risk_csv_header(void) {
    static const std::string header = risk_csv_header();
    return header.c_str();
}

jw_status jw_solution_report_json(const jw_solution* sol, char** json_out, jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        require(sol != nullptr && json_out != nullptr, "null argument");
        require(sol->has_report, "solution has no training report");
        *json_out = dup_string(train_report_json(sol->report));
    });
}

jw_status jw_solution_history_csv(const jw_solution* sol, char** csv_out, jw_error* err) {
    return guarded(err, JW_EINVAL, [&] {
        require(sol != nullptr && csv_out != nullptr, "null argument");
        require(sol->has_report, "solution has no training report");
        *csv_out = dup_string(loss_history_csv(sol->report));
    });
}

void jw_string_free(char* s) {
    delete[] s;
}

} // extern "C"
