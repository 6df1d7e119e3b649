// JSON / CSV emission for reports, with the resolved run configuration
// embedded for provenance.
#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "json.hpp"

#include "shortsieve/decomposition.hpp"
#include "shortsieve/dirichlet.hpp"
#include "shortsieve/stats.hpp"

namespace shortsieve {

using json = nlohmann::ordered_json;

struct RunConfig {
    std::string subcommand;
    std::map<std::string, json> params;  // every resolved flag
    std::string format = "json";         // json | csv
    std::string output_path;             // empty: stdout
    std::string prime_cache_path;
    unsigned threads = 1;

    json to_json() const {
        json j;
        j["subcommand"] = subcommand;
        j["params"] = params;
        j["format"] = format;
        j["output_path"] = output_path;
        j["prime_cache_path"] = prime_cache_path;
        j["threads"] = threads;
        return j;
    }
};

inline json to_json(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return json{{"re", z.real()}, {"im", z.imag()}};
}

inline json to_json(const Interval& iv) { return json{{"x", iv.x}, {"H", iv.H}}; }

inline json to_json(const WindowReport& r) {
    json j;
    j["interval"] = to_json(r.interval);
    j["function"] = r.function;
    j["short_sum"] = to_json(r.short_sum);
    j["main_term"] = r.main_term ? to_json(*r.main_term) : json();
    j["proxy_term"] = r.proxy_term ? to_json(*r.proxy_term) : json();
    j["relative_defect_main"] = r.relative_defect_main;
    j["relative_defect_proxy"] = r.relative_defect_proxy;
    return j;
}

inline json to_json(const RationalApproximation& r) {
    return json{{"alpha", r.alpha}, {"a", r.a}, {"q", r.q}, {"lambda", r.lambda}, {"tau", r.tau}};
}

inline json to_json(const TwistedSumReport& r) {
    json j;
    j["interval"] = to_json(r.interval);
    j["alpha"] = r.alpha;
    j["B"] = r.B;
    j["S"] = to_json(r.S);
    j["abs_S"] = r.abs_S;
    j["bound"] = r.bound;
    j["tau"] = r.tau;
    j["tau_valid"] = r.tau_valid;
    j["arc"] = r.arc_name();
    j["approx"] = r.approx ? to_json(*r.approx) : json();
    return j;
}

inline json to_json(const E2Report& r) {
    json j;
    j["window"] = to_json(r.report);
    j["split_lo"] = r.split_lo;
    j["split_hi"] = r.split_hi;
    j["total"] = r.total;
    j["included"] = r.included;
    j["excluded"] = r.excluded;
    j["excluded_fraction"] = r.excluded_fraction;
    return j;
}

inline json to_json(const CounterexampleReport& r) {
    json j;
    j["x"] = r.x;
    j["theta"] = r.theta;
    j["H"] = r.H;
    j["D"] = r.D;
    j["window_primes"] = r.window_primes;
    j["sum_outside"] = r.sum_outside;
    j["threshold"] = r.threshold;
    return j;
}

inline json to_json(const LandauResult& r) {
    json j;
    j["value"] = r.value;
    j["direct_value"] = r.direct_value;
    j["accelerated_value"] = r.accelerated_value;
    j["agreement_digits"] = r.agreement_digits;
    j["direct_cutoff"] = r.direct_cutoff;
    return j;
}

inline json to_json(const MeanValueConfig& cfg) {
    return json{{"T0", cfg.T0}, {"T1", cfg.T1}, {"step", cfg.step}, {"y1", cfg.y1}};
}

inline json to_json(const LargeValueReport& r) {
    json j;
    j["threshold"] = r.threshold;
    j["measure_estimate"] = r.measure_estimate;
    j["fraction"] = r.fraction;
    j["sup_observed"] = r.sup_observed;
    j["grid_step"] = r.grid_step;
    j["converged"] = r.converged;
    return j;
}

inline json to_json(const ClassifiedCase& c) {
    json j;
    if (c.kind == ClassifiedCase::Kind::Case1) {
        j["case"] = 1;
        j["I"] = c.I;
    } else {
        j["case"] = 2;
        j["I1"] = c.I1;
        j["I2"] = c.I2;
        j["r"] = c.r;
    }
    return j;
}

inline json to_json(const LemmaTag& tag) {
    json j;
    j["lemma"] = tag.name();
    switch (tag.kind) {
        case LemmaTag::Kind::TypeI: j["i"] = tag.index; break;
        case LemmaTag::Kind::TypeII: j["I"] = tag.I; break;
        case LemmaTag::Kind::TypeI_II:
            j["I1"] = tag.I1;
            j["I2"] = tag.I2;
            j["r"] = tag.index;
            break;
        case LemmaTag::Kind::Unhandled: break;
    }
    return j;
}

// Report schema: {experiment, params, seed, per_window, summary, config}.
// `seed` and `per_window` appear only for seeded window experiments; the
// full resolved run configuration is always embedded.
inline void emit_report(const RunConfig& cfg, json summary, std::ostream* fallback = nullptr,
                        std::optional<u64> seed = {}, json per_window = json()) {
    json payload;
    payload["experiment"] = cfg.subcommand;
    payload["params"] = cfg.params;
    if (seed) payload["seed"] = *seed;
    if (!per_window.is_null()) payload["per_window"] = per_window;
    payload["summary"] = std::move(summary);
    payload["config"] = cfg.to_json();
    std::string text = payload.dump(2) + "\n";
    if (cfg.output_path.empty()) {
        (fallback ? *fallback : std::cout) << text;
        return;
    }
    std::ofstream os(cfg.output_path);
    if (!os) throw invalid_argument_error("cannot open output path: " + cfg.output_path);
    os << text;
}

// Flat CSV: header plus one row per record.
inline void emit_csv(const RunConfig& cfg, const std::string& header,
                     const std::vector<std::string>& rows, std::ostream* fallback = nullptr) {
    std::string text = header + "\n";
    for (const auto& row : rows) text += row + "\n";
    if (cfg.output_path.empty()) {
        (fallback ? *fallback : std::cout) << text;
        return;
    }
    std::ofstream os(cfg.output_path);
    if (!os) throw invalid_argument_error("cannot open output path: " + cfg.output_path);
    os << text;
}

}  // namespace shortsieve
