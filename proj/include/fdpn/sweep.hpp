// SPDX-License-Identifier: Apache-2.0
//
// Batch sweep engine: loads a recipe (JSON), runs the trial harness over
// a parameter grid and emits deterministic CSV or JSON-lines rows.
//
// CSV schema (frozen, header mandatory):
//   variant,axis,axis_value,gain_db,gain_stderr,sinr_db,op_est,op_cancel,n_trials,seed
#ifndef FDPN_SWEEP_HPP
#define FDPN_SWEEP_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdpn/channel.hpp"
#include "fdpn/common.hpp"
#include "fdpn/estimator.hpp"
#include "fdpn/metrics.hpp"

namespace fdpn {

enum class SweepAxis { ISR, M, SNR };
enum class OutputFormat { Csv, JsonLines };

inline const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::ISR: return "ISR";
        case SweepAxis::M: return "M";
        default: return "SNR";
    }
}

struct VariantSpec {
    std::string label;
    EstimatorConfig est;
    std::optional<OscKind> oscillator_override;
};

struct SweepSpec {
    ScenarioConfig scenario;  // oscillator is materialized per point from kind + P_ICI
    OscKind oscillator_kind = OscKind::FreeRunning;
    SweepAxis axis = SweepAxis::ISR;
    std::vector<double> values;
    std::vector<VariantSpec> variants;
    int n_trials = 100;
    std::uint64_t master_seed = 1;
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;

    void validate() const {
        require(!values.empty(), "sweep: empty value list");
        require(!variants.empty(), "sweep: no estimator variants");
        require(n_trials >= 1, "sweep: n_trials must be >= 1");
        for (std::size_t i = 0; i < variants.size(); ++i) {
            require(!variants[i].label.empty(), "sweep: variant label must not be empty");
            for (std::size_t j = i + 1; j < variants.size(); ++j)
                require(variants[i].label != variants[j].label,
                        "sweep: duplicate variant label '" + variants[i].label + "'");
        }
    }
};

struct SweepRow {
    std::string variant;
    std::string axis;
    double axis_value = 0.0;
    double gain_db = 0.0;
    double gain_stderr = 0.0;
    double sinr_db = 0.0;
    std::uint64_t op_est = 0;
    std::uint64_t op_cancel = 0;
    int n_trials = 0;
    std::uint64_t seed = 0;
};

/// Per-chain oscillator model whose combined transmit+receive process has
/// the requested total in-band ICI power.
inline OscillatorModel calibrated_chain_oscillator(OscKind kind, double p_ici_dbc, int n_fft,
                                                   double carrier_hz = 2.4e9,
                                                   double sample_interval_s = 5.0e-8) {
    const OscillatorModel shape = kind == OscKind::FreeRunning
                                      ? free_running_shape(carrier_hz, sample_interval_s)
                                      : pll_default_shape(carrier_hz, sample_interval_s);
    // combined(scale(shape, s), scale(shape, s)) == scale(combined(shape, shape), s),
    // so calibrating the doubled shape and halving recovers the per-chain model.
    const OscillatorModel comb = calibrate_to_ici_target(combined(shape, shape), p_ici_dbc, n_fft);
    OscillatorModel chain = comb;
    chain.kind = shape.kind;
    chain.c_param *= 0.5;  // the C parameters of the two chains add
    // The combined model holds two scaled copies of the shape's component
    // list; one copy is exactly the per-chain share.
    chain.pll_components.assign(comb.pll_components.begin(),
                                comb.pll_components.begin() +
                                    static_cast<std::ptrdiff_t>(shape.pll_components.size()));
    return chain;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec_in) {
    SweepSpec spec = spec_in;
    spec.validate();

    // Stable output order: variants sorted by label, values ascending.
    std::vector<std::size_t> vorder(spec.variants.size());
    for (std::size_t i = 0; i < vorder.size(); ++i) vorder[i] = i;
    std::sort(vorder.begin(), vorder.end(), [&](std::size_t a, std::size_t b) {
        return spec.variants[a].label < spec.variants[b].label;
    });
    std::vector<std::size_t> order_by_value(spec.values.size());
    for (std::size_t i = 0; i < order_by_value.size(); ++i) order_by_value[i] = i;
    std::sort(order_by_value.begin(), order_by_value.end(),
              [&](std::size_t a, std::size_t b) { return spec.values[a] < spec.values[b]; });

    std::vector<SweepRow> rows;
    for (std::size_t vo = 0; vo < vorder.size(); ++vo) {
        const std::size_t vi = vorder[vo];
        const VariantSpec& variant = spec.variants[vi];
        for (std::size_t wo = 0; wo < order_by_value.size(); ++wo) {
            const std::size_t wi = order_by_value[wo];
            const double value = spec.values[wi];

            ScenarioConfig sc = spec.scenario;
            EstimatorConfig est = variant.est;
            OscKind kind = variant.oscillator_override.value_or(spec.oscillator_kind);
            switch (spec.axis) {
                case SweepAxis::ISR: sc.isr_db = value; break;
                case SweepAxis::SNR: sc.snr_db = value; break;
                case SweepAxis::M:
                    require(value >= 0.0 && value == std::floor(value) &&
                                static_cast<long>(value) % 2 == 0,
                            "sweep: M axis values must be even nonnegative integers");
                    est.order_m = static_cast<int>(value);
                    break;
            }
            sc.derive_isr_if_absolute();
            sc.oscillator = calibrated_chain_oscillator(kind, sc.p_ici_dbc, sc.frame.n_fft);

            const std::uint64_t point_seed = derive_seed(spec.master_seed, vi, wi);
            const CancellationReport rep = run_trials(sc, est, spec.n_trials, point_seed);

            SweepRow row;
            row.variant = variant.label;
            row.axis = axis_name(spec.axis);
            row.axis_value = value;
            row.gain_db = rep.gain_db;
            row.gain_stderr = rep.gain_stderr_db;
            row.sinr_db = rep.sinr_db;
            row.op_est = rep.ops_per_symbol.estimation_total();
            row.op_cancel = rep.ops_per_symbol.cancel;
            row.n_trials = rep.n_trials;
            row.seed = point_seed;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace detail {

inline std::string fmt_double(double v, const char* fmt = "%.4f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return std::string(buf);
}

}  // namespace detail

inline std::string to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "variant,axis,axis_value,gain_db,gain_stderr,sinr_db,op_est,op_cancel,n_trials,seed\n";
    for (const SweepRow& r : rows) {
        out += r.variant;
        out += ',';
        out += r.axis;
        out += ',';
        out += detail::fmt_double(r.axis_value, "%g");
        out += ',';
        out += detail::fmt_double(r.gain_db);
        out += ',';
        out += detail::fmt_double(r.gain_stderr);
        out += ',';
        out += detail::fmt_double(r.sinr_db);
        out += ',';
        out += std::to_string(r.op_est);
        out += ',';
        out += std::to_string(r.op_cancel);
        out += ',';
        out += std::to_string(r.n_trials);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

inline std::string to_jsonl(const std::vector<SweepRow>& rows) {
    std::string out;
    for (const SweepRow& r : rows) {
        nlohmann::ordered_json j;
        j["variant"] = r.variant;
        j["axis"] = r.axis;
        j["axis_value"] = r.axis_value;
        j["gain_db"] = detail::fmt_double(r.gain_db);
        j["gain_stderr"] = detail::fmt_double(r.gain_stderr);
        j["sinr_db"] = detail::fmt_double(r.sinr_db);
        j["op_est"] = r.op_est;
        j["op_cancel"] = r.op_cancel;
        j["n_trials"] = r.n_trials;
        j["seed"] = r.seed;
        out += j.dump();
        out += '\n';
    }
    return out;
}

namespace detail {

template <typename T>
T req_field(const nlohmann::json& j, const char* key, const char* ctx) {
    if (!j.contains(key))
        throw std::invalid_argument(std::string("recipe: missing field '") + key + "' in " + ctx);
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("recipe: bad value for '") + key + "' in " + ctx +
                                    ": " + e.what());
    }
}

template <typename T>
T opt_field(const nlohmann::json& j, const char* key, T fallback, const char* ctx) {
    if (!j.contains(key)) return fallback;
    return req_field<T>(j, key, ctx);
}

inline OscKind parse_kind(const std::string& s, const char* ctx) {
    if (s == "free_running") return OscKind::FreeRunning;
    if (s == "pll") return OscKind::Pll;
    throw std::invalid_argument(std::string("recipe: unknown oscillator '") + s + "' in " + ctx +
                                " (expected 'free_running' or 'pll')");
}

inline EstDomain parse_domain(const std::string& s, const char* ctx) {
    if (s == "time") return EstDomain::TimeDomain;
    if (s == "freq" || s == "frequency") return EstDomain::FrequencyDomain;
    throw std::invalid_argument(std::string("recipe: unknown domain '") + s + "' in " + ctx +
                                " (expected 'time' or 'freq')");
}

}  // namespace detail

inline SweepSpec parse_recipe(const nlohmann::json& j) {
    using detail::opt_field;
    using detail::req_field;
    SweepSpec spec;

    const nlohmann::json& sc = j.contains("scenario") ? j.at("scenario") : nlohmann::json::object();
    spec.scenario.isr_db = opt_field<double>(sc, "isr_db", 60.0, "scenario");
    spec.scenario.snr_db = opt_field<double>(sc, "snr_db", 20.0, "scenario");
    spec.scenario.p_ici_dbc = req_field<double>(sc, "p_ici_dbc", "scenario");
    spec.scenario.passive_suppression_db =
        opt_field<double>(sc, "passive_suppression_db", 60.0, "scenario");
    spec.scenario.tx_power_dbm = opt_field<double>(sc, "tx_power_dbm", 20.0, "scenario");
    spec.scenario.noise_floor_dbm = opt_field<double>(sc, "noise_floor_dbm", -90.0, "scenario");
    spec.scenario.flat_si_channel = opt_field<bool>(sc, "flat_si_channel", false, "scenario");
    spec.scenario.absolute_powers = opt_field<bool>(sc, "absolute_powers", false, "scenario");
    spec.oscillator_kind =
        detail::parse_kind(opt_field<std::string>(sc, "oscillator", "free_running", "scenario"),
                           "scenario");

    if (sc.contains("frame")) {
        const nlohmann::json& fr = sc.at("frame");
        FrameConfig& fc = spec.scenario.frame;
        fc.n_fft = opt_field<int>(fr, "n_fft", fc.n_fft, "frame");
        fc.pilots = opt_field<std::vector<int>>(fr, "pilots", fc.pilots, "frame");
        fc.n_training = opt_field<int>(fr, "n_training", fc.n_training, "frame");
        fc.n_data = opt_field<int>(fr, "n_data", fc.n_data, "frame");
        fc.cp_len = opt_field<int>(fr, "cp_len", fc.cp_len, "frame");
        fc.qam_order = opt_field<int>(fr, "qam_order", fc.qam_order, "frame");
    }

    const nlohmann::json& sw = j.contains("sweep") ? j.at("sweep") : nlohmann::json::object();
    const std::string axis = req_field<std::string>(sw, "axis", "sweep");
    if (axis == "ISR")
        spec.axis = SweepAxis::ISR;
    else if (axis == "M")
        spec.axis = SweepAxis::M;
    else if (axis == "SNR")
        spec.axis = SweepAxis::SNR;
    else
        throw std::invalid_argument("recipe: unknown sweep axis '" + axis + "'");
    spec.values = req_field<std::vector<double>>(sw, "values", "sweep");

    if (!j.contains("variants"))
        throw std::invalid_argument("recipe: missing field 'variants'");
    for (const nlohmann::json& vj : j.at("variants")) {
        VariantSpec v;
        v.label = req_field<std::string>(vj, "label", "variant");
        const std::string ctx = "variant '" + v.label + "'";
        v.est.domain =
            detail::parse_domain(opt_field<std::string>(vj, "domain", "time", ctx.c_str()),
                                 ctx.c_str());
        v.est.order_m = opt_field<int>(vj, "order_m", 0, ctx.c_str());
        v.est.use_exact_channel = opt_field<bool>(vj, "exact_channel", true, ctx.c_str());
        v.est.omit_cpe = opt_field<bool>(vj, "omit_cpe", false, ctx.c_str());
        if (vj.contains("oscillator"))
            v.oscillator_override =
                detail::parse_kind(req_field<std::string>(vj, "oscillator", ctx.c_str()),
                                   ctx.c_str());
        spec.variants.push_back(std::move(v));
    }

    spec.n_trials = opt_field<int>(j, "n_trials", 100, "recipe");
    spec.master_seed = opt_field<std::uint64_t>(j, "master_seed", 1, "recipe");
    spec.output_path = opt_field<std::string>(j, "output", "", "recipe");
    const std::string fmt = opt_field<std::string>(j, "format", "csv", "recipe");
    if (fmt == "csv")
        spec.format = OutputFormat::Csv;
    else if (fmt == "jsonl")
        spec.format = OutputFormat::JsonLines;
    else
        throw std::invalid_argument("recipe: unknown format '" + fmt + "' (expected csv or jsonl)");

    spec.validate();
    return spec;
}

inline SweepSpec load_recipe_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open recipe file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("recipe parse error in " + path + ": " + e.what());
    }
    return parse_recipe(j);
}

}  // namespace fdpn

#endif
