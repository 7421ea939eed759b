// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "fdpn/sweep.hpp"

using namespace fdpn;
using Catch::Approx;

namespace {

nlohmann::json tiny_recipe() {
    return nlohmann::json::parse(R"({
      "scenario": {
        "p_ici_dbc": -40.0,
        "isr_db": 50.0,
        "snr_db": 20.0,
        "oscillator": "free_running",
        "frame": {"n_fft": 64, "n_training": 2, "n_data": 2, "cp_len": 16, "qam_order": 4}
      },
      "sweep": {"axis": "ISR", "values": [50, 40]},
      "variants": [
        {"label": "b-time-m8", "domain": "time", "order_m": 8, "exact_channel": true},
        {"label": "a-cpe", "domain": "time", "order_m": 0, "exact_channel": true}
      ],
      "n_trials": 3,
      "master_seed": 99,
      "format": "csv"
    })");
}

}  // namespace

TEST_CASE("recipe parsing fills the spec and rejects malformed input") {
    const SweepSpec spec = parse_recipe(tiny_recipe());
    REQUIRE(spec.axis == SweepAxis::ISR);
    REQUIRE(spec.values == std::vector<double>{50, 40});
    REQUIRE(spec.variants.size() == 2);
    REQUIRE(spec.variants[0].est.order_m == 8);
    REQUIRE(spec.n_trials == 3);

    nlohmann::json bad = tiny_recipe();
    bad["sweep"]["axis"] = "BOGUS";
    REQUIRE_THROWS_WITH(parse_recipe(bad), Catch::Matchers::ContainsSubstring("axis"));

    bad = tiny_recipe();
    bad["variants"][1]["label"] = "b-time-m8";
    REQUIRE_THROWS_WITH(parse_recipe(bad), Catch::Matchers::ContainsSubstring("duplicate"));

    bad = tiny_recipe();
    bad["scenario"].erase("p_ici_dbc");
    REQUIRE_THROWS_WITH(parse_recipe(bad), Catch::Matchers::ContainsSubstring("p_ici_dbc"));

    bad = tiny_recipe();
    bad["variants"][0]["domain"] = "sideways";
    REQUIRE_THROWS_WITH(parse_recipe(bad), Catch::Matchers::ContainsSubstring("domain"));
}

TEST_CASE("sweep rows are ordered, deterministic and schema-stable") {
    const SweepSpec spec = parse_recipe(tiny_recipe());
    const std::vector<SweepRow> rows = run_sweep(spec);
    REQUIRE(rows.size() == 4);
    // Sorted by (variant label, axis value).
    REQUIRE(rows[0].variant == "a-cpe");
    REQUIRE(rows[0].axis_value == 40.0);
    REQUIRE(rows[1].variant == "a-cpe");
    REQUIRE(rows[1].axis_value == 50.0);
    REQUIRE(rows[2].variant == "b-time-m8");
    REQUIRE(rows[3].variant == "b-time-m8");

    const std::string csv = to_csv(rows);
    REQUIRE(csv.rfind("variant,axis,axis_value,gain_db,gain_stderr,sinr_db,op_est,op_cancel,"
                      "n_trials,seed\n",
                      0) == 0);
    const std::vector<SweepRow> rows2 = run_sweep(spec);
    REQUIRE(to_csv(rows2) == csv);

    const std::string jsonl = to_jsonl(rows);
    int lines = 0;
    for (char c : jsonl)
        if (c == '\n') ++lines;
    REQUIRE(lines == 4);
    const nlohmann::json first = nlohmann::json::parse(jsonl.substr(0, jsonl.find('\n')));
    REQUIRE(first.at("variant") == "a-cpe");
}

TEST_CASE("a single-point sweep matches a direct trial run") {
    SweepSpec spec = parse_recipe(tiny_recipe());
    spec.values = {55.0};
    spec.variants.resize(1);
    const std::vector<SweepRow> rows = run_sweep(spec);
    REQUIRE(rows.size() == 1);

    ScenarioConfig sc = spec.scenario;
    sc.isr_db = 55.0;
    sc.oscillator = calibrated_chain_oscillator(spec.oscillator_kind, sc.p_ici_dbc, sc.frame.n_fft);
    const CancellationReport rep =
        run_trials(sc, spec.variants[0].est, spec.n_trials, rows[0].seed);
    REQUIRE(rows[0].gain_db == Approx(rep.gain_db).margin(1e-12));
    REQUIRE(rows[0].sinr_db == Approx(rep.sinr_db).margin(1e-12));
    REQUIRE(rows[0].n_trials == rep.n_trials);
}

TEST_CASE("M-axis sweeps validate the order values") {
    SweepSpec spec = parse_recipe(tiny_recipe());
    spec.axis = SweepAxis::M;
    spec.values = {0, 7};
    REQUIRE_THROWS_AS(run_sweep(spec), std::invalid_argument);
    spec.values = {0, 8};
    REQUIRE(run_sweep(spec).size() == 4);
}

TEST_CASE("absolute power budgets derive the ISR from the SNR axis") {
    SweepSpec spec = parse_recipe(tiny_recipe());
    spec.scenario.absolute_powers = true;
    spec.scenario.tx_power_dbm = 20.0;
    spec.scenario.passive_suppression_db = 60.0;
    spec.scenario.noise_floor_dbm = -90.0;
    spec.axis = SweepAxis::SNR;
    spec.values = {10.0};
    spec.variants.resize(1);
    const std::vector<SweepRow> rows = run_sweep(spec);
    REQUIRE(rows.size() == 1);
    // SI at -40 dBm, SOI at -80 dBm: ISR 40 dB.
    ScenarioConfig probe = spec.scenario;
    probe.snr_db = 10.0;
    probe.derive_isr_if_absolute();
    REQUIRE(probe.isr_db == Approx(40.0));
}
