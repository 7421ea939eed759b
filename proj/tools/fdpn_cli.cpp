// SPDX-License-Identifier: Apache-2.0
//
// Batch front-end: runs sweep recipes and the op-count benchmark.
//
//   fdpn --recipe recipes/fig3.json --trials 500 --out fig3.csv
//   fdpn --benchmark-opcounts [--out ledger.csv]
//
// FDPN_WORKERS limits the trial worker pool.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fdpn/fdpn.hpp"

namespace {

struct LedgerRow {
    std::string domain;
    int n_fft = 0;
    int order_m = 0;
    fdpn::OpCounts ops;
};

std::vector<LedgerRow> run_opcount_ledger() {
    using namespace fdpn;
    std::vector<LedgerRow> rows;
    const std::vector<int> orders = {8, 16, 32, 64};
    const std::vector<int> sizes = {64, 128, 256};
    for (const EstDomain domain : {EstDomain::FrequencyDomain, EstDomain::TimeDomain}) {
        for (int n : sizes) {
            for (int m : orders) {
                if (domain == EstDomain::FrequencyDomain && m > n - 2) continue;
                ScenarioConfig sc;
                sc.frame = FrameConfig::wlan20mhz();
                sc.frame.n_fft = n;
                sc.frame.cp_len = n / 4;
                sc.frame.pilots = {n / 9, n / 3, n - n / 3, n - n / 9};
                sc.frame.n_data = 4;
                sc.p_ici_dbc = -40.0;
                sc.isr_db = 60.0;
                sc.snr_db = 20.0;
                sc.oscillator = calibrated_chain_oscillator(OscKind::FreeRunning, sc.p_ici_dbc, n);
                EstimatorConfig est;
                est.domain = domain;
                est.order_m = m;
                est.use_exact_channel = true;
                const CancellationReport rep = run_trials(sc, est, 2, 0xbe9c4);
                LedgerRow row;
                row.domain = domain == EstDomain::FrequencyDomain ? "freq" : "time";
                row.n_fft = n;
                row.order_m = m;
                row.ops = rep.ops_per_symbol;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void print_ledger(const std::vector<LedgerRow>& rows, std::ostream& os) {
    os << "domain,n_fft,order_m,op_cpe,op_est_prep,op_est_solve,op_cancel\n";
    for (const LedgerRow& r : rows) {
        os << r.domain << ',' << r.n_fft << ',' << r.order_m << ',' << r.ops.cpe << ','
           << r.ops.est_prep << ',' << r.ops.est_solve << ',' << r.ops.cancel << '\n';
    }
}

double ledger_exponent(const std::vector<LedgerRow>& rows, const std::string& domain, int n_fft) {
    std::vector<double> ms, ops;
    for (const LedgerRow& r : rows) {
        if (r.domain != domain || r.n_fft != n_fft) continue;
        ms.push_back(static_cast<double>(r.order_m));
        ops.push_back(static_cast<double>(r.ops.est_solve));
    }
    return fdpn::fit_loglog_slope(ms, ops);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Full-duplex phase-noise suppression simulator"};

    std::string recipe_path;
    std::string out_path;
    std::string format;
    int trials = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool benchmark = false;

    app.add_option("--recipe", recipe_path, "Sweep recipe (JSON)");
    app.add_option("--trials", trials, "Override the recipe's trial count");
    auto* seed_opt = app.add_option("--seed", seed, "Override the recipe's master seed");
    app.add_option("--out", out_path, "Output file path (overrides the recipe)");
    app.add_option("--format", format, "Output format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    app.add_flag("--benchmark-opcounts", benchmark,
                 "Run the estimation/cancellation op-count ledger and exit");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    try {
        if (benchmark) {
            const std::vector<LedgerRow> rows = run_opcount_ledger();
            print_ledger(rows, std::cout);
            for (const char* domain : {"freq", "time"}) {
                std::printf("# est_solve exponent vs M (%s, N=64): %.3f\n", domain,
                            ledger_exponent(rows, domain, 64));
            }
            if (!out_path.empty()) {
                std::ofstream out(out_path, std::ios::binary);
                if (!out) throw std::runtime_error("cannot open output file: " + out_path);
                print_ledger(rows, out);
            }
            return 0;
        }

        if (recipe_path.empty()) {
            std::cerr << "error: --recipe is required (or --benchmark-opcounts)\n";
            return 1;
        }
        fdpn::SweepSpec spec = fdpn::load_recipe_file(recipe_path);
        if (trials > 0) spec.n_trials = trials;
        if (seed_set) spec.master_seed = seed;
        if (!out_path.empty()) spec.output_path = out_path;
        if (!format.empty())
            spec.format = format == "csv" ? fdpn::OutputFormat::Csv : fdpn::OutputFormat::JsonLines;
        spec.validate();

        const std::vector<fdpn::SweepRow> rows = fdpn::run_sweep(spec);
        const std::string payload =
            spec.format == fdpn::OutputFormat::Csv ? fdpn::to_csv(rows) : fdpn::to_jsonl(rows);
        if (!spec.output_path.empty()) {
            std::ofstream out(spec.output_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open output file: " + spec.output_path);
            out << payload;
            std::printf("wrote %zu rows to %s\n", rows.size(), spec.output_path.c_str());
        } else {
            std::cout << payload;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
