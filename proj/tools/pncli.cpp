// pncli: evaluate phase-noise models, simulate time-shift paths, estimate
// spectra, and fit the parametric spectrum model.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pnkit/pnkit.hpp"

namespace {

using namespace pnkit;

uint64_t default_seed() {
    if (const char* env = std::getenv("PNKIT_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw error(std::string("PNKIT_SEED is not an unsigned integer: ") + env);
        }
    }
    return 1;
}

std::vector<double> log_grid(double fmin, double fmax, int ppd) {
    require(fmin > 0.0 && fmax > fmin, "grid: requires 0 < fmin < fmax");
    require(ppd >= 1, "grid: points per decade must be >= 1");
    std::vector<double> f;
    const double decades = std::log10(fmax / fmin);
    const int n = static_cast<int>(std::floor(decades * ppd)) + 1;
    for (int i = 0; i < n; ++i) f.push_back(fmin * std::pow(10.0, static_cast<double>(i) / ppd));
    if (f.back() < fmax * (1.0 - 1e-12)) f.push_back(fmax);
    return f;
}

std::filesystem::path indexed_path(const std::filesystem::path& base, int index) {
    std::filesystem::path p = base;
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "_r%03d", index);
    p.replace_filename(base.stem().string() + suffix + base.extension().string());
    return p;
}

struct ModelArgs {
    std::string kind;
    double f0 = 0.0, c = 0.0;
    double c_ref = 0.0, c_vco = 0.0, f_pll = 0.0, m = 1.0, tol = 1e-9;
    double f_3db_ref = 0.0, f_tr = 0.0, f_nf = 0.0;
    int k_ref = 3, k_vco = 3;
    bool squared_denominators = false;
    double fmin = 1.0, fmax = 1e7;
    int ppd = 100;
    std::string out;
};

int run_model(const ModelArgs& a) {
    const auto grid = log_grid(a.fmin, a.fmax, a.ppd);
    PsdTrace trace;
    trace.freqs = grid;
    trace.levels.resize(grid.size());
    if (a.kind == "lorentzian") {
        const OscillatorSpec spec(a.f0, a.c);
        for (std::size_t i = 0; i < grid.size(); ++i)
            trace.levels[i] = lorentzian_psd_dbc(spec, grid[i]);
    } else if (a.kind == "pll-series") {
        const PllSpec pll(OscillatorSpec(a.f0 / a.m, a.c_ref), OscillatorSpec(a.f0, a.c_vco),
                          a.f_pll, a.m);
        for (std::size_t i = 0; i < grid.size(); ++i)
            trace.levels[i] = pll_psd_series_dbc(pll, grid[i], a.tol);
    } else if (a.kind == "simplified") {
        const SpectrumModelParams params(a.f_3db_ref, a.f_tr, a.f_pll, std::nullopt, a.k_ref,
                                         a.k_vco);
        for (std::size_t i = 0; i < grid.size(); ++i)
            trace.levels[i] = simplified_psd_dbc(params, grid[i]);
    } else if (a.kind == "extended") {
        const SpectrumModelParams params(a.f_3db_ref, a.f_tr, a.f_pll, a.f_nf, a.k_ref, a.k_vco);
        const auto conv = a.squared_denominators ? FloorDenominator::squared_ratio_pow_k
                                                 : FloorDenominator::ratio_pow_k;
        for (std::size_t i = 0; i < grid.size(); ++i)
            trace.levels[i] = extended_psd_dbc(params, grid[i], conv);
    } else {
        throw error("model: unknown --kind '" + a.kind + "'");
    }
    write_psd_csv(trace, a.out);
    return 0;
}

struct SimArgs {
    std::string kind;
    double f0 = 0.0, c = 0.0;
    double c_ref = 0.0, c_vco = 0.0, f_pll = 0.0, m = 1.0;
    double fs = 0.0;
    std::size_t n = 0;
    uint64_t seed = 0;
    int realizations = 1;
    std::string out;
    std::string format = "csv";
};

void write_series(const TimeShiftSeries& s, const std::filesystem::path& path,
                  const std::string& format) {
    if (format == "csv")
        write_alpha_csv(s, path);
    else if (format == "bin")
        write_alpha_binary(s, path);
    else
        throw error("sim: unknown --format '" + format + "'");
}

TimeShiftSeries simulate_one(const SimArgs& a, uint64_t seed) {
    if (a.kind == "vco") return gen_wiener_alpha(OscillatorSpec(a.f0, a.c), a.fs, a.n, seed);
    if (a.kind == "pll") {
        const PllSpec pll(OscillatorSpec(a.f0 / a.m, a.c_ref), OscillatorSpec(a.f0, a.c_vco),
                          a.f_pll, a.m);
        if (pll_step_wants_warning(pll, a.fs))
            std::cerr << "warning: 2*pi*f_pll/fs = " << pll_step_product(pll, a.fs)
                      << " exceeds 0.1; loop statistics carry Euler bias\n";
        return gen_pll_alpha(pll, a.fs, a.n, seed).pll;
    }
    throw error("sim: unknown --kind '" + a.kind + "'");
}

int run_sim(const SimArgs& a) {
    if (a.realizations == 1) {
        write_series(simulate_one(a, a.seed), a.out, a.format);
        return 0;
    }
    for (int r = 0; r < a.realizations; ++r)
        write_series(simulate_one(a, realization_seed(a.seed, static_cast<uint64_t>(r))),
                     indexed_path(a.out, r), a.format);
    return 0;
}

struct PsdArgs {
    std::string in;  // alpha binary; empty = simulate
    SimArgs sim;
    double f0 = 0.0;
    std::size_t segment_len = 0;
    double overlap = 0.5;
    std::string window = "hann";
    int averages = 1;
    int ppd = 0;  // 0 = no log resampling
    std::string out;
};

int run_psd(const PsdArgs& a) {
    if (a.in.empty())
        require(!a.sim.kind.empty() && a.sim.fs > 0.0 && a.sim.n > 0,
                "psd: without --in, simulation options --kind/--f0/--fs/--n are required");
    WelchConfig cfg;
    cfg.segment_len = a.segment_len;
    cfg.overlap_fraction = a.overlap;
    if (a.window == "hann")
        cfg.window = Window::hann;
    else if (a.window == "rect")
        cfg.window = Window::rect;
    else
        throw error("psd: unknown --window '" + a.window + "'");

    PsdTrace trace;
    if (!a.in.empty()) {
        const TimeShiftSeries s = read_alpha_binary(a.in);
        const auto x = alpha_to_baseband(s, a.f0);
        trace = welch_psd(x, 1.0 / s.dt, cfg);
    } else {
        require(a.averages >= 1, "psd: --averages must be >= 1");
        std::vector<PsdTrace> traces(a.averages);
        const int workers =
            std::max(1, std::min<int>(static_cast<int>(std::thread::hardware_concurrency()),
                                      a.averages));
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        std::vector<std::string> errors(a.averages);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < a.averages; r = next.fetch_add(1)) {
                    try {
                        const TimeShiftSeries s =
                            simulate_one(a.sim, realization_seed(a.sim.seed, static_cast<uint64_t>(r)));
                        const auto x = alpha_to_baseband(s, a.sim.f0);
                        traces[r] = welch_psd(x, a.sim.fs, cfg);
                    } catch (const std::exception& e) {
                        errors[r] = e.what();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errors)
            if (!e.empty()) throw error(e);
        trace = average_traces(traces);
    }
    if (a.ppd > 0) trace = log_resample(trace, a.ppd);
    write_psd_csv(trace, a.out);
    return 0;
}

struct FitArgs {
    std::string in;
    double f0 = 0.0;
    int k_ref = 3, k_vco = 3;
    std::vector<double> regions;  // 8 bounds: ref lo,hi, tr lo,hi, vco lo,hi, nf lo,hi
    double spur_mask_db = 0.0;
    std::string out;
};

int run_fit(const FitArgs& a) {
    const PsdTrace trace = parse_psd_csv(a.in);
    FitConfig cfg;
    cfg.f0_hz = a.f0;
    cfg.k_ref = a.k_ref;
    cfg.k_vco = a.k_vco;
    if (!a.regions.empty()) {
        require(a.regions.size() == 8, "fit: --regions needs 8 bounds (lo,hi per band)");
        cfg.segments = SegmentSpec{{a.regions[0], a.regions[1]},
                                   {a.regions[2], a.regions[3]},
                                   {a.regions[4], a.regions[5]},
                                   {a.regions[6], a.regions[7]}};
    }
    if (a.spur_mask_db > 0.0) cfg.spur_mask_db = a.spur_mask_db;
    const FitReport rep = fit_pipeline(trace, cfg);
    write_fit_report_json(rep, a.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-noise modeling toolkit"};
    app.require_subcommand(1);

    ModelArgs ma;
    SimArgs sa;
    PsdArgs pa;
    FitArgs fa;

    auto* model = app.add_subcommand("model", "evaluate a closed-form spectrum on a log grid");
    model->add_option("--kind", ma.kind, "lorentzian | pll-series | simplified | extended")
        ->required();
    model->add_option("--f0", ma.f0, "carrier frequency, Hz");
    model->add_option("--c", ma.c, "oscillator constant, s");
    model->add_option("--c-ref", ma.c_ref, "reference oscillator constant, s");
    model->add_option("--c-vco", ma.c_vco, "vco oscillator constant, s");
    model->add_option("--f-pll", ma.f_pll, "loop bandwidth, Hz");
    model->add_option("--m", ma.m, "divider ratio");
    model->add_option("--tol", ma.tol, "series tail tolerance");
    model->add_option("--f-3db-ref", ma.f_3db_ref, "reference 3 dB cut-off, Hz");
    model->add_option("--f-tr", ma.f_tr, "transition start, Hz");
    model->add_option("--f-nf", ma.f_nf, "noise-floor start, Hz");
    model->add_option("--k-ref", ma.k_ref, "reference roll-off exponent");
    model->add_option("--k-vco", ma.k_vco, "vco roll-off exponent");
    model->add_flag("--squared-denominators", ma.squared_denominators,
                    "extended model: use (f^2/fc^2)^k denominators");
    model->add_option("--fmin", ma.fmin, "grid start, Hz");
    model->add_option("--fmax", ma.fmax, "grid end, Hz");
    model->add_option("--ppd", ma.ppd, "grid points per decade");
    model->add_option("--out", ma.out, "output CSV path")->required();

    auto add_sim_options = [](CLI::App* cmd, SimArgs& s, bool required) {
        auto req = [&](CLI::Option* o) { return required ? o->required() : o; };
        req(cmd->add_option("--kind", s.kind, "vco | pll"));
        req(cmd->add_option("--f0", s.f0, "carrier frequency, Hz"));
        cmd->add_option("--c", s.c, "oscillator constant (vco kind), s");
        cmd->add_option("--c-ref", s.c_ref, "reference oscillator constant, s");
        cmd->add_option("--c-vco", s.c_vco, "vco oscillator constant, s");
        cmd->add_option("--f-pll", s.f_pll, "loop bandwidth, Hz");
        cmd->add_option("--m", s.m, "divider ratio");
        req(cmd->add_option("--fs", s.fs, "sampling rate, Hz"));
        req(cmd->add_option("--n", s.n, "samples per realization"));
        cmd->add_option("--seed", s.seed, "master seed (default: PNKIT_SEED or 1)");
        if (required) {
            cmd->add_option("--realizations", s.realizations, "number of output files");
            cmd->add_option("--out", s.out, "output path (csv or bin)")->required();
            cmd->add_option("--format", s.format, "csv | bin");
        }
    };

    auto* sim = app.add_subcommand("sim", "generate time-shift sample paths");
    add_sim_options(sim, sa, true);

    auto* psd = app.add_subcommand("psd", "Welch phase-noise spectrum of simulated or stored paths");
    psd->add_option("--in", pa.in, "alpha binary input (skips simulation)");
    psd->add_option("--f0-in", pa.f0, "carrier for --in baseband conversion, Hz");
    add_sim_options(psd, pa.sim, false);
    psd->add_option("--segment-len", pa.segment_len, "Welch segment length (0 = n/8)");
    psd->add_option("--overlap", pa.overlap, "segment overlap fraction [0, 0.9]");
    psd->add_option("--window", pa.window, "hann | rect");
    psd->add_option("--averages", pa.averages, "realizations to average");
    psd->add_option("--ppd", pa.ppd, "log-resample to points per decade (0 = off)");
    psd->add_option("--out", pa.out, "output CSV path")->required();

    auto* fit = app.add_subcommand("fit", "fit the parametric spectrum model to a trace");
    fit->add_option("--in", fa.in, "input trace CSV")->required();
    fit->add_option("--f0", fa.f0, "carrier during measurement, Hz")->required();
    fit->add_option("--k-ref", fa.k_ref, "reference roll-off exponent");
    fit->add_option("--k-vco", fa.k_vco, "vco roll-off exponent");
    fit->add_option("--regions", fa.regions,
                    "manual band bounds: ref_lo ref_hi tr_lo tr_hi vco_lo vco_hi nf_lo nf_hi")
        ->expected(8);
    fit->add_option("--spur-mask-db", fa.spur_mask_db, "residual mask for spurs, dB (0 = off)");
    fit->add_option("--out", fa.out, "output report JSON path")->required();

    if (argc <= 1) {
        std::cerr << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (!sim->count("--seed")) sa.seed = default_seed();
        if (!psd->count("--seed")) pa.sim.seed = default_seed();
        if (model->parsed()) return run_model(ma);
        if (sim->parsed()) return run_sim(sa);
        if (psd->parsed()) return run_psd(pa);
        if (fit->parsed()) return run_fit(fa);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
