// runner.hpp — Executes run/sweep/oracle configurations and figure presets;
// emits deterministic CSV with a '#'-prefixed provenance block.

#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "starkbat/ergotropy.hpp"
#include "starkbat/numeric.hpp"
#include "starkbat/open_dynamics.hpp"
#include "starkbat/scenario.hpp"

namespace starkbat {

// ---------------------------------------------------------------------------
// Worker pool (sweep points are independent; results keep grid order)

inline unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("STARKBAT_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

template <typename Result>
std::vector<Result> parallel_map_ordered(std::size_t count,
                                         const std::function<Result(std::size_t)>& fn) {
    std::vector<Result> results(count);
    const unsigned workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                results[i] = fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

// ---------------------------------------------------------------------------
// Single run -> time-series CSV

inline std::vector<BathSpec> bath_specs(const RunConfig& cfg) {
    std::vector<BathSpec> out;
    for (const auto& b : cfg.baths)
        out.push_back(BathSpec{b.site, 1.0 / b.T, b.eta, cfg.omega_c});
    return out;
}

namespace detail {

inline void write_provenance(std::ostringstream& os, const std::string& kind,
                             const cfg::ordered_json& config,
                             const std::vector<std::string>& provenance) {
    os << "# starkbat " << kind << " csv\n";
    os << "# schema_version " << kSchemaVersion << "\n";
    os << "# config " << config.dump() << "\n";
    for (const auto& line : provenance) os << "# " << line << "\n";
}

inline bool wants(const RunConfig& cfg, const std::string& name) {
    for (const auto& o : cfg.outputs)
        if (o == name) return true;
    return false;
}

}  // namespace detail

// Time series of the requested observables. Closed dynamics evolve under the
// charger alone; open dynamics integrate the GKSL generator whose
// eigenoperators come from the raw battery Hamiltonian.
inline std::string run_csv(const RunConfig& cfg) {
    const ScenarioContext ctx = build_context(cfg.scenario);
    const std::vector<double> times = linspace(0.0, cfg.time.t_max, cfg.time.points);
    const bool want_work = detail::wants(cfg, "work");
    const bool want_power = detail::wants(cfg, "power");
    const bool want_erg = detail::wants(cfg, "ergotropy");

    std::vector<double> work_vals(times.size(), 0.0), erg_vals(times.size(), 0.0);
    if (cfg.dynamics == DynamicsKind::closed) {
        if (want_work || want_power) {
            WorkFunction w(ctx);
            for (std::size_t i = 0; i < times.size(); ++i) work_vals[i] = w(times[i]);
        }
        if (want_erg) {
            for (std::size_t i = 0; i < times.size(); ++i) {
                const DensityState rho_t = evolve(ctx.rho0, ctx.charger, times[i]);
                erg_vals[i] = ergotropy(rho_t, ctx.battery_obs).ergotropy;
            }
        }
    } else {
        std::vector<EigenOperatorSet> ops;
        const auto baths = bath_specs(cfg);
        for (const auto& b : baths)
            ops.push_back(build_eigenoperators(ctx.battery_raw,
                                               number_operator(ctx.basis, b.site)));
        GeneratorOptions gopts;
        gopts.include_battery_in_coherent = cfg.include_battery_in_coherent;
        const LindbladGenerator gen(ctx.charger, baths, ops, gopts);
        const std::vector<DensityState> states = integrate(gen, ctx.rho0, times);
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (want_work || want_power)
                work_vals[i] = work(states[i], ctx.rho0, ctx.battery_obs);
            if (want_erg) erg_vals[i] = ergotropy(states[i], ctx.battery_obs).ergotropy;
        }
    }

    std::ostringstream os;
    detail::write_provenance(os, "run", cfg::serialize(cfg), cfg.provenance);
    os << "t";
    if (want_work) os << ",work";
    if (want_power) os << ",power";
    if (want_erg) os << ",ergotropy";
    os << "\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        os << format_g17(times[i]);
        if (want_work) os << ',' << format_g17(work_vals[i]);
        if (want_power)
            os << ',' << format_g17(times[i] > 0.0 ? work_vals[i] / times[i] : 0.0);
        if (want_erg) os << ',' << format_g17(erg_vals[i]);
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Sweeps

namespace detail {

inline void set_axis_value(RunConfig& cfg, std::optional<HubbardParams>& cmp_battery,
                           std::optional<HubbardParams>& cmp_charger, const std::string& param,
                           double value) {
    auto int_value = [&](const char* what) {
        const double rounded = std::round(value);
        if (std::abs(value - rounded) > 1e-9)
            throw config_error(std::string("sweep axis ") + what + " needs an integer value");
        return static_cast<int>(rounded);
    };
    auto set_hubbard = [&](HubbardParams& p, const std::string& field) {
        if (field == "J") p.J = value;
        else if (field == "U") p.U = value;
        else if (field == "r") p.r = value;
        else throw config_error("unknown sweep axis param '" + param + "'");
    };
    auto ensure = [&](std::optional<HubbardParams>& opt) -> HubbardParams& {
        if (!opt) opt = HubbardParams{};
        return *opt;
    };

    if (param.rfind("battery.", 0) == 0) {
        set_hubbard(cfg.scenario.battery, param.substr(8));
    } else if (param.rfind("charger.", 0) == 0) {
        set_hubbard(cfg.scenario.charger, param.substr(8));
    } else if (param.rfind("compare.battery.", 0) == 0) {
        set_hubbard(ensure(cmp_battery), param.substr(16));
    } else if (param.rfind("compare.charger.", 0) == 0) {
        set_hubbard(ensure(cmp_charger), param.substr(16));
    } else if (param == "N") {
        cfg.scenario.basis.sites = int_value("N");
    } else if (param == "n") {
        if (cfg.scenario.basis.statistics != Statistics::boson)
            throw config_error("sweep axis n requires model 'bose'");
        cfg.scenario.basis.n = int_value("n");
    } else if (param == "n_up") {
        cfg.scenario.basis.n_up = int_value("n_up");
    } else if (param == "n_down") {
        cfg.scenario.basis.n_down = int_value("n_down");
    } else if (param == "filling") {
        const int n = int_value("filling");
        if (cfg.scenario.basis.statistics == Statistics::boson) {
            cfg.scenario.basis.n = n;
        } else {
            const auto [nu, nd] = matched_fermion_filling(n);
            cfg.scenario.basis.n_up = nu;
            cfg.scenario.basis.n_down = nd;
        }
    } else if (param == "cap") {
        cfg.scenario.basis.cap = int_value("cap");
    } else if (param == "beta" || param == "initial.beta") {
        cfg.scenario.beta = value;
    } else if (param == "omega_c") {
        cfg.omega_c = value;
    } else {
        throw config_error("unknown sweep axis param '" + param + "'");
    }
}

inline ChargingScenario fermionic_counterpart(const ChargingScenario& bose) {
    ChargingScenario fermi = bose;
    fermi.basis.statistics = Statistics::fermion;
    const auto [nu, nd] = matched_fermion_filling(bose.basis.n);
    fermi.basis.n = -1;
    fermi.basis.n_up = nu;
    fermi.basis.n_down = nd;
    return fermi;
}

}  // namespace detail

struct SweepRow {
    std::vector<double> axis_values;
    std::vector<double> outputs;
    std::string error;
};

inline std::vector<std::string> sweep_output_columns(SweepReduction r) {
    switch (r) {
        case SweepReduction::pmax: return {"pmax", "t_star"};
        case SweepReduction::final_work: return {"work"};
        case SweepReduction::steady_ergotropy: return {"ergotropy"};
        case SweepReduction::delta_pmax: return {"delta_pmax"};
        case SweepReduction::delta_fb: return {"delta_fb"};
    }
    return {};
}

inline SweepRow evaluate_sweep_point(const SweepConfig& sweep,
                                     const std::vector<double>& axis_values) {
    SweepRow row;
    row.axis_values = axis_values;
    const std::size_t n_out = sweep_output_columns(sweep.reduction).size();
    row.outputs.assign(n_out, std::numeric_limits<double>::quiet_NaN());
    try {
        RunConfig cfg = sweep.base;
        std::optional<HubbardParams> cmp_battery = sweep.compare_battery;
        std::optional<HubbardParams> cmp_charger = sweep.compare_charger;
        for (std::size_t a = 0; a < sweep.axes.size(); ++a)
            detail::set_axis_value(cfg, cmp_battery, cmp_charger, sweep.axes[a].param,
                                   axis_values[a]);

        switch (sweep.reduction) {
            case SweepReduction::pmax: {
                const PowerResult p = max_average_power(cfg.scenario);
                row.outputs = {p.p_max, p.t_star};
                break;
            }
            case SweepReduction::final_work: {
                if (cfg.dynamics == DynamicsKind::closed) {
                    const ScenarioContext ctx = build_context(cfg.scenario);
                    row.outputs = {WorkFunction(ctx)(cfg.time.t_max)};
                } else {
                    const ScenarioContext ctx = build_context(cfg.scenario);
                    const auto baths = bath_specs(cfg);
                    std::vector<EigenOperatorSet> ops;
                    for (const auto& b : baths)
                        ops.push_back(build_eigenoperators(
                            ctx.battery_raw, number_operator(ctx.basis, b.site)));
                    GeneratorOptions gopts;
                    gopts.include_battery_in_coherent = cfg.include_battery_in_coherent;
                    const LindbladGenerator gen(ctx.charger, baths, ops, gopts);
                    const auto states = integrate(gen, ctx.rho0, {cfg.time.t_max});
                    row.outputs = {work(states.back(), ctx.rho0, ctx.battery_obs)};
                }
                break;
            }
            case SweepReduction::steady_ergotropy: {
                const ScenarioContext ctx = build_context(cfg.scenario);
                const auto baths = bath_specs(cfg);
                std::vector<EigenOperatorSet> ops;
                for (const auto& b : baths)
                    ops.push_back(build_eigenoperators(ctx.battery_raw,
                                                       number_operator(ctx.basis, b.site)));
                GeneratorOptions gopts;
                gopts.include_battery_in_coherent = cfg.include_battery_in_coherent;
                const LindbladGenerator gen(ctx.charger, baths, ops, gopts);
                const SteadyStateResult ss =
                    steady_state(gen, ctx.rho0, sweep.steady.tol, sweep.steady.t_cap);
                row.outputs = {ergotropy(ss.state, ctx.battery_obs).ergotropy};
                if (!ss.converged)
                    row.error = "steady state not converged by t_cap (residual " +
                                format_g17(ss.residual) + ")";
                break;
            }
            case SweepReduction::delta_pmax: {
                ChargingScenario c2 = cfg.scenario;
                if (cmp_battery) c2.battery = *cmp_battery;
                if (cmp_charger) c2.charger = *cmp_charger;
                row.outputs = {delta_pmax(cfg.scenario, c2)};
                break;
            }
            case SweepReduction::delta_fb: {
                const ChargingScenario fermi = detail::fermionic_counterpart(cfg.scenario);
                row.outputs = {delta_fb(cfg.scenario, fermi)};
                break;
            }
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

// One row per grid point in row-major axis order; per-point failures land in
// the trailing error column and the sweep continues.
inline std::string sweep_csv(const SweepConfig& sweep) {
    std::vector<std::vector<double>> grid;
    if (sweep.axes.size() == 1) {
        for (double v : sweep.axes[0].values) grid.push_back({v});
    } else {
        for (double v0 : sweep.axes[0].values)
            for (double v1 : sweep.axes[1].values) grid.push_back({v0, v1});
    }
    const std::vector<SweepRow> rows = parallel_map_ordered<SweepRow>(
        grid.size(), [&](std::size_t i) { return evaluate_sweep_point(sweep, grid[i]); });

    std::ostringstream os;
    detail::write_provenance(os, "sweep", cfg::serialize(sweep), sweep.provenance);
    for (const auto& axis : sweep.axes) os << axis.param << ',';
    const auto out_cols = sweep_output_columns(sweep.reduction);
    for (const auto& c : out_cols) os << c << ',';
    os << "error\n";
    for (const auto& row : rows) {
        for (double v : row.axis_values) os << format_g17(v) << ',';
        for (double v : row.outputs) os << format_g17(v) << ',';
        os << row.error << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Closed-form reference checks

struct OracleOptions {
    double r_c{1.0};
    double U_c{1.0};
    double J_c{1.0};
    double J{1.0};
    int sites{2};
    int n{2};
    int n_up{-1};
    int n_down{-1};
    double t_max{20.0};
    int points{1000};
    double tol{1e-9};
};

struct OracleOutcome {
    std::string statistics;
    double max_deviation{0.0};
};

struct OracleReport {
    OracleCase oracle_case{OracleCase::prop1};
    std::vector<OracleOutcome> outcomes;
    double tol{1e-9};
    bool pass{false};
};

namespace detail {

inline double oracle_max_deviation(const ChargingScenario& sc, OracleCase c,
                                   const OracleParams& p, double t_max, int points) {
    const ScenarioContext ctx = build_context(sc);
    const WorkFunction w(ctx);
    double dev = 0.0;
    for (double t : linspace(0.0, t_max, points))
        dev = std::max(dev, std::abs(w(t) - analytic_work_oracle(c, p, t)));
    return dev;
}

}  // namespace detail

inline OracleReport run_oracle(OracleCase c, const OracleOptions& opt) {
    OracleReport report;
    report.oracle_case = c;
    report.tol = opt.tol;
    OracleParams p;
    p.r_c = opt.r_c;
    p.U_c = opt.U_c;
    p.J_c = opt.J_c;
    p.J = opt.J;
    p.sites = opt.sites;

    auto bose = [&](int sites, int n, HubbardParams battery, HubbardParams charger,
                    bool normalize = true) {
        ChargingScenario sc;
        sc.basis = BasisSpec{Statistics::boson, sites, n, -1, -1, 2};
        sc.battery = battery;
        sc.charger = charger;
        sc.normalize = normalize;
        return sc;
    };
    auto fermi = [&](int sites, int n_up, int n_down, HubbardParams battery,
                     HubbardParams charger) {
        ChargingScenario sc;
        sc.basis = BasisSpec{Statistics::fermion, sites, -1, n_up, n_down, 1};
        sc.battery = battery;
        sc.charger = charger;
        return sc;
    };
    auto add = [&](const std::string& label, const ChargingScenario& sc) {
        report.outcomes.push_back(
            {label, detail::oracle_max_deviation(sc, c, p, opt.t_max, opt.points)});
    };

    const HubbardParams hop_battery{opt.J, 0.0, 0.0};
    const HubbardParams diag_charger{0.0, opt.U_c, opt.r_c};
    switch (c) {
        case OracleCase::prop1:
            add("boson", bose(2, 2, hop_battery, diag_charger));
            add("fermion", fermi(2, 1, 1, hop_battery, diag_charger));
            break;
        case OracleCase::prop2_boson:
            add("boson", bose(2, 2, {0.0, 1.0, 0.0}, {opt.J_c, 0.0, 0.0}));
            break;
        case OracleCase::prop2_fermion:
            add("fermion", fermi(2, 1, 1, {0.0, 1.0, 0.0}, {opt.J_c, 0.0, 0.0}));
            break;
        case OracleCase::prop2_stark_battery:
            add("boson", bose(2, 2, {0.0, 0.0, 1.0}, {opt.J_c, 0.0, 0.0}));
            add("fermion", fermi(2, 1, 1, {0.0, 0.0, 1.0}, {opt.J_c, 0.0, 0.0}));
            break;
        case OracleCase::prop3: {
            const HubbardParams tilt_charger{0.0, 0.0, opt.r_c};
            add("boson", bose(opt.sites, opt.n, hop_battery, tilt_charger));
            const auto [nu_def, nd_def] = matched_fermion_filling(opt.n);
            const int nu = opt.n_up >= 0 ? opt.n_up : nu_def;
            const int nd = opt.n_down >= 0 ? opt.n_down : nd_def;
            add("fermion", fermi(opt.sites, nu, nd, hop_battery, tilt_charger));
            break;
        }
        case OracleCase::eq8_single_particle:
            add("boson",
                bose(opt.sites, 1, hop_battery, {0.0, 0.0, opt.r_c}, /*normalize=*/false));
            break;
    }
    report.pass = true;
    for (const auto& o : report.outcomes)
        if (!(o.max_deviation < opt.tol)) report.pass = false;
    return report;
}

inline std::string oracle_report_text(const OracleReport& report) {
    std::ostringstream os;
    os << "oracle " << to_string(report.oracle_case) << "\n";
    for (const auto& o : report.outcomes)
        os << "  " << o.statistics << " max deviation " << format_g17(o.max_deviation) << "\n";
    os << (report.pass ? "PASS" : "FAIL") << " (tolerance " << format_g17(report.tol) << ")\n";
    return os.str();
}

}  // namespace starkbat
