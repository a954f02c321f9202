// scenario.hpp — Run and sweep configurations: JSON schema, validation,
// serialization. Unknown keys are rejected with their JSON path.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "starkbat/closed_dynamics.hpp"

namespace starkbat {

inline constexpr int kSchemaVersion = 1;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DynamicsKind { closed, open };

struct BathConfig {
    int site{1};
    double T{1.0};
    double eta{1e-2};
    friend bool operator==(const BathConfig&, const BathConfig&) = default;
};

struct TimeGrid {
    double t_max{20.0};
    int points{1000};
    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

struct RunConfig {
    ChargingScenario scenario;
    DynamicsKind dynamics{DynamicsKind::closed};
    std::vector<BathConfig> baths;
    double omega_c{10.0};
    bool include_battery_in_coherent{false};
    TimeGrid time;
    std::vector<std::string> outputs{"work", "power", "ergotropy"};
    std::vector<std::string> provenance;
    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

enum class SweepReduction { pmax, final_work, steady_ergotropy, delta_pmax, delta_fb };

struct SweepAxis {
    std::string param;
    std::vector<double> values;
    friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

struct SteadyConfig {
    double tol{1e-8};
    double t_cap{8000.0};
    friend bool operator==(const SteadyConfig&, const SteadyConfig&) = default;
};

struct SweepConfig {
    RunConfig base;
    std::vector<SweepAxis> axes;  // 1 or 2
    SweepReduction reduction{SweepReduction::pmax};
    std::optional<HubbardParams> compare_battery;  // delta_pmax second scenario
    std::optional<HubbardParams> compare_charger;
    SteadyConfig steady;
    std::vector<std::string> provenance;
    friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

namespace cfg {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline void check_keys(const json& j, const std::vector<std::string>& allowed,
                       const std::string& path) {
    if (!j.is_object()) throw config_error("config error at " + path + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const auto& a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) throw config_error("config error at " + path + ": unknown key '" + key + "'");
    }
}

inline const json& require(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end())
        throw config_error("config error at " + path + ": missing required key '" + key + "'");
    return *it;
}

inline double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw config_error("config error at " + path + ": expected a number");
    return j.get<double>();
}

inline int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw config_error("config error at " + path + ": expected an integer");
    return j.get<int>();
}

inline bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw config_error("config error at " + path + ": expected a boolean");
    return j.get<bool>();
}

inline std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw config_error("config error at " + path + ": expected a string");
    return j.get<std::string>();
}

inline HubbardParams parse_hubbard(const json& j, const std::string& path) {
    check_keys(j, {"J", "U", "r"}, path);
    HubbardParams p;
    if (j.contains("J")) p.J = get_number(j.at("J"), path + "/J");
    if (j.contains("U")) p.U = get_number(j.at("U"), path + "/U");
    if (j.contains("r")) p.r = get_number(j.at("r"), path + "/r");
    return p;
}

inline std::vector<std::string> parse_string_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw config_error("config error at " + path + ": expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_string(j.at(i), path + "/" + std::to_string(i)));
    return out;
}

inline RunConfig parse_run_config(const json& j, const std::string& path = "") {
    check_keys(j,
               {"schema_version", "model", "N", "n", "n_up", "n_down", "cap", "battery",
                "charger", "initial", "normalize", "dynamics", "baths", "omega_c",
                "include_battery_in_coherent", "time", "outputs", "provenance"},
               path.empty() ? "/" : path);
    if (path.empty()) {
        const int version = get_int(require(j, "schema_version", "/"), "/schema_version");
        if (version != kSchemaVersion)
            throw config_error("config error at /schema_version: unsupported version " +
                               std::to_string(version));
    }
    RunConfig cfg;
    const std::string model = get_string(require(j, "model", path), path + "/model");
    if (model == "bose") {
        cfg.scenario.basis.statistics = Statistics::boson;
    } else if (model == "fermi") {
        cfg.scenario.basis.statistics = Statistics::fermion;
    } else {
        throw config_error("config error at " + path + "/model: expected 'bose' or 'fermi'");
    }
    cfg.scenario.basis.sites = get_int(require(j, "N", path), path + "/N");
    if (cfg.scenario.basis.sites < 1)
        throw config_error("config error at " + path + "/N: must be >= 1");
    if (j.contains("cap")) {
        cfg.scenario.basis.cap = get_int(j.at("cap"), path + "/cap");
        if (cfg.scenario.basis.cap < 1)
            throw config_error("config error at " + path + "/cap: must be >= 1");
    }
    if (model == "bose") {
        if (j.contains("n_up") || j.contains("n_down"))
            throw config_error("config error at " + path + ": n_up/n_down require model 'fermi'");
    } else if (j.contains("cap")) {
        throw config_error("config error at " + path + ": cap requires model 'bose'");
    }
    if (model == "bose") {
        cfg.scenario.basis.n = get_int(require(j, "n", path), path + "/n");
        if (cfg.scenario.basis.n < 0 ||
            cfg.scenario.basis.n > cfg.scenario.basis.sites * cfg.scenario.basis.cap)
            throw config_error("config error at " + path + "/n: infeasible particle number");
    } else {
        if (j.contains("n"))
            throw config_error("config error at " + path + ": n requires model 'bose'");
        cfg.scenario.basis.n_up = get_int(require(j, "n_up", path), path + "/n_up");
        cfg.scenario.basis.n_down = get_int(require(j, "n_down", path), path + "/n_down");
        if (cfg.scenario.basis.n_up < 0 || cfg.scenario.basis.n_up > cfg.scenario.basis.sites ||
            cfg.scenario.basis.n_down < 0 || cfg.scenario.basis.n_down > cfg.scenario.basis.sites)
            throw config_error("config error at " + path + ": infeasible fermion filling");
    }
    if (j.contains("battery"))
        cfg.scenario.battery = parse_hubbard(j.at("battery"), path + "/battery");
    if (j.contains("charger"))
        cfg.scenario.charger = parse_hubbard(j.at("charger"), path + "/charger");
    if (j.contains("initial")) {
        const json& init = j.at("initial");
        check_keys(init, {"kind", "beta"}, path + "/initial");
        const std::string kind = get_string(require(init, "kind", path + "/initial"),
                                            path + "/initial/kind");
        if (kind == "ground") {
            cfg.scenario.initial = InitialStateKind::ground;
        } else if (kind == "gibbs") {
            cfg.scenario.initial = InitialStateKind::gibbs;
            cfg.scenario.beta = get_number(require(init, "beta", path + "/initial"),
                                           path + "/initial/beta");
            if (!(cfg.scenario.beta >= 0.0))
                throw config_error("config error at " + path + "/initial/beta: must be >= 0");
        } else if (kind == "top") {
            cfg.scenario.initial = InitialStateKind::top;
        } else {
            throw config_error("config error at " + path +
                               "/initial/kind: expected 'ground', 'gibbs', or 'top'");
        }
        if (kind != "gibbs" && init.contains("beta"))
            throw config_error("config error at " + path + "/initial: beta requires kind 'gibbs'");
    }
    if (j.contains("normalize"))
        cfg.scenario.normalize = get_bool(j.at("normalize"), path + "/normalize");
    if (j.contains("dynamics")) {
        const std::string dyn = get_string(j.at("dynamics"), path + "/dynamics");
        if (dyn == "closed") cfg.dynamics = DynamicsKind::closed;
        else if (dyn == "open") cfg.dynamics = DynamicsKind::open;
        else throw config_error("config error at " + path + "/dynamics: expected 'closed' or 'open'");
    }
    if (j.contains("baths")) {
        const json& baths = j.at("baths");
        if (!baths.is_array())
            throw config_error("config error at " + path + "/baths: expected an array");
        for (std::size_t i = 0; i < baths.size(); ++i) {
            const std::string bp = path + "/baths/" + std::to_string(i);
            check_keys(baths.at(i), {"site", "T", "eta"}, bp);
            BathConfig b;
            b.site = get_int(require(baths.at(i), "site", bp), bp + "/site");
            b.T = get_number(require(baths.at(i), "T", bp), bp + "/T");
            b.eta = get_number(require(baths.at(i), "eta", bp), bp + "/eta");
            if (b.site != 1 && b.site != cfg.scenario.basis.sites)
                throw config_error("config error at " + bp + "/site: baths attach to edge sites");
            if (!(b.T > 0.0))
                throw config_error("config error at " + bp + "/T: must be > 0");
            if (!(b.eta > 0.0))
                throw config_error("config error at " + bp + "/eta: must be > 0");
            cfg.baths.push_back(b);
        }
    }
    if (cfg.dynamics == DynamicsKind::open && cfg.baths.empty())
        throw config_error("config error at " + path + ": open dynamics require at least one bath");
    if (cfg.dynamics == DynamicsKind::closed && !cfg.baths.empty())
        throw config_error("config error at " + path + ": baths require open dynamics");
    if (j.contains("omega_c")) {
        cfg.omega_c = get_number(j.at("omega_c"), path + "/omega_c");
        if (!(cfg.omega_c > 0.0))
            throw config_error("config error at " + path + "/omega_c: must be > 0");
    }
    if (j.contains("include_battery_in_coherent"))
        cfg.include_battery_in_coherent =
            get_bool(j.at("include_battery_in_coherent"), path + "/include_battery_in_coherent");
    if (j.contains("time")) {
        const json& time = j.at("time");
        check_keys(time, {"t_max", "points"}, path + "/time");
        cfg.time.t_max = get_number(require(time, "t_max", path + "/time"), path + "/time/t_max");
        cfg.time.points = get_int(require(time, "points", path + "/time"), path + "/time/points");
        if (!(cfg.time.t_max > 0.0))
            throw config_error("config error at " + path + "/time/t_max: must be > 0");
        if (cfg.time.points < 2)
            throw config_error("config error at " + path + "/time/points: must be >= 2");
    }
    if (j.contains("outputs")) {
        cfg.outputs = parse_string_list(j.at("outputs"), path + "/outputs");
        if (cfg.outputs.empty())
            throw config_error("config error at " + path + "/outputs: must not be empty");
        for (const auto& o : cfg.outputs)
            if (o != "work" && o != "power" && o != "ergotropy")
                throw config_error("config error at " + path + "/outputs: unknown output '" + o +
                                   "'");
    }
    if (j.contains("provenance"))
        cfg.provenance = parse_string_list(j.at("provenance"), path + "/provenance");
    return cfg;
}

inline ordered_json serialize(const HubbardParams& p) {
    return ordered_json{{"J", p.J}, {"U", p.U}, {"r", p.r}};
}

inline ordered_json serialize(const RunConfig& cfg, bool top_level = true) {
    ordered_json j;
    if (top_level) j["schema_version"] = kSchemaVersion;
    j["model"] = cfg.scenario.basis.statistics == Statistics::boson ? "bose" : "fermi";
    j["N"] = cfg.scenario.basis.sites;
    if (cfg.scenario.basis.statistics == Statistics::boson) {
        j["n"] = cfg.scenario.basis.n;
        j["cap"] = cfg.scenario.basis.cap;
    } else {
        j["n_up"] = cfg.scenario.basis.n_up;
        j["n_down"] = cfg.scenario.basis.n_down;
    }
    j["battery"] = serialize(cfg.scenario.battery);
    j["charger"] = serialize(cfg.scenario.charger);
    switch (cfg.scenario.initial) {
        case InitialStateKind::ground: j["initial"] = {{"kind", "ground"}}; break;
        case InitialStateKind::gibbs:
            j["initial"] = {{"kind", "gibbs"}, {"beta", cfg.scenario.beta}};
            break;
        case InitialStateKind::top: j["initial"] = {{"kind", "top"}}; break;
    }
    j["normalize"] = cfg.scenario.normalize;
    j["dynamics"] = cfg.dynamics == DynamicsKind::closed ? "closed" : "open";
    if (!cfg.baths.empty()) {
        ordered_json baths = ordered_json::array();
        for (const auto& b : cfg.baths)
            baths.push_back(ordered_json{{"site", b.site}, {"T", b.T}, {"eta", b.eta}});
        j["baths"] = baths;
    }
    if (!cfg.baths.empty() || cfg.omega_c != 10.0) j["omega_c"] = cfg.omega_c;
    if (cfg.include_battery_in_coherent) j["include_battery_in_coherent"] = true;
    j["time"] = ordered_json{{"t_max", cfg.time.t_max}, {"points", cfg.time.points}};
    j["outputs"] = cfg.outputs;
    if (!cfg.provenance.empty()) j["provenance"] = cfg.provenance;
    return j;
}

inline SweepReduction reduction_from_string(const std::string& name, const std::string& path) {
    if (name == "pmax") return SweepReduction::pmax;
    if (name == "final_work") return SweepReduction::final_work;
    if (name == "steady_ergotropy") return SweepReduction::steady_ergotropy;
    if (name == "delta_pmax") return SweepReduction::delta_pmax;
    if (name == "delta_fb") return SweepReduction::delta_fb;
    throw config_error("config error at " + path + ": unknown reduction '" + name + "'");
}

inline std::string to_string(SweepReduction r) {
    switch (r) {
        case SweepReduction::pmax: return "pmax";
        case SweepReduction::final_work: return "final_work";
        case SweepReduction::steady_ergotropy: return "steady_ergotropy";
        case SweepReduction::delta_pmax: return "delta_pmax";
        case SweepReduction::delta_fb: return "delta_fb";
    }
    return "?";
}

inline SweepConfig parse_sweep_config(const json& j) {
    check_keys(j, {"schema_version", "base", "axes", "reduction", "compare", "steady",
                   "provenance"},
               "/");
    const int version = get_int(require(j, "schema_version", "/"), "/schema_version");
    if (version != kSchemaVersion)
        throw config_error("config error at /schema_version: unsupported version " +
                           std::to_string(version));
    SweepConfig cfg;
    cfg.base = parse_run_config(require(j, "base", "/"), "/base");
    const json& axes = require(j, "axes", "/");
    if (!axes.is_array() || axes.empty() || axes.size() > 2)
        throw config_error("config error at /axes: expected 1 or 2 axes");
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string ap = "/axes/" + std::to_string(i);
        const json& axis = axes.at(i);
        check_keys(axis, {"param", "min", "max", "steps", "values"}, ap);
        SweepAxis out;
        out.param = get_string(require(axis, "param", ap), ap + "/param");
        if (axis.contains("values")) {
            if (axis.contains("min") || axis.contains("max") || axis.contains("steps"))
                throw config_error("config error at " + ap +
                                   ": give either values or min/max/steps");
            const json& vals = axis.at("values");
            if (!vals.is_array() || vals.empty())
                throw config_error("config error at " + ap + "/values: expected a nonempty array");
            for (std::size_t k = 0; k < vals.size(); ++k)
                out.values.push_back(get_number(vals.at(k), ap + "/values"));
        } else {
            const double lo = get_number(require(axis, "min", ap), ap + "/min");
            const double hi = get_number(require(axis, "max", ap), ap + "/max");
            const int steps = get_int(require(axis, "steps", ap), ap + "/steps");
            if (steps < 2) throw config_error("config error at " + ap + "/steps: must be >= 2");
            out.values = linspace(lo, hi, steps);
        }
        cfg.axes.push_back(std::move(out));
    }
    cfg.reduction = reduction_from_string(
        get_string(require(j, "reduction", "/"), "/reduction"), "/reduction");
    if (j.contains("compare")) {
        const json& cmp = j.at("compare");
        check_keys(cmp, {"battery", "charger"}, "/compare");
        if (cmp.contains("battery"))
            cfg.compare_battery = parse_hubbard(cmp.at("battery"), "/compare/battery");
        if (cmp.contains("charger"))
            cfg.compare_charger = parse_hubbard(cmp.at("charger"), "/compare/charger");
    }
    if (cfg.reduction == SweepReduction::delta_pmax &&
        !cfg.compare_battery && !cfg.compare_charger)
        throw config_error("config error at /compare: delta_pmax needs a compare section");
    if (j.contains("steady")) {
        const json& st = j.at("steady");
        check_keys(st, {"tol", "t_cap"}, "/steady");
        if (st.contains("tol")) cfg.steady.tol = get_number(st.at("tol"), "/steady/tol");
        if (st.contains("t_cap")) cfg.steady.t_cap = get_number(st.at("t_cap"), "/steady/t_cap");
        if (!(cfg.steady.tol > 0.0) || !(cfg.steady.t_cap > 0.0))
            throw config_error("config error at /steady: tol and t_cap must be > 0");
    }
    if (j.contains("provenance"))
        cfg.provenance = parse_string_list(j.at("provenance"), "/provenance");
    if (cfg.reduction == SweepReduction::pmax || cfg.reduction == SweepReduction::delta_pmax ||
        cfg.reduction == SweepReduction::delta_fb) {
        if (cfg.base.dynamics != DynamicsKind::closed)
            throw config_error("config error at /reduction: " + to_string(cfg.reduction) +
                               " requires closed dynamics");
    }
    if (cfg.reduction == SweepReduction::steady_ergotropy &&
        cfg.base.dynamics != DynamicsKind::open)
        throw config_error("config error at /reduction: steady_ergotropy requires open dynamics");
    if (cfg.reduction == SweepReduction::delta_fb &&
        cfg.base.scenario.basis.statistics != Statistics::boson)
        throw config_error("config error at /base/model: delta_fb sweeps start from 'bose'");
    return cfg;
}

inline ordered_json serialize(const SweepConfig& cfg) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["base"] = serialize(cfg.base, false);
    ordered_json axes = ordered_json::array();
    for (const auto& a : cfg.axes)
        axes.push_back(ordered_json{{"param", a.param}, {"values", a.values}});
    j["axes"] = axes;
    j["reduction"] = to_string(cfg.reduction);
    if (cfg.compare_battery || cfg.compare_charger) {
        ordered_json cmp;
        if (cfg.compare_battery) cmp["battery"] = serialize(*cfg.compare_battery);
        if (cfg.compare_charger) cmp["charger"] = serialize(*cfg.compare_charger);
        j["compare"] = cmp;
    }
    j["steady"] = ordered_json{{"tol", cfg.steady.tol}, {"t_cap", cfg.steady.t_cap}};
    if (!cfg.provenance.empty()) j["provenance"] = cfg.provenance;
    return j;
}

inline json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
}

}  // namespace cfg
}  // namespace starkbat
