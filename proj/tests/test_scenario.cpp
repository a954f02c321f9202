#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "starkbat/presets.hpp"
#include "starkbat/runner.hpp"
#include "starkbat/scenario.hpp"

using namespace starkbat;

namespace {

const char* kRunJson = R"({
  "schema_version": 1,
  "model": "bose",
  "N": 2,
  "n": 2,
  "cap": 2,
  "battery": {"J": 1.0},
  "charger": {"U": 2.0, "r": 3.0},
  "initial": {"kind": "ground"},
  "normalize": true,
  "dynamics": "closed",
  "time": {"t_max": 10.0, "points": 51},
  "outputs": ["work", "power"]
})";

const char* kSweepJson = R"({
  "schema_version": 1,
  "base": {
    "model": "fermi",
    "N": 2,
    "n_up": 1,
    "n_down": 1,
    "battery": {"J": 1.0},
    "charger": {"U": 1.0},
    "time": {"t_max": 10.0, "points": 51}
  },
  "axes": [{"param": "charger.r", "min": 0.0, "max": 2.0, "steps": 5}],
  "reduction": "pmax"
})";

}  // namespace

TEST_CASE("run config parsing", "[scenario]") {
    SECTION("a valid config parses and round-trips") {
        const RunConfig cfg = cfg::parse_run_config(cfg::parse_text(kRunJson));
        REQUIRE(cfg.scenario.basis.statistics == Statistics::boson);
        REQUIRE(cfg.scenario.basis.sites == 2);
        REQUIRE(cfg.scenario.basis.n == 2);
        REQUIRE(cfg.scenario.battery.J == 1.0);
        REQUIRE(cfg.scenario.charger.U == 2.0);
        REQUIRE(cfg.scenario.charger.r == 3.0);
        REQUIRE(cfg.dynamics == DynamicsKind::closed);
        const auto serialized = cfg::serialize(cfg);
        const RunConfig again = cfg::parse_run_config(cfg::parse_text(serialized.dump()));
        REQUIRE(again == cfg);
    }
    SECTION("sweep configs round-trip") {
        const SweepConfig sw = cfg::parse_sweep_config(cfg::parse_text(kSweepJson));
        REQUIRE(sw.axes.size() == 1);
        REQUIRE(sw.axes[0].values.size() == 5);
        const SweepConfig again =
            cfg::parse_sweep_config(cfg::parse_text(cfg::serialize(sw).dump()));
        REQUIRE(again == sw);
    }
    SECTION("unknown keys are rejected with their path") {
        auto j = cfg::parse_text(kRunJson);
        j["bogus"] = 1;
        REQUIRE_THROWS_WITH(cfg::parse_run_config(j),
                            Catch::Matchers::ContainsSubstring("bogus"));
        auto j2 = cfg::parse_text(kRunJson);
        j2["battery"]["X"] = 1.0;
        REQUIRE_THROWS_WITH(cfg::parse_run_config(j2),
                            Catch::Matchers::ContainsSubstring("/battery"));
    }
    SECTION("schema version is enforced") {
        auto j = cfg::parse_text(kRunJson);
        j["schema_version"] = 7;
        REQUIRE_THROWS_AS(cfg::parse_run_config(j), config_error);
        j.erase("schema_version");
        REQUIRE_THROWS_AS(cfg::parse_run_config(j), config_error);
    }
    SECTION("cross-field constraints") {
        auto j = cfg::parse_text(kRunJson);
        j["n_up"] = 1;
        REQUIRE_THROWS_AS(cfg::parse_run_config(j), config_error);

        auto open_missing_baths = cfg::parse_text(kRunJson);
        open_missing_baths["dynamics"] = "open";
        REQUIRE_THROWS_AS(cfg::parse_run_config(open_missing_baths), config_error);

        auto bad_site = cfg::parse_text(kRunJson);
        bad_site["N"] = 3;
        bad_site["n"] = 2;
        bad_site["dynamics"] = "open";
        bad_site["baths"] = cfg::json::array({{{"site", 2}, {"T", 1.0}, {"eta", 0.01}}});
        REQUIRE_THROWS_AS(cfg::parse_run_config(bad_site), config_error);

        auto bad_beta = cfg::parse_text(kRunJson);
        bad_beta["initial"] = {{"kind", "ground"}, {"beta", 2.0}};
        REQUIRE_THROWS_AS(cfg::parse_run_config(bad_beta), config_error);
    }
    SECTION("malformed json reports a parse error") {
        REQUIRE_THROWS_AS(cfg::parse_text("{ not json"), config_error);
    }
}

TEST_CASE("run output", "[scenario]") {
    const RunConfig cfg = cfg::parse_run_config(cfg::parse_text(kRunJson));

    SECTION("csv is deterministic and carries the provenance block") {
        const std::string a = run_csv(cfg);
        const std::string b = run_csv(cfg);
        REQUIRE(a == b);
        REQUIRE(a.rfind("# starkbat run csv", 0) == 0);
        REQUIRE(a.find("t,work,power\n") != std::string::npos);
        REQUIRE(a.find("ergotropy") == std::string::npos);
    }
    SECTION("values round-trip through the 17-digit format") {
        const double v = 0.12345678901234567;
        REQUIRE(std::stod(format_g17(v)) == v);
        const double w = 1.0 / 3.0;
        REQUIRE(std::stod(format_g17(w)) == w);
    }
    SECTION("closed-run work column matches the closed-form value") {
        const std::string text = run_csv(cfg);
        std::istringstream is(text);
        std::string line;
        // Skip comments and header.
        while (std::getline(is, line) && (line.empty() || line[0] == '#')) {}
        int checked = 0;
        while (std::getline(is, line)) {
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            const double t = std::stod(line.substr(0, c1));
            const double w = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
            REQUIRE(std::abs(w - (1.0 - std::cos(3.0 * t) * std::cos(2.0 * t))) < 1e-9);
            ++checked;
        }
        REQUIRE(checked == 51);
    }
    SECTION("open-dynamics run emits finite columns and starts at zero ergotropy") {
        const char* open_json = R"({
          "schema_version": 1,
          "model": "bose",
          "N": 2,
          "n": 2,
          "battery": {"J": 1.0, "U": 1.0, "r": 1.0},
          "charger": {"J": 1.0},
          "dynamics": "open",
          "baths": [{"site": 1, "T": 1.0, "eta": 0.01}, {"site": 2, "T": 1.0, "eta": 0.01}],
          "time": {"t_max": 20.0, "points": 5},
          "outputs": ["work", "ergotropy"]
        })";
        const RunConfig open_cfg = cfg::parse_run_config(cfg::parse_text(open_json));
        const std::string text = run_csv(open_cfg);
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line) && (line.empty() || line[0] == '#')) {}
        REQUIRE(line == "t,work,ergotropy");
        REQUIRE(std::getline(is, line));
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        REQUIRE(std::stod(line.substr(0, c1)) == 0.0);
        REQUIRE(std::abs(std::stod(line.substr(c2 + 1))) < 1e-10);
    }
}

TEST_CASE("sweep execution", "[scenario]") {
    SECTION("rows follow grid order and report pmax") {
        const SweepConfig sw = cfg::parse_sweep_config(cfg::parse_text(kSweepJson));
        const std::string text = sweep_csv(sw);
        REQUIRE(text.find("charger.r,pmax,t_star,error\n") != std::string::npos);
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line) && (line.empty() || line[0] == '#')) {}
        std::vector<double> xs;
        while (std::getline(is, line)) {
            xs.push_back(std::stod(line.substr(0, line.find(','))));
            REQUIRE(line.back() == ',');  // empty error column
        }
        REQUIRE(xs == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
        REQUIRE(sweep_csv(sw) == text);
    }
    SECTION("per-point failures land in the error column and the sweep continues") {
        SweepConfig sw = cfg::parse_sweep_config(cfg::parse_text(kSweepJson));
        sw.axes[0] = SweepAxis{"n_up", {1.0, 5.0}};  // 5 fermions on 2 sites is infeasible
        const std::string text = sweep_csv(sw);
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line) && (line.empty() || line[0] == '#')) {}
        std::getline(is, line);
        REQUIRE(line.back() == ',');
        std::getline(is, line);
        REQUIRE(line.find("infeasible") != std::string::npos);
    }
    SECTION("delta_fb sweeps derive the fermionic counterpart") {
        const char* json = R"({
          "schema_version": 1,
          "base": {
            "model": "bose",
            "N": 4,
            "n": 2,
            "battery": {"J": 1.0, "U": 2.0},
            "charger": {"U": 1.0}
          },
          "axes": [{"param": "charger.r", "values": [0.0]}],
          "reduction": "delta_fb"
        })";
        const SweepConfig sw = cfg::parse_sweep_config(cfg::parse_text(json));
        const std::string text = sweep_csv(sw);
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line) && (line.empty() || line[0] == '#')) {}
        std::getline(is, line);
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double delta = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        REQUIRE(std::abs(delta) < 1e-9);
    }
    SECTION("unknown axis params are rejected") {
        SweepConfig sw = cfg::parse_sweep_config(cfg::parse_text(kSweepJson));
        sw.axes[0].param = "charger.X";
        const std::string text = sweep_csv(sw);
        REQUIRE(text.find("unknown sweep axis param") != std::string::npos);
    }
}

TEST_CASE("oracle runner", "[scenario]") {
    OracleOptions opt;
    opt.r_c = 1.0;
    opt.U_c = 1.0;
    const OracleReport report = run_oracle(OracleCase::prop1, opt);
    REQUIRE(report.pass);
    REQUIRE(report.outcomes.size() == 2);
    for (const auto& o : report.outcomes) REQUIRE(o.max_deviation < 1e-9);
    const std::string text = oracle_report_text(report);
    REQUIRE(text.find("PASS") != std::string::npos);
}

TEST_CASE("figure presets", "[scenario]") {
    SECTION("every preset emits serializable, reparsable configs") {
        for (const auto& name : preset_names()) {
            const PresetBundle bundle = figure_preset(name);
            REQUIRE_FALSE(bundle.entries.empty());
            const auto j = serialize(bundle);
            REQUIRE(j.at("preset") == name);
            for (const auto& entry : j.at("entries")) {
                const std::string kind = entry.at("kind");
                if (kind == "run") {
                    const RunConfig cfg = cfg::parse_run_config(
                        cfg::parse_text(entry.at("config").dump()));
                    REQUIRE(cfg.scenario.basis.sites >= 2);
                } else {
                    REQUIRE(kind == "sweep");
                    const SweepConfig cfg = cfg::parse_sweep_config(
                        cfg::parse_text(entry.at("config").dump()));
                    REQUIRE_FALSE(cfg.axes.empty());
                }
            }
        }
    }
    SECTION("preset configs carry provenance lines") {
        const PresetBundle bundle = figure_preset("fig7");
        for (const auto& entry : bundle.entries) {
            const auto& cfg = std::get<RunConfig>(entry.config);
            REQUIRE_FALSE(cfg.provenance.empty());
            bool has_default_marker = false;
            for (const auto& line : cfg.provenance)
                if (line.rfind("default:", 0) == 0) has_default_marker = true;
            REQUIRE(has_default_marker);
        }
    }
    SECTION("unknown preset names list the valid ones") {
        REQUIRE_THROWS_WITH(figure_preset("fig1"),
                            Catch::Matchers::ContainsSubstring("fig7"));
    }
}
