#include <catch_amalgamated.hpp>

#include "lunaflow/scenario/build.hpp"
#include "lunaflow/scenario/parse.hpp"

using namespace lunaflow;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("empty text loads the full baseline configuration") {
    ScenarioConfig cfg = load_scenario("");
    CHECK(cfg.horizon_years == 3);
    CHECK(cfg.isru_enabled);
    CHECK(cfg.costs.launch_per_kg == 5000.0);
    CHECK(cfg.costs.lh2_per_kg == 5.97);
    CHECK(cfg.costs.lo2_per_kg == 0.15);
    CHECK(cfg.costs.spacecraft_manufacturing == 150e6);
    CHECK(cfg.costs.spacecraft_operation_per_flight == 0.5e6);
    CHECK(cfg.propulsion.isp_s == 420.0);
    CHECK(cfg.propulsion.propellant_capacity_kg == 65000.0);
    CHECK(cfg.propulsion.structure_mass_kg == 6000.0);
    CHECK(cfg.maintenance_rate_per_year == 0.05);
    CHECK(cfg.demands.o2_per_year_kg == 10000.0);
    CHECK(cfg.demands.h2o_per_year_kg == 5000.0);
    CHECK(cfg.delta_v.get("leo", "ls") == 5870.0);
    CHECK(cfg.network_nodes.size() == 5);
    CHECK(cfg.network_arcs.size() == 5);
    CHECK(cfg.component_rates.at("MRE").products.at("O2") == 16.67);
}

TEST_CASE("a single override changes only that field") {
    ScenarioConfig base = load_scenario("");
    ScenarioConfig cfg = load_scenario("[costs]\nlaunch_per_kg = 10000\n");
    CHECK(cfg.costs.launch_per_kg == 10000.0);
    CHECK(cfg.costs.lh2_per_kg == base.costs.lh2_per_kg);
    CHECK(cfg.costs.lo2_per_kg == base.costs.lo2_per_kg);
    CHECK(cfg.demands.o2_per_year_kg == base.demands.o2_per_year_kg);
    CHECK(cfg.horizon_years == base.horizon_years);
}

TEST_CASE("negative demand reports the field path") {
    try {
        load_scenario("[demands]\no2_per_year_kg = -5\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK_THAT(e.what(), ContainsSubstring("demands.o2_per_year_kg"));
    }
}

TEST_CASE("parse errors carry line and column") {
    try {
        load_scenario("name = ok\nnot a key value line\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 2);
        CHECK_THAT(e.what(), ContainsSubstring("scenario:2:"));
    }

    CHECK_THROWS_AS(load_scenario("[costs]\nlaunch_per_kg = not_a_number\n"), ScenarioError);
    CHECK_THROWS_AS(load_scenario("[no_such_section]\n"), ScenarioError);
    CHECK_THROWS_AS(load_scenario("stray_key = 1\n"), ScenarioError);
    CHECK_THROWS_AS(load_scenario("[costs]\nstray_key = 1\n"), ScenarioError);
}

TEST_CASE("sweep sections parse and validate") {
    ScenarioConfig cfg = load_scenario(
        "[sweep.fig2]\nparameter = launch_cost\nvalues = 1000 2500 5000\nscenario = earth\n");
    REQUIRE(cfg.sweeps.count("fig2") == 1);
    const SweepSpec& sw = cfg.sweeps.at("fig2");
    CHECK(sw.parameter == "launch_cost");
    CHECK(sw.values == std::vector<double>{1000, 2500, 5000});
    REQUIRE(sw.isru_override.has_value());
    CHECK_FALSE(*sw.isru_override);

    CHECK_THROWS_AS(load_scenario("[sweep.bad]\nparameter = launch_cost\nvalues = 5 4\n"),
                    ScenarioError);
    CHECK_THROWS_AS(load_scenario("[sweep.bad]\nparameter = launch_cost\n"), ScenarioError);
}

TEST_CASE("rate sections replace a component's table") {
    ScenarioConfig cfg = load_scenario(
        "[rates.MRE]\npower = -0.1\nproduct = O2 20\nconsume = dsoil 40\n");
    const ComponentRates& mre = cfg.component_rates.at("MRE");
    CHECK(mre.power_kw_per_kg == -0.1);
    CHECK(mre.products.size() == 1);
    CHECK(mre.products.at("O2") == 20.0);
    CHECK(mre.consumptions.at("dsoil") == 40.0);
    // untouched components keep their baseline values
    CHECK(cfg.component_rates.at("SWE").products.at("H2O") == 10.50);
}

TEST_CASE("closed-form plant sizing reproduces the published scale") {
    ScenarioConfig cfg = load_scenario("");
    PlantSizing s = size_plants(cfg);
    // plant = annual output / rate; FSPS = total kW / 0.00667
    CHECK_THAT(s.mre, WithinAbs(10000.0 / 16.67, 1e-9));
    CHECK_THAT(s.mre, WithinRel(600.0, 0.01));
    CHECK_THAT(s.swe, WithinAbs(5000.0 / 10.50, 1e-9));
    CHECK_THAT(s.excavator, WithinAbs(187.5 * (5000.0 / 10.50) / 333.33, 1e-9));
    CHECK_THAT(s.power_kw, WithinRel(56.5, 0.35));  // dominated by the MRE draw
    CHECK_THAT(s.fsps, WithinAbs(s.power_kw / 0.00667, 1e-9));
    CHECK_THAT(s.total(), WithinAbs(12424.382788482202, 1e-6));
    CHECK(s.dwe == 0.0);
}

TEST_CASE("sizing scales linearly with the productivity multiplier") {
    ScenarioConfig cfg = load_scenario("");
    PlantSizing base = size_plants(cfg);
    cfg.productivity_multiplier = 2.5;
    PlantSizing scaled = size_plants(cfg);
    CHECK_THAT(scaled.mre, WithinRel(2.5 * base.mre, 1e-12));
    CHECK_THAT(scaled.swe, WithinRel(2.5 * base.swe, 1e-12));
    CHECK_THAT(scaled.fsps, WithinRel(2.5 * base.fsps, 1e-12));
}

TEST_CASE("ISRU build wires demands, supplies and spares") {
    ScenarioConfig cfg = load_scenario("");
    BuildResult b = build_isru_scenario(cfg);
    CHECK(validate_graph(b.graph).empty());
    CHECK(b.graph.build_diagnostics.empty());
    CHECK(b.graph.registry.size() == 16);  // 15 baseline + spacecraft

    // habitat demands at t = 1..3
    CHECK(b.demands.get("hb", "O2", 1) == 10000.0);
    CHECK(b.demands.get("hb", "H2O", 3) == 5000.0);
    CHECK(b.demands.get("hb", "O2", 0) == 0.0);
    // annual spares demand at the surface node
    double annual = b.sizing.total() * 0.05;
    CHECK_THAT(b.demands.get("ls", "spares", 2), WithinAbs(annual, 1e-9));
    // unbounded purchase supply on Earth
    CHECK(std::isinf(b.demands.get("earth", "O2", 0)));
    CHECK(b.demands.get("earth", "O2", 0) < 0.0);

    CHECK_THROWS_AS(build_earth_dependent_scenario(cfg), std::invalid_argument);
}

TEST_CASE("earth-dependent build locks the ISRU commodity group everywhere") {
    ScenarioConfig cfg = load_scenario("isru_enabled = false\n");
    BuildResult b = build_earth_dependent_scenario(cfg);
    CHECK(validate_graph(b.graph).empty());
    for (const auto& spec : b.graph.specs) {
        bool locked = false;
        for (const auto& w : spec.windows) {
            if (w.open.empty() &&
                std::find(w.group.begin(), w.group.end(), "MRE") != w.group.end()) {
                locked = true;
            }
        }
        CHECK(locked);
    }
    CHECK(b.demands.get("ls", "spares", 1) == 0.0);
}

TEST_CASE("scenario validation flags unknown commodities in rates") {
    ScenarioConfig cfg = load_scenario("[rates.MRE]\npower = -0.1\nproduct = kryptonite 5\n");
    auto diags = validate_scenario(cfg);
    REQUIRE(diags.size() == 1);
    CHECK_THAT(diags[0].format(), ContainsSubstring("kryptonite"));

    ScenarioConfig clean = load_scenario("");
    CHECK(validate_scenario(clean).empty());
}

TEST_CASE("disposal windows outside the horizon are diagnosed") {
    ScenarioConfig cfg = load_scenario("[windows.disposal]\nopen = 0 9\n");
    auto diags = validate_scenario(cfg);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].timestep == 9);
}
