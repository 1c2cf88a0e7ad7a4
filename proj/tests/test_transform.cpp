#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lunaflow/commodity.hpp"
#include "lunaflow/transform.hpp"

using namespace lunaflow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("surface Q matrix carries the productivity table") {
    CommodityRegistry reg = register_baseline_commodities();
    TransformationMatrix q = build_isru_q_matrix(baseline_component_rates(), reg, 1.0);

    auto at = [&](const char* row, const char* col) {
        return q(reg.index_of(row), reg.index_of(col));
    };
    CHECK_THAT(at("O2", "MRE"), WithinAbs(16.67, 1e-12));
    CHECK_THAT(at("metals", "MRE"), WithinAbs(15.16, 1e-12));
    CHECK_THAT(at("slag", "MRE"), WithinAbs(6.06, 1e-12));
    CHECK_THAT(at("dsoil", "MRE"), WithinAbs(-37.89, 1e-12));
    CHECK_THAT(at("power", "MRE"), WithinAbs(-0.0942, 1e-12));

    CHECK_THAT(at("H2O", "SWE"), WithinAbs(10.50, 1e-12));
    CHECK_THAT(at("dsoil", "SWE"), WithinAbs(173.48, 1e-12));
    CHECK_THAT(at("emissions", "SWE"), WithinAbs(3.52, 1e-12));
    CHECK_THAT(at("soil", "SWE"), WithinAbs(-187.5, 1e-12));
    CHECK_THAT(at("power", "SWE"), WithinAbs(-0.0359, 1e-12));

    CHECK_THAT(at("O2", "DWE"), WithinAbs(31.12, 1e-12));
    CHECK_THAT(at("H2", "DWE"), WithinAbs(3.88, 1e-12));
    CHECK_THAT(at("H2O", "DWE"), WithinAbs(-35.0, 1e-12));
    CHECK_THAT(at("power", "DWE"), WithinAbs(-0.0700, 1e-12));

    CHECK_THAT(at("soil", "excavator"), WithinAbs(333.33, 1e-12));
    CHECK_THAT(at("power", "excavator"), WithinAbs(-0.00113, 1e-12));
    CHECK_THAT(at("power", "FSPS"), WithinAbs(0.00667, 1e-12));

    // Identity diagonal for every pass-through commodity.
    for (std::size_t i = 0; i < reg.size(); ++i) CHECK(q(i, i) == 1.0);
}

TEST_CASE("all-zero rates give the identity matrix") {
    CommodityRegistry reg = register_baseline_commodities();
    ComponentRateSet zero;
    for (const char* name : {"MRE", "SWE", "DWE", "excavator", "FSPS"}) {
        zero[name] = ComponentRates{name, {}, {}, 0.0};
    }
    CHECK(build_isru_q_matrix(zero, reg, 1.0).is_identity());
}

TEST_CASE("Q matrix is linear in the rates") {
    CommodityRegistry reg = register_baseline_commodities();
    auto base = baseline_component_rates();
    for (double k : {0.5, 2.0, 5.0}) {
        ComponentRateSet scaled = base;
        for (auto& [name, r] : scaled) {
            for (auto& [c, v] : r.products) v *= k;
            for (auto& [c, v] : r.consumptions) v *= k;
            r.power_kw_per_kg *= k;
        }
        TransformationMatrix q0 = build_isru_q_matrix(base, reg, 1.0);
        TransformationMatrix qk = build_isru_q_matrix(scaled, reg, 1.0);
        for (std::size_t i = 0; i < reg.size(); ++i) {
            for (std::size_t j = 0; j < reg.size(); ++j) {
                if (i == j) continue;
                CHECK_THAT(qk(i, j), WithinAbs(k * q0(i, j), 1e-9));
            }
        }
    }
}

TEST_CASE("missing component rates are rejected") {
    CommodityRegistry reg = register_baseline_commodities();
    ComponentRateSet missing = baseline_component_rates();
    missing.erase("DWE");
    CHECK_THROWS_AS(build_isru_q_matrix(missing, reg, 1.0), std::invalid_argument);

    ComponentRateSet bad = baseline_component_rates();
    bad["MRE"].products["unobtainium"] = 1.0;
    CHECK_THROWS_AS(build_isru_q_matrix(bad, reg, 1.0), std::out_of_range);
}

TEST_CASE("productivity table is internally consistent with its mass fractions") {
    auto rates = baseline_component_rates();
    const auto& mre = rates.at("MRE");
    double dsoil = mre.consumptions.at("dsoil");
    CHECK_THAT(mre.products.at("O2") / dsoil, WithinRel(0.44, 0.005));
    CHECK_THAT(mre.products.at("metals") / dsoil, WithinRel(0.40, 0.005));
    CHECK_THAT(mre.products.at("slag") / dsoil, WithinRel(0.16, 0.005));

    const auto& swe = rates.at("SWE");
    double soil = swe.consumptions.at("soil");
    CHECK_THAT(swe.products.at("H2O") / soil, WithinAbs(0.056, 1e-12));
    CHECK_THAT(swe.products.at("dsoil") / soil, WithinRel(0.9252, 0.005));

    const auto& dwe = rates.at("DWE");
    CHECK_THAT(dwe.products.at("O2") / dwe.consumptions.at("H2O"), WithinRel(0.889, 0.005));

    // Metal subspecies rates sum to the aggregate within rounding.
    double split = 0.0;
    for (const auto& [name, rate] : mre_metal_split_rates()) split += rate;
    CHECK_THAT(split, WithinRel(mre.products.at("metals"), 0.005));
}

TEST_CASE("rocket equation propellant burn") {
    PropulsionSpec spec;  // Isp 420 s, g0 9.80665

    CHECK(propellant_for_leg(0.0, 12345.0, spec) == 0.0);

    // Direct evaluation of exp(5870/(420*9.80665)) - 1 as the oracle:
    // 3.1585847099124313 kg propellant per kg delivered.
    double prop = propellant_for_leg(5870.0, 10000.0, spec);
    CHECK_THAT(prop, WithinAbs(31585.847099124312, 1e-6));
    CHECK_THAT(prop, WithinAbs(10000.0 * std::expm1(5870.0 / (420.0 * 9.80665)), 1e-9));

    // Delta-v equal to Isp*g0 gives exactly e-1 per kg of final mass.
    double unit = propellant_for_leg(spec.exhaust_velocity(), 1.0, spec);
    CHECK_THAT(unit, WithinAbs(std::exp(1.0) - 1.0, 1e-12));

    CHECK_THROWS_AS(propellant_for_leg(-1.0, 1.0, spec), std::invalid_argument);
    CHECK_THROWS_AS(propellant_for_leg(1.0, -1.0, spec), std::invalid_argument);
}

TEST_CASE("rocket equation is strictly monotone in delta-v and delivered mass") {
    PropulsionSpec spec;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dv(0.0, 9000.0), mass(1.0, 50000.0), bump(1.0, 500.0);
    for (int i = 0; i < 200; ++i) {
        double v = dv(rng), m = mass(rng);
        CHECK(propellant_for_leg(v + bump(rng), m, spec) > propellant_for_leg(v, m, spec));
        CHECK(propellant_for_leg(v + 1.0, m + bump(rng), spec) >
              propellant_for_leg(v + 1.0, m, spec));
    }
}

TEST_CASE("tank feasibility against the 65 t capacity") {
    PropulsionSpec spec;
    CHECK(leg_feasible(64999.0, spec));
    CHECK_FALSE(leg_feasible(65001.0, spec));
    CHECK(leg_feasible(propellant_for_leg(5870.0, 10000.0, spec), spec));
}

TEST_CASE("maintenance demand is plant mass times rate times years") {
    CHECK_THAT(maintenance_demand(12424.382788482202, 0.05, 3), WithinAbs(1863.6574182723305, 1e-9));
    CHECK(maintenance_demand(4321.0, 0.0, 7) == 0.0);
    CHECK_THAT(maintenance_demand(100.0, 0.05, 1), WithinAbs(5.0, 1e-12));
    CHECK_THROWS_AS(maintenance_demand(1.0, 1.5, 1), std::invalid_argument);
}

TEST_CASE("propulsive Q matrix burns the exact rocket-equation amount") {
    CommodityRegistry reg = register_baseline_commodities();
    extend_with_spacecraft(reg, 6000.0);
    PropulsionSpec spec;
    TransformationMatrix q = build_propulsive_q_matrix(5870.0, spec, 6.0, reg);

    // Send one vehicle, 10 t of cargo hardware and exactly enough O2/H2.
    std::vector<double> out(reg.size(), 0.0);
    out[reg.index_of("spacecraft")] = 1.0;
    out[reg.index_of("MRE")] = 10000.0;
    double burn = propellant_for_leg(5870.0, 16000.0, spec);
    out[reg.index_of("O2")] = burn * 6.0 / 7.0;
    out[reg.index_of("H2")] = burn * 1.0 / 7.0;

    std::vector<double> in = q.apply(out);
    CHECK_THAT(in[reg.index_of("MRE")], WithinAbs(10000.0, 1e-9));
    CHECK_THAT(in[reg.index_of("spacecraft")], WithinAbs(1.0, 1e-12));
    CHECK_THAT(in[reg.index_of("O2")], WithinAbs(0.0, 1e-6));
    CHECK_THAT(in[reg.index_of("H2")], WithinAbs(0.0, 1e-6));

    // Zero delta-v legs are pure pass-through.
    CHECK(build_propulsive_q_matrix(0.0, spec, 6.0, reg).is_identity());
}

TEST_CASE("propulsive concurrency rows bound the burn and forbid short-fueled legs") {
    CommodityRegistry reg = register_baseline_commodities();
    extend_with_spacecraft(reg, 6000.0);
    PropulsionSpec spec;
    auto rows = propulsive_concurrency_rows(5870.0, spec, 6.0, reg, "spacecraft");
    REQUIRE(rows.size() == 3);

    auto eval = [&](const ConcurrencyRow& row, const std::vector<double>& x) {
        double s = 0.0;
        for (const auto& [cid, coef] : row.coefficients) s += coef * x[reg.index_of(cid)];
        return s;
    };

    std::vector<double> out(reg.size(), 0.0);
    out[reg.index_of("spacecraft")] = 1.0;
    out[reg.index_of("MRE")] = 10000.0;
    double burn = propellant_for_leg(5870.0, 16000.0, spec);
    out[reg.index_of("O2")] = burn * 6.0 / 7.0;
    out[reg.index_of("H2")] = burn * 1.0 / 7.0;

    // Exactly-fueled leg: within tank capacity, arrivals exactly zero.
    CHECK(eval(rows[0], out) <= 0.0 + 1e-6);
    CHECK_THAT(eval(rows[1], out), WithinAbs(0.0, 1e-6));
    CHECK_THAT(eval(rows[2], out), WithinAbs(0.0, 1e-6));

    // Removing the propellant makes the arrival rows positive (violated).
    std::vector<double> dry = out;
    dry[reg.index_of("O2")] = 0.0;
    dry[reg.index_of("H2")] = 0.0;
    CHECK(eval(rows[1], dry) > 1.0);
    CHECK(eval(rows[2], dry) > 1.0);

    // Two tons of extra cargo pushes the burn past one vehicle's tanks.
    std::vector<double> heavy = out;
    heavy[reg.index_of("MRE")] = 16000.0;
    double burn_heavy = propellant_for_leg(5870.0, 22000.0, spec);
    heavy[reg.index_of("O2")] = burn_heavy * 6.0 / 7.0;
    heavy[reg.index_of("H2")] = burn_heavy * 1.0 / 7.0;
    CHECK(eval(rows[0], heavy) > 0.0);
}
