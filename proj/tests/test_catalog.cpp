#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include <json.hpp>

#include "support/fixtures.hpp"
#include "uavsizer/catalog.hpp"

using namespace uavsizer;
using nlohmann::json;
using testing_support::part;

TEST_CASE("total mass sums component masses") {
    CHECK(total_mass({}).value() == 0.0);

    const std::vector<ComponentSpec> payloads = {
        part(ComponentKind::payload, "a", 0.5),
        part(ComponentKind::payload, "b", 0.25),
    };
    CHECK(total_mass(payloads).value() == Catch::Approx(0.75));
}

TEST_CASE("total mass is permutation-invariant and additive") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> mass(0.001, 3.0);
    std::vector<ComponentSpec> parts;
    for (int i = 0; i < 24; ++i) {
        parts.push_back(part(ComponentKind::payload, "p" + std::to_string(i), mass(rng)));
    }

    const double whole = total_mass(parts).value();
    std::shuffle(parts.begin(), parts.end(), rng);
    CHECK(total_mass(parts).value() == Catch::Approx(whole).epsilon(1e-12));

    const std::vector<ComponentSpec> head(parts.begin(), parts.begin() + 10);
    const std::vector<ComponentSpec> tail(parts.begin() + 10, parts.end());
    CHECK(total_mass(head).value() + total_mass(tail).value() ==
          Catch::Approx(whole).epsilon(1e-12));
}

TEST_CASE("worked-example masses") {
    const DesignSpec d = testing_support::paper_design();
    CHECK(d.auw().value() == Catch::Approx(4.856).margin(0.01));
    CHECK(d.auw_other().value() == Catch::Approx(2.66).margin(0.01));
    CHECK(d.battery_capacity().value() == Catch::Approx(710.4));
}

TEST_CASE("battery capacity from cells") {
    CHECK(battery_capacity_from_cells(8, 6.0, 3.7).value() == Catch::Approx(177.6));
    CHECK_THROWS_AS(battery_capacity_from_cells(0, 6.0, 3.7), ValidationError);
    CHECK_THROWS_AS(battery_capacity_from_cells(8, -1.0, 3.7), ValidationError);
}

TEST_CASE("design json parsing") {
    json design = {
        {"motor", {{"name", "m"}, {"mass", {{"g", 170}}}}},
        {"propeller", {{"name", "p"}, {"mass", {{"g", 44}}}}},
        {"esc", {{"name", "e"}, {"mass", {{"g", 74}}}}},
        {"frame", {{"name", "f"}, {"mass", {{"g", 643}}}}},
        {"fcu", {{"name", "fc"}, {"mass", {{"g", 45.2}}}}},
        {"compute", {{"name", "c"}, {"mass", {{"kg", 0.47}}}, {"max_power_w", 65}}},
        {"radio", {{"name", "r"}, {"mass", {{"g", 350}}}, {"max_power_w", 18}}},
        {"batteries",
         json::array({{{"name", "b"},
                       {"mass", {{"g", 549}}},
                       {"cells", 8},
                       {"amp_hours", 6},
                       {"nominal_cell_voltage", 3.7}}})},
        {"motor_count", 4},
        {"target_flight_time_min", 45},
    };

    SECTION("a valid file resolves derived capacity and defaults") {
        const DesignSpec d = design_from_json(design);
        CHECK(d.motor_count == 4);
        CHECK(d.target_flight_time.value() == 45.0);
        CHECK(d.usable_fraction == 0.8);
        CHECK(d.batteries.size() == 1);
        CHECK(d.batteries[0].capacity.value() == Catch::Approx(177.6));
        CHECK(d.compute.max_power.value() == 65.0);
    }

    SECTION("explicit capacity wins when consistent with derived") {
        design["batteries"][0]["capacity_wh"] = 177.0;  // within 1%
        const DesignSpec d = design_from_json(design);
        CHECK(d.batteries[0].capacity.value() == 177.0);
    }

    SECTION("explicit capacity conflicting with derived is rejected") {
        design["batteries"][0]["capacity_wh"] = 200.0;
        CHECK_THROWS_WITH(design_from_json(design),
                          Catch::Matchers::ContainsSubstring("capacity_wh"));
    }

    SECTION("usable fraction outside (0,1] is rejected and named") {
        design["usable_fraction"] = 1.3;
        CHECK_THROWS_WITH(design_from_json(design),
                          Catch::Matchers::ContainsSubstring("usable_fraction"));
    }

    SECTION("mass needs exactly one unit key") {
        design["motor"]["mass"] = {{"g", 170}, {"kg", 0.17}};
        CHECK_THROWS_AS(design_from_json(design), ValidationError);
        design["motor"]["mass"] = {{"oz", 6}};
        CHECK_THROWS_AS(design_from_json(design), ValidationError);
    }

    SECTION("wrong-typed fields surface as validation errors") {
        design["motor"]["mass"] = {{"g", "heavy"}};
        CHECK_THROWS_AS(design_from_json(design), ValidationError);
        design["motor"]["mass"] = {{"g", 170}};
        design["motor_count"] = "four";
        CHECK_THROWS_AS(design_from_json(design), ValidationError);
    }

    SECTION("unknown component kind is rejected, not ignored") {
        design["payloads"] = json::array({{{"kind", "gimbal"}, {"name", "x"}, {"mass", {{"g", 10}}}}});
        CHECK_THROWS_WITH(design_from_json(design),
                          Catch::Matchers::ContainsSubstring("unknown component kind"));
    }

    SECTION("zero mass is rejected") {
        design["frame"]["mass"] = {{"kg", 0.0}};
        CHECK_THROWS_AS(design_from_json(design), ValidationError);
    }

    SECTION("motor count below three is rejected") {
        design["motor_count"] = 2;
        CHECK_THROWS_WITH(design_from_json(design),
                          Catch::Matchers::ContainsSubstring("motor_count"));
    }

    SECTION("serialization round-trips through the loader") {
        const DesignSpec d = design_from_json(design);
        const DesignSpec d2 = design_from_json(design_to_json(d));
        CHECK(d2.auw().value() == Catch::Approx(d.auw().value()).epsilon(1e-12));
        CHECK(d2.battery_capacity().value() ==
              Catch::Approx(d.battery_capacity().value()).epsilon(1e-12));
        CHECK(d2.motor.name == d.motor.name);
    }
}

TEST_CASE("design file loading") {
    SECTION("the bundled worked-example file") {
        const DesignSpec d = load_design(testing_support::data_path("monarch.json"));
        CHECK(d.motor_count == 4);
        CHECK(d.target_flight_time.value() == 45.0);
        CHECK(d.auw().value() == Catch::Approx(4.856).margin(0.01));
        CHECK(d.batteries.size() == 4);
        CHECK(d.battery_capacity().value() == Catch::Approx(710.4));
    }

    SECTION("missing file") {
        CHECK_THROWS_AS(load_design("/nonexistent/design.json"), ParseError);
    }
}

TEST_CASE("catalog file loading") {
    const CatalogSpec cat = load_catalog(testing_support::data_path("monarch_catalog.json"));
    CHECK(cat.components.size() == 8);
    REQUIRE(cat.motor_curve_paths.count("T-Motor MN501-S KV240") == 1);
    CHECK(cat.motor_curve_paths.at("T-Motor MN501-S KV240") == "monarch_mn501s.csv");
    CHECK(cat.target_flight_time.value() == 45.0);

    SECTION("catalog entries need explicit kinds") {
        CHECK_THROWS_AS(catalog_from_json(json{{"components", json::array({json{
                            {"name", "x"}, {"mass", {{"g", 5}}}}})}}),
                        ValidationError);
    }
}
