#pragma once

// Typed records for every physical component of a build, the complete design
// description, and the loaders for the JSON design/catalog files.
//
// Masses in files carry an explicit unit key ({"g": 170} or {"kg": 0.17});
// internally everything is kilograms. Battery energy may be given directly
// as capacity_wh or derived from cells x nominal_cell_voltage x amp_hours
// (nominal voltage, 3.7 V/cell by default, is the endurance convention; a
// full-charge figure would overstate usable energy). When both forms are
// present they must agree to 1%, and the explicit value wins.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavsizer/errors.hpp"
#include "uavsizer/units.hpp"

namespace uavsizer {

enum class ComponentKind {
    motor,
    propeller,
    esc,
    frame,
    fcu,
    compute,
    radio,
    battery,
    payload,
};

inline const char* to_string(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::motor: return "motor";
        case ComponentKind::propeller: return "propeller";
        case ComponentKind::esc: return "esc";
        case ComponentKind::frame: return "frame";
        case ComponentKind::fcu: return "fcu";
        case ComponentKind::compute: return "compute";
        case ComponentKind::radio: return "radio";
        case ComponentKind::battery: return "battery";
        case ComponentKind::payload: return "payload";
    }
    return "?";
}

inline std::optional<ComponentKind> component_kind_from(const std::string& name) {
    static const std::map<std::string, ComponentKind> table = {
        {"motor", ComponentKind::motor},   {"propeller", ComponentKind::propeller},
        {"esc", ComponentKind::esc},       {"frame", ComponentKind::frame},
        {"fcu", ComponentKind::fcu},       {"compute", ComponentKind::compute},
        {"radio", ComponentKind::radio},   {"battery", ComponentKind::battery},
        {"payload", ComponentKind::payload},
    };
    const auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

inline EnergyWh battery_capacity_from_cells(int cell_count, double amp_hours,
                                            double nominal_cell_voltage) {
    if (cell_count <= 0) throw ValidationError("battery cells must be > 0");
    if (amp_hours <= 0.0) throw ValidationError("battery amp_hours must be > 0");
    if (nominal_cell_voltage <= 0.0) throw ValidationError("battery nominal_cell_voltage must be > 0");
    return EnergyWh(cell_count * nominal_cell_voltage * amp_hours);
}

struct ComponentSpec {
    ComponentKind kind = ComponentKind::payload;
    std::string name;
    MassKg mass{0.0};
    PowerW max_power{0.0};   // compute and radio draw
    EnergyWh capacity{0.0};  // battery only

    void validate() const {
        const std::string ctx = std::string(to_string(kind)) + " '" + name + "'";
        if (mass.value() <= 0.0) {
            throw ValidationError(ctx + ": mass must be > 0 kg");
        }
        if (max_power.value() < 0.0) {
            throw ValidationError(ctx + ": max_power must be >= 0 W");
        }
        if (kind == ComponentKind::battery && capacity.value() <= 0.0) {
            throw ValidationError(ctx + ": battery capacity must be > 0 Wh");
        }
    }
};

/// Sum of component masses. Empty input sums to zero.
inline MassKg total_mass(std::span<const ComponentSpec> parts) {
    double sum = 0.0;
    for (const auto& part : parts) sum += part.mass.value();
    return MassKg(sum);
}

struct DesignSpec {
    ComponentSpec motor;
    ComponentSpec propeller;
    ComponentSpec esc;
    ComponentSpec frame;
    ComponentSpec fcu;
    ComponentSpec compute;
    ComponentSpec radio;
    std::vector<ComponentSpec> batteries;
    std::vector<ComponentSpec> extra_payloads;
    int motor_count = 4;
    TimeMin target_flight_time{0.0};
    double usable_fraction = 0.8;
    PowerW loss_power{0.0};

    /// Non-battery takeoff mass: n motors, props and ESCs plus frame, fcu,
    /// compute, radio and any extra payloads.
    MassKg auw_other() const {
        double sum = motor_count * (motor.mass.value() + propeller.mass.value() + esc.mass.value());
        sum += frame.mass.value() + fcu.mass.value() + compute.mass.value() + radio.mass.value();
        for (const auto& p : extra_payloads) sum += p.mass.value();
        return MassKg(sum);
    }

    MassKg battery_mass() const {
        double sum = 0.0;
        for (const auto& b : batteries) sum += b.mass.value();
        return MassKg(sum);
    }

    EnergyWh battery_capacity() const {
        double sum = 0.0;
        for (const auto& b : batteries) sum += b.capacity.value();
        return EnergyWh(sum);
    }

    MassKg auw() const { return auw_other() + battery_mass(); }

    /// Structural validation. Batteries may be absent here (a design file is
    /// also how non-battery mass reaches the frontier tools); operations that
    /// predict endurance insist on a non-empty battery list themselves.
    void validate() const {
        auto expect_kind = [](const ComponentSpec& c, ComponentKind kind) {
            if (c.kind != kind) {
                throw ValidationError(std::string("component '") + c.name + "' must have kind '" +
                                      to_string(kind) + "', got '" + to_string(c.kind) + "'");
            }
            c.validate();
        };
        expect_kind(motor, ComponentKind::motor);
        expect_kind(propeller, ComponentKind::propeller);
        expect_kind(esc, ComponentKind::esc);
        expect_kind(frame, ComponentKind::frame);
        expect_kind(fcu, ComponentKind::fcu);
        expect_kind(compute, ComponentKind::compute);
        expect_kind(radio, ComponentKind::radio);
        for (const auto& b : batteries) expect_kind(b, ComponentKind::battery);
        for (const auto& p : extra_payloads) expect_kind(p, ComponentKind::payload);

        if (motor_count < 3) {
            throw ValidationError("motor_count must be >= 3, got " + std::to_string(motor_count));
        }
        if (!(usable_fraction > 0.0 && usable_fraction <= 1.0)) {
            throw ValidationError("usable_fraction must lie in (0, 1], got " +
                                  std::to_string(usable_fraction));
        }
        if (target_flight_time.value() < 0.0) {
            throw ValidationError("target_flight_time_min must be >= 0");
        }
        if (loss_power.value() < 0.0) {
            throw ValidationError("loss_power_w must be >= 0");
        }
    }
};

namespace detail {

inline MassKg parse_mass(const nlohmann::json& j, const std::string& ctx) {
    if (!j.is_object()) {
        throw ValidationError(ctx + ": mass must be an object with a 'g' or 'kg' key");
    }
    const bool has_g = j.contains("g");
    const bool has_kg = j.contains("kg");
    if (has_g == has_kg) {
        throw ValidationError(ctx + ": mass needs exactly one of 'g' or 'kg'");
    }
    const double raw = has_g ? j.at("g").get<double>() : j.at("kg").get<double>();
    return has_g ? mass_from_grams(raw) : MassKg(raw);
}

inline ComponentSpec parse_component(const nlohmann::json& j, ComponentKind kind,
                                     const std::string& ctx) {
    if (!j.is_object()) {
        throw ValidationError(ctx + ": expected an object");
    }
    if (j.contains("kind")) {
        const auto declared = component_kind_from(j.at("kind").get<std::string>());
        if (!declared) {
            throw ValidationError(ctx + ": unknown component kind '" +
                                  j.at("kind").get<std::string>() + "'");
        }
        kind = *declared;
    }

    ComponentSpec c;
    c.kind = kind;
    c.name = j.value("name", std::string(to_string(kind)));
    if (!j.contains("mass")) {
        throw ValidationError(ctx + ": missing 'mass'");
    }
    c.mass = parse_mass(j.at("mass"), ctx);
    if (j.contains("max_power_w")) {
        c.max_power = PowerW(j.at("max_power_w").get<double>());
    }

    if (kind == ComponentKind::battery) {
        std::optional<EnergyWh> explicit_wh;
        std::optional<EnergyWh> derived_wh;
        if (j.contains("capacity_wh")) {
            explicit_wh = EnergyWh(j.at("capacity_wh").get<double>());
        }
        const bool has_cells = j.contains("cells") || j.contains("cell_count");
        if (has_cells || j.contains("amp_hours")) {
            if (!has_cells || !j.contains("amp_hours")) {
                throw ValidationError(ctx + ": derived capacity needs both 'cells' and 'amp_hours'");
            }
            const int cells =
                j.contains("cells") ? j.at("cells").get<int>() : j.at("cell_count").get<int>();
            const double volts = j.value("nominal_cell_voltage", 3.7);
            derived_wh = battery_capacity_from_cells(cells, j.at("amp_hours").get<double>(), volts);
        }
        if (explicit_wh && derived_wh) {
            const double rel = std::abs(explicit_wh->value() - derived_wh->value()) /
                               std::max(derived_wh->value(), 1e-12);
            if (rel > 0.01) {
                throw ValidationError(ctx + ": capacity_wh disagrees with derived capacity by " +
                                      std::to_string(rel * 100.0) + "% (> 1%)");
            }
        }
        if (!explicit_wh && !derived_wh) {
            throw ValidationError(ctx + ": battery needs 'capacity_wh' or cells/amp_hours");
        }
        c.capacity = explicit_wh ? *explicit_wh : *derived_wh;
    }

    c.validate();
    return c;
}

inline nlohmann::json mass_to_json(MassKg mass) { return nlohmann::json{{"kg", mass.value()}}; }

inline nlohmann::json component_to_json(const ComponentSpec& c) {
    nlohmann::json j{{"name", c.name}, {"mass", mass_to_json(c.mass)}};
    if (c.kind == ComponentKind::compute || c.kind == ComponentKind::radio) {
        j["max_power_w"] = c.max_power.value();
    }
    if (c.kind == ComponentKind::battery) {
        j["capacity_wh"] = c.capacity.value();
    }
    return j;
}

}  // namespace detail

namespace detail {

// Field accesses throw nlohmann's type errors on wrong-typed values; surface
// those as validation errors like any other bad field.
template <class Fn>
auto translating_json_errors(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

}  // namespace detail

inline DesignSpec design_from_json(const nlohmann::json& j) {
    return detail::translating_json_errors("design", [&]() -> DesignSpec {
        if (!j.is_object()) {
            throw ValidationError("design: top level must be an object");
        }
        DesignSpec d;
        auto single = [&](const char* key, ComponentKind kind) {
            if (!j.contains(key)) {
                throw ValidationError(std::string("design: missing '") + key + "'");
            }
            return detail::parse_component(j.at(key), kind, key);
        };
        d.motor = single("motor", ComponentKind::motor);
        d.propeller = single("propeller", ComponentKind::propeller);
        d.esc = single("esc", ComponentKind::esc);
        d.frame = single("frame", ComponentKind::frame);
        d.fcu = single("fcu", ComponentKind::fcu);
        d.compute = single("compute", ComponentKind::compute);
        d.radio = single("radio", ComponentKind::radio);

        if (j.contains("batteries")) {
            std::size_t idx = 0;
            for (const auto& entry : j.at("batteries")) {
                d.batteries.push_back(detail::parse_component(
                    entry, ComponentKind::battery, "batteries[" + std::to_string(idx) + "]"));
                ++idx;
            }
        }
        if (j.contains("payloads")) {
            std::size_t idx = 0;
            for (const auto& entry : j.at("payloads")) {
                d.extra_payloads.push_back(detail::parse_component(
                    entry, ComponentKind::payload, "payloads[" + std::to_string(idx) + "]"));
                ++idx;
            }
        }

        d.motor_count = j.value("motor_count", 4);
        d.target_flight_time = TimeMin(j.value("target_flight_time_min", 0.0));
        d.usable_fraction = j.value("usable_fraction", 0.8);
        d.loss_power = PowerW(j.value("loss_power_w", 0.0));
        d.validate();
        return d;
    });
}

/// Serialization mirrors the input file format, so a structured report's
/// design section can be fed straight back in.
inline nlohmann::json design_to_json(const DesignSpec& d) {
    nlohmann::json j;
    j["motor"] = detail::component_to_json(d.motor);
    j["propeller"] = detail::component_to_json(d.propeller);
    j["esc"] = detail::component_to_json(d.esc);
    j["frame"] = detail::component_to_json(d.frame);
    j["fcu"] = detail::component_to_json(d.fcu);
    j["compute"] = detail::component_to_json(d.compute);
    j["radio"] = detail::component_to_json(d.radio);
    j["batteries"] = nlohmann::json::array();
    for (const auto& b : d.batteries) j["batteries"].push_back(detail::component_to_json(b));
    j["payloads"] = nlohmann::json::array();
    for (const auto& p : d.extra_payloads) j["payloads"].push_back(detail::component_to_json(p));
    j["motor_count"] = d.motor_count;
    j["target_flight_time_min"] = d.target_flight_time.value();
    j["usable_fraction"] = d.usable_fraction;
    j["loss_power_w"] = d.loss_power.value();
    return j;
}

namespace detail {

inline nlohmann::json load_json_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(std::string("cannot open ") + what + " file: " + path.string());
    }
    try {
        return nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed ") + what + " file " + path.string() + ": " + e.what());
    }
}

}  // namespace detail

inline DesignSpec load_design(const std::filesystem::path& path) {
    return design_from_json(detail::load_json_file(path, "design"));
}

/// A parts catalog: a flat component list plus, for every motor entry, the
/// path of its thrust-stand CSV (relative paths are resolved against the
/// catalog file's directory by the caller).
struct CatalogSpec {
    std::vector<ComponentSpec> components;
    std::map<std::string, std::string> motor_curve_paths;  // motor name -> csv path
    int motor_count = 4;
    TimeMin target_flight_time{0.0};
    double usable_fraction = 0.8;
    PowerW loss_power{0.0};
};

inline CatalogSpec catalog_from_json(const nlohmann::json& j) {
    return detail::translating_json_errors("catalog", [&]() -> CatalogSpec {
        if (!j.is_object() || !j.contains("components") || !j.at("components").is_array()) {
            throw ValidationError("catalog: top level must be an object with a 'components' array");
        }
        CatalogSpec cat;
        std::size_t idx = 0;
        for (const auto& entry : j.at("components")) {
            const std::string ctx = "components[" + std::to_string(idx) + "]";
            if (!entry.is_object() || !entry.contains("kind")) {
                throw ValidationError(ctx + ": catalog entries need an explicit 'kind'");
            }
            const std::string kind_name = entry.at("kind").get<std::string>();
            const auto kind = component_kind_from(kind_name);
            if (!kind) {
                throw ValidationError(ctx + ": unknown component kind '" + kind_name + "'");
            }
            auto c = detail::parse_component(entry, *kind, ctx);
            if (*kind == ComponentKind::motor) {
                if (!entry.contains("curve")) {
                    throw ValidationError(ctx + ": motor '" + c.name +
                                          "' needs a 'curve' (thrust-stand csv path)");
                }
                cat.motor_curve_paths[c.name] = entry.at("curve").get<std::string>();
            }
            cat.components.push_back(std::move(c));
            ++idx;
        }
        cat.motor_count = j.value("motor_count", 4);
        cat.target_flight_time = TimeMin(j.value("target_flight_time_min", 0.0));
        cat.usable_fraction = j.value("usable_fraction", 0.8);
        cat.loss_power = PowerW(j.value("loss_power_w", 0.0));
        return cat;
    });
}

inline CatalogSpec load_catalog(const std::filesystem::path& path) {
    return catalog_from_json(detail::load_json_file(path, "catalog"));
}

}  // namespace uavsizer
