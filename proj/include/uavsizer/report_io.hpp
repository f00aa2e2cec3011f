#pragma once

// Report export: a human-readable text rendering and a structured JSON form
// carrying the same field names as DesignReport. The JSON report embeds the
// evaluated design in the input file schema, so it round-trips.

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "uavsizer/catalog.hpp"
#include "uavsizer/design_loop.hpp"

namespace uavsizer {

namespace detail {

// Text mode prints four decimals; structured output keeps full precision.
inline std::string fixed4(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4f", value);
    return buffer;
}

struct TextStyle {
    bool color = false;
    std::string pass() const { return color ? "\x1b[32mPASS\x1b[0m" : "PASS"; }
    std::string fail() const { return color ? "\x1b[31mFAIL\x1b[0m" : "FAIL"; }
    std::string verdict(bool ok) const { return ok ? pass() : fail(); }
};

}  // namespace detail

inline nlohmann::json report_to_json(const DesignReport& report) {
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json j{
        {"name", report.name},
        {"auw_kg", report.auw_kg},
        {"auw_other_kg", report.auw_other_kg},
        {"battery_mass_kg", report.battery_mass_kg},
        {"battery_capacity_wh", report.battery_capacity_wh},
        {"per_motor_thrust_kgf", report.per_motor_thrust_kgf},
        {"pwm_threshold_us", report.pwm_threshold_us},
        {"target_flight_time_min", report.target_flight_time_min},
        {"hover_pwm_us", opt(report.hover_pwm_us)},
        {"hover_power_w", opt(report.hover_power_w)},
        {"total_power_w", opt(report.total_power_w)},
        {"predicted_flight_time_min", opt(report.predicted_flight_time_min)},
        {"pwm_check", {{"pass", report.pwm_check.pass}, {"margin_us", opt(report.pwm_check.margin)}}},
        {"endurance_check",
         {{"pass", report.endurance_check.pass}, {"margin_min", opt(report.endurance_check.margin)}}},
        {"battery_verdict",
         {{"feasible", report.battery.feasible},
          {"best_pwm_us", report.battery.best_pwm.value()},
          {"mass_headroom_kg", report.battery.mass_headroom_kg},
          {"capacity_surplus_wh", report.battery.capacity_surplus_wh}}},
        {"pass", report.pass()},
    };
    if (report.failure) j["failure"] = *report.failure;
    return j;
}

inline void render_report_text(const DesignReport& report, std::ostream& out,
                               bool color = false) {
    using detail::fixed4;
    const detail::TextStyle style{color};
    auto opt4 = [](const std::optional<double>& v) {
        return v ? detail::fixed4(*v) : std::string("n/a");
    };

    out << "design:               " << report.name << "\n";
    out << "auw:                  " << fixed4(report.auw_kg) << " kg (non-battery "
        << fixed4(report.auw_other_kg) << " kg + battery " << fixed4(report.battery_mass_kg)
        << " kg)\n";
    out << "battery capacity:     " << fixed4(report.battery_capacity_wh) << " Wh\n";
    out << "per-motor thrust:     " << fixed4(report.per_motor_thrust_kgf) << " kgf\n";
    out << "hover pwm:            " << opt4(report.hover_pwm_us) << " us\n";
    out << "hover power:          " << opt4(report.hover_power_w) << " W\n";
    out << "total power:          " << opt4(report.total_power_w) << " W\n";
    out << "predicted flight time " << opt4(report.predicted_flight_time_min) << " min (target "
        << fixed4(report.target_flight_time_min) << ")\n";
    if (report.failure) {
        out << "failure:              " << *report.failure << "\n";
    }
    out << "pwm check:            " << style.verdict(report.pwm_check.pass) << " (threshold "
        << fixed4(report.pwm_threshold_us) << " us, margin " << opt4(report.pwm_check.margin)
        << ")\n";
    out << "endurance check:      " << style.verdict(report.endurance_check.pass) << " (margin "
        << opt4(report.endurance_check.margin) << " min)\n";
    out << "battery feasibility:  " << style.verdict(report.battery.feasible) << " (best pwm "
        << fixed4(report.battery.best_pwm.value()) << " us, mass headroom "
        << fixed4(report.battery.mass_headroom_kg) << " kg, capacity surplus "
        << fixed4(report.battery.capacity_surplus_wh) << " Wh)\n";
    out << "overall:              " << style.verdict(report.pass()) << "\n";
}

/// Full structured check output: the report plus the design it was run on,
/// in the same schema the loader accepts.
inline nlohmann::json check_to_json(const DesignSpec& design, const DesignReport& report) {
    return nlohmann::json{{"design", design_to_json(design)}, {"report", report_to_json(report)}};
}

}  // namespace uavsizer
