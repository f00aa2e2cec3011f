#pragma once

// The iterative sizing workflow, made executable: evaluate one candidate
// design against the safety and endurance gates, sweep endurance over added
// payload, and search a parts catalog exhaustively for passing combinations.
//
// The safety gate is the 2:1 thrust-to-weight rule in pwm form: hovering must
// not take more than the threshold signal (1600 us by default, i.e. 60%
// throttle). Catalogs are small enough that the search enumerates every
// combination and ranks deterministically instead of walking heuristic
// back-edges.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "uavsizer/battery_feasibility.hpp"
#include "uavsizer/catalog.hpp"
#include "uavsizer/errors.hpp"
#include "uavsizer/motor_curve.hpp"
#include "uavsizer/power_budget.hpp"
#include "uavsizer/units.hpp"

namespace uavsizer {

struct CheckResult {
    bool pass = false;
    std::optional<double> margin;  // unset when the quantity could not be computed
};

struct DesignReport {
    std::string name;
    double auw_kg = 0.0;
    double auw_other_kg = 0.0;
    double battery_mass_kg = 0.0;
    double battery_capacity_wh = 0.0;
    double per_motor_thrust_kgf = 0.0;
    double pwm_threshold_us = 1600.0;
    double target_flight_time_min = 0.0;

    std::optional<double> hover_pwm_us;
    std::optional<double> hover_power_w;
    std::optional<double> total_power_w;
    std::optional<double> predicted_flight_time_min;

    CheckResult pwm_check;        // margin: threshold - hover pwm, in us
    CheckResult endurance_check;  // margin: predicted - target, in min
    BatteryVerdict battery;
    std::optional<std::string> failure;  // set when the design cannot hover at all

    bool pass() const {
        return !failure && pwm_check.pass && endurance_check.pass && battery.feasible;
    }
};

/// Runs every gate on a complete design. A design whose per-motor hover
/// thrust exceeds the curve comes back as a failed report with the deficit
/// recorded, not as an exception.
inline DesignReport evaluate_design(const DesignSpec& design, const MotorCurve& curve,
                                    PwmUs pwm_threshold = PwmUs{1600.0},
                                    double frontier_step_us = 10.0) {
    design.validate();
    if (design.batteries.empty()) {
        throw ValidationError("design has no batteries: nothing to evaluate");
    }
    if (design.target_flight_time.value() <= 0.0) {
        throw ValidationError("design target_flight_time_min must be > 0 to evaluate");
    }

    DesignReport report;
    report.name = design.motor.name + " + " + design.propeller.name + " + " + design.esc.name +
                  " + " + design.frame.name + " + " + std::to_string(design.batteries.size()) +
                  "x " + design.batteries.front().name;
    report.auw_kg = design.auw().value();
    report.auw_other_kg = design.auw_other().value();
    report.battery_mass_kg = design.battery_mass().value();
    report.battery_capacity_wh = design.battery_capacity().value();
    report.per_motor_thrust_kgf = per_motor_thrust(design.auw(), design.motor_count).value();
    report.pwm_threshold_us = pwm_threshold.value();
    report.target_flight_time_min = design.target_flight_time.value();

    const FrontierParams frontier_params{
        design.motor_count,          design.auw_other(),        design.compute.max_power,
        design.radio.max_power,      design.target_flight_time, design.usable_fraction,
        frontier_step_us,
    };
    report.battery =
        classify_battery(build_frontier(curve, frontier_params), design.battery_mass(),
                         design.battery_capacity());

    try {
        report.hover_power_w = hover_flight_power(curve, design.auw(), design.motor_count).value();
        const PwmUs hover_pwm = curve.pwm_for_thrust(ThrustKgf(report.per_motor_thrust_kgf));
        report.hover_pwm_us = hover_pwm.value();
        report.total_power_w = report.hover_power_w.value() + design.compute.max_power.value() +
                               design.radio.max_power.value() + design.loss_power.value();
        report.predicted_flight_time_min = predict_endurance(design, curve).value();

        report.pwm_check.margin = pwm_threshold.value() - hover_pwm.value();
        report.pwm_check.pass = hover_pwm.value() <= pwm_threshold.value();
        report.endurance_check.margin =
            report.predicted_flight_time_min.value() - design.target_flight_time.value();
        report.endurance_check.pass = report.endurance_check.margin.value() >= 0.0;
    } catch (const DomainError& e) {
        report.failure = e.what();
        report.pwm_check.pass = false;
        report.endurance_check.pass = false;
    }
    return report;
}

struct SweepPoint {
    double auw_kg = 0.0;
    double flight_power_w = 0.0;
    double flight_time_min = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    /// First swept AUW the motors could no longer lift; the sweep stops there.
    std::optional<double> truncated_at_auw_kg;
};

/// Endurance and hover power for the design with added payload swept from
/// `payload_from` to `payload_to` (inclusive) in `step` increments.
inline SweepResult sweep_auw(const DesignSpec& design, const MotorCurve& curve, MassKg payload_from,
                             MassKg payload_to, MassKg step) {
    if (step.value() <= 0.0) {
        throw ValidationError("sweep step must be > 0 kg");
    }
    if (payload_from.value() < 0.0 || payload_to.value() < payload_from.value()) {
        throw ValidationError("sweep payload range must satisfy 0 <= from <= to");
    }

    SweepResult result;
    for (std::size_t k = 0;; ++k) {
        const double payload = payload_from.value() + static_cast<double>(k) * step.value();
        if (payload > payload_to.value() + 1e-12) break;

        DesignSpec candidate = design;
        if (payload > 0.0) {
            candidate.extra_payloads.push_back(
                {ComponentKind::payload, "sweep ballast", MassKg(payload)});
        }
        const double auw = candidate.auw().value();
        try {
            const double flight_power =
                hover_flight_power(curve, candidate.auw(), candidate.motor_count).value();
            const double minutes = predict_endurance(candidate, curve).value();
            result.points.push_back({auw, flight_power, minutes});
        } catch (const DomainError&) {
            result.truncated_at_auw_kg = auw;
            break;
        }
        if (payload_from.value() == payload_to.value()) break;
    }
    return result;
}

/// Sweep plot data: auw_kg,flight_power_w,flight_time_min. A truncated sweep
/// notes where lift ran out on a trailing comment line.
inline void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
    out << "auw_kg,flight_power_w,flight_time_min\n";
    char buffer[96];
    for (const auto& p : sweep.points) {
        std::snprintf(buffer, sizeof(buffer), "%.17g,%.17g,%.17g\n", p.auw_kg, p.flight_power_w,
                      p.flight_time_min);
        out << buffer;
    }
    if (sweep.truncated_at_auw_kg) {
        std::snprintf(buffer, sizeof(buffer), "# truncated: thrust insufficient from auw_kg=%.17g\n",
                      *sweep.truncated_at_auw_kg);
        out << buffer;
    }
}

struct SearchConstraints {
    TimeMin target_flight_time{0.0};
    PwmUs pwm_threshold{1600.0};
    std::optional<MassKg> max_auw;
    int motor_count = 4;
    double usable_fraction = 0.8;
    PowerW loss_power{0.0};
};

struct SearchResult {
    std::vector<DesignReport> passing;  // ranked best first
    std::vector<DesignReport> rejected; // kept so a failed search can explain itself
};

namespace detail {

inline bool report_ranks_before(const DesignReport& a, const DesignReport& b) {
    const double ta = a.predicted_flight_time_min.value_or(-1.0);
    const double tb = b.predicted_flight_time_min.value_or(-1.0);
    if (ta != tb) return ta > tb;
    if (a.auw_kg != b.auw_kg) return a.auw_kg < b.auw_kg;
    return a.name < b.name;
}

}  // namespace detail

/// Exhaustive catalog search. Every combination of motor, propeller, esc,
/// frame, fcu, compute, radio and battery model is evaluated, with the
/// battery count swept from one up to what the lift bound (and max_auw, when
/// given) allows. Passing designs rank by flight time, then lighter AUW,
/// then name, so the outcome is independent of catalog ordering.
inline SearchResult search_catalog(const std::vector<ComponentSpec>& components,
                                   const std::map<std::string, MotorCurve>& curves_by_motor,
                                   const SearchConstraints& constraints) {
    if (constraints.target_flight_time.value() <= 0.0) {
        throw ValidationError("search target flight time must be > 0 min");
    }
    std::map<ComponentKind, std::vector<ComponentSpec>> by_kind;
    for (const auto& c : components) {
        c.validate();
        by_kind[c.kind].push_back(c);
    }
    for (ComponentKind kind :
         {ComponentKind::motor, ComponentKind::propeller, ComponentKind::esc, ComponentKind::frame,
          ComponentKind::fcu, ComponentKind::compute, ComponentKind::radio, ComponentKind::battery}) {
        if (by_kind[kind].empty()) {
            throw ValidationError(std::string("catalog has no '") + to_string(kind) + "' entries");
        }
    }
    // Deterministic iteration order regardless of how the catalog was listed.
    for (auto& [kind, list] : by_kind) {
        std::sort(list.begin(), list.end(),
                  [](const ComponentSpec& a, const ComponentSpec& b) { return a.name < b.name; });
    }
    for (const auto& motor : by_kind[ComponentKind::motor]) {
        if (!curves_by_motor.count(motor.name)) {
            throw ValidationError("catalog motor '" + motor.name + "' has no thrust-stand curve");
        }
    }

    SearchResult result;
    for (const auto& motor : by_kind[ComponentKind::motor]) {
        const MotorCurve& curve = curves_by_motor.at(motor.name);
        const double max_total_thrust =
            constraints.motor_count * curve.max_thrust().value();
        for (const auto& propeller : by_kind[ComponentKind::propeller])
        for (const auto& esc : by_kind[ComponentKind::esc])
        for (const auto& frame : by_kind[ComponentKind::frame])
        for (const auto& fcu : by_kind[ComponentKind::fcu])
        for (const auto& compute : by_kind[ComponentKind::compute])
        for (const auto& radio : by_kind[ComponentKind::radio])
        for (const auto& battery : by_kind[ComponentKind::battery]) {
            DesignSpec design;
            design.motor = motor;
            design.propeller = propeller;
            design.esc = esc;
            design.frame = frame;
            design.fcu = fcu;
            design.compute = compute;
            design.radio = radio;
            design.motor_count = constraints.motor_count;
            design.target_flight_time = constraints.target_flight_time;
            design.usable_fraction = constraints.usable_fraction;
            design.loss_power = constraints.loss_power;

            // Lift bound prunes the battery count; each k is then verified
            // exactly by a full evaluation.
            const double auw_other = design.auw_other().value();
            double mass_budget = max_total_thrust - auw_other;
            if (constraints.max_auw) {
                mass_budget = std::min(mass_budget, constraints.max_auw->value() - auw_other);
            }
            const int max_batteries =
                static_cast<int>(mass_budget / battery.mass.value());

            for (int count = 1; count <= max_batteries; ++count) {
                design.batteries.assign(static_cast<std::size_t>(count), battery);
                DesignReport report =
                    evaluate_design(design, curve, constraints.pwm_threshold);
                report.name = motor.name + " + " + propeller.name + " + " + esc.name + " + " +
                              frame.name + " + " + fcu.name + " + " + compute.name + " + " +
                              radio.name + " + " + std::to_string(count) + "x " + battery.name;
                if (report.pass()) {
                    result.passing.push_back(std::move(report));
                } else {
                    result.rejected.push_back(std::move(report));
                }
            }
            if (max_batteries < 1) {
                DesignReport report;
                report.name = motor.name + " + " + propeller.name + " + " + esc.name + " + " +
                              frame.name + " + " + fcu.name + " + " + compute.name + " + " +
                              radio.name + " + " + battery.name;
                report.auw_other_kg = auw_other;
                report.failure = "no battery count fits: lift or max_auw budget is " +
                                 std::to_string(mass_budget) + " kg, battery weighs " +
                                 std::to_string(battery.mass.value()) + " kg";
                result.rejected.push_back(std::move(report));
            }
        }
    }

    std::sort(result.passing.begin(), result.passing.end(), detail::report_ranks_before);
    std::sort(result.rejected.begin(), result.rejected.end(), detail::report_ranks_before);
    return result;
}

}  // namespace uavsizer
