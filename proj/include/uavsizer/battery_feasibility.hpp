#pragma once

// Battery capacity-vs-weight feasibility frontier.
//
// At each pwm the motors deliver a fixed thrust and draw a fixed power, so
// two bounds fall out directly: the heaviest battery the remaining thrust
// can lift, and the smallest capacity that still meets the target flight
// time at that power. Sweeping pwm over the measured range traces the
// frontier; a battery is viable iff some pwm satisfies both bounds at once.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "uavsizer/errors.hpp"
#include "uavsizer/motor_curve.hpp"
#include "uavsizer/units.hpp"

namespace uavsizer {

/// Smallest battery capacity that sustains the target flight time while the
/// motors run at this pwm: (n * P_m + P_C + P_R) * hours / usable fraction.
inline EnergyWh required_capacity_at_pwm(const MotorCurve& curve, PwmUs pwm, int motor_count,
                                         PowerW compute_power, PowerW radio_power,
                                         TimeMin target_flight_time, double usable_fraction) {
    if (target_flight_time.value() <= 0.0) {
        throw ValidationError("target flight time must be > 0 min");
    }
    if (!(usable_fraction > 0.0 && usable_fraction <= 1.0)) {
        throw ValidationError("usable_fraction must lie in (0, 1]");
    }
    const double total_w = motor_count * curve.power_at_pwm(pwm).value() + compute_power.value() +
                           radio_power.value();
    const double hours = target_flight_time.value() / 60.0;
    return EnergyWh(total_w * hours / usable_fraction);
}

/// Heaviest battery liftable at this pwm: n * T_m minus the non-battery
/// takeoff mass. May come out <= 0, meaning no battery flies at this pwm.
inline MassKg max_battery_mass_at_pwm(const MotorCurve& curve, PwmUs pwm, int motor_count,
                                      MassKg auw_other) {
    const double thrust = motor_count * curve.thrust_at_pwm(pwm).value();
    return MassKg(thrust - auw_other.value());
}

struct FrontierPoint {
    PwmUs pwm;
    MassKg max_battery_mass;     // <= 0 means nothing is liftable here
    EnergyWh required_capacity;

    bool liftable() const noexcept { return max_battery_mass.value() > 0.0; }
};

struct FrontierParams {
    int motor_count = 4;
    MassKg auw_other{0.0};
    PowerW compute_power{0.0};
    PowerW radio_power{0.0};
    TimeMin target_flight_time{0.0};
    double usable_fraction = 0.8;
    double pwm_step_us = 10.0;
};

class FeasibilityFrontier {
public:
    FeasibilityFrontier(std::vector<FrontierPoint> points, FrontierParams params)
        : points_(std::move(points)), params_(params) {}

    const std::vector<FrontierPoint>& points() const noexcept { return points_; }
    const FrontierParams& params() const noexcept { return params_; }

private:
    std::vector<FrontierPoint> points_;
    FrontierParams params_;
};

/// Samples the frontier across the curve's whole measured pwm range at
/// `pwm_step_us` spacing (the range end is always included). Monotone power
/// and thrust make both coordinates non-decreasing in pwm; that is checked.
inline FeasibilityFrontier build_frontier(const MotorCurve& curve, const FrontierParams& params) {
    if (params.pwm_step_us <= 0.0) {
        throw ValidationError("pwm_step must be > 0 us");
    }
    const double lo = curve.pwm_min().value();
    const double hi = curve.pwm_max().value();

    std::vector<double> grid;
    for (std::size_t k = 0;; ++k) {
        const double pwm = lo + static_cast<double>(k) * params.pwm_step_us;
        if (pwm > hi) break;
        grid.push_back(pwm);
    }
    if (grid.back() < hi) grid.push_back(hi);

    std::vector<FrontierPoint> points;
    points.reserve(grid.size());
    for (double pwm_value : grid) {
        const PwmUs pwm{pwm_value};
        points.push_back({pwm,
                          max_battery_mass_at_pwm(curve, pwm, params.motor_count, params.auw_other),
                          required_capacity_at_pwm(curve, pwm, params.motor_count,
                                                   params.compute_power, params.radio_power,
                                                   params.target_flight_time,
                                                   params.usable_fraction)});
    }

    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].required_capacity.value() < points[i - 1].required_capacity.value() ||
            points[i].max_battery_mass.value() < points[i - 1].max_battery_mass.value()) {
            throw ValidationError("frontier not monotone at pwm " +
                                  std::to_string(points[i].pwm.value()));
        }
    }
    return FeasibilityFrontier(std::move(points), params);
}

struct BatteryVerdict {
    bool feasible = false;
    PwmUs best_pwm{1000.0};
    double mass_headroom_kg = 0.0;     // max liftable mass minus battery mass, at best_pwm
    double capacity_surplus_wh = 0.0;  // battery capacity minus required capacity, at best_pwm
};

/// Checks a candidate battery against every sampled frontier point, the
/// tabular version of "is the dot above the curve". Feasible iff some sampled
/// pwm both lifts the mass and needs no more capacity than the battery has;
/// no interpolation between samples, so the answer never turns optimistic.
/// The reported margins are taken at the sampled pwm with the best worst-case
/// relative margin (ties resolve to the lowest pwm).
inline BatteryVerdict classify_battery(const FeasibilityFrontier& frontier, MassKg battery_mass,
                                       EnergyWh battery_capacity) {
    if (frontier.points().empty()) {
        throw ValidationError("frontier has no points");
    }
    if (battery_mass.value() < 0.0 || battery_capacity.value() < 0.0) {
        throw ValidationError("battery mass and capacity must be >= 0");
    }

    const double mass_ref = std::max(battery_mass.value(), 1e-9);
    const double cap_ref = std::max(battery_capacity.value(), 1e-9);

    BatteryVerdict verdict;
    bool first = true;
    double best_score = 0.0;
    for (const auto& point : frontier.points()) {
        const double headroom = point.max_battery_mass.value() - battery_mass.value();
        const double surplus = battery_capacity.value() - point.required_capacity.value();
        const double score = std::min(headroom / mass_ref, surplus / cap_ref);
        if (first || score > best_score) {
            first = false;
            best_score = score;
            verdict.best_pwm = point.pwm;
            verdict.mass_headroom_kg = headroom;
            verdict.capacity_surplus_wh = surplus;
        }
    }
    verdict.feasible = verdict.mass_headroom_kg >= 0.0 && verdict.capacity_surplus_wh >= 0.0;
    return verdict;
}

/// Frontier plot data: pwm_us,max_battery_mass_kg,required_capacity_wh.
inline void write_frontier_csv(const FeasibilityFrontier& frontier, std::ostream& out) {
    out << "pwm_us,max_battery_mass_kg,required_capacity_wh\n";
    char buffer[96];
    for (const auto& p : frontier.points()) {
        std::snprintf(buffer, sizeof(buffer), "%.17g,%.17g,%.17g\n", p.pwm.value(),
                      p.max_battery_mass.value(), p.required_capacity.value());
        out << buffer;
    }
}

}  // namespace uavsizer
