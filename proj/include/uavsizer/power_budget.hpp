#pragma once

// Hover power decomposition and flight-time prediction.
//
// Total draw splits into flight power (motors), compute, radio and a fixed
// loss term. Takeoff mass doubles as the required average hover thrust
// (1 kg lifts at 1 kgf), so flight power comes from the motor curve at
// per-motor thrust AUW/n, and endurance is usable energy over total power.

#include <string>

#include "uavsizer/catalog.hpp"
#include "uavsizer/errors.hpp"
#include "uavsizer/motor_curve.hpp"
#include "uavsizer/units.hpp"

namespace uavsizer {

struct PowerBudget {
    PowerW flight{0.0};
    PowerW compute{0.0};
    PowerW radio{0.0};
    PowerW loss{0.0};

    void validate() const {
        if (flight.value() < 0.0 || compute.value() < 0.0 || radio.value() < 0.0 ||
            loss.value() < 0.0) {
            throw ValidationError("power budget components must be >= 0 W");
        }
    }
};

struct EnergyStore {
    EnergyWh total_capacity{0.0};
    double usable_fraction = 0.8;

    void validate() const {
        if (total_capacity.value() <= 0.0) {
            throw ValidationError("energy store capacity must be > 0 Wh");
        }
        if (!(usable_fraction > 0.0 && usable_fraction <= 1.0)) {
            throw ValidationError("usable_fraction must lie in (0, 1], got " +
                                  std::to_string(usable_fraction));
        }
    }
};

inline PowerW total_power(const PowerBudget& budget) {
    budget.validate();
    return budget.flight + budget.compute + budget.radio + budget.loss;
}

/// Endurance in minutes from usable energy over average total power.
inline TimeMin flight_time(const EnergyStore& store, PowerW total) {
    store.validate();
    if (total.value() <= 0.0) {
        throw ValidationError("total power must be > 0 W: endurance undefined");
    }
    const double usable_wh = store.usable_fraction * store.total_capacity.value();
    return TimeMin(60.0 * usable_wh / total.value());
}

inline ThrustKgf per_motor_thrust(MassKg auw, int motor_count) {
    if (motor_count < 3) {
        throw ValidationError("motor count must be >= 3, got " + std::to_string(motor_count));
    }
    return ThrustKgf(thrust_to_lift(auw).value() / motor_count);
}

/// Electrical power to hover at the given takeoff mass: n times the motor
/// power at per-motor thrust AUW/n.
inline PowerW hover_flight_power(const MotorCurve& curve, MassKg auw, int motor_count) {
    const ThrustKgf per_motor = per_motor_thrust(auw, motor_count);
    const double deficit = per_motor.value() - curve.max_thrust().value();
    if (deficit > 0.0) {
        throw InsufficientThrustError(
            "insufficient thrust: need " + std::to_string(per_motor.value()) +
                " kgf per motor, curve tops out at " + std::to_string(curve.max_thrust().value()) +
                " kgf (deficit " + std::to_string(deficit) + " kgf)",
            deficit);
    }
    return motor_count * curve.power_for_thrust(per_motor);
}

/// Predicted endurance of a complete design on the given motor curve.
inline TimeMin predict_endurance(const DesignSpec& design, const MotorCurve& curve) {
    design.validate();
    if (design.batteries.empty()) {
        throw ValidationError("design has no batteries: endurance undefined");
    }
    const PowerBudget budget{
        hover_flight_power(curve, design.auw(), design.motor_count),
        design.compute.max_power,
        design.radio.max_power,
        design.loss_power,
    };
    const EnergyStore store{design.battery_capacity(), design.usable_fraction};
    return flight_time(store, total_power(budget));
}

}  // namespace uavsizer
