#pragma once

// Shared test fixtures: the tiny three-knot curve used across the unit
// tests, the worked-example design, and seeded random monotone sweeps for
// the property tests.

#include <random>
#include <string>
#include <vector>

#include "uavsizer/catalog.hpp"
#include "uavsizer/motor_curve.hpp"

namespace testing_support {

inline std::string data_path(const std::string& name) {
    return std::string(UAVSIZER_DATA_DIR) + "/" + name;
}

// F3: (1000 us, 5 W, 0 kgf), (1300 us, 250 W, 1.3 kgf), (1600 us, 600 W, 2.4 kgf)
inline std::vector<uavsizer::ThrustStandSample> f3_samples() {
    using namespace uavsizer;
    return {
        {PwmUs(1000.0), PowerW(5.0), ThrustKgf(0.0)},
        {PwmUs(1300.0), PowerW(250.0), ThrustKgf(1.3)},
        {PwmUs(1600.0), PowerW(600.0), ThrustKgf(2.4)},
    };
}

inline uavsizer::MotorCurve f3_curve(
    uavsizer::InterpolationKind kind = uavsizer::InterpolationKind::piecewise_linear) {
    return uavsizer::MotorCurve::from_samples(f3_samples(), kind);
}

inline uavsizer::ComponentSpec part(uavsizer::ComponentKind kind, const std::string& name,
                                    double mass_kg, double max_power_w = 0.0,
                                    double capacity_wh = 0.0) {
    uavsizer::ComponentSpec c;
    c.kind = kind;
    c.name = name;
    c.mass = uavsizer::MassKg(mass_kg);
    c.max_power = uavsizer::PowerW(max_power_w);
    c.capacity = uavsizer::EnergyWh(capacity_wh);
    return c;
}

/// The worked-example quadcopter: 4x (170 g motor + 44 g prop + 74 g esc),
/// 643 g frame, 45.2 g fcu, 470 g compute drawing 65 W, 350 g radio drawing
/// 18 W, and 4 batteries of 549 g / 177.6 Wh each. Target 45 min at 0.8
/// usable fraction.
inline uavsizer::DesignSpec paper_design() {
    using namespace uavsizer;
    DesignSpec d;
    d.motor = part(ComponentKind::motor, "MN501-S", 0.170);
    d.propeller = part(ComponentKind::propeller, "P20x6.5", 0.044);
    d.esc = part(ComponentKind::esc, "Flame 60A", 0.074);
    d.frame = part(ComponentKind::frame, "iXC15", 0.643);
    d.fcu = part(ComponentKind::fcu, "Pixhawk Mini", 0.0452);
    d.compute = part(ComponentKind::compute, "NUC", 0.47, 65.0);
    d.radio = part(ComponentKind::radio, "B210", 0.35, 18.0);
    for (int i = 0; i < 4; ++i) {
        d.batteries.push_back(part(ComponentKind::battery, "8S 6Ah", 0.549, 0.0, 177.6));
    }
    d.motor_count = 4;
    d.target_flight_time = TimeMin(45.0);
    d.usable_fraction = 0.8;
    d.loss_power = PowerW(0.0);
    return d;
}

/// A structurally valid design with negligible fixed masses, for tests that
/// want to dial in the takeoff mass through payload and battery alone.
inline uavsizer::DesignSpec minimal_design() {
    using namespace uavsizer;
    DesignSpec d;
    d.motor = part(ComponentKind::motor, "m", 0.001);
    d.propeller = part(ComponentKind::propeller, "p", 0.001);
    d.esc = part(ComponentKind::esc, "e", 0.001);
    d.frame = part(ComponentKind::frame, "f", 0.001);
    d.fcu = part(ComponentKind::fcu, "fc", 0.001);
    d.compute = part(ComponentKind::compute, "c", 0.001);
    d.radio = part(ComponentKind::radio, "r", 0.001);
    d.motor_count = 4;
    return d;
}

/// Strictly increasing random sweep within the allowed pwm band. Both the
/// power and thrust channels increase at every knot.
inline std::vector<uavsizer::ThrustStandSample> random_monotone_samples(std::mt19937_64& rng) {
    using namespace uavsizer;
    std::uniform_int_distribution<int> knot_count(4, 12);
    std::uniform_real_distribution<double> start_pwm(850.0, 1000.0);
    std::uniform_real_distribution<double> pwm_step(20.0, 95.0);
    std::uniform_real_distribution<double> start_power(0.0, 20.0);
    std::uniform_real_distribution<double> power_step(1.0, 150.0);
    std::uniform_real_distribution<double> start_thrust(0.0, 0.2);
    std::uniform_real_distribution<double> thrust_step(0.02, 0.8);

    const int n = knot_count(rng);
    double pwm = start_pwm(rng);
    double power = start_power(rng);
    double thrust = start_thrust(rng);

    std::vector<ThrustStandSample> samples;
    for (int i = 0; i < n; ++i) {
        samples.push_back({PwmUs(pwm), PowerW(power), ThrustKgf(thrust)});
        pwm += pwm_step(rng);
        power += power_step(rng);
        thrust += thrust_step(rng);
    }
    return samples;
}

}  // namespace testing_support
