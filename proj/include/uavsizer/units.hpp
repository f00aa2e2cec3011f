#pragma once

// Strong scalar types for the physical quantities this toolkit moves around.
// Each alias fixes one unit (kilograms, watts, watt-hours, kilogram-force,
// microseconds, minutes) so call sites cannot mix them up silently.
//
// Construction rejects non-finite values; PwmUs additionally rejects values
// outside the plausible ESC signal range. Sign constraints (a component mass
// must be positive, a sample thrust non-negative, ...) are enforced where the
// domain objects are built, not here: derived quantities such as lift
// headroom are legitimately negative.

#include <cmath>
#include <compare>
#include <string>

#include "uavsizer/errors.hpp"

namespace uavsizer {

namespace unit_tags {

struct Mass {
    static constexpr const char* label = "mass [kg]";
};
struct Power {
    static constexpr const char* label = "power [W]";
};
struct Energy {
    static constexpr const char* label = "energy [Wh]";
};
struct Thrust {
    static constexpr const char* label = "thrust [kgf]";
};
struct Pwm {
    static constexpr const char* label = "pwm [us]";
    static constexpr double lower_bound = 800.0;
    static constexpr double upper_bound = 2200.0;
};
struct Time {
    static constexpr const char* label = "time [min]";
};

template <class Tag>
concept Bounded = requires {
    Tag::lower_bound;
    Tag::upper_bound;
};

}  // namespace unit_tags

template <class Tag>
class Quantity {
public:
    constexpr Quantity() = default;

    explicit Quantity(double value) : value_(value) {
        if (!std::isfinite(value)) {
            throw ValidationError(std::string(Tag::label) + " must be finite");
        }
        if constexpr (unit_tags::Bounded<Tag>) {
            if (value < Tag::lower_bound || value > Tag::upper_bound) {
                throw ValidationError(std::string(Tag::label) + " = " + std::to_string(value) +
                                      " outside [" + std::to_string(Tag::lower_bound) + ", " +
                                      std::to_string(Tag::upper_bound) + "]");
            }
        }
    }

    constexpr double value() const noexcept { return value_; }

    auto operator<=>(const Quantity&) const = default;

    Quantity operator+(Quantity rhs) const { return Quantity(value_ + rhs.value_); }
    Quantity operator-(Quantity rhs) const { return Quantity(value_ - rhs.value_); }
    Quantity operator*(double scalar) const { return Quantity(value_ * scalar); }
    Quantity operator/(double scalar) const { return Quantity(value_ / scalar); }

    Quantity& operator+=(Quantity rhs) { return *this = *this + rhs; }
    Quantity& operator-=(Quantity rhs) { return *this = *this - rhs; }

private:
    double value_ = 0.0;
};

template <class Tag>
Quantity<Tag> operator*(double scalar, Quantity<Tag> q) {
    return q * scalar;
}

using MassKg = Quantity<unit_tags::Mass>;
using PowerW = Quantity<unit_tags::Power>;
using EnergyWh = Quantity<unit_tags::Energy>;
using ThrustKgf = Quantity<unit_tags::Thrust>;
using PwmUs = Quantity<unit_tags::Pwm>;
using TimeMin = Quantity<unit_tags::Time>;

inline MassKg mass_from_grams(double grams) { return MassKg(grams / 1000.0); }

inline ThrustKgf thrust_from_gram_force(double gram_force) {
    return ThrustKgf(gram_force / 1000.0);
}

/// The hover identity: lifting one kilogram takes one kilogram-force. Thrust
/// budgets are therefore read straight off the takeoff mass, with no g
/// bookkeeping in between.
inline ThrustKgf thrust_to_lift(MassKg mass) { return ThrustKgf(mass.value()); }

}  // namespace uavsizer
