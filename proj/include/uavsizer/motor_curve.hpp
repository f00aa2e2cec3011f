#pragma once

// Empirical motor performance model built from thrust-stand sweeps: a sorted
// table of (pwm, electrical power, thrust) samples with monotone
// interpolation in both channels and inversion from thrust back to pwm.
//
// Two interpolation modes are supported. Piecewise-linear is the default;
// monotone shape-preserving cubic (Fritsch-Carlson tangents) is opt-in.
// Both reproduce the samples exactly at the knots and never overshoot the
// bracketing sample values. Queries outside the measured pwm range are an
// error, never an extrapolation: an endurance prediction from guessed power
// would be unsafe.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "uavsizer/errors.hpp"
#include "uavsizer/units.hpp"

namespace uavsizer {

/// One row of a thrust-stand sweep. Power may arrive as voltage x current;
/// ingestion multiplies that out before constructing the sample.
struct ThrustStandSample {
    PwmUs pwm;
    PowerW power;
    ThrustKgf thrust;
};

enum class InterpolationKind {
    piecewise_linear,
    monotone_cubic,
};

inline const char* to_string(InterpolationKind kind) {
    return kind == InterpolationKind::piecewise_linear ? "linear" : "monotone-cubic";
}

inline std::optional<InterpolationKind> interpolation_kind_from(const std::string& name) {
    if (name == "linear") return InterpolationKind::piecewise_linear;
    if (name == "monotone-cubic") return InterpolationKind::monotone_cubic;
    return std::nullopt;
}

namespace detail {

// Fritsch-Carlson tangents for a shape-preserving cubic Hermite through
// monotone data. Interior tangents are the weighted harmonic mean of the
// neighbouring secants (zero across a flat or reversing pair); endpoint
// tangents use the one-sided three-point estimate clamped to keep
// monotonicity.
inline std::vector<double> pchip_tangents(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> h(n - 1);
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }

    std::vector<double> d(n, 0.0);
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }

    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double t = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (t * d0 <= 0.0) {
            t = 0.0;
        } else if (d0 * d1 < 0.0 && std::abs(t) > 3.0 * std::abs(d0)) {
            t = 3.0 * d0;
        }
        return t;
    };
    d[0] = endpoint(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

inline double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return y0 * (2.0 * t3 - 3.0 * t2 + 1.0) + h * d0 * (t3 - 2.0 * t2 + t) +
           y1 * (-2.0 * t3 + 3.0 * t2) + h * d1 * (t3 - t2);
}

inline std::string format_pwm(double pwm_us) {
    std::ostringstream oss;
    oss << pwm_us;
    return oss.str();
}

}  // namespace detail

class MotorCurve {
public:
    /// Builds a validated curve from raw sweep rows. Rows sharing a pwm value
    /// are mean-aggregated first (stands log repeated sweeps), then the table
    /// must hold at least three distinct pwm values with power and thrust
    /// both non-decreasing.
    static MotorCurve from_samples(std::vector<ThrustStandSample> samples,
                                   InterpolationKind kind = InterpolationKind::piecewise_linear) {
        std::map<double, std::pair<std::vector<double>, std::vector<double>>> by_pwm;
        for (const auto& s : samples) {
            if (s.power.value() < 0.0) {
                throw ValidationError("sample power must be >= 0 (pwm " +
                                      detail::format_pwm(s.pwm.value()) + ")");
            }
            if (s.thrust.value() < 0.0) {
                throw ValidationError("sample thrust must be >= 0 (pwm " +
                                      detail::format_pwm(s.pwm.value()) + ")");
            }
            auto& bucket = by_pwm[s.pwm.value()];
            bucket.first.push_back(s.power.value());
            bucket.second.push_back(s.thrust.value());
        }
        if (by_pwm.size() < 3) {
            throw ValidationError("too few rows: need at least 3 distinct pwm values, got " +
                                  std::to_string(by_pwm.size()));
        }

        MotorCurve curve;
        curve.kind_ = kind;
        auto mean = [](const std::vector<double>& v) {
            double sum = 0.0;
            for (double x : v) sum += x;
            return sum / static_cast<double>(v.size());
        };
        for (const auto& [pwm, bucket] : by_pwm) {
            curve.pwm_.push_back(pwm);
            curve.power_.push_back(mean(bucket.first));
            curve.thrust_.push_back(mean(bucket.second));
        }

        for (std::size_t i = 1; i < curve.pwm_.size(); ++i) {
            if (curve.power_[i] < curve.power_[i - 1]) {
                throw ValidationError("power not monotone: decreases at pwm " +
                                      detail::format_pwm(curve.pwm_[i]));
            }
            if (curve.thrust_[i] < curve.thrust_[i - 1]) {
                throw ValidationError("thrust not monotone: decreases at pwm " +
                                      detail::format_pwm(curve.pwm_[i]));
            }
        }

        if (kind == InterpolationKind::monotone_cubic) {
            curve.power_tangents_ = detail::pchip_tangents(curve.pwm_, curve.power_);
            curve.thrust_tangents_ = detail::pchip_tangents(curve.pwm_, curve.thrust_);
        }
        return curve;
    }

    InterpolationKind interpolation() const noexcept { return kind_; }
    std::size_t sample_count() const noexcept { return pwm_.size(); }

    PwmUs pwm_min() const { return PwmUs(pwm_.front()); }
    PwmUs pwm_max() const { return PwmUs(pwm_.back()); }
    ThrustKgf min_thrust() const { return ThrustKgf(thrust_.front()); }
    ThrustKgf max_thrust() const { return ThrustKgf(thrust_.back()); }
    PowerW min_power() const { return PowerW(power_.front()); }
    PowerW max_power() const { return PowerW(power_.back()); }

    bool contains(PwmUs pwm) const noexcept {
        return pwm.value() >= pwm_.front() && pwm.value() <= pwm_.back();
    }

    std::vector<ThrustStandSample> samples() const {
        std::vector<ThrustStandSample> out;
        out.reserve(pwm_.size());
        for (std::size_t i = 0; i < pwm_.size(); ++i) {
            out.push_back({PwmUs(pwm_[i]), PowerW(power_[i]), ThrustKgf(thrust_[i])});
        }
        return out;
    }

    ThrustKgf thrust_at_pwm(PwmUs pwm) const { return ThrustKgf(evaluate(thrust_, thrust_tangents_, pwm)); }

    PowerW power_at_pwm(PwmUs pwm) const { return PowerW(evaluate(power_, power_tangents_, pwm)); }

    /// Smallest pwm at which the interpolated thrust equals `thrust`. Exact
    /// per-segment inversion in linear mode; bisection refined far below the
    /// 0.1 us contract in cubic mode, so round trips hold to ~1e-9 kgf.
    PwmUs pwm_for_thrust(ThrustKgf thrust) const {
        const double t = thrust.value();
        if (t < thrust_.front()) {
            throw DomainError("requested thrust " + std::to_string(t) + " kgf below curve minimum " +
                              std::to_string(thrust_.front()) + " kgf");
        }
        if (t > thrust_.back()) {
            throw DomainError("motor cannot produce requested thrust: " + std::to_string(t) +
                              " kgf exceeds curve maximum " + std::to_string(thrust_.back()) + " kgf");
        }

        // First knot at or above the target. Earlier segments top out below t
        // (no overshoot), so the crossing lives in (knot-1, knot].
        const auto it = std::lower_bound(thrust_.begin(), thrust_.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - thrust_.begin());
        if (thrust_[j] == t) {
            return PwmUs(pwm_[j]);
        }
        const std::size_t i = j - 1;  // j >= 1 here: thrust_[0] <= t and thrust_[j] > t

        if (kind_ == InterpolationKind::piecewise_linear) {
            const double slope = (thrust_[j] - thrust_[i]) / (pwm_[j] - pwm_[i]);
            return PwmUs(pwm_[i] + (t - thrust_[i]) / slope);
        }

        double lo = pwm_[i];
        double hi = pwm_[j];
        while (hi - lo > 1e-9) {
            const double mid = 0.5 * (lo + hi);
            const double val = detail::hermite(pwm_[i], pwm_[j], thrust_[i], thrust_[j],
                                               thrust_tangents_[i], thrust_tangents_[j], mid);
            if (val < t) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return PwmUs(hi);
    }

    /// Electrical power at the pwm that yields `thrust` -- the composition
    /// power_at_pwm(pwm_for_thrust(thrust)), which is its definition.
    PowerW power_for_thrust(ThrustKgf thrust) const { return power_at_pwm(pwm_for_thrust(thrust)); }

private:
    MotorCurve() = default;

    double evaluate(const std::vector<double>& y, const std::vector<double>& tangents, PwmUs pwm) const {
        const double x = pwm.value();
        if (x < pwm_.front() || x > pwm_.back()) {
            throw DomainError("pwm " + detail::format_pwm(x) + " outside measured range [" +
                              detail::format_pwm(pwm_.front()) + ", " + detail::format_pwm(pwm_.back()) +
                              "]; extrapolation refused");
        }
        const auto it = std::upper_bound(pwm_.begin(), pwm_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - pwm_.begin());
        if (i == pwm_.size()) {
            return y.back();  // x == pwm_max
        }
        --i;
        if (x == pwm_[i]) {
            return y[i];  // knot exactness
        }
        if (kind_ == InterpolationKind::piecewise_linear) {
            const double w = (x - pwm_[i]) / (pwm_[i + 1] - pwm_[i]);
            return y[i] + w * (y[i + 1] - y[i]);
        }
        return detail::hermite(pwm_[i], pwm_[i + 1], y[i], y[i + 1], tangents[i], tangents[i + 1], x);
    }

    InterpolationKind kind_ = InterpolationKind::piecewise_linear;
    std::vector<double> pwm_;
    std::vector<double> power_;
    std::vector<double> thrust_;
    std::vector<double> power_tangents_;
    std::vector<double> thrust_tangents_;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream iss(line);
    while (std::getline(iss, field, ',')) {
        // trim surrounding whitespace
        const auto begin = field.find_first_not_of(" \t\r");
        const auto end = field.find_last_not_of(" \t\r");
        fields.push_back(begin == std::string::npos ? std::string()
                                                    : field.substr(begin, end - begin + 1));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

inline double parse_number(const std::string& text, const std::string& column, std::size_t line_no) {
    try {
        std::size_t consumed = 0;
        const double value = std::stod(text, &consumed);
        if (consumed != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" + text +
                         "' as a number in column '" + column + "'");
    }
}

}  // namespace detail

/// Parses a thrust-stand CSV: a header row naming the columns, then one row
/// per measurement. Required columns are `pwm_us`, either `power_w` or both
/// `voltage_v` and `current_a`, and either `thrust_kgf` or `thrust_gf`.
/// Extra columns are ignored; `#` lines and blank lines are skipped.
inline MotorCurve parse_thrust_stand_csv(std::istream& in,
                                         InterpolationKind kind = InterpolationKind::piecewise_linear) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    bool first_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (first_line) {
            first_line = false;
            if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
        }
        if (line.empty() || line[0] == '#') continue;
        header = detail::split_csv_line(line);
        break;
    }
    if (header.empty()) {
        throw ParseError("empty thrust-stand file: no header row");
    }

    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };

    const auto pwm_col = column("pwm_us");
    if (!pwm_col) {
        throw ParseError("missing required column 'pwm_us'");
    }
    const auto power_col = column("power_w");
    const auto voltage_col = column("voltage_v");
    const auto current_col = column("current_a");
    if (!power_col && !(voltage_col && current_col)) {
        throw ParseError("missing power columns: need 'power_w' or both 'voltage_v' and 'current_a'");
    }
    const auto thrust_kgf_col = column("thrust_kgf");
    const auto thrust_gf_col = column("thrust_gf");
    if (!thrust_kgf_col && !thrust_gf_col) {
        throw ParseError("missing thrust column: need 'thrust_kgf' or 'thrust_gf'");
    }

    std::vector<ThrustStandSample> samples;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        auto number_at = [&](std::size_t col) {
            return detail::parse_number(fields[col], header[col], line_no);
        };

        const double pwm = number_at(*pwm_col);
        const double power =
            power_col ? number_at(*power_col) : number_at(*voltage_col) * number_at(*current_col);
        const double thrust =
            thrust_kgf_col ? number_at(*thrust_kgf_col) : number_at(*thrust_gf_col) / 1000.0;
        try {
            samples.push_back({PwmUs(pwm), PowerW(power), ThrustKgf(thrust)});
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return MotorCurve::from_samples(std::move(samples), kind);
}

inline MotorCurve ingest_thrust_stand(const std::filesystem::path& path,
                                      InterpolationKind kind = InterpolationKind::piecewise_linear) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open thrust-stand file: " + path.string());
    }
    return parse_thrust_stand_csv(in, kind);
}

/// Writes the validated, aggregated table back out in the canonical column
/// order. The output is itself a valid thrust-stand CSV.
inline void write_curve_csv(const MotorCurve& curve, std::ostream& out) {
    out << "pwm_us,power_w,thrust_kgf\n";
    char buffer[96];
    for (const auto& s : curve.samples()) {
        std::snprintf(buffer, sizeof(buffer), "%.17g,%.17g,%.17g\n", s.pwm.value(), s.power.value(),
                      s.thrust.value());
        out << buffer;
    }
}

}  // namespace uavsizer
