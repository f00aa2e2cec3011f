#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "uavsizer/motor_curve.hpp"

using namespace uavsizer;
using testing_support::f3_curve;
using testing_support::f3_samples;
using testing_support::random_monotone_samples;

TEST_CASE("building a curve validates the sample table") {
    CHECK_NOTHROW(f3_curve());

    SECTION("two rows are too few") {
        auto samples = f3_samples();
        samples.pop_back();
        CHECK_THROWS_WITH(MotorCurve::from_samples(samples),
                          Catch::Matchers::ContainsSubstring("too few rows"));
    }

    SECTION("decreasing thrust names the offending pwm") {
        auto samples = f3_samples();
        samples.push_back({PwmUs(1700.0), PowerW(700.0), ThrustKgf(2.0)});
        CHECK_THROWS_WITH(MotorCurve::from_samples(samples),
                          Catch::Matchers::ContainsSubstring("1700"));
    }

    SECTION("decreasing power is rejected too") {
        auto samples = f3_samples();
        samples.push_back({PwmUs(1700.0), PowerW(500.0), ThrustKgf(2.5)});
        CHECK_THROWS_AS(MotorCurve::from_samples(samples), ValidationError);
    }

    SECTION("duplicate pwm rows are averaged before validation") {
        auto samples = f3_samples();
        samples.push_back({PwmUs(1300.0), PowerW(260.0), ThrustKgf(1.4)});
        samples.push_back({PwmUs(1300.0), PowerW(240.0), ThrustKgf(1.2)});
        const auto curve = MotorCurve::from_samples(samples);
        CHECK(curve.sample_count() == 3);
        CHECK(curve.power_at_pwm(PwmUs(1300.0)).value() == Catch::Approx(250.0));
        CHECK(curve.thrust_at_pwm(PwmUs(1300.0)).value() == Catch::Approx(1.3));
    }

    SECTION("negative thrust in a sample is invalid") {
        auto samples = f3_samples();
        samples[0].thrust = ThrustKgf(-0.1);
        CHECK_THROWS_AS(MotorCurve::from_samples(samples), ValidationError);
    }
}

TEST_CASE("queries interpolate and refuse extrapolation") {
    const auto curve = f3_curve();

    SECTION("knot identities") {
        CHECK(curve.thrust_at_pwm(PwmUs(1300.0)).value() == 1.3);
        CHECK(curve.power_at_pwm(PwmUs(1600.0)).value() == 600.0);
        CHECK(curve.power_at_pwm(PwmUs(1000.0)).value() == 5.0);
    }

    SECTION("hand-evaluated midpoints, linear mode") {
        CHECK(curve.thrust_at_pwm(PwmUs(1150.0)).value() == Catch::Approx(0.65));
        CHECK(curve.power_at_pwm(PwmUs(1450.0)).value() == Catch::Approx(425.0));
    }

    SECTION("out-of-domain pwm is refused") {
        CHECK_THROWS_AS(curve.thrust_at_pwm(PwmUs(900.0)), DomainError);
        CHECK_THROWS_AS(curve.power_at_pwm(PwmUs(1700.0)), DomainError);
    }
}

TEST_CASE("thrust inversion") {
    const auto curve = f3_curve();

    SECTION("knot identity") {
        CHECK(curve.pwm_for_thrust(ThrustKgf(1.3)).value() == 1300.0);
    }

    SECTION("inverse of the linear segment") {
        CHECK(curve.pwm_for_thrust(ThrustKgf(0.65)).value() == Catch::Approx(1150.0).margin(0.1));
    }

    SECTION("thrust outside the measured range") {
        CHECK_THROWS_WITH(curve.pwm_for_thrust(ThrustKgf(3.0)),
                          Catch::Matchers::ContainsSubstring("cannot produce requested thrust"));
        CHECK_THROWS_AS(curve.pwm_for_thrust(ThrustKgf(-0.5)), DomainError);
    }

    SECTION("flat segment resolves to the smallest pwm") {
        const auto flat = MotorCurve::from_samples({
            {PwmUs(1000.0), PowerW(5.0), ThrustKgf(0.0)},
            {PwmUs(1200.0), PowerW(100.0), ThrustKgf(1.0)},
            {PwmUs(1400.0), PowerW(150.0), ThrustKgf(1.0)},
            {PwmUs(1600.0), PowerW(300.0), ThrustKgf(2.0)},
        });
        CHECK(flat.pwm_for_thrust(ThrustKgf(1.0)).value() == 1200.0);
    }
}

TEST_CASE("power for thrust composes the inverse with the power channel") {
    const auto curve = f3_curve();
    CHECK(curve.power_for_thrust(ThrustKgf(1.3)).value() == Catch::Approx(250.0));
    CHECK(curve.power_for_thrust(ThrustKgf(0.65)).value() == Catch::Approx(127.5));
    CHECK_THROWS_AS(curve.power_for_thrust(ThrustKgf(3.0)), DomainError);
}

TEST_CASE("curve properties over random monotone fixtures") {
    // Covers both interpolation modes: knot exactness, pwm<->thrust round
    // trips, monotone queries, and cubic staying inside the knot bracket.
    std::mt19937_64 rng(20220131);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int iteration = 0; iteration < 1200; ++iteration) {
        const auto samples = random_monotone_samples(rng);
        const auto kind = iteration % 2 == 0 ? InterpolationKind::piecewise_linear
                                             : InterpolationKind::monotone_cubic;
        const auto curve = MotorCurve::from_samples(samples, kind);

        for (const auto& s : samples) {
            REQUIRE(curve.thrust_at_pwm(s.pwm).value() == s.thrust.value());
            REQUIRE(curve.power_at_pwm(s.pwm).value() == s.power.value());
        }

        const double lo = curve.pwm_min().value();
        const double hi = curve.pwm_max().value();
        double previous_thrust = -1.0;
        double previous_power = -1.0;
        for (int q = 0; q <= 16; ++q) {
            const PwmUs pwm(std::min(hi, lo + (hi - lo) * q / 16.0));
            const double thrust = curve.thrust_at_pwm(pwm).value();
            const double power = curve.power_at_pwm(pwm).value();
            REQUIRE(thrust >= previous_thrust);
            REQUIRE(power >= previous_power);
            previous_thrust = thrust;
            previous_power = power;
        }

        const double tmin = curve.min_thrust().value();
        const double tmax = curve.max_thrust().value();
        for (int q = 0; q < 4; ++q) {
            const ThrustKgf target(tmin + (tmax - tmin) * unit(rng));
            const PwmUs pwm = curve.pwm_for_thrust(target);
            REQUIRE(std::abs(curve.thrust_at_pwm(pwm).value() - target.value()) < 1e-6);
        }

        REQUIRE_THROWS_AS(curve.thrust_at_pwm(PwmUs(lo - 1.0)), DomainError);
        REQUIRE_THROWS_AS(curve.power_at_pwm(PwmUs(hi + 1.0)), DomainError);

        if (kind == InterpolationKind::monotone_cubic) {
            // no overshoot: values stay within the bracketing knots
            for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
                for (int q = 1; q < 8; ++q) {
                    const double x = samples[i].pwm.value() +
                                     (samples[i + 1].pwm.value() - samples[i].pwm.value()) * q / 8.0;
                    const double t = curve.thrust_at_pwm(PwmUs(x)).value();
                    const double p = curve.power_at_pwm(PwmUs(x)).value();
                    REQUIRE(t >= samples[i].thrust.value());
                    REQUIRE(t <= samples[i + 1].thrust.value());
                    REQUIRE(p >= samples[i].power.value());
                    REQUIRE(p <= samples[i + 1].power.value());
                }
            }
        }
    }
}

TEST_CASE("linear queries agree with the brute-force oracle") {
    namespace oracle = testing_support::oracle;
    std::mt19937_64 rng(7);
    for (int iteration = 0; iteration < 50; ++iteration) {
        const auto samples = random_monotone_samples(rng);
        const auto curve = MotorCurve::from_samples(samples);
        const auto table = oracle::table_from(samples);
        const double lo = curve.pwm_min().value();
        const double hi = curve.pwm_max().value();
        for (int q = 0; q <= 10; ++q) {
            const double x = std::min(hi, lo + (hi - lo) * q / 10.0);
            REQUIRE(curve.thrust_at_pwm(PwmUs(x)).value() ==
                    Catch::Approx(oracle::interp_linear(table.pwm, table.thrust, x)).margin(1e-12));
            REQUIRE(curve.power_at_pwm(PwmUs(x)).value() ==
                    Catch::Approx(oracle::interp_linear(table.pwm, table.power, x)).margin(1e-12));
        }
    }
}

TEST_CASE("csv ingestion") {
    SECTION("power and thrust columns, comments, extra columns ignored") {
        std::istringstream csv(
            "# bench sweep\n"
            "pwm_us,rpm,power_w,thrust_kgf\n"
            "1000,2100,5,0.0\n"
            "# mid row\n"
            "1300,4000,250,1.3\n"
            "1600,5800,600,2.4\n");
        const auto curve = parse_thrust_stand_csv(csv);
        CHECK(curve.sample_count() == 3);
        CHECK(curve.max_thrust().value() == 2.4);
    }

    SECTION("voltage x current and gram-force thrust") {
        std::istringstream csv(
            "pwm_us,voltage_v,current_a,thrust_gf\n"
            "1000,33.6,0.5,0\n"
            "1300,33.0,10.0,1300\n"
            "1600,32.4,20.0,2400\n");
        const auto curve = parse_thrust_stand_csv(csv);
        CHECK(curve.power_at_pwm(PwmUs(1300.0)).value() == Catch::Approx(330.0));
        CHECK(curve.thrust_at_pwm(PwmUs(1600.0)).value() == Catch::Approx(2.4));
    }

    SECTION("missing column errors name the column") {
        std::istringstream csv("pwm_us,thrust_kgf\n1000,0\n1300,1\n1600,2\n");
        CHECK_THROWS_WITH(parse_thrust_stand_csv(csv),
                          Catch::Matchers::ContainsSubstring("power"));
        std::istringstream csv2("pwm_us,power_w\n1000,5\n1300,250\n1600,600\n");
        CHECK_THROWS_WITH(parse_thrust_stand_csv(csv2),
                          Catch::Matchers::ContainsSubstring("thrust"));
        std::istringstream csv3("power_w,thrust_kgf\n5,0\n250,1\n600,2\n");
        CHECK_THROWS_WITH(parse_thrust_stand_csv(csv3),
                          Catch::Matchers::ContainsSubstring("pwm_us"));
    }

    SECTION("bad numeric field reports line and column") {
        std::istringstream csv("pwm_us,power_w,thrust_kgf\n1000,5,0\n1300,abc,1.3\n1600,600,2.4\n");
        CHECK_THROWS_WITH(parse_thrust_stand_csv(csv),
                          Catch::Matchers::ContainsSubstring("power_w"));
    }

    SECTION("normalized rewrite parses back to the same curve") {
        std::istringstream csv(
            "pwm_us,power_w,thrust_kgf\n"
            "1300,250,1.3\n"
            "1000,5,0.0\n"
            "1600,600,2.4\n"
            "1300,260,1.3\n");
        const auto curve = parse_thrust_stand_csv(csv);
        std::ostringstream rewritten;
        write_curve_csv(curve, rewritten);
        std::istringstream again(rewritten.str());
        const auto reparsed = parse_thrust_stand_csv(again);
        REQUIRE(reparsed.sample_count() == curve.sample_count());
        for (std::size_t i = 0; i < curve.samples().size(); ++i) {
            CHECK(reparsed.samples()[i].pwm.value() == curve.samples()[i].pwm.value());
            CHECK(reparsed.samples()[i].power.value() == curve.samples()[i].power.value());
            CHECK(reparsed.samples()[i].thrust.value() == curve.samples()[i].thrust.value());
        }
    }
}

TEST_CASE("bundled sweep hits the published operating points") {
    const auto curve = ingest_thrust_stand(testing_support::data_path("monarch_mn501s.csv"));
    CHECK(curve.pwm_for_thrust(ThrustKgf(1.214)).value() == Catch::Approx(1260.0).margin(10.0));
    CHECK(curve.power_for_thrust(ThrustKgf(1.27)).value() == Catch::Approx(171.12).margin(0.01));
}
