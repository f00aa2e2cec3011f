#pragma once

// Command-line front end. Subcommands map one-to-one onto the library
// operations: fit (ingest + normalize a thrust-stand sweep), check (full
// design report), predict (endurance only), sweep (endurance vs added
// payload), frontier (battery capacity/weight bounds, plus optional battery
// classification) and search (exhaustive catalog enumeration).
//
// Exit codes are a stable contract: 0 success or all checks passed,
// 1 checks failed, 2 bad input. Structured output carries no timestamps or
// environment detail, so identical inputs produce identical bytes.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavsizer/battery_feasibility.hpp"
#include "uavsizer/catalog.hpp"
#include "uavsizer/design_loop.hpp"
#include "uavsizer/errors.hpp"
#include "uavsizer/motor_curve.hpp"
#include "uavsizer/power_budget.hpp"
#include "uavsizer/report_io.hpp"
#include "uavsizer/units.hpp"

#if defined(_WIN32)
#include <io.h>
#define UAVSIZER_ISATTY(fd) _isatty(fd)
#else
#include <unistd.h>
#define UAVSIZER_ISATTY(fd) isatty(fd)
#endif

namespace uavsizer::cli {

namespace detail {

constexpr int kExitOk = 0;
constexpr int kExitChecksFailed = 1;
constexpr int kExitBadInput = 2;

struct CommonOptions {
    std::string curve_path;
    std::string design_path;
    std::string out_path;
    std::string format = "text";
    std::string interp = "linear";
    std::optional<double> usable_fraction;
    double pwm_threshold = 1600.0;
    std::optional<double> loss_power_w;
    double pwm_step = 10.0;
};

inline void add_format_option(CLI::App* cmd, CommonOptions& opts,
                              const std::vector<std::string>& allowed) {
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember(allowed))
        ->default_str(allowed.front());
    cmd->add_option("--out", opts.out_path, "write primary output to this file instead of stdout");
}

inline void add_interp_option(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--interp", opts.interp, "interpolation kind")
        ->check(CLI::IsMember({"linear", "monotone-cubic"}))
        ->default_str(opts.interp);
}

inline InterpolationKind interp_kind(const CommonOptions& opts) {
    return *interpolation_kind_from(opts.interp);
}

inline MotorCurve load_curve(const CommonOptions& opts) {
    if (opts.curve_path.empty()) {
        throw ValidationError("--curve is required");
    }
    return ingest_thrust_stand(opts.curve_path, interp_kind(opts));
}

inline DesignSpec load_design_with_overrides(const CommonOptions& opts) {
    if (opts.design_path.empty()) {
        throw ValidationError("--design is required");
    }
    DesignSpec design = load_design(opts.design_path);
    if (opts.usable_fraction) design.usable_fraction = *opts.usable_fraction;
    if (opts.loss_power_w) design.loss_power = PowerW(*opts.loss_power_w);
    design.validate();
    return design;
}

// Primary output goes to --out when given, else to the session stream.
// ANSI styling only ever reaches a real interactive stdout.
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& session_out) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw ValidationError("cannot open output file: " + path);
            }
            stream_ = &file_;
        } else {
            stream_ = &session_out;
        }
        color_ = path.empty() && (&session_out == &std::cout) && UAVSIZER_ISATTY(1) &&
                 std::getenv("UAV_SIZER_NO_COLOR") == nullptr;
    }

    std::ostream& stream() { return *stream_; }
    bool color() const { return color_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
    bool color_ = false;
};

inline void emit_json(const nlohmann::json& j, std::ostream& out) { out << j.dump(2) << "\n"; }

inline int run_fit(const CommonOptions& opts, std::ostream& session_out) {
    const MotorCurve curve = load_curve(opts);
    if (!opts.out_path.empty()) {
        std::ofstream file(opts.out_path);
        if (!file) {
            throw ValidationError("cannot open output file: " + opts.out_path);
        }
        write_curve_csv(curve, file);
    }
    using uavsizer::detail::fixed4;
    session_out << "samples:    " << curve.sample_count() << "\n";
    session_out << "domain:     " << fixed4(curve.pwm_min().value()) << " - "
                << fixed4(curve.pwm_max().value()) << " us\n";
    session_out << "max thrust: " << fixed4(curve.max_thrust().value()) << " kgf\n";
    session_out << "max power:  " << fixed4(curve.max_power().value()) << " W\n";
    session_out << "interp:     " << to_string(curve.interpolation()) << "\n";
    return kExitOk;
}

inline int run_check(const CommonOptions& opts, std::ostream& session_out) {
    const MotorCurve curve = load_curve(opts);
    const DesignSpec design = load_design_with_overrides(opts);
    const DesignReport report =
        evaluate_design(design, curve, PwmUs(opts.pwm_threshold), opts.pwm_step);

    OutputTarget target(opts.out_path, session_out);
    if (opts.format == "json") {
        emit_json(check_to_json(design, report), target.stream());
    } else {
        render_report_text(report, target.stream(), target.color());
    }
    return report.pass() ? kExitOk : kExitChecksFailed;
}

inline int run_predict(const CommonOptions& opts, std::ostream& session_out) {
    const MotorCurve curve = load_curve(opts);
    const DesignSpec design = load_design_with_overrides(opts);

    const MassKg auw = design.auw();
    const PowerW hover = hover_flight_power(curve, auw, design.motor_count);
    const PowerW total = hover + design.compute.max_power + design.radio.max_power +
                         design.loss_power;
    const TimeMin minutes = predict_endurance(design, curve);

    OutputTarget target(opts.out_path, session_out);
    if (opts.format == "json") {
        emit_json(nlohmann::json{{"auw_kg", auw.value()},
                                 {"hover_power_w", hover.value()},
                                 {"total_power_w", total.value()},
                                 {"battery_capacity_wh", design.battery_capacity().value()},
                                 {"usable_fraction", design.usable_fraction},
                                 {"predicted_flight_time_min", minutes.value()}},
                  target.stream());
    } else {
        using uavsizer::detail::fixed4;
        auto& out = target.stream();
        out << "auw:                  " << fixed4(auw.value()) << " kg\n";
        out << "hover power:          " << fixed4(hover.value()) << " W\n";
        out << "total power:          " << fixed4(total.value()) << " W\n";
        out << "battery capacity:     " << fixed4(design.battery_capacity().value()) << " Wh (x "
            << fixed4(design.usable_fraction) << " usable)\n";
        out << "predicted flight time " << fixed4(minutes.value()) << " min\n";
    }
    return kExitOk;
}

inline int run_sweep(const CommonOptions& opts, double payload_from, double payload_to,
                     double payload_step, std::ostream& session_out) {
    const MotorCurve curve = load_curve(opts);
    const DesignSpec design = load_design_with_overrides(opts);
    const SweepResult sweep = sweep_auw(design, curve, MassKg(payload_from), MassKg(payload_to),
                                        MassKg(payload_step));

    OutputTarget target(opts.out_path, session_out);
    if (opts.format == "json") {
        nlohmann::json points = nlohmann::json::array();
        for (const auto& p : sweep.points) {
            points.push_back({{"auw_kg", p.auw_kg},
                              {"flight_power_w", p.flight_power_w},
                              {"flight_time_min", p.flight_time_min}});
        }
        nlohmann::json j{{"points", points}};
        if (sweep.truncated_at_auw_kg) j["truncated_at_auw_kg"] = *sweep.truncated_at_auw_kg;
        emit_json(j, target.stream());
    } else {
        write_sweep_csv(sweep, target.stream());
    }
    return kExitOk;
}

inline int run_frontier(const CommonOptions& opts, int motor_count,
                        std::optional<double> auw_other, std::optional<double> compute_w,
                        std::optional<double> radio_w, std::optional<double> target_min,
                        std::optional<double> battery_mass, std::optional<double> battery_wh,
                        std::ostream& session_out) {
    const MotorCurve curve = load_curve(opts);

    FrontierParams params;
    params.pwm_step_us = opts.pwm_step;
    if (!opts.design_path.empty()) {
        const DesignSpec design = load_design_with_overrides(opts);
        params.motor_count = design.motor_count;
        params.auw_other = design.auw_other();
        params.compute_power = design.compute.max_power;
        params.radio_power = design.radio.max_power;
        params.target_flight_time = design.target_flight_time;
        params.usable_fraction = design.usable_fraction;
    } else {
        params.motor_count = motor_count;
        if (!auw_other) {
            throw ValidationError("--auw-other is required when no --design is given");
        }
        params.auw_other = MassKg(*auw_other);
        params.compute_power = PowerW(compute_w.value_or(0.0));
        params.radio_power = PowerW(radio_w.value_or(0.0));
        params.usable_fraction = opts.usable_fraction.value_or(0.8);
    }
    if (target_min) params.target_flight_time = TimeMin(*target_min);
    if (opts.usable_fraction) params.usable_fraction = *opts.usable_fraction;

    const FeasibilityFrontier frontier = build_frontier(curve, params);

    if (battery_mass.has_value() != battery_wh.has_value()) {
        throw ValidationError("battery classification needs both --battery-mass-kg and --battery-wh");
    }

    OutputTarget target(opts.out_path, session_out);
    if (opts.format == "json") {
        nlohmann::json points = nlohmann::json::array();
        for (const auto& p : frontier.points()) {
            points.push_back({{"pwm_us", p.pwm.value()},
                              {"max_battery_mass_kg", p.max_battery_mass.value()},
                              {"required_capacity_wh", p.required_capacity.value()}});
        }
        nlohmann::json j{{"points", points}};
        if (battery_mass) {
            const BatteryVerdict verdict =
                classify_battery(frontier, MassKg(*battery_mass), EnergyWh(*battery_wh));
            j["battery_verdict"] = {{"feasible", verdict.feasible},
                                    {"best_pwm_us", verdict.best_pwm.value()},
                                    {"mass_headroom_kg", verdict.mass_headroom_kg},
                                    {"capacity_surplus_wh", verdict.capacity_surplus_wh}};
            emit_json(j, target.stream());
            return verdict.feasible ? kExitOk : kExitChecksFailed;
        }
        emit_json(j, target.stream());
    } else {
        write_frontier_csv(frontier, target.stream());
        if (battery_mass) {
            const BatteryVerdict verdict =
                classify_battery(frontier, MassKg(*battery_mass), EnergyWh(*battery_wh));
            using uavsizer::detail::fixed4;
            session_out << "battery " << fixed4(*battery_mass) << " kg / " << fixed4(*battery_wh)
                        << " Wh: " << (verdict.feasible ? "feasible" : "infeasible")
                        << " (best pwm " << fixed4(verdict.best_pwm.value()) << " us, headroom "
                        << fixed4(verdict.mass_headroom_kg) << " kg, surplus "
                        << fixed4(verdict.capacity_surplus_wh) << " Wh)\n";
            return verdict.feasible ? kExitOk : kExitChecksFailed;
        }
    }
    return kExitOk;
}

inline int run_search(const CommonOptions& opts, const std::string& catalog_path,
                      std::optional<double> target_min, std::optional<double> max_auw,
                      std::optional<int> motor_count, std::ostream& session_out) {
    if (catalog_path.empty()) {
        throw ValidationError("--catalog is required");
    }
    const CatalogSpec catalog = load_catalog(catalog_path);

    std::map<std::string, MotorCurve> curves;
    const auto base_dir = std::filesystem::path(catalog_path).parent_path();
    for (const auto& [motor_name, csv_path] : catalog.motor_curve_paths) {
        std::filesystem::path p(csv_path);
        if (p.is_relative()) p = base_dir / p;
        curves.emplace(motor_name, ingest_thrust_stand(p, interp_kind(opts)));
    }

    SearchConstraints constraints;
    constraints.target_flight_time =
        target_min ? TimeMin(*target_min) : catalog.target_flight_time;
    constraints.pwm_threshold = PwmUs(opts.pwm_threshold);
    if (max_auw) constraints.max_auw = MassKg(*max_auw);
    constraints.motor_count = motor_count.value_or(catalog.motor_count);
    constraints.usable_fraction = opts.usable_fraction.value_or(catalog.usable_fraction);
    constraints.loss_power =
        opts.loss_power_w ? PowerW(*opts.loss_power_w) : catalog.loss_power;

    const SearchResult result = search_catalog(catalog.components, curves, constraints);

    OutputTarget target(opts.out_path, session_out);
    if (opts.format == "json") {
        nlohmann::json passing = nlohmann::json::array();
        for (const auto& r : result.passing) passing.push_back(report_to_json(r));
        nlohmann::json rejected = nlohmann::json::array();
        for (const auto& r : result.rejected) rejected.push_back(report_to_json(r));
        emit_json(nlohmann::json{{"passing", passing}, {"rejected", rejected}}, target.stream());
    } else {
        using uavsizer::detail::fixed4;
        auto& out = target.stream();
        if (result.passing.empty()) {
            out << "no passing design (" << result.rejected.size() << " candidates rejected)\n";
            for (const auto& r : result.rejected) {
                out << "  " << r.name << ": ";
                if (r.failure) {
                    out << *r.failure;
                } else if (!r.pwm_check.pass) {
                    out << "hover pwm over threshold";
                } else if (!r.endurance_check.pass) {
                    out << "flight time short of target";
                } else {
                    out << "battery infeasible";
                }
                out << "\n";
            }
        } else {
            out << result.passing.size() << " passing design(s), best first:\n";
            std::size_t rank = 1;
            for (const auto& r : result.passing) {
                out << "  " << rank++ << ". " << r.name << "  auw " << fixed4(r.auw_kg)
                    << " kg, flight time "
                    << fixed4(r.predicted_flight_time_min.value_or(0.0)) << " min, hover pwm "
                    << fixed4(r.hover_pwm_us.value_or(0.0)) << " us\n";
            }
        }
    }
    return result.passing.empty() ? kExitChecksFailed : kExitOk;
}

}  // namespace detail

/// Runs the tool against explicit argument and stream bindings. `args` holds
/// the arguments without the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"multirotor sizing toolkit: thrust-stand curves, power budgets,\n"
                 "battery feasibility frontiers and design search",
                 "uav-sizer"};
    app.require_subcommand(1);

    detail::CommonOptions opts;
    double payload_from = 0.0;
    double payload_to = 0.0;
    double payload_step = 0.05;
    int motor_count = 4;
    std::optional<int> search_motor_count;
    std::optional<double> auw_other, compute_w, radio_w, target_min, battery_mass, battery_wh,
        max_auw;
    std::string catalog_path;

    auto add_curve = [&](CLI::App* cmd) {
        cmd->add_option("--curve", opts.curve_path, "thrust-stand csv")->required();
    };
    auto add_design = [&](CLI::App* cmd) {
        cmd->add_option("--design", opts.design_path, "design json file")->required();
    };
    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--usable-fraction", opts.usable_fraction,
                        "override the usable battery fraction (0, 1]");
        cmd->add_option("--loss-power-w", opts.loss_power_w, "override the fixed loss power [W]");
    };

    CLI::App* fit = app.add_subcommand("fit", "ingest and validate a thrust-stand sweep");
    add_curve(fit);
    detail::add_interp_option(fit, opts);
    fit->add_option("--out", opts.out_path, "write the normalized curve csv here");

    CLI::App* check = app.add_subcommand("check", "evaluate a design against all gates");
    add_curve(check);
    add_design(check);
    detail::add_interp_option(check, opts);
    detail::add_format_option(check, opts, {"text", "json"});
    add_overrides(check);
    check->add_option("--pwm-threshold", opts.pwm_threshold, "hover pwm safety threshold [us]")
        ->default_str("1600");
    check->add_option("--pwm-step", opts.pwm_step, "frontier sampling step [us]")
        ->default_str("10");

    CLI::App* predict = app.add_subcommand("predict", "predict endurance for a design");
    add_curve(predict);
    add_design(predict);
    detail::add_interp_option(predict, opts);
    detail::add_format_option(predict, opts, {"text", "json"});
    add_overrides(predict);

    CLI::App* sweep = app.add_subcommand("sweep", "flight time vs added payload");
    add_curve(sweep);
    add_design(sweep);
    detail::add_interp_option(sweep, opts);
    detail::add_format_option(sweep, opts, {"csv", "json"});
    add_overrides(sweep);
    sweep->add_option("--payload-from", payload_from, "first added payload [kg]")->default_str("0");
    sweep->add_option("--payload-to", payload_to, "last added payload [kg]")->default_str("0");
    sweep->add_option("--step", payload_step, "payload increment [kg]")->default_str("0.05");

    CLI::App* frontier = app.add_subcommand("frontier",
                                            "battery capacity vs weight feasibility bounds");
    add_curve(frontier);
    frontier->add_option("--design", opts.design_path,
                         "take n, masses, powers and target from this design file");
    detail::add_interp_option(frontier, opts);
    detail::add_format_option(frontier, opts, {"csv", "json"});
    add_overrides(frontier);
    frontier->add_option("--motor-count", motor_count, "number of motors")->default_str("4");
    frontier->add_option("--auw-other", auw_other, "non-battery takeoff mass [kg]");
    frontier->add_option("--compute-power-w", compute_w, "compute unit draw [W]");
    frontier->add_option("--radio-power-w", radio_w, "radio draw [W]");
    frontier->add_option("--target", target_min, "target flight time [min]");
    frontier->add_option("--pwm-step", opts.pwm_step, "sampling step [us]")->default_str("10");
    frontier->add_option("--battery-mass-kg", battery_mass, "classify this battery: mass [kg]");
    frontier->add_option("--battery-wh", battery_wh, "classify this battery: capacity [Wh]");

    CLI::App* search = app.add_subcommand("search", "enumerate a catalog for passing designs");
    search->add_option("--catalog", catalog_path, "catalog json file")->required();
    detail::add_interp_option(search, opts);
    detail::add_format_option(search, opts, {"text", "json"});
    add_overrides(search);
    search->add_option("--target", target_min, "target flight time [min]");
    search->add_option("--pwm-threshold", opts.pwm_threshold, "hover pwm safety threshold [us]")
        ->default_str("1600");
    search->add_option("--max-auw", max_auw, "reject designs heavier than this [kg]");
    search->add_option("--motor-count", search_motor_count, "number of motors");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return detail::kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return detail::kExitBadInput;
    }

    try {
        if (fit->parsed()) return detail::run_fit(opts, out);
        if (check->parsed()) return detail::run_check(opts, out);
        if (predict->parsed()) return detail::run_predict(opts, out);
        if (sweep->parsed()) {
            if (sweep->count("--format") == 0) opts.format = "csv";
            return detail::run_sweep(opts, payload_from, payload_to, payload_step, out);
        }
        if (frontier->parsed()) {
            if (frontier->count("--format") == 0) opts.format = "csv";
            return detail::run_frontier(opts, motor_count, auw_other, compute_w, radio_w,
                                        target_min, battery_mass, battery_wh, out);
        }
        if (search->parsed()) {
            return detail::run_search(opts, catalog_path, target_min, max_auw, search_motor_count,
                                      out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return detail::kExitBadInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return detail::kExitBadInput;
    }
    err << "error: no subcommand given\n";
    return detail::kExitBadInput;
}

inline int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args), std::cout, std::cerr);
}

}  // namespace uavsizer::cli
