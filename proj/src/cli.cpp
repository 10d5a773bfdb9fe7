#include "qstep/cli.hpp"

#include "qstep/errors.hpp"
#include "qstep/fourier.hpp"
#include "qstep/gearbox.hpp"
#include "qstep/sweep.hpp"
#include "qstep/validation.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qstep {

namespace {

struct Options {
    std::string builder = "gearbox";
    unsigned depth = 2;
    double theta_min = 0.0;
    double theta_max = std::numbers::pi / 2;
    std::size_t points = 101;
    std::string mode = "exact";
    std::uint64_t shots = kDefaultShots;
    std::uint64_t seed = 0;
    std::string out;
    bool degrees = false;
    double theta = std::numbers::pi / 4;
    double kappa = std::numbers::pi / 4;
    std::size_t order = 4;
    bool perturb_angle = false;
};

// Writes through a sibling temp file so a failed write never leaves a partial target.
void write_file(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw InputError("cannot open " + tmp.string() + " for writing");
        f << text;
        f.flush();
        if (!f) {
            f.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw InputError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw InputError("cannot move output into place at " + path + ": " + ec.message());
    }
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty()) {
        out << text;
    } else {
        write_file(o.out, text);
    }
}

double to_radians(const Options& o, double v) { return o.degrees ? v * std::numbers::pi / 180.0 : v; }

SweepConfig make_config(const Options& o) {
    SweepConfig c;
    auto b = parse_builder(o.builder);
    if (!b) throw SpecError("unknown builder '" + o.builder + "'");
    c.builder = *b;
    c.depth = o.depth;
    c.theta_min = to_radians(o, o.theta_min);
    c.theta_max = to_radians(o, o.theta_max);
    c.points = o.points;
    if (o.mode == "exact") {
        c.mode = SweepMode::Exact;
    } else if (o.mode == "shots") {
        c.mode = SweepMode::Shots;
    } else {
        throw SpecError("--mode must be exact or shots");
    }
    c.shots = o.shots;
    c.seed = o.seed;
    c.kappa = to_radians(o, o.kappa);
    c.order = o.order;
    return c;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const auto config = make_config(o);
    std::ostringstream csv;
    write_sweep_csv(csv, run_sweep(config));
    emit(o, out, csv.str());
    return kExitOk;
}

int cmd_fourier(const Options& o, std::ostream& out) {
    if (o.depth < 1 || o.depth > 3) throw SpecError("--depth must lie in [1, 3]");
    const auto series = inverse_success_series(o.depth, o.order);
    nlohmann::json j;
    j["depth"] = o.depth;
    j["order"] = o.order;
    j["normalization"] = normalization_constant(o.depth);
    j["fourier"] = series;
    j["cos_squared"] = to_cos_squared(series);
    emit(o, out, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
    ValidationOptions v;
    v.shots = o.shots;
    if (o.perturb_angle) {
        v.gearbox_builder = [](const GearboxSpec& spec) {
            GearboxSpec doubled = spec;
            doubled.theta *= 2;
            return build_gearbox(doubled);
        };
    }
    std::ostringstream report;
    const bool ok = print_report(report, run_validation(v));
    emit(o, out, report.str());
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_export(const Options& o, std::ostream& out) {
    auto config = make_config(o);
    validate_config(config);
    emit(o, out, export_qasm(build_for_export(config, to_radians(o, o.theta))));
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Gearbox unit-step circuits: sweeps, Fourier coefficients, validation and export", "qstep"};
    app.require_subcommand(1, 1);

    auto add_range = [&](CLI::App* s) {
        s->add_option("--theta-min", o.theta_min, "Sweep start (radians unless --degrees)");
        s->add_option("--theta-max", o.theta_max, "Sweep end (radians unless --degrees)");
        s->add_option("--points", o.points, "Grid points, at least 2");
        s->add_option("--mode", o.mode, "exact or shots")->check(CLI::IsMember({"exact", "shots"}));
        s->add_option("--shots", o.shots, "Shots per grid point in shots mode");
        s->add_option("--seed", o.seed, "Sampling seed; point i uses seed + i");
    };
    auto add_builder = [&](CLI::App* s, bool required) {
        auto* opt = s->add_option("--builder", o.builder,
                                  "gearbox, rescaled-plateau, relu, subtraction, composition or fourier");
        if (required) opt->required();
        s->add_option("--depth", o.depth, "Gearbox depth d");
        s->add_option("--kappa", o.kappa, "Rescaled-plateau coupling angle");
        s->add_option("--order", o.order, "Fourier order for the fourier builder");
        s->add_flag("--degrees", o.degrees, "Interpret angles as degrees");
    };

    auto* sweep = app.add_subcommand("sweep", "Sweep a builder over theta and write CSV");
    add_builder(sweep, false);
    add_range(sweep);
    sweep->add_option("--out", o.out, "Output file (stdout if omitted)");

    auto* fourier = app.add_subcommand("fourier", "Fourier coefficients of the normalized inverse success probability");
    fourier->add_option("--depth", o.depth, "Gearbox depth d");
    fourier->add_option("--order", o.order, "Series order");
    fourier->add_option("--out", o.out, "Output JSON file (stdout if omitted)");

    auto* validate = app.add_subcommand("validate", "Run the oracle check suite");
    validate->add_option("--shots", o.shots, "Shots for the statistical checks");
    validate->add_option("--out", o.out, "Report file (stdout if omitted)");
    validate->add_flag("--perturb-angle", o.perturb_angle)->group("");

    auto* exp = app.add_subcommand("export", "Export one builder instance as OpenQASM 2.0");
    add_builder(exp, true);
    exp->add_option("--theta", o.theta, "Input angle (radians unless --degrees)")->required();
    exp->add_option("--out", o.out, "Output file (stdout if omitted)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sweep) return cmd_sweep(o, out);
        if (*fourier) return cmd_fourier(o, out);
        if (*validate) return cmd_validate(o, out);
        if (*exp) return cmd_export(o, out);
    } catch (const std::exception& e) {
        err << "qstep: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace qstep
