#include "qstep/sweep.hpp"

#include "qstep/amp_arith.hpp"
#include "qstep/errors.hpp"
#include "qstep/fourier.hpp"
#include "qstep/gearbox.hpp"
#include "qstep/simulator.hpp"

#include <charconv>
#include <cmath>

namespace qstep {

namespace {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double sin2(double a) {
    const double s = std::sin(a);
    return s * s;
}

double cos2(double a) {
    const double c = std::cos(a);
    return c * c;
}

} // namespace

std::optional<SweepBuilder> parse_builder(const std::string& name) {
    if (name == "gearbox") return SweepBuilder::Gearbox;
    if (name == "rescaled-plateau") return SweepBuilder::RescaledPlateau;
    if (name == "relu") return SweepBuilder::Relu;
    if (name == "subtraction") return SweepBuilder::Subtraction;
    if (name == "composition") return SweepBuilder::Composition;
    if (name == "fourier") return SweepBuilder::Fourier;
    return std::nullopt;
}

std::string builder_name(SweepBuilder b) {
    switch (b) {
    case SweepBuilder::Gearbox: return "gearbox";
    case SweepBuilder::RescaledPlateau: return "rescaled-plateau";
    case SweepBuilder::Relu: return "relu";
    case SweepBuilder::Subtraction: return "subtraction";
    case SweepBuilder::Composition: return "composition";
    case SweepBuilder::Fourier: return "fourier";
    }
    return "?";
}

void validate_config(const SweepConfig& config) {
    if (config.points < 2) throw SpecError("--points must be at least 2");
    if (!std::isfinite(config.theta_min) || !std::isfinite(config.theta_max)) {
        throw SpecError("theta range must be finite");
    }
    if (!(config.theta_min < config.theta_max)) throw SpecError("--theta-min must be below --theta-max");
    if (config.mode == SweepMode::Shots && config.shots < 1) throw SpecError("--shots must be at least 1");
    switch (config.builder) {
    case SweepBuilder::Gearbox:
        if (config.depth < 1 || config.depth > kMaxGearboxDepth) throw SpecError("--depth must lie in [1, 4]");
        break;
    case SweepBuilder::Relu:
    case SweepBuilder::Fourier:
        if (config.depth < 1 || config.depth > 3) throw SpecError("--depth must lie in [1, 3]");
        break;
    default: break;
    }
}

PointPlan plan_point(const SweepConfig& config, double theta) {
    PointPlan p;
    switch (config.builder) {
    case SweepBuilder::Gearbox: {
        const auto spec = make_gearbox_spec(config.depth, theta);
        p.circuit = build_gearbox(spec);
        p.kept = register_qubits(p.circuit, "c");
        p.target = p.circuit.qubit("t");
        const auto a = analytics(spec);
        p.analytic = a.s_composed;
        p.analytic_success = a.success;
        break;
    }
    case SweepBuilder::RescaledPlateau: {
        p.circuit = build_rescaled_plateau(theta, config.kappa);
        p.kept = register_qubits(p.circuit, "c");
        p.target = p.circuit.qubit("o");
        const auto a = rescaled_plateau_analytics(theta, config.kappa);
        p.analytic = a.output_one;
        p.analytic_success = a.success;
        break;
    }
    case SweepBuilder::Relu: {
        p.circuit = build_relu(theta, config.depth);
        p.kept = register_qubits(p.circuit, "c");
        p.target = p.circuit.qubit("o");
        p.analytic = relu_analytic(theta, config.depth);
        p.analytic_success = analytics(make_gearbox_spec(config.depth, theta)).success;
        break;
    }
    case SweepBuilder::Subtraction: {
        const double g = sin2(theta);
        const double h = sin2(theta / 2);
        p.circuit = build_subtraction(AmplitudeLoader(g), AmplitudeLoader(h));
        p.target = p.circuit.qubit("t");
        p.analytic = (g + 1 - h) / 2;
        break;
    }
    case SweepBuilder::Composition: {
        const double g = sin2(theta);
        const double h = sin2(theta / 2);
        const double z = cos2(theta / 2);
        p.circuit = build_composition(AmplitudeLoader(g), AmplitudeLoader(h), AmplitudeLoader(z));
        p.target = p.circuit.qubit("s2_r");
        p.analytic = z * (g - h) / 4 + 0.5;
        break;
    }
    case SweepBuilder::Fourier: {
        const auto series = to_cos_squared(inverse_success_series(config.depth, config.order));
        p.circuit = compile_series(series, theta);
        p.target = series_readout(p.circuit);
        p.analytic = p.circuit.readback()->probability(series.evaluate(theta));
        break;
    }
    }
    return p;
}

Circuit build_for_export(const SweepConfig& config, double theta) { return plan_point(config, theta).circuit; }

std::vector<double> sweep_grid(const SweepConfig& config) {
    std::vector<double> grid(config.points);
    const double span = config.theta_max - config.theta_min;
    for (std::size_t i = 0; i < config.points; ++i) {
        grid[i] = config.theta_min + span * static_cast<double>(i) / static_cast<double>(config.points - 1);
    }
    grid.back() = config.theta_max;
    return grid;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    validate_config(config);
    const auto grid = sweep_grid(config);
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto plan = plan_point(config, grid[i]);
        const auto state = run_circuit(plan.circuit);
        SweepRow row;
        row.theta = grid[i];
        row.analytic = plan.analytic;
        if (config.mode == SweepMode::Exact) {
            if (plan.kept.empty()) {
                row.omega = state.probability_one(plan.target);
                row.success = 1.0;
            } else {
                const auto r = post_select_zero(state, plan.kept, plan.target);
                row.omega = r.omega;
                row.success = r.success_probability;
            }
        } else {
            std::vector<std::size_t> measured = plan.kept;
            measured.push_back(plan.target);
            const auto records = sample_shots(state, measured, config.shots, config.seed + i);
            const std::vector<int> zeros(plan.kept.size(), 0);
            const auto r = post_select_shots(records, measured, plan.kept, zeros, plan.target);
            row.omega = r.omega;
            row.success = r.success_probability;
            row.shots_kept = r.shots_kept;
            row.ci_halfwidth =
                kConfidenceZ * std::sqrt(r.omega * (1 - r.omega) / static_cast<double>(*r.shots_kept));
        }
        rows.push_back(row);
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        out << format_number(r.theta) << ',' << format_number(r.omega) << ',' << format_number(r.analytic) << ','
            << format_number(r.success) << ',';
        if (r.ci_halfwidth) out << format_number(*r.ci_halfwidth);
        out << '\n';
    }
}

} // namespace qstep
