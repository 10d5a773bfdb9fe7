#include "qstep/gearbox.hpp"

#include "qstep/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qstep {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuarterPi = kPi / 4;

double ipow(double base, unsigned exponent) {
    double r = 1.0;
    while (exponent) {
        if (exponent & 1U) r *= base;
        base *= base;
        exponent >>= 1U;
    }
    return r;
}

void check_depth(unsigned depth, unsigned max_depth) {
    if (depth < 1 || depth > max_depth) {
        throw SpecError("gearbox depth must lie in [1, " + std::to_string(max_depth) + "], got " +
                        std::to_string(depth));
    }
}

} // namespace

GearboxSpec make_gearbox_spec(unsigned depth, double theta) {
    if (depth < 1) throw SpecError("gearbox depth must be positive");
    if (depth > 16) throw SpecError("gearbox depth too large");
    if (!std::isfinite(theta)) throw SpecError("gearbox angle must be finite");
    return {depth, std::clamp(theta, 0.0, kPi / 2)};
}

double composed_step(unsigned depth, double theta) {
    const unsigned e = 1U << (depth + 1);
    const double s = ipow(std::sin(theta), e);
    const double c = ipow(std::cos(theta), e);
    return s / (s + c);
}

double effective_angle(unsigned depth, double theta) {
    if (theta >= kPi / 2) return kPi / 2;
    return std::atan(ipow(std::tan(theta), 1U << depth));
}

double single_step_map(double phi) {
    const double s = ipow(std::sin(phi), 4);
    const double c = ipow(std::cos(phi), 4);
    return s / (s + c);
}

double unit_step(double theta) {
    if (theta > kQuarterPi) return 1.0;
    if (theta < kQuarterPi) return 0.0;
    return 0.5;
}

GearboxAnalytics analytics(const GearboxSpec& spec) {
    const unsigned e = 1U << spec.depth;
    GearboxAnalytics a;
    a.amp0 = ipow(std::cos(spec.theta), e);
    a.amp1 = ipow(std::sin(spec.theta), e);
    a.success = a.amp0 * a.amp0 + a.amp1 * a.amp1;
    a.s_composed = a.amp1 * a.amp1 / a.success;
    return a;
}

std::vector<std::size_t> register_qubits(const Circuit& circuit, std::string_view name) {
    const auto& r = circuit.reg(name);
    std::vector<std::size_t> q(r.size);
    for (std::size_t i = 0; i < r.size; ++i) q[i] = r.offset + i;
    return q;
}

void append_gearbox(Circuit& circuit, const GearboxSpec& spec, std::span<const std::size_t> controls,
                    std::size_t target) {
    if (controls.size() != spec.control_count()) {
        throw SpecError("gearbox of depth " + std::to_string(spec.depth) + " needs " +
                        std::to_string(spec.control_count()) + " controls");
    }
    const std::size_t rotated = std::size_t{1} << (spec.depth - 1);
    const auto rot = controls.first(rotated);
    const auto parity = controls.subspan(rotated);

    for (const auto q : rot) circuit.ry(q, -2 * spec.theta);
    if (parity.empty()) {
        circuit.cx(rot[0], target);
    } else {
        // Parity qubit j ends as rot[0] xor rot[j + 1]; the target picks up rot[0] in between.
        for (const auto p : parity) circuit.cx(rot[0], p);
        circuit.cx(parity[0], target);
        for (std::size_t j = 0; j < parity.size(); ++j) circuit.cx(rot[j + 1], parity[j]);
    }
    for (const auto q : rot) circuit.ry(q, 2 * spec.theta);
}

Circuit build_gearbox(const GearboxSpec& spec) {
    check_depth(spec.depth, kMaxGearboxDepth);
    Circuit c;
    c.add_register("c", spec.control_count());
    const std::size_t t = c.add_register("t", 1);
    const auto controls = register_qubits(c, "c");
    append_gearbox(c, spec, controls, t);
    for (const auto q : controls) c.mark_measured(q);
    c.mark_measured(t);
    return c;
}

double step_approximation_error(unsigned depth, std::span<const double> theta_grid, double band) {
    if (band < 0) throw SpecError("transition band must be non-negative");
    double worst = 0.0;
    for (const double theta : theta_grid) {
        if (std::abs(theta - kQuarterPi) < band) {
            throw SpecError("grid point lies inside the excluded transition band");
        }
        worst = std::max(worst, std::abs(composed_step(depth, theta) - unit_step(theta)));
    }
    return worst;
}

// --- Composites --------------------------------------------------------------

Circuit build_rescaled_plateau(double theta, double kappa) {
    if (!std::isfinite(kappa) || kappa < 0 || kappa > kPi / 2) {
        throw SpecError("kappa must lie in [0, pi/2]");
    }
    const auto spec = make_gearbox_spec(2, theta);
    Circuit c;
    c.add_register("c", spec.control_count());
    const std::size_t t = c.add_register("t", 1);
    const std::size_t o = c.add_register("o", 1);
    const auto controls = register_qubits(c, "c");
    append_gearbox(c, spec, controls, t);
    c.x(t).cry(t, o, kappa).x(t);
    for (const auto q : controls) c.mark_measured(q);
    c.mark_measured(o);
    return c;
}

RescaledPlateauAnalytics rescaled_plateau_analytics(double theta, double kappa) {
    const auto a = analytics(make_gearbox_spec(2, theta));
    const double lift = std::sin(kappa / 2);
    RescaledPlateauAnalytics r;
    r.output_one = (1 - a.s_composed) * lift * lift;
    r.rescaled_step = 1 - r.output_one;
    r.success = a.success;
    return r;
}

Circuit build_relu(double x, unsigned depth, ToffoliVariant variant) {
    check_depth(depth, 3);
    const auto spec = make_gearbox_spec(depth, x);
    Circuit c;
    c.add_register("c", spec.control_count());
    const std::size_t t = c.add_register("t", 1);
    const std::size_t q = c.add_register("q", 1);
    const std::size_t o = c.add_register("o", 1);
    const auto controls = register_qubits(c, "c");
    append_gearbox(c, spec, controls, t);
    c.ry(q, 2 * spec.theta);
    append_toffoli(c, q, t, o, variant, /*magnitude_only=*/true);
    for (const auto k : controls) c.mark_measured(k);
    c.mark_measured(o);
    return c;
}

double relu_value_factor(double x) {
    const double s = std::sin(std::clamp(x, 0.0, kPi / 2));
    return s * s;
}

double relu_analytic(double x, unsigned depth) {
    const auto spec = make_gearbox_spec(depth, x);
    return relu_value_factor(spec.theta) * composed_step(depth, spec.theta);
}

} // namespace qstep
