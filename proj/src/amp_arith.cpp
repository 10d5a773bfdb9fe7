#include "qstep/amp_arith.hpp"

#include "qstep/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qstep {

namespace {
constexpr double kSnap = 1e-12;
} // namespace

AmplitudeLoader::AmplitudeLoader(double probability) : probability_(probability) {
    if (!std::isfinite(probability) || probability < -kSnap || probability > 1 + kSnap) {
        throw NormalizationError("amplitude value " + std::to_string(probability) + " outside [0, 1]");
    }
    probability_ = std::clamp(probability, 0.0, 1.0);
}

double AmplitudeLoader::angle() const { return 2 * std::asin(std::sqrt(probability_)); }

Circuit build_subtraction(const AmplitudeLoader& g, const AmplitudeLoader& h) {
    Circuit c;
    const std::size_t a = c.add_register("a", 1);
    const std::size_t m = c.add_register("m", 1);
    const std::size_t t = c.add_register("t", 1);
    c.h(a);
    c.cry(a, t, g.angle());
    c.cx(a, m);
    c.x(a);
    c.cry(a, m, h.angle());
    c.x(m);
    c.cx(m, t);
    c.mark_measured(t);
    c.set_readback({0.5, 0.5});
    return c;
}

Circuit build_addition(const AmplitudeLoader& g, const AmplitudeLoader& h) {
    Circuit c;
    const std::size_t a = c.add_register("a", 1);
    const std::size_t m = c.add_register("m", 1);
    const std::size_t t = c.add_register("t", 1);
    c.h(a);
    c.cry(a, t, g.angle());
    c.x(a);
    c.cry(a, m, h.angle());
    c.cx(m, t);
    c.mark_measured(t);
    c.set_readback({0.5, 0.0});
    return c;
}

SubtractionReadout read_subtraction(const StateVector& state, const Circuit& circuit) {
    SubtractionReadout r;
    r.r1 = state.probability_one(circuit.qubit("t"));
    r.difference = 2 * r.r1 - 1;
    return r;
}

std::size_t append_combine_stage(Circuit& circuit, std::size_t accumulator, const AmplitudeLoader& value,
                                 bool subtract, const std::string& prefix, ToffoliVariant variant) {
    const std::size_t a = circuit.add_register(prefix + "a", 1);
    const std::size_t m = subtract ? circuit.add_register(prefix + "m", 1) : 0;
    const std::size_t r = circuit.add_register(prefix + "r", 1);
    circuit.h(a);
    append_toffoli(circuit, a, accumulator, r, variant, /*magnitude_only=*/true);
    if (subtract) {
        circuit.cx(a, m);
        circuit.x(a);
        circuit.cry(a, m, value.angle());
        circuit.x(m);
        circuit.cx(m, r);
    } else {
        circuit.x(a);
        circuit.cry(a, r, value.angle());
    }
    return r;
}

Circuit build_composition(const AmplitudeLoader& g, const AmplitudeLoader& h, const AmplitudeLoader& z,
                          ToffoliVariant variant) {
    Circuit c = build_subtraction(g, h);
    const std::size_t t = c.qubit("t");
    const std::size_t zq = c.add_register("z", 1);
    const std::size_t q = c.add_register("q", 1);
    c.ry(zq, z.angle());
    append_toffoli(c, t, zq, q, variant, /*magnitude_only=*/true);

    const AmplitudeLoader half_z(z.probability() / 2);
    const std::size_t r = append_combine_stage(c, q, half_z, /*subtract=*/true, "s2_", variant);
    c.mark_measured(q);
    c.mark_measured(r);
    c.set_readback({0.25, 0.5});
    return c;
}

CompositionReadout read_composition(const StateVector& state, const Circuit& circuit) {
    CompositionReadout r;
    r.b = state.probability_one(circuit.qubit("q"));
    r.r2 = state.probability_one(circuit.qubit("s2_r"));
    r.product = 4 * (r.r2 - 0.5);
    return r;
}

} // namespace qstep
