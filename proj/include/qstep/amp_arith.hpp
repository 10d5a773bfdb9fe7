#pragma once

#include "qstep/circuit.hpp"
#include "qstep/simulator.hpp"

#include <functional>
#include <string>

namespace qstep {

/// A probability g in [0, 1] stored as the |1> amplitude sqrt(g) of a qubit, loaded with
/// Ry(2 asin(sqrt(g))) (or its controlled form).
class AmplitudeLoader {
public:
    /// Throws NormalizationError outside [0, 1]; values within 1e-12 of the ends are snapped.
    explicit AmplitudeLoader(double probability);

    double probability() const { return probability_; }
    double angle() const;

private:
    double probability_;
};

/// A named function of one input whose values are probabilities.
struct AmplitudeFunction {
    std::string name;
    std::function<double(double)> value;

    AmplitudeLoader loader_at(double x) const { return AmplitudeLoader(value(x)); }
};

/// Registers a, m, t (qubits 0, 1, 2). Gate order:
/// H(a) CRy_g(a;t) CX(a;m) X(a) CRy_h(a;m) X(m) CX(m;t). P(t = 1) = (g + 1 - h) / 2.
/// Readback: difference = 2 P - 1.
Circuit build_subtraction(const AmplitudeLoader& g, const AmplitudeLoader& h);

/// Registers a, m, t. The subtraction circuit with the complement trick removed:
/// H(a) CRy_g(a;t) X(a) CRy_h(a;m) CX(m;t). P(t = 1) = (g + h) / 2.
Circuit build_addition(const AmplitudeLoader& g, const AmplitudeLoader& h);

struct SubtractionReadout {
    double r1 = 0.0;
    double difference = 0.0;
};

/// Plain marginal of the "t" register; no post-selection involved.
SubtractionReadout read_subtraction(const StateVector& state, const Circuit& circuit);

/// Subtraction (a, m, t), the z loader ("z"), the product qubit q = Toffoli(t, z), and a second
/// subtraction stage (a2, m2, r) that removes z/2 from q:
///   H(a2) Toffoli(a2, q -> r) CX(a2;m2) X(a2) CRy_{z/2}(a2;m2) X(m2) CX(m2;r).
/// P(q = 1) = b = z(g - h + 1)/2 and P(r = 1) = R2 = z(g - h)/4 + 1/2.
///
/// Both Toffolis only feed computational-basis readouts, so the relative-phase variant is
/// admissible.
Circuit build_composition(const AmplitudeLoader& g, const AmplitudeLoader& h, const AmplitudeLoader& z,
                          ToffoliVariant variant = ToffoliVariant::Native);

struct CompositionReadout {
    double b = 0.0;
    double r2 = 0.0;
    /// 4 (r2 - 1/2) = z (g - h)
    double product = 0.0;
};

CompositionReadout read_composition(const StateVector& state, const Circuit& circuit);

/// Appends the generic "combine" stage shared by composition and series compilation:
/// a fresh ancilla in |+> routes either the existing accumulator qubit or a freshly loaded
/// value into a new readout qubit. With `subtract` the loaded value is complemented first.
/// Returns the readout qubit; new registers are named prefix + {"a", "m", "r"}.
///   add:      P(r) = (p + v) / 2
///   subtract: P(r) = (p + 1 - v) / 2
std::size_t append_combine_stage(Circuit& circuit, std::size_t accumulator, const AmplitudeLoader& value,
                                 bool subtract, const std::string& prefix, ToffoliVariant variant);

} // namespace qstep
