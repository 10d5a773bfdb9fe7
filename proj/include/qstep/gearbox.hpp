#pragma once

#include "qstep/circuit.hpp"

#include <span>
#include <vector>

namespace qstep {

/// A d-step gearbox acting on input angle theta.
///
/// The circuit has registers "c" (2^d - 1 control qubits) and "t" (target). The
/// target is the most significant qubit, so |1>_t|0...0>_c sits at basis index
/// 2^(2^d - 1).
struct GearboxSpec {
    unsigned depth = 1;
    /// Input angle, clamped into [0, pi/2] on construction through make_gearbox_spec.
    double theta = 0.0;

    std::size_t control_count() const { return (std::size_t{1} << depth) - 1; }
    std::size_t qubit_count() const { return std::size_t{1} << depth; }
};

/// Validates depth >= 1, rejects non-finite theta and clamps it into [0, pi/2].
GearboxSpec make_gearbox_spec(unsigned depth, double theta);

inline constexpr unsigned kMaxGearboxDepth = 4;

struct GearboxAnalytics {
    /// Post-selected probability of the target reading 1.
    double s_composed = 0.0;
    /// Probability of the all-zero control outcome.
    double success = 0.0;
    /// Amplitude of |0>_t|0...0>_c, cos^(2^d)(theta).
    double amp0 = 0.0;
    /// Amplitude of |1>_t|0...0>_c, sin^(2^d)(theta).
    double amp1 = 0.0;
};

GearboxAnalytics analytics(const GearboxSpec& spec);

/// sin^(2^(d+1)) / (sin^(2^(d+1)) + cos^(2^(d+1))); finite on all of [0, pi/2].
double composed_step(unsigned depth, double theta);

/// arctan(tan^(2^d)(theta)), with theta = pi/2 mapped to pi/2.
double effective_angle(unsigned depth, double theta);

/// One gearbox stage as a scalar map on angles: sin^2(arctan(tan^2 phi)).
double single_step_map(double phi);

/// u(theta - pi/4) with u(0) = 1/2.
double unit_step(double theta);

/// Builds the gearbox for depths 1..kMaxGearboxDepth.
///
/// Angle mapping: every rotated control receives Ry(-2 theta) before and Ry(2 theta)
/// after the CX network, so d = 1 is exactly Ry(-2 theta) c; CX c,t; Ry(2 theta) c.
/// For d >= 2 the first 2^(d-1) controls are rotated and the remaining 2^(d-1) - 1
/// are parity checks, each tying one rotated qubit to the first; the target copies
/// the first rotated qubit through the first parity qubit.
Circuit build_gearbox(const GearboxSpec& spec);

/// Appends a gearbox onto existing qubits. `controls` must hold 2^d - 1 qubits.
void append_gearbox(Circuit& circuit, const GearboxSpec& spec, std::span<const std::size_t> controls,
                    std::size_t target);

std::vector<std::size_t> register_qubits(const Circuit& circuit, std::string_view name);

/// max over grid of |S_d(theta) - u(theta - pi/4)|. Grid points closer than `band` to
/// pi/4 are rejected with SpecError.
double step_approximation_error(unsigned depth, std::span<const double> theta_grid, double band);

/// Double-step gearbox followed by an output qubit "o" that receives Ry(kappa) exactly
/// when the target reads 0 (X t; CRy(kappa) t,o; X t). Measured: c and o.
///
/// P(o = 1 | c = 0) = (1 - S_2(theta)) sin^2(kappa / 2); the complementary readout
/// P(o = 0 | c = 0) = S_2(theta) + (1 - S_2(theta)) cos^2(kappa / 2) is the step with its
/// lower plateau lifted to cos^2(kappa / 2).
Circuit build_rescaled_plateau(double theta, double kappa);

struct RescaledPlateauAnalytics {
    double output_one = 0.0;
    double rescaled_step = 0.0;
    double success = 0.0;
};

RescaledPlateauAnalytics rescaled_plateau_analytics(double theta, double kappa);

/// Gearbox driven by x, a value qubit "q" loaded with Ry(2x) (so P(q = 1) = sin^2 x), and
/// an output qubit "o" set by Toffoli(q, t -> o). Measured: c and o.
///
/// P(o = 1 | c = 0) = sin^2(x) * S_d(x). The Toffoli acts last on q, t, o, so the
/// relative-phase variant is admissible.
Circuit build_relu(double x, unsigned depth = 2, ToffoliVariant variant = ToffoliVariant::Native);

/// sin^2(x) * S_d(x)
double relu_analytic(double x, unsigned depth = 2);
/// sin^2(x)
double relu_value_factor(double x);

} // namespace qstep
