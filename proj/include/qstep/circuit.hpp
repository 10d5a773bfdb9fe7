#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qstep {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<Complex, 4>;

enum class GateKind { X, H, SqrtX, Ry, Rz, CX, CRy, Toffoli, Measure };

std::string_view gate_name(GateKind kind);
std::size_t gate_arity(GateKind kind);
bool has_angle(GateKind kind);
bool is_single_qubit(GateKind kind);

/// One gate application. Qubits are listed controls first, target last.
struct Gate {
    GateKind kind = GateKind::X;
    std::vector<std::size_t> qubits;
    double angle = 0.0;

    std::size_t target() const { return qubits.back(); }
    std::span<const std::size_t> controls() const {
        return std::span<const std::size_t>(qubits).first(qubits.size() - 1);
    }
};

/// The 2x2 operator a gate applies to its target once all controls are set.
/// Ry(a) = [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]], Rz(a) = diag(e^{-ia/2}, e^{ia/2}).
Mat2 target_matrix(GateKind kind, double angle);

Mat2 ry_matrix(double angle);
Mat2 rz_matrix(double angle);

struct Register {
    std::string name;
    std::size_t offset = 0;
    std::size_t size = 0;
};

/// Affine map from the readout probability back to the encoded value:
/// value = (probability - offset) / slope.
struct AffineReadback {
    double slope = 1.0;
    double offset = 0.0;

    double value(double probability) const { return (probability - offset) / slope; }
    double probability(double value) const { return slope * value + offset; }
};

/// Ordered gate list over named qubit registers.
///
/// Registers are laid out in declaration order; the first register owns the
/// least-significant qubit indices. Every gate is validated on append.
class Circuit {
public:
    Circuit() = default;

    /// Declares a register and returns the index of its first qubit.
    std::size_t add_register(std::string name, std::size_t size);

    std::size_t qubit(std::string_view reg, std::size_t i = 0) const;
    const Register& reg(std::string_view name) const;
    bool has_register(std::string_view name) const;
    std::string label(std::size_t qubit) const;

    Circuit& append(Gate gate);

    Circuit& x(std::size_t q) { return append({GateKind::X, {q}}); }
    Circuit& h(std::size_t q) { return append({GateKind::H, {q}}); }
    Circuit& sx(std::size_t q) { return append({GateKind::SqrtX, {q}}); }
    Circuit& ry(std::size_t q, double a) { return append({GateKind::Ry, {q}, a}); }
    Circuit& rz(std::size_t q, double a) { return append({GateKind::Rz, {q}, a}); }
    Circuit& cx(std::size_t c, std::size_t t) { return append({GateKind::CX, {c, t}}); }
    Circuit& cry(std::size_t c, std::size_t t, double a) { return append({GateKind::CRy, {c, t}, a}); }
    Circuit& ccx(std::size_t c1, std::size_t c2, std::size_t t) {
        return append({GateKind::Toffoli, {c1, c2, t}});
    }

    /// Appends `other` with its qubit i relabelled to mapping[i].
    Circuit& append_mapped(const Circuit& other, std::span<const std::size_t> mapping);

    Circuit& mark_measured(std::size_t q);

    std::size_t num_qubits() const { return num_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const std::vector<Register>& registers() const { return registers_; }
    /// Measured qubits in ascending order.
    const std::vector<std::size_t>& measured() const { return measured_; }

    /// Count of gates of one kind.
    std::size_t count(GateKind kind) const;

    /// Optional readback attached by builders whose readout is an affine image of a value.
    const std::optional<AffineReadback>& readback() const { return readback_; }
    void set_readback(AffineReadback rb) { readback_ = rb; }

private:
    std::vector<Register> registers_;
    std::vector<Gate> gates_;
    std::vector<std::size_t> measured_;
    std::size_t num_qubits_ = 0;
    std::optional<AffineReadback> readback_;
};

// --- Toffoli realizations ------------------------------------------------

enum class ToffoliVariant {
    Native,          ///< a single Toffoli gate
    Exact,           ///< 6-CX Clifford+T network, equal to Toffoli up to global phase
    PhaseEquivalent  ///< 3-CX relative-phase network, equal to Toffoli up to a diagonal phase
};

/// Three-qubit register "q": q[0], q[1] controls, q[2] target.
Circuit toffoli_exact_decomposition();
Circuit toffoli_phase_equivalent_decomposition();

/// Appends a Toffoli in the requested realization. The relative-phase variant is
/// only accepted when `magnitude_only` is set by the calling builder.
void append_toffoli(Circuit& circuit, std::size_t c1, std::size_t c2, std::size_t t,
                    ToffoliVariant variant, bool magnitude_only);

// --- Uniformly controlled Ry ---------------------------------------------

struct UCRySpec {
    std::size_t num_controls = 0;
    /// angles[k] is applied when the control register reads k (control 0 = least-significant bit).
    std::vector<double> angles;
};

/// Multiplexed Ry on a fresh circuit with registers "ctrl" (num_controls) and "tgt" (1).
Circuit uc_ry(const UCRySpec& spec);

/// Appends the multiplexor onto existing qubits.
void append_uc_ry(Circuit& circuit, std::span<const std::size_t> controls, std::size_t target,
                  std::span<const double> angles);

// --- Single-qubit basis rewrite --------------------------------------------

/// Rewrites a single-qubit gate as Rz(a) SX Rz(b) SX Rz(c) (time order), equal up to
/// global phase. Diagonal inputs collapse to a single Rz.
Circuit rewrite_1q_to_zsx(const Gate& gate);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

// --- Export ---------------------------------------------------------------

/// OpenQASM 2.0 text. CRy and SX are emitted as locally defined gates so the output only
/// depends on the original qelib1.inc.
std::string export_qasm(const Circuit& circuit);

} // namespace qstep
