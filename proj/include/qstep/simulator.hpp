#pragma once

#include "qstep/circuit.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qstep {

/// Dense amplitude vector over n qubits. Basis index bit i holds qubit i (little-endian).
class StateVector {
public:
    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(std::size_t num_qubits);
    StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes);

    static StateVector basis(std::size_t num_qubits, std::uint64_t index);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amps_.size(); }

    const Complex& operator[](std::size_t i) const { return amps_[i]; }
    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> amplitudes() { return amps_; }

    double norm_squared() const;
    /// Marginal probability that `qubit` reads 1.
    double probability_one(std::size_t qubit) const;

private:
    std::size_t num_qubits_;
    std::vector<Complex> amps_;
};

/// Widest circuit the simulator accepts.
inline constexpr std::size_t kMaxSimQubits = 24;
/// Widest circuit the dense-matrix oracle will materialize.
inline constexpr std::size_t kMaxOracleQubits = 10;

/// Applies one gate in place. Measure gates are deferred and leave the state untouched.
void apply_gate(StateVector& state, const Gate& gate);

StateVector run_circuit(const Circuit& circuit);
StateVector run_circuit(const Circuit& circuit, StateVector initial);

/// Full 2^n x 2^n unitary of the circuit, assembled from Kronecker products of 2x2
/// operators. Independent of the strided kernel used by apply_gate.
Eigen::MatrixXcd dense_oracle(const Circuit& circuit);

/// Kronecker-lifted matrix of a single gate on `num_qubits` qubits.
Eigen::MatrixXcd lift_gate(const Gate& gate, std::size_t num_qubits);

struct PostSelectionResult {
    /// P(target = 1 | kept pattern).
    double omega = 0.0;
    /// P(kept pattern); also reported as success probability.
    double kept_mass = 0.0;
    double success_probability = 0.0;
    /// P(target = 1 and kept pattern).
    double joint_one = 0.0;
    /// Shots that matched the kept pattern, when estimated from samples.
    std::optional<std::uint64_t> shots_kept;
};

/// Conditions on `kept_qubits` reading `kept_values` and reports the probability of
/// `target` reading 1. kept_values[i] belongs to kept_qubits[i].
PostSelectionResult post_select(const StateVector& state, std::span<const std::size_t> kept_qubits,
                                std::span<const int> kept_values, std::size_t target);

/// Convenience overload: all kept qubits must read 0.
PostSelectionResult post_select_zero(const StateVector& state,
                                     std::span<const std::size_t> kept_qubits, std::size_t target);

struct ShotRecord {
    /// One character per measured qubit, measured_qubits[0] rightmost (Qiskit style).
    std::string bitstring;
    std::uint64_t count = 0;
};

/// Multinomial sampling of `shots` outcomes of the measured qubits.
///
/// Sampling uses std::mt19937_64 seeded with `seed`; each shot draws one 64-bit word,
/// maps it to a double in [0, 1) from its top 53 bits, and inverts the cumulative
/// distribution of the marginal over the measured qubits (outcomes in ascending
/// index order). Records are returned in ascending outcome order, zero counts omitted.
std::vector<ShotRecord> sample_shots(const StateVector& state,
                                     std::span<const std::size_t> measured_qubits,
                                     std::uint64_t shots, std::uint64_t seed);

/// Estimates post-selection statistics from shot records taken over `measured_qubits`.
/// `kept_qubits` and `target` must be members of `measured_qubits`.
PostSelectionResult post_select_shots(std::span<const ShotRecord> records,
                                      std::span<const std::size_t> measured_qubits,
                                      std::span<const std::size_t> kept_qubits,
                                      std::span<const int> kept_values, std::size_t target);

} // namespace qstep
