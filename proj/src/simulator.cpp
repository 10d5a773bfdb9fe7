#include "qstep/simulator.hpp"

#include "qstep/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

namespace qstep {

namespace {

void check_width(std::size_t n) {
    if (n > kMaxSimQubits) {
        throw DimensionError("state vectors are limited to " + std::to_string(kMaxSimQubits) + " qubits");
    }
}

void check_qubits(std::span<const std::size_t> qubits, std::size_t n, const char* what) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] >= n) {
            throw InvalidGateError(std::string(what) + ": qubit " + std::to_string(qubits[i]) +
                                   " out of range for " + std::to_string(n) + " qubits");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (qubits[i] == qubits[j]) throw InvalidGateError(std::string(what) + ": duplicate qubit");
        }
    }
}

} // namespace

// --- StateVector -------------------------------------------------------------

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
    check_width(num_qubits);
    amps_.assign(std::size_t{1} << num_qubits, Complex(0));
    amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    check_width(num_qubits);
    if (amps_.size() != (std::size_t{1} << num_qubits)) {
        throw DimensionError("amplitude count must be 2^num_qubits");
    }
}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.dimension()) throw DimensionError("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm_squared() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return acc;
}

double StateVector::probability_one(std::size_t qubit) const {
    if (qubit >= num_qubits_) throw InvalidGateError("qubit out of range");
    const std::size_t bit = std::size_t{1} << qubit;
    double acc = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & bit) acc += std::norm(amps_[i]);
    }
    return acc;
}

// --- Kernel ----------------------------------------------------------------

void apply_gate(StateVector& state, const Gate& gate) {
    if (gate.qubits.size() != gate_arity(gate.kind)) {
        throw InvalidGateError("gate arity mismatch");
    }
    check_qubits(gate.qubits, state.num_qubits(), "apply_gate");
    if (gate.kind == GateKind::Measure) return;

    const Mat2 m = target_matrix(gate.kind, gate.angle);
    const std::size_t tbit = std::size_t{1} << gate.target();
    std::size_t cmask = 0;
    for (const auto c : gate.controls()) cmask |= std::size_t{1} << c;

    auto amps = state.amplitudes();
    const std::size_t dim = amps.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & tbit) || (i & cmask) != cmask) continue;
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | tbit];
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[i | tbit] = m[2] * a0 + m[3] * a1;
    }
}

StateVector run_circuit(const Circuit& circuit) { return run_circuit(circuit, StateVector(circuit.num_qubits())); }

StateVector run_circuit(const Circuit& circuit, StateVector initial) {
    if (initial.num_qubits() != circuit.num_qubits()) {
        throw DimensionError("circuit has " + std::to_string(circuit.num_qubits()) +
                             " qubits but the state has " + std::to_string(initial.num_qubits()));
    }
    for (const auto& g : circuit.gates()) apply_gate(initial, g);
    return initial;
}

// --- Dense oracle ------------------------------------------------------------

namespace {

Eigen::Matrix2cd to_eigen(const Mat2& m) {
    Eigen::Matrix2cd r;
    r << m[0], m[1], m[2], m[3];
    return r;
}

/// Kronecker product over all qubits; factors[q] acts on qubit q. Qubit n-1 is leftmost.
using SparseC = Eigen::SparseMatrix<Complex>;

SparseC kron_chain(const std::vector<Eigen::Matrix2cd>& factors) {
    SparseC acc(1, 1);
    acc.insert(0, 0) = 1.0;
    for (std::size_t k = factors.size(); k-- > 0;) {
        const SparseC f = factors[k].sparseView();
        SparseC next = Eigen::kroneckerProduct(acc, f);
        acc = std::move(next);
    }
    return acc;
}

SparseC lift_sparse(const Gate& gate, std::size_t n) {
    check_qubits(gate.qubits, n, "dense_oracle");
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    if (gate.kind == GateKind::Measure) {
        SparseC eye(dim, dim);
        eye.setIdentity();
        return eye;
    }

    Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd p1 = Eigen::Matrix2cd::Zero();
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    const auto controls = gate.controls();

    // sum_j (P1 on controls[0..j) , P0 on controls[j]) + (P1 on all controls, U on target)
    SparseC total(dim, dim);
    for (std::size_t j = 0; j < controls.size(); ++j) {
        std::vector<Eigen::Matrix2cd> f(n, id);
        for (std::size_t i = 0; i < j; ++i) f[controls[i]] = p1;
        f[controls[j]] = p0;
        total += kron_chain(f);
    }
    std::vector<Eigen::Matrix2cd> f(n, id);
    for (const auto c : controls) f[c] = p1;
    f[gate.target()] = to_eigen(target_matrix(gate.kind, gate.angle));
    total += kron_chain(f);
    return total;
}

} // namespace

Eigen::MatrixXcd lift_gate(const Gate& gate, std::size_t n) { return Eigen::MatrixXcd(lift_sparse(gate, n)); }

Eigen::MatrixXcd dense_oracle(const Circuit& circuit) {
    const std::size_t n = circuit.num_qubits();
    if (n > kMaxOracleQubits) {
        throw OracleRefusalError("dense oracle refuses " + std::to_string(n) + " qubits (limit " +
                                 std::to_string(kMaxOracleQubits) + ")");
    }
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& g : circuit.gates()) {
        u = (lift_sparse(g, n) * u).eval();
    }
    return u;
}

// --- Post-selection ----------------------------------------------------------

namespace {

struct PatternMask {
    std::size_t mask = 0;
    std::size_t value = 0;
};

PatternMask make_pattern(std::span<const std::size_t> kept, std::span<const int> values,
                         std::size_t target, std::size_t n) {
    if (kept.size() != values.size()) throw SpecError("kept qubits and kept values differ in length");
    check_qubits(kept, n, "post_select");
    if (target >= n) throw InvalidGateError("post_select: target out of range");
    PatternMask p;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (kept[i] == target) throw SpecError("post_select: target is part of the kept pattern");
        if (values[i] != 0 && values[i] != 1) throw SpecError("post_select: kept values must be 0 or 1");
        p.mask |= std::size_t{1} << kept[i];
        if (values[i]) p.value |= std::size_t{1} << kept[i];
    }
    return p;
}

PostSelectionResult finish(double kept, double joint, std::optional<std::uint64_t> shots_kept) {
    if (!(kept > 0.0)) {
        throw PostSelectionImpossibleError("post-selected pattern has zero probability");
    }
    PostSelectionResult r;
    r.kept_mass = std::min(kept, 1.0);
    r.success_probability = r.kept_mass;
    r.joint_one = joint;
    r.omega = std::clamp(joint / kept, 0.0, 1.0);
    r.shots_kept = shots_kept;
    return r;
}

} // namespace

PostSelectionResult post_select(const StateVector& state, std::span<const std::size_t> kept_qubits,
                                std::span<const int> kept_values, std::size_t target) {
    const auto p = make_pattern(kept_qubits, kept_values, target, state.num_qubits());
    const std::size_t tbit = std::size_t{1} << target;
    double kept = 0.0;
    double joint = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & p.mask) != p.value) continue;
        const double w = std::norm(amps[i]);
        kept += w;
        if (i & tbit) joint += w;
    }
    return finish(kept, joint, std::nullopt);
}

PostSelectionResult post_select_zero(const StateVector& state,
                                     std::span<const std::size_t> kept_qubits, std::size_t target) {
    const std::vector<int> zeros(kept_qubits.size(), 0);
    return post_select(state, kept_qubits, zeros, target);
}

// --- Sampling ----------------------------------------------------------------

std::vector<ShotRecord> sample_shots(const StateVector& state,
                                     std::span<const std::size_t> measured_qubits,
                                     std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw SpecError("sample_shots needs at least one shot");
    check_qubits(measured_qubits, state.num_qubits(), "sample_shots");
    const std::size_t k = measured_qubits.size();
    if (k > 24) throw SpecError("too many measured qubits");

    std::vector<double> marginal(std::size_t{1} << k, 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        std::size_t outcome = 0;
        for (std::size_t b = 0; b < k; ++b) {
            if (i >> measured_qubits[b] & 1U) outcome |= std::size_t{1} << b;
        }
        marginal[outcome] += std::norm(amps[i]);
    }
    std::vector<double> cdf(marginal.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < marginal.size(); ++i) {
        acc += marginal[i];
        cdf[i] = acc;
    }

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> counts(marginal.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= cdf.size()) idx = cdf.size() - 1;
        ++counts[idx];
    }

    std::vector<ShotRecord> records;
    for (std::size_t o = 0; o < counts.size(); ++o) {
        if (counts[o] == 0) continue;
        std::string bits(k, '0');
        for (std::size_t b = 0; b < k; ++b) {
            if (o >> b & 1U) bits[k - 1 - b] = '1';
        }
        records.push_back({std::move(bits), counts[o]});
    }
    return records;
}

PostSelectionResult post_select_shots(std::span<const ShotRecord> records,
                                      std::span<const std::size_t> measured_qubits,
                                      std::span<const std::size_t> kept_qubits,
                                      std::span<const int> kept_values, std::size_t target) {
    if (kept_qubits.size() != kept_values.size()) {
        throw SpecError("kept qubits and kept values differ in length");
    }
    const std::size_t k = measured_qubits.size();
    auto position = [&](std::size_t q) {
        auto it = std::find(measured_qubits.begin(), measured_qubits.end(), q);
        if (it == measured_qubits.end()) throw SpecError("qubit " + std::to_string(q) + " was not measured");
        return k - 1 - static_cast<std::size_t>(it - measured_qubits.begin());
    };
    std::vector<std::size_t> kept_pos;
    for (const auto q : kept_qubits) {
        if (q == target) throw SpecError("post_select: target is part of the kept pattern");
        kept_pos.push_back(position(q));
    }
    const std::size_t tpos = position(target);

    std::uint64_t total = 0;
    std::uint64_t kept = 0;
    std::uint64_t joint = 0;
    for (const auto& r : records) {
        total += r.count;
        bool match = true;
        for (std::size_t i = 0; i < kept_pos.size() && match; ++i) {
            match = r.bitstring[kept_pos[i]] == (kept_values[i] ? '1' : '0');
        }
        if (!match) continue;
        kept += r.count;
        if (r.bitstring[tpos] == '1') joint += r.count;
    }
    if (total == 0 || kept == 0) {
        throw PostSelectionImpossibleError("no shot matched the post-selected pattern");
    }
    const double t = static_cast<double>(total);
    return finish(static_cast<double>(kept) / t, static_cast<double>(joint) / t, kept);
}

} // namespace qstep
