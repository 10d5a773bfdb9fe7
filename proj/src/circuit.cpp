#include "qstep/circuit.hpp"

#include "qstep/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace qstep {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_angle(double a) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", a);
    return buf;
}

} // namespace

std::string_view gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::X: return "x";
    case GateKind::H: return "h";
    case GateKind::SqrtX: return "sx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::CX: return "cx";
    case GateKind::CRy: return "cry";
    case GateKind::Toffoli: return "ccx";
    case GateKind::Measure: return "measure";
    }
    return "?";
}

std::size_t gate_arity(GateKind kind) {
    switch (kind) {
    case GateKind::CX:
    case GateKind::CRy: return 2;
    case GateKind::Toffoli: return 3;
    default: return 1;
    }
}

bool has_angle(GateKind kind) {
    return kind == GateKind::Ry || kind == GateKind::Rz || kind == GateKind::CRy;
}

bool is_single_qubit(GateKind kind) { return gate_arity(kind) == 1 && kind != GateKind::Measure; }

Mat2 ry_matrix(double a) {
    const double c = std::cos(a / 2);
    const double s = std::sin(a / 2);
    return {Complex(c), Complex(-s), Complex(s), Complex(c)};
}

Mat2 rz_matrix(double a) {
    return {std::polar(1.0, -a / 2), Complex(0), Complex(0), std::polar(1.0, a / 2)};
}

Mat2 target_matrix(GateKind kind, double angle) {
    switch (kind) {
    case GateKind::X:
    case GateKind::CX:
    case GateKind::Toffoli: return {Complex(0), Complex(1), Complex(1), Complex(0)};
    case GateKind::H: {
        const double r = std::numbers::sqrt2 / 2;
        return {Complex(r), Complex(r), Complex(r), Complex(-r)};
    }
    case GateKind::SqrtX:
        return {Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(0.5, -0.5), Complex(0.5, 0.5)};
    case GateKind::Ry:
    case GateKind::CRy: return ry_matrix(angle);
    case GateKind::Rz: return rz_matrix(angle);
    case GateKind::Measure: return {Complex(1), Complex(0), Complex(0), Complex(1)};
    }
    return {};
}

// --- Circuit ---------------------------------------------------------------

std::size_t Circuit::add_register(std::string name, std::size_t size) {
    if (name.empty()) throw SpecError("register name must not be empty");
    if (has_register(name)) throw SpecError("duplicate register name '" + name + "'");
    registers_.push_back({std::move(name), num_qubits_, size});
    num_qubits_ += size;
    return registers_.back().offset;
}

bool Circuit::has_register(std::string_view name) const {
    return std::any_of(registers_.begin(), registers_.end(),
                       [&](const Register& r) { return r.name == name; });
}

const Register& Circuit::reg(std::string_view name) const {
    for (const auto& r : registers_) {
        if (r.name == name) return r;
    }
    throw SpecError("unknown register '" + std::string(name) + "'");
}

std::size_t Circuit::qubit(std::string_view name, std::size_t i) const {
    const auto& r = reg(name);
    if (i >= r.size) {
        throw SpecError("qubit " + std::to_string(i) + " out of range for register '" + r.name + "'");
    }
    return r.offset + i;
}

std::string Circuit::label(std::size_t q) const {
    for (const auto& r : registers_) {
        if (q >= r.offset && q < r.offset + r.size) {
            return r.name + "[" + std::to_string(q - r.offset) + "]";
        }
    }
    return "?" + std::to_string(q);
}

Circuit& Circuit::append(Gate gate) {
    if (gate.qubits.size() != gate_arity(gate.kind)) {
        throw InvalidGateError(std::string(gate_name(gate.kind)) + " expects " +
                               std::to_string(gate_arity(gate.kind)) + " qubit(s)");
    }
    for (std::size_t i = 0; i < gate.qubits.size(); ++i) {
        if (gate.qubits[i] >= num_qubits_) {
            throw InvalidGateError("qubit index " + std::to_string(gate.qubits[i]) +
                                   " not declared in any register");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (gate.qubits[i] == gate.qubits[j]) throw InvalidGateError("duplicate qubit in gate");
        }
    }
    if (has_angle(gate.kind) && !std::isfinite(gate.angle)) {
        throw InvalidGateError("rotation angle must be finite");
    }
    if (!has_angle(gate.kind)) gate.angle = 0.0;
    if (gate.kind == GateKind::Measure) mark_measured(gate.qubits[0]);
    gates_.push_back(std::move(gate));
    return *this;
}

Circuit& Circuit::append_mapped(const Circuit& other, std::span<const std::size_t> mapping) {
    if (mapping.size() != other.num_qubits()) {
        throw DimensionError("qubit mapping size does not match sub-circuit width");
    }
    for (const auto& g : other.gates()) {
        Gate mapped = g;
        for (auto& q : mapped.qubits) q = mapping[q];
        append(std::move(mapped));
    }
    return *this;
}

Circuit& Circuit::mark_measured(std::size_t q) {
    if (q >= num_qubits_) throw InvalidGateError("measured qubit out of range");
    auto it = std::lower_bound(measured_.begin(), measured_.end(), q);
    if (it == measured_.end() || *it != q) measured_.insert(it, q);
    return *this;
}

std::size_t Circuit::count(GateKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(gates_.begin(), gates_.end(), [&](const Gate& g) { return g.kind == kind; }));
}

// --- Toffoli ---------------------------------------------------------------

namespace {

void append_exact_toffoli(Circuit& c, std::size_t a, std::size_t b, std::size_t t) {
    // T = Rz(pi/4) up to global phase.
    const double tq = kPi / 4;
    c.h(t);
    c.cx(b, t).rz(t, -tq);
    c.cx(a, t).rz(t, tq);
    c.cx(b, t).rz(t, -tq);
    c.cx(a, t).rz(b, tq).rz(t, tq);
    c.h(t);
    c.cx(a, b).rz(a, tq).rz(b, -tq);
    c.cx(a, b);
}

void append_relative_phase_toffoli(Circuit& c, std::size_t a, std::size_t b, std::size_t t) {
    const double q = kPi / 4;
    c.ry(t, q).cx(b, t).ry(t, q);
    c.cx(a, t);
    c.ry(t, -q).cx(b, t).ry(t, -q);
}

} // namespace

Circuit toffoli_exact_decomposition() {
    Circuit c;
    c.add_register("q", 3);
    append_exact_toffoli(c, 0, 1, 2);
    return c;
}

Circuit toffoli_phase_equivalent_decomposition() {
    Circuit c;
    c.add_register("q", 3);
    append_relative_phase_toffoli(c, 0, 1, 2);
    return c;
}

void append_toffoli(Circuit& circuit, std::size_t c1, std::size_t c2, std::size_t t,
                    ToffoliVariant variant, bool magnitude_only) {
    switch (variant) {
    case ToffoliVariant::Native: circuit.ccx(c1, c2, t); break;
    case ToffoliVariant::Exact: append_exact_toffoli(circuit, c1, c2, t); break;
    case ToffoliVariant::PhaseEquivalent:
        if (!magnitude_only) {
            throw SpecError("relative-phase Toffoli used where phases are observable");
        }
        append_relative_phase_toffoli(circuit, c1, c2, t);
        break;
    }
}

// --- Uniformly controlled Ry ---------------------------------------------

void append_uc_ry(Circuit& circuit, std::span<const std::size_t> controls, std::size_t target,
                  std::span<const double> angles) {
    const std::size_t k = controls.size();
    const std::size_t n = std::size_t{1} << k;
    if (angles.size() != n) {
        throw SpecError("uniformly controlled Ry over " + std::to_string(k) + " controls needs " +
                        std::to_string(n) + " angles, got " + std::to_string(angles.size()));
    }
    if (k == 0) {
        circuit.ry(target, angles[0]);
        return;
    }
    auto gray = [](std::size_t i) { return i ^ (i >> 1); };
    // Rotation i is seen with sign (-1)^{popcount(pattern & gray(i))} by control pattern `pattern`,
    // so the rotation angles are the Walsh-Hadamard transform of the requested angles.
    std::vector<double> rot(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const bool odd = std::popcount(j & gray(i)) & 1;
            acc += odd ? -angles[j] : angles[j];
        }
        rot[i] = acc / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        circuit.ry(target, rot[i]);
        const std::size_t changed = gray(i) ^ gray((i + 1) % n);
        const auto bit = static_cast<std::size_t>(std::countr_zero(changed));
        circuit.cx(controls[bit], target);
    }
}

Circuit uc_ry(const UCRySpec& spec) {
    Circuit c;
    const std::size_t ctrl = spec.num_controls > 0 ? c.add_register("ctrl", spec.num_controls) : 0;
    const std::size_t tgt = c.add_register("tgt", 1);
    std::vector<std::size_t> controls(spec.num_controls);
    for (std::size_t i = 0; i < controls.size(); ++i) controls[i] = ctrl + i;
    append_uc_ry(c, controls, tgt, spec.angles);
    return c;
}

// --- ZSX rewrite -----------------------------------------------------------

double wrap_angle(double a) {
    double r = std::remainder(a, 2 * kPi);  // [-pi, pi]
    if (r <= -kPi) r += 2 * kPi;
    return r;
}

Circuit rewrite_1q_to_zsx(const Gate& gate) {
    if (!is_single_qubit(gate.kind)) {
        throw UnsupportedError(std::string("basis rewrite only accepts single-qubit gates, got ") +
                               std::string(gate_name(gate.kind)));
    }
    const Mat2 u = target_matrix(gate.kind, gate.angle);
    Circuit c;
    c.add_register("q", 1);

    // u = e^{ig} [[cos(t/2), -e^{il} sin(t/2)], [e^{ip} sin(t/2), e^{i(p+l)} cos(t/2)]]
    const double cos_half = std::abs(u[0]);
    const double sin_half = std::abs(u[2]);
    constexpr double eps = 1e-14;
    if (sin_half < eps) {
        c.rz(0, wrap_angle(std::arg(u[3]) - std::arg(u[0])));
        return c;
    }
    const double theta = 2 * std::atan2(sin_half, cos_half);
    double phi = 0.0;
    double lam = 0.0;
    if (cos_half < eps) {
        phi = std::arg(u[2]) - std::arg(-u[1]);
    } else {
        phi = std::arg(u[2]) - std::arg(u[0]);
        lam = std::arg(-u[1]) - std::arg(u[0]);
    }
    // Rz(p) Ry(t) Rz(l) == Rz(p) SX Rz(pi - t) SX Rz(l - pi) up to global phase.
    c.rz(0, wrap_angle(lam - kPi));
    c.sx(0);
    c.rz(0, wrap_angle(kPi - theta));
    c.sx(0);
    c.rz(0, wrap_angle(phi));
    return c;
}

// --- QASM --------------------------------------------------------------------

std::string export_qasm(const Circuit& circuit) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "include \"qelib1.inc\";\n";
    if (circuit.count(GateKind::CRy) > 0) {
        out << "gate c_ry(theta) a,b { ry(theta/2) b; cx a,b; ry(-theta/2) b; cx a,b; }\n";
    }
    if (circuit.count(GateKind::SqrtX) > 0) {
        out << "gate sqrt_x a { rx(pi/2) a; }\n";
    }
    for (const auto& r : circuit.registers()) {
        out << "qreg " << r.name << "[" << r.size << "];\n";
    }
    const auto& measured = circuit.measured();
    if (!measured.empty()) out << "creg meas[" << measured.size() << "];\n";

    auto operand = [&](std::size_t q) { return circuit.label(q); };
    auto meas_slot = [&](std::size_t q) {
        return std::lower_bound(measured.begin(), measured.end(), q) - measured.begin();
    };
    for (const auto& g : circuit.gates()) {
        switch (g.kind) {
        case GateKind::CRy: out << "c_ry(" << format_angle(g.angle) << ")"; break;
        case GateKind::SqrtX: out << "sqrt_x"; break;
        case GateKind::Measure:
            out << "measure " << operand(g.qubits[0]) << " -> meas[" << meas_slot(g.qubits[0]) << "];\n";
            continue;
        default:
            out << gate_name(g.kind);
            if (has_angle(g.kind)) out << "(" << format_angle(g.angle) << ")";
        }
        for (std::size_t i = 0; i < g.qubits.size(); ++i) {
            out << (i == 0 ? " " : ",") << operand(g.qubits[i]);
        }
        out << ";\n";
    }
    // Measurements recorded only in the measured set go last.
    for (const auto q : measured) {
        const bool explicit_measure =
            std::any_of(circuit.gates().begin(), circuit.gates().end(), [&](const Gate& g) {
                return g.kind == GateKind::Measure && g.qubits[0] == q;
            });
        if (!explicit_measure) out << "measure " << operand(q) << " -> meas[" << meas_slot(q) << "];\n";
    }
    return out.str();
}

} // namespace qstep
