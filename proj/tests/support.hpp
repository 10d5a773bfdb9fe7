#pragma once

#include "qstep/circuit.hpp"
#include "qstep/simulator.hpp"

#include <Eigen/Dense>

#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace qstep::test {

inline Eigen::MatrixXcd toffoli_permutation() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(8, 8);
    m(3, 3) = m(7, 7) = 0;
    m(3, 7) = m(7, 3) = 1;
    return m;
}

/// max |a - e^{i phi} b| with phi fixed by the largest entry of b.
inline double phase_aligned_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::Index r = 0, c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    const Complex phase = a(r, c) / b(r, c);
    return (a - phase * b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const StateVector& s, const std::vector<Complex>& expected) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.dimension(); ++i) worst = std::max(worst, std::abs(s[i] - expected[i]));
    return worst;
}

inline double oracle_vs_kernel(const Circuit& c) {
    const auto u = dense_oracle(c);
    const auto s = run_circuit(c);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        worst = std::max(worst, std::abs(s[i] - u(static_cast<Eigen::Index>(i), 0)));
    }
    return worst;
}

// Minimal OpenQASM 2.0 reader for round-trip checks: gate statements only.
struct QasmOp {
    std::string name;
    std::string params;
    std::vector<std::string> operands;
};

struct QasmProgram {
    std::vector<std::pair<std::string, std::size_t>> qregs;
    std::vector<std::string> gate_definitions;
    std::vector<QasmOp> ops;
    std::vector<std::string> measures;
};

inline QasmProgram parse_qasm(const std::string& text) {
    QasmProgram p;
    std::istringstream in(text);
    std::string line;
    const std::regex qreg(R"(qreg (\w+)\[(\d+)\];)");
    const std::regex gate_def(R"(gate (\w+).*\{.*\})");
    const std::regex op(R"((\w+)(?:\(([^)]*)\))? ([^;]+);)");
    std::smatch m;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("OPENQASM", 0) == 0 || line.rfind("include", 0) == 0 ||
            line.rfind("creg", 0) == 0) {
            continue;
        }
        if (std::regex_match(line, m, qreg)) {
            p.qregs.emplace_back(m[1], std::stoul(m[2]));
        } else if (std::regex_match(line, m, gate_def)) {
            p.gate_definitions.push_back(m[1]);
        } else if (line.rfind("measure", 0) == 0) {
            p.measures.push_back(line);
        } else if (std::regex_match(line, m, op)) {
            QasmOp o{m[1], m[2], {}};
            std::stringstream ops(m[3].str());
            std::string operand;
            while (std::getline(ops, operand, ',')) o.operands.push_back(operand);
            p.ops.push_back(o);
        } else {
            throw std::runtime_error("unparsed QASM line: " + line);
        }
    }
    return p;
}

/// QASM mnemonic each gate kind is exported as.
inline std::string qasm_name(GateKind k) {
    switch (k) {
    case GateKind::X: return "x";
    case GateKind::H: return "h";
    case GateKind::SqrtX: return "sqrt_x";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::CX: return "cx";
    case GateKind::CRy: return "c_ry";
    case GateKind::Toffoli: return "ccx";
    case GateKind::Measure: return "measure";
    }
    return "?";
}

} // namespace qstep::test
