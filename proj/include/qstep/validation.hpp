#pragma once

#include "qstep/circuit.hpp"
#include "qstep/gearbox.hpp"

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace qstep {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationOptions {
    /// Gearbox builder under test. Swapping it lets callers confirm the suite catches a broken builder.
    std::function<Circuit(const GearboxSpec&)> gearbox_builder = build_gearbox;
    /// Shots for the statistical checks.
    std::uint64_t shots = 100000;
    std::uint64_t seed = 20240611;
};

/// Runs the full oracle suite: closed forms, dense-oracle equivalence, decompositions,
/// amplitude arithmetic, Fourier compilation and shot statistics.
std::vector<CheckResult> run_validation(const ValidationOptions& options = {});

/// One "PASS name: detail" / "FAIL name: detail" line per check plus a summary line.
/// Returns true when every check passed.
bool print_report(std::ostream& out, const std::vector<CheckResult>& results);

} // namespace qstep
