#pragma once

#include "qstep/circuit.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qstep {

enum class SweepBuilder { Gearbox, RescaledPlateau, Relu, Subtraction, Composition, Fourier };
enum class SweepMode { Exact, Shots };

std::optional<SweepBuilder> parse_builder(const std::string& name);
std::string builder_name(SweepBuilder b);

/// Half-width multiplier used for shot-mode confidence intervals.
inline constexpr double kConfidenceZ = 5.0;
inline constexpr std::uint64_t kDefaultShots = 100000;

struct SweepConfig {
    SweepBuilder builder = SweepBuilder::Gearbox;
    unsigned depth = 2;
    double theta_min = 0.0;
    double theta_max = 1.5707963267948966;
    std::size_t points = 101;
    SweepMode mode = SweepMode::Exact;
    std::uint64_t shots = kDefaultShots;
    std::uint64_t seed = 0;
    /// Rescaled-plateau coupling angle.
    double kappa = 0.7853981633974483;
    /// Fourier order for the fourier builder.
    std::size_t order = 4;
};

/// Throws SpecError on an invalid configuration.
void validate_config(const SweepConfig& config);

struct SweepRow {
    double theta = 0.0;
    double omega = 0.0;
    double analytic = 0.0;
    double success = 0.0;
    /// z * sqrt(omega (1 - omega) / kept_shots), shot mode only.
    std::optional<double> ci_halfwidth;
    std::optional<std::uint64_t> shots_kept;
};

/// A single point of a sweep: the circuit to run, which qubits are post-selected on 0,
/// which qubit is read, and the predicted readout.
struct PointPlan {
    Circuit circuit;
    std::vector<std::size_t> kept;
    std::size_t target = 0;
    double analytic = 0.0;
    double analytic_success = 1.0;
};

/// Builds the plan for one grid point. The readout is always a probability:
///   gearbox           P(t=1 | c=0) vs S_d(theta)
///   rescaled-plateau  P(o=1 | c=0) vs (1 - S_2(theta)) sin^2(kappa/2)
///   relu              P(o=1 | c=0) vs sin^2(theta) S_d(theta)
///   subtraction       P(t=1), g = sin^2 theta, h = sin^2(theta/2)
///   composition       R2, same g, h and z = cos^2(theta/2)
///   fourier           readout of the compiled N_d D_d series, vs slope * series(theta) + offset
PointPlan plan_point(const SweepConfig& config, double theta);

/// Circuit for a single builder instance; used by the export command.
Circuit build_for_export(const SweepConfig& config, double theta);

/// Evenly spaced grid including both ends.
std::vector<double> sweep_grid(const SweepConfig& config);

/// Runs every grid point. In shot mode point i is sampled with seed config.seed + i.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

inline constexpr const char* kSweepCsvHeader = "theta,omega,analytic,success,ci_halfwidth";

/// CSV with the fixed header, LF endings and shortest round-trip number formatting.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

} // namespace qstep
