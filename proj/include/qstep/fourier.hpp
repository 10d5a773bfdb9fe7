#pragma once

#include "qstep/circuit.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qstep {

/// s_N(x) = a0/2 + sum_n a_n cos(2 pi n x / P) + b_n sin(2 pi n x / P)
struct FourierSeries {
    double period = 1.0;
    double a0 = 0.0;
    std::vector<double> a;  ///< a[n-1] holds a_n
    std::vector<double> b;

    std::size_t order() const { return a.size(); }
    double evaluate(double x) const;
};

/// a0' + sum_n a_n' cos^2(pi n x / P) + b_n' cos^2(pi n x / P - pi/4)
///
/// a0' = a0/2 - sum(a_n + b_n), a_n' = 2 a_n, b_n' = 2 b_n. The sine terms use
/// sin(y) = 2 cos^2(y/2 - pi/4) - 1.
struct CosSquaredSeries {
    double period = 1.0;
    double a0_prime = 0.0;
    std::vector<double> a_prime;
    std::vector<double> b_prime;

    std::size_t order() const { return a_prime.size(); }
    double evaluate(double x) const;
};

/// One addend of a CosSquaredSeries: coefficient * cos^2(frequency * x + phase), or a bare
/// constant when `constant` is set.
struct CosSquaredTerm {
    double coefficient = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
    bool constant = false;

    double shape(double x) const;
    double evaluate(double x) const { return coefficient * shape(x); }
};

/// Constant first, then a_1', b_1', a_2', ... Coefficients below 1e-14 in magnitude are dropped unless
/// `keep_zero` is set; the constant is always present.
std::vector<CosSquaredTerm> series_terms(const CosSquaredSeries& series, bool keep_zero = false);

inline constexpr std::size_t kDefaultQuadratureNodes = std::size_t{1} << 14;

/// Coefficients by the equally spaced rectangle rule over one period, which is the
/// composite trapezoid rule for periodic integrands.
FourierSeries fourier_coefficients(const std::function<double(double)>& f, double period, std::size_t order,
                                   std::size_t nodes = kDefaultQuadratureNodes);

CosSquaredSeries to_cos_squared(const FourierSeries& series);

/// 2^(-2^d + 1)
double normalization_constant(unsigned depth);

/// D_d(theta) = 1 / (sin^(2^(d+1)) theta + cos^(2^(d+1)) theta), the reciprocal success probability.
double inverse_success(unsigned depth, double theta);

/// Fourier series of N_d * D_d over its period pi/2.
FourierSeries inverse_success_series(unsigned depth, std::size_t order,
                                     std::size_t nodes = kDefaultQuadratureNodes);

struct CompileOptions {
    std::size_t max_terms = 8;
};

/// Compiles the series evaluated at x into a chain of amplitude additions and subtractions.
///
/// The constant term seeds an accumulator qubit (complemented when negative). Every further
/// term k is loaded at weight 2^-(k-1) and combined through append_combine_stage: a positive
/// term is added, a negative one subtracted. The readout qubit "out" then satisfies
/// P = slope * value + offset with slope 2^-(terms-1); the map is attached to the circuit.
///
/// Throws NormalizationError if the series value at x leaves [0, 1] or a term cannot be
/// loaded at its weight, and SpecError beyond `max_terms` non-zero terms.
Circuit compile_series(const CosSquaredSeries& series, double x, const CompileOptions& options = {});

/// Readout qubit of a compiled series.
std::size_t series_readout(const Circuit& circuit);

/// Exact simulation of compile_series followed by the affine readback.
double evaluate_compiled(const CosSquaredSeries& series, double x, const CompileOptions& options = {});

struct SplitSeries {
    CosSquaredSeries positive;
    CosSquaredSeries negative;

    double evaluate(double x) const { return positive.evaluate(x) - negative.evaluate(x); }
};

/// Sign split: positive keeps coefficients >= 0, negative keeps |c| of the rest.
SplitSeries split_series(const CosSquaredSeries& series);

/// A non-negative series compiled as in compile_series, multiplied with a weight qubit
/// "w" loaded with probability z through Toffoli(w, out -> prod). The readback of "prod"
/// returns z * series(x).
Circuit build_weighted_series(const CosSquaredSeries& nonnegative, double x, double z,
                              ToffoliVariant variant = ToffoliVariant::Native,
                              const CompileOptions& options = {});

struct SplitEvaluation {
    double positive = 0.0;  ///< circuit 1: z * D+(x)
    double negative = 0.0;  ///< circuit 2: z * D-(x)
    double difference() const { return positive - negative; }
};

/// Runs both weighted circuits of a split series by exact simulation.
SplitEvaluation evaluate_split(const SplitSeries& split, double x, double z,
                               ToffoliVariant variant = ToffoliVariant::Native);

void to_json(nlohmann::json& j, const FourierSeries& s);
void to_json(nlohmann::json& j, const CosSquaredSeries& s);
void from_json(const nlohmann::json& j, FourierSeries& s);
void from_json(const nlohmann::json& j, CosSquaredSeries& s);

} // namespace qstep
