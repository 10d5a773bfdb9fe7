#include "qstep/fourier.hpp"

#include "qstep/amp_arith.hpp"
#include "qstep/errors.hpp"
#include "qstep/simulator.hpp"

#include <cmath>
#include <numbers>

namespace qstep {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRangeSlack = 1e-12;
// Quadrature round-off floor; smaller coefficients do not become circuit terms.
constexpr double kNegligible = 1e-14;

} // namespace

double FourierSeries::evaluate(double x) const {
    const double w = 2 * kPi / period;
    double acc = a0 / 2;
    for (std::size_t n = 1; n <= a.size(); ++n) {
        const double arg = w * static_cast<double>(n) * x;
        acc += a[n - 1] * std::cos(arg);
        if (n - 1 < b.size()) acc += b[n - 1] * std::sin(arg);
    }
    return acc;
}

double CosSquaredTerm::shape(double x) const {
    if (constant) return 1.0;
    const double c = std::cos(frequency * x + phase);
    return c * c;
}

std::vector<CosSquaredTerm> series_terms(const CosSquaredSeries& series, bool keep_zero) {
    std::vector<CosSquaredTerm> terms;
    terms.push_back({series.a0_prime, 0.0, 0.0, true});
    const double w = kPi / series.period;
    for (std::size_t n = 1; n <= series.order(); ++n) {
        const double f = w * static_cast<double>(n);
        const double an = series.a_prime[n - 1];
        const double bn = n - 1 < series.b_prime.size() ? series.b_prime[n - 1] : 0.0;
        if (keep_zero || std::abs(an) > kNegligible) terms.push_back({an, f, 0.0, false});
        if (keep_zero || std::abs(bn) > kNegligible) terms.push_back({bn, f, -kPi / 4, false});
    }
    return terms;
}

double CosSquaredSeries::evaluate(double x) const {
    double acc = 0.0;
    for (const auto& t : series_terms(*this)) acc += t.evaluate(x);
    return acc;
}

FourierSeries fourier_coefficients(const std::function<double(double)>& f, double period, std::size_t order,
                                   std::size_t nodes) {
    if (!(period > 0) || !std::isfinite(period)) throw InputError("period must be positive and finite");
    if (nodes < 2 * order + 2) throw InputError("too few quadrature nodes for the requested order");

    std::vector<double> samples(nodes);
    const double h = period / static_cast<double>(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double x = h * static_cast<double>(k);
        samples[k] = f(x);
        if (!std::isfinite(samples[k])) {
            throw InputError("function is not finite at x = " + std::to_string(x));
        }
    }

    FourierSeries s;
    s.period = period;
    s.a.assign(order, 0.0);
    s.b.assign(order, 0.0);
    const double scale = 2.0 / static_cast<double>(nodes);
    double sum0 = 0.0;
    for (const double v : samples) sum0 += v;
    s.a0 = scale * sum0;
    for (std::size_t n = 1; n <= order; ++n) {
        double ca = 0.0;
        double cb = 0.0;
        for (std::size_t k = 0; k < nodes; ++k) {
            // Reduce n*k modulo the node count so the phase stays exact for large n*k.
            const std::size_t idx = (n * k) % nodes;
            const double arg = 2 * kPi * static_cast<double>(idx) / static_cast<double>(nodes);
            ca += samples[k] * std::cos(arg);
            cb += samples[k] * std::sin(arg);
        }
        s.a[n - 1] = scale * ca;
        s.b[n - 1] = scale * cb;
    }
    return s;
}

CosSquaredSeries to_cos_squared(const FourierSeries& series) {
    CosSquaredSeries r;
    r.period = series.period;
    r.a0_prime = series.a0 / 2;
    r.a_prime.resize(series.order());
    r.b_prime.resize(series.order());
    for (std::size_t n = 0; n < series.order(); ++n) {
        const double bn = n < series.b.size() ? series.b[n] : 0.0;
        r.a0_prime -= series.a[n] + bn;
        r.a_prime[n] = 2 * series.a[n];
        r.b_prime[n] = 2 * bn;
    }
    return r;
}

double normalization_constant(unsigned depth) {
    if (depth < 1) throw SpecError("depth must be at least 1");
    if (depth > 10) throw SpecError("depth too large for a double normalization constant");
    return std::ldexp(1.0, 1 - (1 << depth));
}

double inverse_success(unsigned depth, double theta) {
    const double e = std::ldexp(1.0, static_cast<int>(depth) + 1);
    return 1.0 / (std::pow(std::sin(theta), e) + std::pow(std::cos(theta), e));
}

FourierSeries inverse_success_series(unsigned depth, std::size_t order, std::size_t nodes) {
    const double norm = normalization_constant(depth);
    return fourier_coefficients([&](double th) { return norm * inverse_success(depth, th); }, kPi / 2, order,
                                nodes);
}

// --- Compilation -------------------------------------------------------------

namespace {

struct ChainResult {
    std::size_t readout = 0;
    AffineReadback readback;
};

ChainResult append_series_chain(Circuit& c, const CosSquaredSeries& series, double x,
                                const CompileOptions& options) {
    const auto terms = series_terms(series);
    if (terms.size() > options.max_terms) {
        throw SpecError("series has " + std::to_string(terms.size()) + " non-zero terms; the cap is " +
                        std::to_string(options.max_terms));
    }
    const double value = series.evaluate(x);
    if (!std::isfinite(value) || value < -kRangeSlack || value > 1 + kRangeSlack) {
        throw NormalizationError("series value " + std::to_string(value) + " at x = " + std::to_string(x) +
                                 " lies outside [0, 1]; normalize first");
    }

    // Accumulator probability p = slope * (partial sum) + offset.
    double slope = 1.0;
    double offset = 0.0;
    const auto& head = terms.front();
    std::size_t acc = c.add_register("acc", 1);
    c.ry(acc, AmplitudeLoader(std::abs(head.coefficient)).angle());
    if (head.coefficient < 0) {
        c.x(acc);
        offset = 1.0;
    }
    for (std::size_t k = 1; k < terms.size(); ++k) {
        const auto& term = terms[k];
        const double magnitude = slope * std::abs(term.coefficient) * term.shape(x);
        if (magnitude > 1 + kRangeSlack) {
            throw NormalizationError("term " + std::to_string(k) + " exceeds unit amplitude at its chain weight");
        }
        const bool subtract = term.coefficient < 0;
        acc = append_combine_stage(c, acc, AmplitudeLoader(magnitude), subtract, "k" + std::to_string(k) + "_",
                                   ToffoliVariant::Native);
        slope /= 2;
        offset = subtract ? (offset + 1) / 2 : offset / 2;
    }
    return {acc, {slope, offset}};
}

} // namespace

Circuit compile_series(const CosSquaredSeries& series, double x, const CompileOptions& options) {
    Circuit c;
    const auto chain = append_series_chain(c, series, x, options);
    c.mark_measured(chain.readout);
    c.set_readback(chain.readback);
    return c;
}

std::size_t series_readout(const Circuit& circuit) {
    if (circuit.measured().size() != 1) throw SpecError("compiled series must measure exactly one qubit");
    return circuit.measured().front();
}

double evaluate_compiled(const CosSquaredSeries& series, double x, const CompileOptions& options) {
    const Circuit c = compile_series(series, x, options);
    const auto state = run_circuit(c);
    return c.readback()->value(state.probability_one(series_readout(c)));
}

SplitSeries split_series(const CosSquaredSeries& series) {
    SplitSeries s;
    s.positive.period = s.negative.period = series.period;
    auto put = [](double v, double& pos, double& neg) {
        pos = v >= 0 ? v : 0.0;
        neg = v < 0 ? -v : 0.0;
    };
    put(series.a0_prime, s.positive.a0_prime, s.negative.a0_prime);
    const std::size_t n = series.order();
    s.positive.a_prime.resize(n);
    s.negative.a_prime.resize(n);
    s.positive.b_prime.resize(n);
    s.negative.b_prime.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        put(series.a_prime[i], s.positive.a_prime[i], s.negative.a_prime[i]);
        const double bi = i < series.b_prime.size() ? series.b_prime[i] : 0.0;
        put(bi, s.positive.b_prime[i], s.negative.b_prime[i]);
    }
    return s;
}

Circuit build_weighted_series(const CosSquaredSeries& nonnegative, double x, double z, ToffoliVariant variant,
                              const CompileOptions& options) {
    for (const auto& t : series_terms(nonnegative)) {
        if (t.coefficient < 0) throw SpecError("weighted series expects non-negative coefficients");
    }
    Circuit c;
    const auto chain = append_series_chain(c, nonnegative, x, options);
    const std::size_t w = c.add_register("w", 1);
    const std::size_t prod = c.add_register("prod", 1);
    c.ry(w, AmplitudeLoader(z).angle());
    append_toffoli(c, w, chain.readout, prod, variant, /*magnitude_only=*/true);
    c.mark_measured(prod);
    c.set_readback({chain.readback.slope, 0.0});
    return c;
}

SplitEvaluation evaluate_split(const SplitSeries& split, double x, double z, ToffoliVariant variant) {
    auto run = [&](const CosSquaredSeries& part) {
        const Circuit c = build_weighted_series(part, x, z, variant);
        const auto state = run_circuit(c);
        return c.readback()->value(state.probability_one(series_readout(c)));
    };
    return {run(split.positive), run(split.negative)};
}

// --- JSON --------------------------------------------------------------------

void to_json(nlohmann::json& j, const FourierSeries& s) {
    j = nlohmann::json{{"period", s.period}, {"order", s.order()}, {"a0", s.a0}, {"a", s.a}, {"b", s.b}};
}

void to_json(nlohmann::json& j, const CosSquaredSeries& s) {
    j = nlohmann::json{{"period", s.period},
                       {"a0_prime", s.a0_prime},
                       {"a_prime", s.a_prime},
                       {"b_prime", s.b_prime}};
}

void from_json(const nlohmann::json& j, FourierSeries& s) {
    j.at("period").get_to(s.period);
    j.at("a0").get_to(s.a0);
    j.at("a").get_to(s.a);
    j.at("b").get_to(s.b);
    if (s.a.size() != s.b.size()) throw InputError("series coefficient lists differ in length");
}

void from_json(const nlohmann::json& j, CosSquaredSeries& s) {
    j.at("period").get_to(s.period);
    j.at("a0_prime").get_to(s.a0_prime);
    j.at("a_prime").get_to(s.a_prime);
    j.at("b_prime").get_to(s.b_prime);
    if (s.a_prime.size() != s.b_prime.size()) throw InputError("series coefficient lists differ in length");
}

} // namespace qstep
