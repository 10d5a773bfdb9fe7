#include "qstep/validation.hpp"

#include "qstep/amp_arith.hpp"
#include "qstep/errors.hpp"
#include "qstep/fourier.hpp"
#include "qstep/simulator.hpp"
#include "qstep/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace qstep {

namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

CheckResult bound_check(std::string name, double error, double tol) {
    return {std::move(name), error < tol, "max error " + sci(error) + " (tol " + sci(tol) + ")"};
}

Eigen::Matrix4cd single_step_matrix(double t) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    Eigen::Matrix4cd m;
    m << c * c, s * c, s * s, -s * c,
         s * c, s * s, -s * c, c * c,
         s * s, -s * c, c * c, s * c,
         -s * c, c * c, s * c, s * s;
    return m;
}

double phase_aligned_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    const Complex phase = a(r, c) / b(r, c);
    return (a - phase * b).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd toffoli_permutation() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(8, 8);
    m(3, 3) = m(7, 7) = 0;
    m(3, 7) = m(7, 3) = 1;
    return m;
}

double oracle_vs_kernel(const Circuit& c) {
    const auto u = dense_oracle(c);
    const auto s = run_circuit(c);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        worst = std::max(worst, std::abs(s[i] - u(static_cast<Eigen::Index>(i), 0)));
    }
    return worst;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

using Check = std::function<CheckResult()>;

} // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
    const auto& gb = options.gearbox_builder;
    std::vector<Check> checks;

    checks.push_back([&] {
        std::mt19937_64 rng(options.seed);
        std::uniform_real_distribution<double> dist(0.0, kPi / 2);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double t = dist(rng);
            const auto u = dense_oracle(gb(make_gearbox_spec(1, t)));
            worst = std::max(worst, (u - Eigen::MatrixXcd(single_step_matrix(t))).cwiseAbs().maxCoeff());
        }
        return bound_check("single-step gearbox matrix (16 entries, 20 angles)", worst, 1e-12);
    });

    for (unsigned d = 1; d <= 3; ++d) {
        checks.push_back([&, d] {
            double worst = 0.0;
            double worst_success = 0.0;
            for (const double t : uniform_grid(0.0, kPi / 2, 1000)) {
                const auto c = gb(make_gearbox_spec(d, t));
                const auto r = post_select_zero(run_circuit(c), register_qubits(c, "c"), c.qubit("t"));
                const double e = std::pow(2.0, d + 1);
                const double s = std::pow(std::sin(t), e);
                const double k = std::pow(std::cos(t), e);
                worst = std::max(worst, std::abs(r.omega - s / (s + k)));
                worst_success = std::max(worst_success, std::abs(r.success_probability - (s + k)));
            }
            return bound_check("step law and success probability, d=" + std::to_string(d),
                               std::max(worst, worst_success), 1e-10);
        });
    }

    checks.push_back([&] {
        double worst = 0.0;
        for (unsigned d = 1; d <= 4; ++d) {
            for (const double t : uniform_grid(0.0, kPi / 2, 50)) {
                const auto spec = make_gearbox_spec(d, t);
                const auto s = run_circuit(gb(spec));
                const auto a = analytics(spec);
                const std::size_t t_index = std::size_t{1} << spec.control_count();
                worst = std::max({worst, std::abs(s[0] - a.amp0), std::abs(s[t_index] - a.amp1)});
            }
        }
        return bound_check("gearbox distinguished amplitudes, d=1..4", worst, 1e-12);
    });

    checks.push_back([&] {
        double worst = 0.0;
        for (unsigned d = 1; d <= 3; ++d) {
            for (const double t : uniform_grid(0.0, kPi / 2, 40)) worst = std::max(worst, oracle_vs_kernel(gb(make_gearbox_spec(d, t))));
        }
        return bound_check("kernel vs dense oracle, gearbox d=1..3", worst, 1e-12);
    });

    checks.push_back([] {
        double worst = 0.0;
        for (const double t : uniform_grid(0.0, kPi / 2, 25)) {
            worst = std::max(worst, oracle_vs_kernel(build_rescaled_plateau(t, kPi / 4)));
            worst = std::max(worst, oracle_vs_kernel(build_relu(t)));
            worst = std::max(worst, oracle_vs_kernel(build_subtraction(AmplitudeLoader(std::sin(t) * std::sin(t)),
                                                                       AmplitudeLoader(0.3))));
            worst = std::max(worst, oracle_vs_kernel(build_composition(AmplitudeLoader(0.9), AmplitudeLoader(0.2),
                                                                       AmplitudeLoader(std::cos(t) * std::cos(t)))));
        }
        return bound_check("kernel vs dense oracle, composite builders", worst, 1e-12);
    });

    checks.push_back([] {
        double worst = 0.0;
        for (const double t : uniform_grid(0.0, kPi / 2, 1000)) {
            for (unsigned d = 1; d <= 4; ++d) {
                worst = std::max(worst, std::abs(composed_step(d, kPi / 2 - t) - (1 - composed_step(d, t))));
            }
        }
        return bound_check("symmetry S(pi/2 - theta) = 1 - S(theta)", worst, 1e-12);
    });

    checks.push_back([] {
        double worst = 0.0;
        for (const double t : uniform_grid(0.0, kPi / 2, 1000)) {
            double phi = t;
            for (unsigned d = 1; d <= 4; ++d) {
                worst = std::max(worst, std::abs(single_step_map(phi) - composed_step(d, t)));
                phi = std::atan2(std::pow(std::sin(phi), 2), std::pow(std::cos(phi), 2));
            }
        }
        return bound_check("nesting law of the composed step", worst, 1e-12);
    });

    checks.push_back([] {
        std::vector<double> grid;
        for (const double t : uniform_grid(0.0, kPi / 2, 1000)) {
            if (std::abs(t - kPi / 4) >= 0.1) grid.push_back(t);
        }
        const double err = step_approximation_error(3, grid, 0.1);
        return bound_check("unit-step approximation, d=3 outside |theta - pi/4| < 0.1", err, 0.05);
    });

    checks.push_back([] {
        const double err = phase_aligned_error(dense_oracle(toffoli_exact_decomposition()), toffoli_permutation());
        const auto cx = toffoli_exact_decomposition().count(GateKind::CX);
        CheckResult r = bound_check("exact Toffoli up to global phase", err, 1e-12);
        r.passed = r.passed && cx <= 6;
        r.detail += ", " + std::to_string(cx) + " CX";
        return r;
    });

    checks.push_back([] {
        const auto u = dense_oracle(toffoli_phase_equivalent_decomposition());
        const double err = (u.cwiseAbs() - toffoli_permutation().cwiseAbs()).cwiseAbs().maxCoeff();
        const auto cx = toffoli_phase_equivalent_decomposition().count(GateKind::CX);
        CheckResult r = bound_check("relative-phase Toffoli magnitudes", err, 1e-12);
        r.passed = r.passed && cx < toffoli_exact_decomposition().count(GateKind::CX);
        r.detail += ", " + std::to_string(cx) + " CX";
        return r;
    });

    checks.push_back([] {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 16; ++i) {
            const AmplitudeLoader g(u01(rng)), h(u01(rng)), z(u01(rng));
            const auto native = build_composition(g, h, z, ToffoliVariant::Native);
            const auto relative = build_composition(g, h, z, ToffoliVariant::PhaseEquivalent);
            const auto a = read_composition(run_circuit(native), native);
            const auto b = read_composition(run_circuit(relative), relative);
            worst = std::max({worst, std::abs(a.r2 - b.r2), std::abs(a.b - b.b)});
        }
        return bound_check("composition readout invariant under relative-phase Toffoli", worst, 1e-10);
    });

    checks.push_back([] {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> ang(-kPi, kPi);
        double worst = 0.0;
        for (std::size_t k = 0; k <= 3; ++k) {
            std::vector<double> angles(std::size_t{1} << k);
            for (auto& a : angles) a = ang(rng);
            const auto c = uc_ry({k, angles});
            const auto u = dense_oracle(c);
            const std::size_t tbit = std::size_t{1} << k;
            for (std::size_t p = 0; p < angles.size(); ++p) {
                const auto m = ry_matrix(angles[p]);
                for (int row = 0; row < 2; ++row) {
                    for (int col = 0; col < 2; ++col) {
                        const auto i = static_cast<Eigen::Index>(p | (row ? tbit : 0));
                        const auto j = static_cast<Eigen::Index>(p | (col ? tbit : 0));
                        worst = std::max(worst, std::abs(u(i, j) - m[static_cast<std::size_t>(2 * row + col)]));
                    }
                }
            }
        }
        return bound_check("uniformly controlled Ry vs block-diagonal oracle", worst, 1e-12);
    });

    checks.push_back([] {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> ang(-kPi, kPi);
        double worst = 0.0;
        std::vector<Gate> inputs = {{GateKind::H, {0}}, {GateKind::X, {0}}, {GateKind::SqrtX, {0}}};
        for (int i = 0; i < 10; ++i) {
            inputs.push_back({GateKind::Ry, {0}, ang(rng)});
            inputs.push_back({GateKind::Rz, {0}, ang(rng)});
        }
        for (const auto& g : inputs) {
            Circuit ref;
            ref.add_register("q", 1);
            ref.append(g);
            worst = std::max(worst, phase_aligned_error(dense_oracle(rewrite_1q_to_zsx(g)), dense_oracle(ref)));
        }
        return bound_check("Rz/SX basis rewrite up to global phase", worst, 1e-10);
    });

    checks.push_back([] {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 64; ++i) {
            const double g = u01(rng);
            const double h = u01(rng);
            const auto c = build_subtraction(AmplitudeLoader(g), AmplitudeLoader(h));
            worst = std::max(worst, std::abs(read_subtraction(run_circuit(c), c).difference - (g - h)));
        }
        return bound_check("amplitude subtraction recovers g - h (64 pairs)", worst, 1e-12);
    });

    checks.push_back([] {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 64; ++i) {
            const double g = u01(rng);
            const double h = u01(rng);
            const auto c = build_subtraction(AmplitudeLoader(g), AmplitudeLoader(h));
            const auto s = run_circuit(c);
            std::vector<Complex> expected(s.dimension(), 0.0);
            const std::size_t a = std::size_t{1} << c.qubit("a");
            const std::size_t m = std::size_t{1} << c.qubit("m");
            const std::size_t t = std::size_t{1} << c.qubit("t");
            expected[0] = std::sqrt((1 - g) / 2);
            expected[t] = std::sqrt(g / 2);
            expected[a] = std::sqrt(h / 2);
            expected[a | m | t] = std::sqrt((1 - h) / 2);
            for (std::size_t k = 0; k < s.dimension(); ++k) worst = std::max(worst, std::abs(s[k] - expected[k]));
        }
        return bound_check("subtraction final state term by term (64 pairs)", worst, 1e-12);
    });

    checks.push_back([] {
        std::mt19937_64 rng(19);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 64; ++i) {
            const double g = u01(rng);
            const double h = u01(rng);
            const auto c = build_addition(AmplitudeLoader(g), AmplitudeLoader(h));
            worst = std::max(worst, std::abs(2 * run_circuit(c).probability_one(c.qubit("t")) - (g + h)));
        }
        return bound_check("amplitude addition recovers g + h (64 pairs)", worst, 1e-12);
    });

    checks.push_back([] {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 64; ++i) {
            const double z = u01(rng), g = u01(rng), h = u01(rng);
            const auto c = build_composition(AmplitudeLoader(g), AmplitudeLoader(h), AmplitudeLoader(z));
            const auto r = read_composition(run_circuit(c), c);
            worst = std::max({worst, std::abs(r.product - z * (g - h)), std::abs(r.b - z * (g - h + 1) / 2)});
        }
        return bound_check("composition recovers z (g - h) (64 triples)", worst, 1e-12);
    });

    checks.push_back([] {
        const auto cs = to_cos_squared(inverse_success_series(2, 4));
        const double expected[5] = {0.598, -0.7, 0.314, -0.14, 0.062};
        const double got[5] = {cs.a0_prime, cs.a_prime[0], cs.a_prime[1], cs.a_prime[2], cs.a_prime[3]};
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(got[i] - expected[i]));
        return bound_check("cos^2 series of D_2/8, five leading terms", worst, 0.005);
    });

    checks.push_back([] {
        double worst = 0.0;
        for (unsigned d = 1; d <= 3; ++d) {
            worst = std::max(worst, std::abs(normalization_constant(d) - std::pow(2.0, 1.0 - std::pow(2.0, d))));
        }
        return bound_check("normalization constant 2^(1 - 2^d)", worst, 1e-15);
    });

    checks.push_back([] {
        const auto fs = inverse_success_series(2, 6);
        const auto cs = to_cos_squared(fs);
        double worst = 0.0;
        for (const double x : uniform_grid(0.0, kPi / 2, 1000)) worst = std::max(worst, std::abs(cs.evaluate(x) - fs.evaluate(x)));
        return bound_check("cos^2 rewrite is pointwise exact", worst, 1e-12);
    });

    checks.push_back([] {
        const auto cs = to_cos_squared(inverse_success_series(2, 4));
        double worst = 0.0;
        for (const double x : uniform_grid(0.0, kPi / 2, 9)) worst = std::max(worst, std::abs(evaluate_compiled(cs, x) - cs.evaluate(x)));
        return bound_check("compiled D_2/8 series reads back the series value", worst, 1e-10);
    });

    checks.push_back([] {
        const auto cs = to_cos_squared(inverse_success_series(2, 4));
        const auto split = split_series(cs);
        std::mt19937_64 rng(29);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 16; ++i) {
            const double x = u01(rng) * kPi / 2;
            const double z = u01(rng);
            const auto e = evaluate_split(split, x, z);
            worst = std::max(worst, std::abs(e.difference() - z * cs.evaluate(x)));
        }
        return bound_check("split circuits recombine to z * D", worst, 1e-10);
    });

    checks.push_back([&] {
        double worst_ratio = 0.0;
        for (unsigned d = 1; d <= 2; ++d) {
            SweepConfig cfg;
            cfg.builder = SweepBuilder::Gearbox;
            cfg.depth = d;
            cfg.theta_min = 0.2;
            cfg.theta_max = 1.35;
            cfg.points = 10;
            cfg.mode = SweepMode::Shots;
            cfg.shots = options.shots;
            cfg.seed = options.seed;
            for (const auto& row : run_sweep(cfg)) {
                const double sigma = std::sqrt(row.analytic * (1 - row.analytic) / static_cast<double>(*row.shots_kept));
                const double dev = std::abs(row.omega - row.analytic);
                worst_ratio = std::max(worst_ratio, sigma > 0 ? dev / sigma : (dev > 0 ? 1e9 : 0.0));
            }
        }
        return CheckResult{"shot estimates within 5 sigma, d=1,2", worst_ratio <= kConfidenceZ,
                           "worst deviation " + sci(worst_ratio) + " sigma"};
    });

    checks.push_back([] {
        const auto text = export_qasm(build_subtraction(AmplitudeLoader(0.6), AmplitudeLoader(0.2)));
        auto count = [&](const std::string& prefix) {
            std::size_t n = 0;
            std::size_t pos = 0;
            while ((pos = text.find("\n" + prefix, pos)) != std::string::npos) {
                ++n;
                ++pos;
            }
            return n;
        };
        const bool ok = text.rfind("OPENQASM 2.0;\n", 0) == 0 && count("h ") == 1 && count("c_ry(") == 2 &&
                        count("cx ") == 2 && count("x ") == 2;
        return CheckResult{"QASM export of the subtraction circuit", ok, ok ? "gate census matches" : text};
    });

    std::vector<CheckResult> results;
    results.reserve(checks.size());
    for (const auto& check : checks) {
        try {
            results.push_back(check());
        } catch (const std::exception& e) {
            results.push_back({"(check raised)", false, e.what()});
        }
    }
    return results;
}

bool print_report(std::ostream& out, const std::vector<CheckResult>& results) {
    std::size_t passed = 0;
    for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        if (r.passed) ++passed;
    }
    out << passed << "/" << results.size() << " checks passed\n";
    return passed == results.size();
}

} // namespace qstep
