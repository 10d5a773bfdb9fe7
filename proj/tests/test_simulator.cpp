#include "doctest.h"

#include "qstep/errors.hpp"
#include "qstep/gearbox.hpp"
#include "qstep/simulator.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace qstep;
using qstep::test::max_abs_diff;

namespace {

constexpr double kPi = std::numbers::pi;

Circuit one_register(std::size_t n) {
    Circuit c;
    c.add_register("q", n);
    return c;
}

} // namespace

TEST_CASE("X on qubit 0 flips the least-significant bit") {
    auto c = one_register(2);
    c.x(0);
    const auto s = run_circuit(c);
    CHECK(max_abs_diff(s, {0, 1, 0, 0}) < 1e-15);
}

TEST_CASE("H on |0>") {
    auto c = one_register(1);
    c.h(0);
    const double r = 1 / std::sqrt(2.0);
    CHECK(max_abs_diff(run_circuit(c), {r, r}) < 1e-15);
}

TEST_CASE("single-step sequence at pi/3") {
    const double t = kPi / 3;
    auto c = one_register(2);
    c.ry(0, -2 * t).cx(0, 1).ry(0, 2 * t);
    const auto s = run_circuit(c);
    CHECK(max_abs_diff(s, {0.25, 0.4330127018922193, 0.75, -0.4330127018922193}) < 1e-12);
}

TEST_CASE("empty circuit leaves |0...0>") {
    const auto s = run_circuit(one_register(3));
    CHECK(max_abs_diff(s, {1, 0, 0, 0, 0, 0, 0, 0}) == 0.0);
}

TEST_CASE("single-step gearbox at pi/4") {
    const auto s = run_circuit(build_gearbox(make_gearbox_spec(1, kPi / 4)));
    CHECK(max_abs_diff(s, {0.5, 0.5, 0.5, -0.5}) < 1e-12);
}

TEST_CASE("gate validation") {
    auto c = one_register(2);
    CHECK_THROWS_AS(c.x(2), InvalidGateError);
    CHECK_THROWS_AS(c.cx(1, 1), InvalidGateError);
    CHECK_THROWS_AS(c.ry(0, std::nan("")), InvalidGateError);
    CHECK_THROWS_AS(c.append({GateKind::CX, {0}}), InvalidGateError);
    StateVector s(2);
    CHECK_THROWS_AS(apply_gate(s, {GateKind::X, {5}}), InvalidGateError);
}

TEST_CASE("run_circuit rejects a mismatched initial state") {
    CHECK_THROWS_AS(run_circuit(one_register(2), StateVector(3)), DimensionError);
}

TEST_CASE("norm is preserved after every gate") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_int_distribution<int> pick(0, 7);
    StateVector s(5);
    for (int i = 0; i < 300; ++i) {
        const std::size_t a = static_cast<std::size_t>(i) % 5;
        const std::size_t b = (a + 1 + static_cast<std::size_t>(i / 5) % 4) % 5;
        const std::size_t c = (b + 1) % 5 == a ? (b + 2) % 5 : (b + 1) % 5;
        switch (pick(rng)) {
        case 0: apply_gate(s, {GateKind::X, {a}}); break;
        case 1: apply_gate(s, {GateKind::H, {a}}); break;
        case 2: apply_gate(s, {GateKind::SqrtX, {a}}); break;
        case 3: apply_gate(s, {GateKind::Ry, {a}, ang(rng)}); break;
        case 4: apply_gate(s, {GateKind::Rz, {a}, ang(rng)}); break;
        case 5: apply_gate(s, {GateKind::CX, {a, b}}); break;
        case 6: apply_gate(s, {GateKind::CRy, {a, b}, ang(rng)}); break;
        default: apply_gate(s, {GateKind::Toffoli, {a, b, c}}); break;
        }
        REQUIRE(std::abs(s.norm_squared() - 1) < 1e-12);
    }
}

TEST_CASE("dense oracle of a single CX is the CX permutation") {
    auto c = one_register(2);
    c.cx(0, 1);
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
    expected(0, 0) = expected(2, 2) = 1;
    expected(3, 1) = expected(1, 3) = 1;
    CHECK((dense_oracle(c) - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dense oracle of the single-step gearbox matches the closed form") {
    for (const double t : {0.1, 0.55, 1.2}) {
        const double co = std::cos(t), si = std::sin(t);
        Eigen::Matrix4cd m;
        m << co * co, si * co, si * si, -si * co,
             si * co, si * si, -si * co, co * co,
             si * si, -si * co, co * co, si * co,
             -si * co, co * co, si * co, si * si;
        CHECK((dense_oracle(build_gearbox(make_gearbox_spec(1, t))) - Eigen::MatrixXcd(m)).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("dense oracle refuses wide circuits and is unitary otherwise") {
    CHECK_THROWS_AS(dense_oracle(one_register(11)), OracleRefusalError);
    const auto u = dense_oracle(build_gearbox(make_gearbox_spec(2, 0.4)));
    const auto id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    CHECK((u.adjoint() * u - id).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("random circuits agree with the dense oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int trial = 0; trial < 20; ++trial) {
        auto c = one_register(4);
        for (int i = 0; i < 30; ++i) {
            const std::size_t a = rng() % 4;
            const std::size_t b = (a + 1 + rng() % 3) % 4;
            std::size_t d = 0;
            while (d == a || d == b) ++d;
            switch (rng() % 8) {
            case 0: c.x(a); break;
            case 1: c.h(a); break;
            case 2: c.sx(a); break;
            case 3: c.ry(a, ang(rng)); break;
            case 4: c.rz(a, ang(rng)); break;
            case 5: c.cx(a, b); break;
            case 6: c.cry(a, b, ang(rng)); break;
            default: c.ccx(a, b, d); break;
            }
        }
        CHECK(qstep::test::oracle_vs_kernel(c) < 1e-12);
    }
}

TEST_CASE("post-selection on the single-step gearbox") {
    SUBCASE("theta = pi/3") {
        const auto c = build_gearbox(make_gearbox_spec(1, kPi / 3));
        const auto r = post_select_zero(run_circuit(c), register_qubits(c, "c"), c.qubit("t"));
        CHECK(r.omega == doctest::Approx(0.9).epsilon(1e-12));
        CHECK(r.success_probability == doctest::Approx(0.625).epsilon(1e-12));
        CHECK(r.kept_mass == doctest::Approx(0.625).epsilon(1e-12));
        CHECK(r.joint_one == doctest::Approx(0.5625).epsilon(1e-12));
        CHECK(!r.shots_kept.has_value());
    }
    SUBCASE("theta = 0") {
        const auto c = build_gearbox(make_gearbox_spec(1, 0.0));
        const auto r = post_select_zero(run_circuit(c), register_qubits(c, "c"), c.qubit("t"));
        CHECK(r.omega == 0.0);
        CHECK(r.success_probability == doctest::Approx(1.0));
    }
}

TEST_CASE("post-selection errors") {
    auto c = one_register(2);
    c.x(0);
    const auto s = run_circuit(c);
    const std::vector<std::size_t> kept{0};
    CHECK_THROWS_AS(post_select_zero(s, kept, 1), PostSelectionImpossibleError);
    CHECK_THROWS_AS(post_select_zero(s, kept, 0), SpecError);
    const std::vector<int> one{1};
    const auto r = post_select(s, kept, one, 1);
    CHECK(r.omega == 0.0);
    CHECK(r.kept_mass == doctest::Approx(1.0));
}

TEST_CASE("post-selection identity: omega * kept_mass = joint mass") {
    const auto c = build_gearbox(make_gearbox_spec(2, 0.9));
    const auto s = run_circuit(c);
    const auto r = post_select_zero(s, register_qubits(c, "c"), c.qubit("t"));
    double joint = 0.0;
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        if ((i & 7u) == 0 && (i & 8u)) joint += std::norm(s[i]);
    }
    CHECK(std::abs(r.omega * r.kept_mass - joint) < 1e-14);
}

TEST_CASE("sampling |1> puts every shot on 1") {
    auto c = one_register(1);
    c.x(0);
    const std::vector<std::size_t> measured{0};
    const auto rec = sample_shots(run_circuit(c), measured, 1000, 42);
    REQUIRE(rec.size() == 1);
    CHECK(rec[0].bitstring == "1");
    CHECK(rec[0].count == 1000);
}

TEST_CASE("sampling H|0> concentrates around 1/2") {
    auto c = one_register(1);
    c.h(0);
    const std::vector<std::size_t> measured{0};
    const auto rec = sample_shots(run_circuit(c), measured, 100000, 7);
    std::uint64_t ones = 0, total = 0;
    for (const auto& r : rec) {
        total += r.count;
        if (r.bitstring == "1") ones += r.count;
    }
    CHECK(total == 100000);
    CHECK(std::abs(static_cast<double>(ones) / 1e5 - 0.5) < 5 * std::sqrt(0.25 / 1e5));
}

TEST_CASE("sampling is deterministic and uses Qiskit bit order") {
    auto c = one_register(3);
    c.x(2).h(0);
    const std::vector<std::size_t> measured{0, 2};
    const auto s = run_circuit(c);
    const auto a = sample_shots(s, measured, 5000, 11);
    const auto b = sample_shots(s, measured, 5000, 11);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].bitstring == b[i].bitstring);
        CHECK(a[i].count == b[i].count);
        // qubit 2 is always 1 and is the leftmost character.
        CHECK(a[i].bitstring.front() == '1');
    }
}

TEST_CASE("shot post-selection on the single-step gearbox at pi/3") {
    const auto c = build_gearbox(make_gearbox_spec(1, kPi / 3));
    const std::vector<std::size_t> measured{c.qubit("c"), c.qubit("t")};
    const auto rec = sample_shots(run_circuit(c), measured, 100000, 2024);
    const std::vector<std::size_t> kept{c.qubit("c")};
    const std::vector<int> zero{0};
    const auto r = post_select_shots(rec, measured, kept, zero, c.qubit("t"));
    REQUIRE(r.shots_kept.has_value());
    const double sigma = std::sqrt(0.9 * 0.1 / static_cast<double>(*r.shots_kept));
    CHECK(std::abs(r.omega - 0.9) < 5 * sigma);
    CHECK(std::abs(r.success_probability - 0.625) < 5 * std::sqrt(0.625 * 0.375 / 1e5));
}
