#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ewfs/qsim.hpp"
#include "ewfs/scenario.hpp"
#include "oracle.hpp"

using namespace ewfs;

namespace {

const double kR2 = 1.0 / std::sqrt(2.0);
const double kR3 = 1.0 / std::sqrt(3.0);

AmpVector random_vector(std::mt19937& rng, std::size_t dim) {
    std::normal_distribution<double> g;
    AmpVector v(dim);
    for (auto& a : v) a = {g(rng), g(rng)};
    return v;
}

StateVector random_state(std::mt19937& rng, std::vector<std::string> regs) {
    const std::size_t dim = std::size_t{1} << regs.size();
    return make_state(std::move(regs), random_vector(rng, dim));
}

// Haar-like unitary: columns from Gram-Schmidt of random vectors.
Unitary random_unitary(std::mt19937& rng, std::size_t dim) {
    std::vector<AmpVector> cols;
    for (std::size_t k = 0; k < dim; ++k) {
        AmpVector v = random_vector(rng, dim);
        for (const auto& c : cols) {
            Amp ip{};
            for (std::size_t i = 0; i < dim; ++i) ip += std::conj(c[i]) * v[i];
            for (std::size_t i = 0; i < dim; ++i) v[i] -= ip * c[i];
        }
        double n = 0.0;
        for (auto a : v) n += std::norm(a);
        for (auto& a : v) a /= std::sqrt(n);
        cols.push_back(v);
    }
    AmpVector e(dim * dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) e[r * dim + c] = cols[c][r];
    return Unitary::from_entries(dim, e);
}

}  // namespace

TEST(MakeState, BasisState) {
    const auto s = make_state({"S"}, {1.0, 0.0});
    EXPECT_EQ(s.dim(), 2U);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    EXPECT_EQ(s[0], Amp(1.0));
}

TEST(MakeState, FrInitialState) {
    const auto s = make_state({"S_A", "S_B"}, {1.0, 0.0, 1.0, 1.0});
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    EXPECT_NEAR(s[0].real(), kR3, 1e-15);
    EXPECT_EQ(s[1], Amp(0.0));
    EXPECT_NEAR(s[2].real(), kR3, 1e-15);
    EXPECT_NEAR(s[3].real(), kR3, 1e-15);
}

TEST(MakeState, GhzState) {
    const auto s = make_state({"S_A", "S_B", "S_C"}, {1, 0, 0, 0, 0, 0, 0, 1});
    EXPECT_NEAR(s[0].real(), kR2, 1e-15);
    EXPECT_NEAR(s[7].real(), kR2, 1e-15);
    for (std::size_t i = 1; i < 7; ++i) EXPECT_EQ(s[i], Amp(0.0));
}

TEST(MakeState, Errors) {
    EXPECT_THROW(make_state({"S"}, {0.0, 0.0}), error);
    EXPECT_THROW(make_state({"S"}, {1.0, 0.0, 0.0}), error);
    EXPECT_THROW(make_state({"S"}, {std::nan(""), 1.0}), error);
    EXPECT_THROW(StateVector({"S", "S"}, AmpVector(4)), error);
}

TEST(ApplyUnitary, FriendCnotOnGeneralQubit) {
    const Amp alpha{0.6, 0.0}, beta{0.0, 0.8};
    const auto psi = tensor(make_state({"S_A"}, {alpha, beta}), basis_state({"L_A"}, 0));
    const auto out = apply_unitary(psi, friend_unitary(z_basis()), {"S_A", "L_A"});
    EXPECT_NEAR(std::abs(out[0] - alpha), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out[3] - beta), 0.0, 1e-15);
    EXPECT_EQ(out[1], Amp(0.0));
    EXPECT_EQ(out[2], Amp(0.0));
}

TEST(ApplyUnitary, IdentityIsBitExact) {
    std::mt19937 rng(7);
    const auto psi = random_state(rng, {"a", "b", "c"});
    const auto out = apply_unitary(psi, Unitary::identity(4), {"c", "a"});
    for (std::size_t i = 0; i < psi.dim(); ++i) EXPECT_LE(std::abs(out[i] - psi[i]), 1e-15);
}

TEST(ApplyUnitary, FrStateAfterFriends) {
    // Oracle: explicit amplitudes of (|0000> + |1100> + |1111>)/sqrt3.
    const Protocol fr = fr_protocol();
    const auto psi2 = run_protocol(fr).state;
    ASSERT_EQ(psi2.registers(), (std::vector<std::string>{"S_A", "L_A", "S_B", "L_B"}));
    for (std::size_t i = 0; i < 16; ++i) {
        const double expect = (i == 0 || i == 12 || i == 15) ? kR3 : 0.0;
        EXPECT_NEAR(std::abs(psi2[i] - Amp(expect)), 0.0, 1e-12) << "index " << i;
    }
}

TEST(ApplyUnitary, MatchesDenseKroneckerOracle) {
    std::mt19937 rng(11);
    const auto psi = random_state(rng, {"r0", "r1", "r2"});
    const auto u = random_unitary(rng, 2);
    const auto out = apply_unitary(psi, u, {"r1"});
    oracle::Dense du(2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) du(r, c) = u(r, c);
    const auto full = oracle::kron_all({oracle::Dense::identity(2), du, oracle::Dense::identity(2)});
    const auto ref = oracle::apply(full, std::vector<oracle::C>(psi.amplitudes().begin(), psi.amplitudes().end()));
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(out[i] - ref[i]), 0.0, 1e-12);
}

TEST(ApplyUnitary, Errors) {
    const auto psi = basis_state({"a", "b"}, 0);
    EXPECT_THROW(apply_unitary(psi, Unitary::identity(4), {"a"}), error);
    EXPECT_THROW(apply_unitary(psi, Unitary::identity(2), {"z"}), error);
    EXPECT_THROW(apply_unitary(psi, Unitary::identity(4), {"a", "a"}), error);
}

TEST(FriendUnitary, ComputationalBasisIsCnotExactly) {
    const auto u = friend_unitary(z_basis());
    const double cnot[16] = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
    for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(u.entries()[i], Amp(cnot[i])) << i;
}

TEST(FriendUnitary, YBasisCopiesIndex) {
    const auto y = y_basis();
    const auto u = friend_unitary(y);
    for (std::size_t k = 0; k < 2; ++k) {
        AmpVector in(4);
        in[0] = y.vector(k)[0];
        in[2] = y.vector(k)[1];
        const auto out = u.apply(in);
        // expected |y_k>|k>
        AmpVector expect(4);
        expect[0 + k] = y.vector(k)[0];
        expect[2 + k] = y.vector(k)[1];
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(out[i] - expect[i]), 0.0, 1e-15);
    }
}

TEST(FriendUnitary, MatchesOracleAndIsUnitary) {
    for (const auto& b : {z_basis(), x_basis(), y_basis()}) {
        const auto u = friend_unitary(b);
        EXPECT_LT(u.unitarity_deviation(), 1e-12);
        const auto ref = oracle::friend_cnot({b.vector(0).begin(), b.vector(0).end()},
                                             {b.vector(1).begin(), b.vector(1).end()});
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(std::abs(u(r, c) - ref(r, c)), 0.0, 1e-15);
    }
}

TEST(FriendUnitary, RejectsBadBasis) {
    EXPECT_THROW(OrthonormalBasis::make({{1.0, 0.0}, {kR2, kR2}}), error);
    EXPECT_THROW(friend_unitary(ok_fail_basis()), error);
}

TEST(MeasureDistribution, FrOkOkIsOneTwelfth) {
    const auto psi2 = run_protocol(fr_protocol()).state;
    const auto okf = ok_fail_basis();
    std::vector<LocalMeasurement> ms{{&okf, {"S_A", "L_A"}}, {&okf, {"S_B", "L_B"}}};
    const auto p = joint_probabilities(psi2, ms);
    EXPECT_NEAR(p[0], 1.0 / 12.0, 1e-12);
    // Dense oracle: <psi| P_ok (x) P_ok |psi>.
    const auto pok = oracle::outer({okf.vector(0).begin(), okf.vector(0).end()});
    EXPECT_NEAR(oracle::expectation(oracle::kron(pok, pok), {psi2.amplitudes().begin(), psi2.amplitudes().end()}),
                1.0 / 12.0, 1e-12);
}

TEST(MeasureDistribution, ComputationalOnZero) {
    const auto p = measure_distribution(basis_state({"S"}, 0), z_basis(), {"S"});
    EXPECT_EQ(p[0], 1.0);
    EXPECT_EQ(p[1], 0.0);
}

TEST(MeasureDistribution, GhzXxxParity) {
    const auto ghz = ghz_state();
    const auto x = x_basis();
    std::vector<LocalMeasurement> ms{{&x, {"S_A"}}, {&x, {"S_B"}}, {&x, {"S_C"}}};
    const auto p = joint_probabilities(ghz, ms);
    for (std::size_t idx = 0; idx < 8; ++idx) {
        const int parity = __builtin_popcount(static_cast<unsigned>(idx)) & 1;
        EXPECT_NEAR(p[idx], parity == 0 ? 0.25 : 0.0, 1e-12) << idx;
    }
}

TEST(MeasureDistribution, DimensionMismatch) {
    EXPECT_THROW(measure_distribution(basis_state({"a", "b"}, 0), z_basis(), {"a", "b"}), error);
}

TEST(Project, FrZeroAmplitudes) {
    const auto psi2 = run_protocol(fr_protocol()).state;
    const auto basis = ok_fail_basis();
    const auto ok = basis.vector(0);
    const std::vector<std::string> t{"S_A", "L_A", "S_B", "L_B"};
    auto prod = [](std::span<const Amp> a, std::vector<double> b) {
        AmpVector out;
        for (auto x : a)
            for (auto y : b) out.push_back(x * y);
        return out;
    };
    auto prod2 = [](std::vector<double> a, std::span<const Amp> b) {
        AmpVector out;
        for (auto x : a)
            for (auto y : b) out.push_back(x * y);
        return out;
    };
    EXPECT_LT(project(psi2, prod(ok, {1, 0, 0, 0}), t).probability, 1e-12);
    EXPECT_LT(project(psi2, prod2({0, 0, 0, 1}, ok), t).probability, 1e-12);
    AmpVector e0011(16);
    e0011[3] = 1.0;
    const auto z = project(psi2, e0011, t);
    EXPECT_LT(z.probability, 1e-12);
    EXPECT_FALSE(z.post_state.has_value());
}

TEST(Project, PostStateNormalized) {
    const auto psi2 = run_protocol(fr_protocol()).state;
    AmpVector e11(4);
    e11[3] = 1.0;
    const auto r = project(psi2, e11, {"S_A", "L_A"});
    EXPECT_NEAR(r.probability, 2.0 / 3.0, 1e-12);
    ASSERT_TRUE(r.post_state.has_value());
    EXPECT_NEAR(r.post_state->norm_squared(), 1.0, 1e-12);
    EXPECT_THROW(project(psi2, AmpVector{1.0, 0.0}, {"S_A", "L_A"}), error);
}

TEST(CompleteBasis, OkFailExtrasDoNotOverlapState) {
    const auto b = ok_fail_basis();
    ASSERT_EQ(b.dim(), 4U);
    EXPECT_EQ(b.label(0), "ok");
    EXPECT_EQ(b.label(2), "2");
    const auto psi2 = run_protocol(fr_protocol()).state;
    const auto p = measure_distribution(psi2, b, {"S_A", "L_A"});
    EXPECT_LT(p[2] + p[3], 1e-12);
}

TEST(CompleteBasis, FullBasisUnchanged) {
    std::vector<AmpVector> e{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    const auto b = complete_basis(e);
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(b.vector(k)[i], e[k][i]);
}

TEST(CompleteBasis, YesNoExtrasCarryNoProbabilityInGhzFr) {
    const Protocol p = ghz_fr_protocol();
    const auto d = joint_distribution(p, {"U", "V", "W"});
    double extra = 0.0;
    for (std::size_t idx = 0; idx < d.probabilities.size(); ++idx) {
        const auto o = d.outcome_at(idx);
        if (o[0] > 1 || o[1] > 1 || o[2] > 1) extra += d.probabilities[idx];
    }
    EXPECT_LT(extra, 1e-12);
}

TEST(CompleteBasis, RejectsNonOrthonormalInput) {
    EXPECT_THROW(complete_basis({{1, 0, 0, 0}, {kR2, kR2, 0, 0}}), error);
}

// ---------------------------------------------------------------------------
// Properties over random states and unitaries

TEST(QsimProperties, NormPreservationAndUndo) {
    std::mt19937 rng(2024);
    const std::vector<std::string> regs{"q0", "q1", "q2", "q3"};
    for (int trial = 0; trial < 100; ++trial) {
        const auto psi = random_state(rng, regs);
        const std::size_t arity = 1 + trial % 3;
        std::vector<std::string> targets = regs;
        std::shuffle(targets.begin(), targets.end(), rng);
        targets.resize(arity);
        const auto u = random_unitary(rng, std::size_t{1} << arity);
        EXPECT_LT(u.unitarity_deviation(), 1e-10);
        const auto out = apply_unitary(psi, u, targets);
        EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
        const auto back = apply_unitary(out, u.adjoint(), targets);
        EXPECT_LT(max_abs_diff(back, psi), 1e-12);
    }
}

TEST(QsimProperties, FriendUnitariesAreUnitary) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto u = random_unitary(rng, 2);
        const auto b = OrthonormalBasis::make({{u(0, 0), u(1, 0)}, {u(0, 1), u(1, 1)}});
        EXPECT_LT(friend_unitary(b).unitarity_deviation(), 1e-12);
    }
}

TEST(QsimProperties, DistributionsSumToOneAndMatchProjections) {
    std::mt19937 rng(99);
    const std::vector<std::string> regs{"q0", "q1", "q2"};
    for (int trial = 0; trial < 50; ++trial) {
        const auto psi = random_state(rng, regs);
        const auto u = random_unitary(rng, 4);
        std::vector<AmpVector> vs;
        for (std::size_t c = 0; c < 4; ++c) vs.push_back({u(0, c), u(1, c), u(2, c), u(3, c)});
        const auto basis = OrthonormalBasis::make(vs);
        const std::vector<std::string> t{regs[trial % 3], regs[(trial + 1) % 3]};
        const auto p = measure_distribution(psi, basis, std::span<const std::string>(t));
        double s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            s += p[k];
            EXPECT_NEAR(project(psi, basis.vector(k), std::span<const std::string>(t)).probability, p[k], 1e-12);
        }
        EXPECT_NEAR(s, 1.0, 1e-10);
    }
}

TEST(Reorder, RoundTrip) {
    std::mt19937 rng(3);
    const auto psi = random_state(rng, {"a", "b", "c"});
    const auto r = reorder(reorder(psi, {"c", "a", "b"}), {"a", "b", "c"});
    EXPECT_LT(max_abs_diff(r, psi), 1e-15);
}
