#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ewfs/contextuality.hpp"

using namespace ewfs;

namespace {

// PR box: a xor b = x and y.
EmpiricalModel pr_box() {
    EmpiricalModel m;
    m.spec = {{"A0", "A1", "B0", "B1"}, 2, {{"A0", "B0"}, {"A0", "B1"}, {"A1", "B0"}, {"A1", "B1"}}};
    m.tables = {{0.5, 0, 0, 0.5}, {0.5, 0, 0, 0.5}, {0.5, 0, 0, 0.5}, {0, 0.5, 0.5, 0}};
    return m;
}

// Largest |S| over the four CHSH sign patterns. Any noncontextual model has
// every |S| <= 2.
double chsh_value(const EmpiricalModel& m) {
    std::vector<double> e;
    for (const auto& t : m.tables) e.push_back(t[0] - t[1] - t[2] + t[3]);
    double best = 0.0;
    for (std::size_t neg = 0; neg < 4; ++neg) {
        double s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) s += k == neg ? -e[k] : e[k];
        best = std::max(best, std::abs(s));
    }
    return best;
}

// Reverses the measurement list, reverses each context's variable order and
// optionally flips the outcomes of one measurement.
EmpiricalModel shuffled(const EmpiricalModel& m, const std::string& flip) {
    EmpiricalModel out;
    out.spec = m.spec;
    std::reverse(out.spec.measurements.begin(), out.spec.measurements.end());
    std::reverse(out.spec.contexts.begin(), out.spec.contexts.end());
    for (auto& c : out.spec.contexts) std::reverse(c.begin(), c.end());
    for (std::size_t c = 0; c < out.spec.contexts.size(); ++c) {
        const std::size_t src = m.spec.contexts.size() - 1 - c;
        std::vector<double> t(m.tables[src].size());
        for (std::size_t idx = 0; idx < t.size(); ++idx) {
            auto s = m.spec.section(src, idx);
            for (std::size_t i = 0; i < s.size(); ++i)
                if (m.spec.contexts[src][i] == flip) s[i] ^= 1;
            std::reverse(s.begin(), s.end());
            t[out.spec.entry(s)] = m.tables[src][idx];
        }
        out.tables.push_back(t);
    }
    out.validate();
    return out;
}

EmpiricalModel random_product_model(std::mt19937& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    auto basis = [&] {
        const double t = angle(rng) / 2.0, ph = angle(rng);
        const Amp a = std::cos(t), b = std::polar(std::sin(t), ph);
        return OrthonormalBasis::make({{a, b}, {-std::conj(b), std::conj(a)}});
    };
    auto qubit = [&] {
        const double t = angle(rng) / 2.0, ph = angle(rng);
        return AmpVector{std::cos(t), std::polar(std::sin(t), ph)};
    };
    const auto a = qubit(), b = qubit();
    const BellScenario bell{{BellParty{"A", "Alice", "U", "Ursula", "A0", "A1", basis(), basis()},
                             BellParty{"B", "Bob", "W", "Wigner", "B0", "B1", basis(), basis()}},
                            make_state({"S_A", "S_B"}, {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]}),
                            {}};
    return model_from_bell(bell);
}

}  // namespace

TEST(Hierarchy, NamedModels) {
    EXPECT_EQ(classify(hardy_model()), HierarchyLevel::Logical);
    EXPECT_EQ(classify(ghz_model()), HierarchyLevel::Strong);
    EXPECT_EQ(classify(chsh_model()), HierarchyLevel::Probabilistic);
    EXPECT_EQ(classify(product_model()), HierarchyLevel::Noncontextual);
    EXPECT_EQ(classify(pr_box()), HierarchyLevel::Strong);
    EXPECT_EQ(to_string(HierarchyLevel::Logical), "LOGICAL");
}

TEST(Hierarchy, SimulatedProtocolModels) {
    const auto g = ghz_fr_protocol();
    EXPECT_EQ(classify(model_from_protocol(g, g.contexts())), HierarchyLevel::Strong);
    const auto fr = fr_protocol();
    EXPECT_EQ(classify(model_from_protocol(fr, fr.contexts())), HierarchyLevel::Logical);
}

TEST(Possibilistic, HardyGlobalsAndWitness) {
    const auto pm = canonical_hardy();
    const auto globals = consistent_globals(pm);
    EXPECT_FALSE(globals.empty());
    EXPECT_NE(std::find(globals.begin(), globals.end(), GlobalAssignment{{1, 1, 1, 1}}), globals.end());
    // No consistent global has u = w = ok.
    for (const auto& g : globals) EXPECT_FALSE(g.at(pm.spec, "U") == 0 && g.at(pm.spec, "W") == 0);
    const auto w = is_logically_contextual(pm);
    ASSERT_TRUE(w.contextual);
    EXPECT_EQ(pm.spec.contexts[w.context], (Context{"U", "W"}));
    EXPECT_EQ(w.section, (std::vector<int>{0, 0}));
}

TEST(Possibilistic, GhzHasNoConsistentGlobal) {
    const auto r = classify_report(ghz_model());
    EXPECT_EQ(r.global_count, 64U);
    EXPECT_EQ(r.consistent_global_count, 0U);
    EXPECT_TRUE(is_strongly_contextual(canonical_ghz_mermin()));
    EXPECT_FALSE(r.lp.has_value());
}

TEST(Possibilistic, ConsistentGlobalsMatchBruteForceOracle) {
    const auto pm = canonical_hardy();
    std::size_t count = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int u = 0; u < 2; ++u)
                for (int w = 0; w < 2; ++w)
                    count += pm.possible(0, {a, b}) && pm.possible(1, {a, w}) && pm.possible(2, {u, b}) &&
                             pm.possible(3, {u, w});
    EXPECT_EQ(consistent_globals(pm).size(), count);
}

TEST(Probabilistic, MixtureReproducesTablesExactly) {
    for (const auto& m : {product_model(), hardy_model(), model_from_bell(product_bell())}) {
        const auto v = is_probabilistically_contextual(m);
        if (v.contextual) continue;
        ASSERT_TRUE(v.exact);
        Rational total = 0;
        for (const auto& [g, wgt] : v.mixture) {
            EXPECT_GT(wgt, 0);
            total += wgt;
        }
        EXPECT_EQ(total, 1);
        for (std::size_t c = 0; c < m.spec.contexts.size(); ++c)
            for (std::size_t idx = 0; idx < m.tables[c].size(); ++idx) {
                Rational mass = 0;
                for (const auto& [g, wgt] : v.mixture)
                    if (m.spec.entry(g.restrict_to(m.spec, c)) == idx) mass += wgt;
                EXPECT_EQ(mass, *snap(m.tables[c][idx]));
            }
    }
}

TEST(Probabilistic, HardyIsContextualByLp) {
    EXPECT_TRUE(is_probabilistically_contextual(hardy_model()).contextual);
    EXPECT_TRUE(classify_report(hardy_model(), kPossibilisticEps, true).lp->contextual);
}

TEST(Probabilistic, ChshAgreesWithBellInequality) {
    const auto m = chsh_model();
    EXPECT_NEAR(chsh_value(m), 2.0 * std::sqrt(2.0), 1e-12);
    EXPECT_TRUE(is_probabilistically_contextual(m).contextual);
    EXPECT_LE(chsh_value(product_model()), 2.0 + 1e-12);
}

TEST(Probabilistic, DeterministicModelIsNoncontextual) {
    EmpiricalModel m;
    m.spec = {{"A", "B", "C"}, 2, {{"A", "B"}, {"B", "C"}}};
    m.tables = {{0, 1, 0, 0}, {0, 0, 1, 0}};
    const auto v = is_probabilistically_contextual(m);
    EXPECT_FALSE(v.contextual);
    ASSERT_EQ(v.mixture.size(), 1U);
    EXPECT_EQ(v.mixture[0].first.values, (std::vector<int>{0, 1, 0}));
}

TEST(Invariance, RelabellingKeepsLevel) {
    for (const auto& m : {hardy_model(), ghz_model(), chsh_model(), product_model(), pr_box()}) {
        const auto level = classify(m);
        EXPECT_EQ(classify(shuffled(m, "")), level);
        EXPECT_EQ(classify(shuffled(m, m.spec.measurements[0])), level);
    }
}

TEST(Invariance, RandomSeparableStatesAreNoncontextual) {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_product_model(rng);
        EXPECT_EQ(classify(m), HierarchyLevel::Noncontextual) << "trial " << trial;
        EXPECT_LE(chsh_value(m), 2.0 + 1e-9);
    }
}

TEST(Limits, OversizedScenariosRejected) {
    EmpiricalModel m;
    for (int i = 0; i < 13; ++i) m.spec.measurements.push_back("M" + std::to_string(i));
    m.spec.contexts = {{m.spec.measurements.begin(), m.spec.measurements.begin() + 7},
                       {m.spec.measurements.begin() + 6, m.spec.measurements.end()}};
    m.tables = {std::vector<double>(128, 1.0 / 128), std::vector<double>(128, 1.0 / 128)};
    EXPECT_THROW(is_probabilistically_contextual(m), error);

    PossibilisticModel pm;
    for (int i = 0; i < 25; ++i) pm.spec.measurements.push_back("M" + std::to_string(i));
    for (int i = 0; i < 25; ++i) pm.spec.contexts.push_back({pm.spec.measurements[static_cast<std::size_t>(i)]});
    pm.supports.assign(25, {true, true});
    EXPECT_THROW(consistent_globals(pm), error);
}
