#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ewfs/empirical.hpp"

using namespace ewfs;

namespace {

// Uniform distribution on each support: the possibilistic model read back as tables.
EmpiricalModel uniform_on_support(const PossibilisticModel& pm) {
    EmpiricalModel m{pm.spec, {}};
    for (const auto& s : pm.supports) {
        const double n = static_cast<double>(std::count(s.begin(), s.end(), true));
        std::vector<double> t;
        for (bool b : s) t.push_back(b ? 1.0 / n : 0.0);
        m.tables.push_back(t);
    }
    return m;
}

const std::map<std::string, std::string> kGhzFrNames{{"U", "X_A"}, {"V", "X_B"}, {"W", "X_C"},
                                                     {"A", "Y_A"}, {"B", "Y_B"}, {"C", "Y_C"}};

}  // namespace

TEST(Tables, HardyMatchesReference) {
    const auto pm = possibilistic(hardy_model());
    EXPECT_TRUE(same_supports(pm, canonical_hardy()));
    EXPECT_EQ(pm.supports, canonical_hardy().supports);
}

TEST(Tables, FrProtocolMatchesHardy) {
    const auto fr = fr_protocol();
    const auto pm = possibilistic(model_from_protocol(fr, fr.contexts()));
    EXPECT_TRUE(same_supports(pm, canonical_hardy()));
}

TEST(Tables, GhzMatchesReference) {
    EXPECT_TRUE(same_supports(possibilistic(ghz_model()), canonical_ghz_mermin()));
}

TEST(Tables, GhzFrRenamedMatchesMermin) {
    const auto g = ghz_fr_protocol();
    const auto pm = possibilistic(model_from_protocol(g, g.contexts()));
    EXPECT_FALSE(same_supports(pm, canonical_ghz_mermin()));
    EXPECT_TRUE(same_supports(rename(pm, kGhzFrNames), canonical_ghz_mermin()));
}

TEST(Tables, GhzFrEachNonzeroEntryIsOneQuarter) {
    const auto g = ghz_fr_protocol();
    const auto m = model_from_protocol(g, g.contexts());
    for (const auto& t : m.tables)
        for (double p : t) EXPECT_TRUE(std::abs(p) < 1e-12 || std::abs(p - 0.25) < 1e-12) << p;
}

TEST(Tables, SupportsDoNotDependOnThresholdNearZero) {
    const auto m = hardy_model();
    EXPECT_EQ(possibilistic(m, 1e-12).supports, possibilistic(m, 1e-6).supports);
}

TEST(Tables, SingleMeasurementContext) {
    const auto g = ghz_fr_protocol();
    const auto m = model_from_protocol(g, {{"U"}});
    EXPECT_NEAR(m.tables[0][0], 0.5, 1e-12);
    EXPECT_NEAR(m.tables[0][1], 0.5, 1e-12);
    // FR: P(u = ok) is the row sum of the (U, W) table.
    const auto fr = fr_protocol();
    const auto u = model_from_protocol(fr, {{"U"}});
    const auto uw = model_from_protocol(fr, {{"U", "W"}});
    EXPECT_NEAR(u.tables[0][0], uw.tables[0][0] + uw.tables[0][1], 1e-12);
    EXPECT_NEAR(u.tables[0][0], 1.0 / 6.0, 1e-12);
}

TEST(Tables, InvalidContextRejected) {
    EXPECT_THROW(model_from_protocol(ghz_fr_protocol(), {{"B", "V"}}), error);
}

TEST(Tables, ProductModelFactorizes) {
    const auto m = product_model();
    for (std::size_t c = 0; c < m.spec.contexts.size(); ++c) {
        const auto& vars = m.spec.contexts[c];
        const auto pa = table_marginal(m.spec, c, m.tables[c], {vars[0]});
        const auto pb = table_marginal(m.spec, c, m.tables[c], {vars[1]});
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) EXPECT_NEAR(m.tables[c][m.spec.entry({a, b})], pa[a] * pb[b], 1e-12);
    }
}

TEST(NoSignalling, SimulatedModelsSatisfyIt) {
    for (const auto& m : {hardy_model(), ghz_model(), chsh_model(), product_model()})
        EXPECT_TRUE(check_no_signalling(m).ok(1e-12));
    const auto g = ghz_fr_protocol();
    EXPECT_TRUE(check_no_signalling(model_from_protocol(g, g.contexts())).ok(1e-12));
}

TEST(NoSignalling, HandBuiltViolationDetected) {
    EmpiricalModel m;
    m.spec = {{"A", "B", "C"}, 2, {{"A", "B"}, {"A", "C"}}};
    m.tables = {{0.5, 0.0, 0.0, 0.5}, {1.0, 0.0, 0.0, 0.0}};
    m.validate();
    const auto r = check_no_signalling(m);
    EXPECT_NEAR(r.max_deviation, 0.5, 1e-15);
    EXPECT_EQ(r.context_a, 0U);
    EXPECT_EQ(r.context_b, 1U);
    EXPECT_FALSE(r.ok(1e-9));
}

TEST(Possibilistic, IdempotentOnSupports) {
    for (const auto& pm : {canonical_hardy(), canonical_ghz_mermin()})
        EXPECT_EQ(possibilistic(uniform_on_support(pm)), pm);
}

TEST(Possibilistic, MonotoneInThreshold) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    EmpiricalModel m;
    m.spec = {{"A", "B"}, 2, {{"A", "B"}}};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> t(4);
        double s = 0.0;
        for (auto& x : t) s += (x = u(rng) * u(rng));
        for (auto& x : t) x /= s;
        m.tables = {t};
        const double lo = u(rng) * 0.3, hi = lo + u(rng) * 0.3;
        const auto a = possibilistic(m, lo), b = possibilistic(m, hi);
        for (std::size_t i = 0; i < 4; ++i) EXPECT_TRUE(!b.supports[0][i] || a.supports[0][i]);
    }
}

TEST(ModelValidation, Rejected) {
    EmpiricalModel m;
    m.spec = {{"A", "B"}, 2, {{"A", "B"}}};
    m.tables = {{0.5, 0.5, 0.5, 0.0}};
    EXPECT_THROW(m.validate(), error);
    m.tables = {{0.5, 0.5}};
    EXPECT_THROW(m.validate(), error);
    m.spec.contexts = {{"A", "B"}, {"A"}};
    EXPECT_THROW(m.spec.validate(), error);
    m.spec = {{"A", "A"}, 2, {{"A"}}};
    EXPECT_THROW(m.spec.validate(), error);
    m.spec = {{"A", "B"}, 2, {{"A"}}};
    EXPECT_THROW(m.spec.validate(), error);
    PossibilisticModel pm{{{"A"}, 2, {{"A"}}}, {{false, false}}};
    EXPECT_THROW(pm.validate(), error);
}

TEST(Json, EmpiricalRoundTripIsExact) {
    for (const auto& m : {hardy_model(), ghz_model(), chsh_model()}) {
        const auto back = empirical_from_json(nlohmann::json::parse(to_json(m).dump()));
        EXPECT_EQ(back.spec, m.spec);
        EXPECT_EQ(back.tables, m.tables);
    }
}

TEST(Json, PossibilisticRoundTrip) {
    for (const auto& pm : {canonical_hardy(), canonical_ghz_mermin()})
        EXPECT_EQ(possibilistic_from_json(nlohmann::json::parse(to_json(pm).dump())), pm);
}

TEST(Json, CellsKeyedBySection) {
    const auto j = to_json(canonical_hardy());
    EXPECT_EQ(j["rows"][0]["cells"]["0,1"], 0);
    EXPECT_EQ(j["rows"][0]["cells"]["1,1"], 1);
    EXPECT_THROW(possibilistic_from_json(nlohmann::json::parse(R"({"spec": {"measurements": ["A"]}})")), std::exception);
}
