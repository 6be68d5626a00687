#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "gp/correlations.hpp"
#include "gp/errors.hpp"
#include "gp/identities.hpp"
#include "gp/sampler.hpp"

using namespace gp;

namespace {

const double kPi = std::numbers::pi;

KernelContext context(PsiSequence seq, double argument = kPi / 2) {
    Model m;
    m.sequence = std::move(seq);
    m.z = {1.0, argument};
    return KernelContext(m);
}

PsiSequence beta_column() {
    PsiSequence s;
    s.set(1, {{FactorKind::BetaPlus, 0.5}});
    return s;
}

}  // namespace

TEST_CASE("splittable seeding is deterministic and distinct") {
    CHECK(split_seed(1, 0) == split_seed(1, 0));
    CHECK(split_seed(1, 0) != split_seed(1, 1));
    CHECK(split_seed(1, 0) != split_seed(2, 0));
    std::mt19937_64 e(5);
    for (int i = 0; i < 1000; ++i) {
        double u = uniform01(e);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("conditionals on an empty history and after assignments") {
    KernelContext ctx = context({});
    SamplerState st(ctx, 1);
    CHECK(st.conditional_particle_prob({0, 0}) == doctest::Approx(0.5).epsilon(1e-12));
    st.assign({0, 0}, true);
    double expected = (0.25 - 1.0 / (kPi * kPi)) / 0.5;
    CHECK(st.conditional_particle_prob({0, 1}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::exp(st.log_probability()) == doctest::Approx(0.5));
    CHECK_THROWS_AS(st.conditional_particle_prob({0, 0}), Error);
}

TEST_CASE("forbidden continuations have zero conditional probability") {
    PsiSequence s;
    s.set(1, {{FactorKind::AlphaPlus, 0.3}});
    KernelContext ctx = context(s);
    SamplerState st(ctx, 1);
    st.assign({0, 0}, true);
    st.assign({0, 1}, true);
    // A hole at (1,0) completes the forbidden AlphaTop pattern.
    CHECK(st.conditional_particle_prob({1, 0}) >= 1.0 - 1e-9);
    CHECK_THROWS_AS(st.assign({1, 0}, false), Error);
}

TEST_CASE("product of conditionals reproduces window probabilities") {
    KernelContext ctx = context(beta_column(), 1.1);
    Window w{0, 1, 0, 1};
    WindowDistribution dist = window_distribution(ctx, w);
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
        if (dist.probabilities[mask] < 1e-12) continue;
        Configuration c = Configuration::from_mask(w, mask);
        SamplerState st(ctx, 0);
        for (const Site& s : w.sites()) st.assign(s, c.at(s));
        CHECK(std::abs(std::exp(st.log_probability()) - dist.probabilities[mask]) < 1e-8);
    }
}

TEST_CASE("sampling is deterministic and reports its log-probability") {
    KernelContext ctx = context(beta_column());
    Window w{0, 1, 0, 2};
    SampleResult a = sample_window(ctx, w, 77);
    SampleResult b = sample_window(ctx, w, 77);
    CHECK(a.config == b.config);
    CHECK(a.log_probability == b.log_probability);
    WindowDistribution dist = window_distribution(ctx, w);
    CHECK(std::exp(a.log_probability) == doctest::Approx(dist.probability(a.config)).epsilon(1e-8));

    auto many1 = sample_many(ctx, w, 5, 50, 1);
    auto many2 = sample_many(ctx, w, 5, 50, 3);
    for (std::size_t i = 0; i < 50; ++i) CHECK(many1[i].config == many2[i].config);
}

TEST_CASE("single-site density from samples") {
    KernelContext ctx = context({});
    auto samples = sample_many(ctx, Window{0, 0, 0, 0}, 123, 10000);
    double freq = 0.0;
    for (const auto& s : samples) freq += s.config.at_index(0);
    freq /= samples.size();
    CHECK(std::abs(freq - 0.5) < 0.015);
}

TEST_CASE("empirical frequencies on a 2x3 window") {
    KernelContext ctx = context(beta_column());
    Window w{0, 1, 0, 2};
    WindowDistribution dist = window_distribution(ctx, w);
    const std::size_t n = 10000;
    auto samples = sample_many(ctx, w, 2024, n);
    std::map<std::uint64_t, double> counts;
    for (const auto& s : samples) counts[s.config.mask()] += 1;
    for (std::uint64_t mask = 0; mask < dist.probabilities.size(); ++mask) {
        double p = dist.probabilities[mask];
        if (p < 0.005) {
            if (p < 1e-12) CHECK(counts[mask] == 0);
            continue;
        }
        double sd = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(counts[mask] / n - p) <= 3 * sd);
    }
}

TEST_CASE("factorization audit") {
    PsiSequence s;
    s.set(1, {{FactorKind::BetaPlus, 0.5}});
    s.set(2, {{FactorKind::AlphaPlus, 0.4}});
    s.set(3, {{FactorKind::BetaPlus, 0.8}});
    KernelContext ctx = context(s, 1.3);
    SamplerState fresh(ctx, 3);
    CHECK(fresh.audit_factorization() == 0.0);

    SamplerOptions opts;
    opts.audit_interval = 1000;
    SamplerState st(ctx, 3, opts);
    for (const Site& site : Window{0, 3, 0, 24}.sites()) st.draw(site);
    CHECK(st.visited().size() == 100);
    double dev = st.audit_factorization();
    CHECK((dev < 1e-8 || st.refresh_count() == 1));

    // A near-singular history: the forbidden pattern is approached through
    // conditionals close to 0 and 1. Forcing a refresh must leave all
    // conditionals unchanged.
    SamplerOptions always;
    always.audit_threshold = 0.0;
    always.audit_interval = 1000;
    PsiSequence alpha;
    alpha.set(1, {{FactorKind::AlphaPlus, 0.3}});
    KernelContext actx = context(alpha);
    SamplerState near(actx, 9, always);
    near.assign({0, 0}, true);
    near.assign({0, 1}, true);
    near.assign({1, 0}, true);
    double before = near.conditional_particle_prob({1, 1});
    near.audit_factorization();
    CHECK(near.refresh_count() >= 1);
    CHECK(std::abs(near.conditional_particle_prob({1, 1}) - before) < 1e-12);
}
