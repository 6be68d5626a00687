#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gp/correlations.hpp"
#include "gp/errors.hpp"
#include "oracles.hpp"

using namespace gp;

namespace {

const double kPi = std::numbers::pi;

KernelContext context(PsiSequence seq, double argument = kPi / 2, double modulus = 1.0) {
    Model m;
    m.sequence = std::move(seq);
    m.z = {modulus, argument};
    return KernelContext(m);
}

PsiSequence random_sequence(std::mt19937_64& rng, int k_lo, int k_hi) {
    const FactorKind kinds[] = {FactorKind::AlphaPlus, FactorKind::AlphaMinus, FactorKind::BetaPlus,
                                FactorKind::BetaMinus};
    std::uniform_real_distribution<double> par(0.1, 2.5);
    PsiSequence seq;
    for (int k = k_lo; k <= k_hi; ++k) seq.set(k, {{kinds[rng() % 4], par(rng)}});
    return seq;
}

}  // namespace

TEST_CASE("single-site events") {
    KernelContext ctx = context({});
    EventMatrix p = build_event_matrix(ctx, {{{0, 5}}, {}});
    CHECK(p.matrix.size() == 1);
    CHECK(std::abs(p.matrix(0, 0) - 0.5) < 1e-12);
    CHECK(p.sign == 1);
    EventMatrix h = build_event_matrix(ctx, {{}, {{0, 5}}});
    CHECK(std::abs(h.matrix(0, 0) + 0.5) < 1e-12);
    CHECK(h.sign == -1);
    CHECK(event_probability(ctx, {{}, {{0, 5}}}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(event_probability(ctx, {}) == 1.0);
}

TEST_CASE("two-particle events on the sine kernel") {
    KernelContext ctx = context({});
    EventMatrix m = build_event_matrix(ctx, {{{0, 1}, {0, 0}}, {}});
    CHECK(m.sites[0] == Site{0, 0});
    CHECK(std::abs(m.matrix(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(m.matrix(0, 1) - 1.0 / kPi) < 1e-12);
    CHECK(std::abs(m.matrix(1, 0) - 1.0 / kPi) < 1e-12);
    double expected = 0.25 - 1.0 / (kPi * kPi);
    CHECK(event_probability(ctx, {{{0, 0}, {0, 1}}, {}}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(event_probability(ctx, {{{0, 0}, {0, 2}}, {}}) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("mixed events agree with a cofactor-expansion determinant") {
    PsiSequence seq;
    seq.set(1, {{FactorKind::BetaPlus, 0.5}});
    seq.set(2, {{FactorKind::AlphaPlus, 0.3}});
    KernelContext ctx = context(seq, 1.2);
    std::vector<Site> sites{{0, 0}, {1, 1}, {2, -1}, {2, 2}};
    std::vector<bool> hole{false, true, false, true};
    std::vector<std::vector<double>> m(4, std::vector<double>(4));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            m[i][j] = ctx.eval(sites[i].col, sites[i].row, sites[j].col, sites[j].row).real();
        }
        if (hole[i]) m[i][i] -= 1.0;
    }
    double expected = oracle::small_det(m);  // two holes: sign +1
    EventSpec ev{{{2, -1}, {0, 0}}, {{2, 2}, {1, 1}}};
    CHECK(event_determinant(ctx, ev) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("invalid events are rejected") {
    KernelContext ctx = context({});
    CHECK_THROWS_AS(event_probability(ctx, {{{0, 0}}, {{0, 0}}}), Error);
    CHECK_THROWS_AS(event_probability(ctx, {{{0, 0}, {0, 0}}, {}}), Error);
    CHECK_THROWS_AS(window_distribution(ctx, Window{0, 4, 0, 4}), Error);
}

TEST_CASE("window distributions on small windows") {
    KernelContext ctx = context({});
    WindowDistribution one = window_distribution(ctx, Window{0, 0, 0, 0});
    CHECK(one.probabilities[0] == doctest::Approx(0.5));
    CHECK(one.probabilities[1] == doctest::Approx(0.5));
    WindowDistribution two = window_distribution(ctx, Window{0, 0, 0, 1});
    CHECK(std::abs(two.total - 1.0) < 1e-8);

    PsiSequence seq;
    seq.set(1, {{FactorKind::BetaPlus, 0.5}});
    KernelContext b = context(seq);
    WindowDistribution sq = window_distribution(b, Window{0, 1, 0, 1});
    CHECK(sq.probabilities.size() == 16);
    CHECK(sq.min >= -1e-9);
    CHECK(std::abs(sq.total - 1.0) < 1e-8);
}

TEST_CASE("normalization, nonnegativity, complement and marginalization on random models") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> arg(0.15 * kPi, 0.85 * kPi), mod(0.6, 1.6);
    for (int trial = 0; trial < 6; ++trial) {
        KernelContext ctx = context(random_sequence(rng, 1, 2), arg(rng), mod(rng));
        Window w{0, 2, 0, 2};
        WindowDistribution full = window_distribution(ctx, w);
        CHECK(full.min >= -1e-9);
        CHECK(std::abs(full.total - 1.0) < 1e-8);

        Window reduced{0, 2, 0, 1};
        WindowDistribution red = window_distribution(ctx, reduced);
        for (std::uint64_t mask = 0; mask < red.probabilities.size(); ++mask) {
            Configuration small = Configuration::from_mask(reduced, mask);
            double sum = 0.0;
            for (int top = 0; top < 8; ++top) {
                Configuration big(w);
                for (const Site& s : reduced.sites()) big.set(s, small.at(s));
                for (int c = 0; c < 3; ++c) big.set({c, 2}, (top >> c) & 1);
                sum += full.probability(big);
            }
            CHECK(std::abs(sum - red.probabilities[mask]) < 1e-9);
        }

        Site t{1, 7};
        double p = event_determinant(ctx, {{t}, {}});
        double q = event_determinant(ctx, {{}, {t}});
        CHECK(std::abs(p + q - 1.0) < 1e-15);
    }
}

TEST_CASE("site list parsing") {
    auto sites = parse_sites("(0,0), (-1, 3),(2,-4)");
    REQUIRE(sites.size() == 3);
    CHECK(sites[1] == Site{-1, 3});
    CHECK(parse_sites("").empty());
    CHECK_THROWS_AS(parse_sites("(0,0),garbage"), Error);
    CHECK(parse_range("-3:4") == std::pair<long, long>{-3, 4});
    CHECK(parse_range("5") == std::pair<long, long>{5, 5});
    CHECK_THROWS_AS(parse_range("4:1"), Error);
    CHECK_THROWS_AS(parse_range("a:b"), Error);
}
