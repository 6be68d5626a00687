#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gp/errors.hpp"
#include "gp/kernel.hpp"
#include "oracles.hpp"

using namespace gp;

namespace {

const double kPi = std::numbers::pi;

Model make_model(PsiSequence seq, double modulus = 1.0, double argument = kPi / 2) {
    Model m;
    m.sequence = std::move(seq);
    m.z = SpectralParameter{modulus, argument};
    return m;
}

PsiSequence single(int k, FactorKind kind, double p) {
    PsiSequence s;
    s.set(k, {{kind, p}});
    return s;
}

}  // namespace

TEST_CASE("eval_psi on simple factor lists") {
    CHECK(eval_psi({}, cplx(2.0, 0.0)) == cplx(1.0));
    std::vector<PsiFactor> beta{{FactorKind::BetaPlus, 0.5}};
    CHECK(std::abs(eval_psi(beta, 1.0) - 1.5) < 1e-15);
    std::vector<PsiFactor> alpha{{FactorKind::AlphaPlus, 0.5}};
    CHECK(std::abs(eval_psi(alpha, 1.0) - 2.0) < 1e-15);
    std::vector<PsiFactor> mixed{{FactorKind::AlphaMinus, 0.3}, {FactorKind::GammaPlus, 0.2},
                                 {FactorKind::BetaMinus, 0.7}, {FactorKind::GammaMinus, 0.4}};
    cplx u(0.3, 0.8);
    cplx expected = 1.0 / (1.0 - 0.3 / u) * std::exp(0.2 * u) * (1.0 + 0.7 / u) * std::exp(0.4 / u);
    CHECK(std::abs(eval_psi(mixed, u) - expected) < 1e-14);
    CHECK(std::abs(eval_psi(mixed, u) * eval_psi_inverse(mixed, u) - 1.0) < 1e-14);
    CHECK_THROWS_AS(eval_psi(alpha, 2.0), Error);
    CHECK_THROWS_AS(eval_psi(beta, 0.0), Error);
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
    const GaussRule& r = gauss_legendre(16);
    double s0 = 0, s30 = 0, s31 = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        s0 += r.weights[i];
        s30 += r.weights[i] * std::pow(r.nodes[i], 30);
        s31 += r.weights[i] * std::pow(r.nodes[i], 31);
    }
    CHECK(s0 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s30 == doctest::Approx(2.0 / 31.0).epsilon(1e-14));
    CHECK(std::abs(s31) < 1e-15);
}

TEST_CASE("adaptive quadrature reports divergence") {
    QuadratureSpec q;
    q.max_panels = 2;
    auto f = [](double t) { return cplx(std::sqrt(std::abs(t)), 0.0); };
    CHECK_THROWS_AS(integrate_adaptive(f, -1.0, 1.0, q), Error);
    q.max_panels = 4096;
    q.abs_tol = 1e-10;
    auto r = integrate_adaptive(f, -1.0, 1.0, q);
    CHECK(std::abs(r.value.real() - 4.0 / 3.0) < 1e-9);
}

TEST_CASE("equal-time kernel is the discrete sine kernel") {
    KernelContext ctx(make_model({}));
    CHECK(std::abs(ctx.eval(0, 5, 0, 5) - 0.5) < 1e-12);
    CHECK(std::abs(ctx.eval(3, 1, 3, 0) - 1.0 / kPi) < 1e-12);
    CHECK(std::abs(ctx.eval(3, 2, 3, 0)) < 1e-12);
    CHECK(std::abs(ctx.eval(0, 3, 0, 0) + 1.0 / (3 * kPi)) < 1e-12);

    CHECK(equal_time_closed_form({1.0, kPi / 2}, 0).real() == doctest::Approx(0.5));
    CHECK(equal_time_closed_form({1.0, kPi / 3}, 0).real() == doctest::Approx(1.0 / 3.0));
    CHECK(equal_time_closed_form({1.0, kPi / 2}, 3).real() ==
          doctest::Approx(-1.0 / (3 * kPi)).epsilon(1e-14));
    CHECK(equal_time_closed_form({2.0, kPi / 2}, 1, true).real() ==
          doctest::Approx(0.5 / kPi).epsilon(1e-14));

    for (double phi : {0.3, 1.0, 2.0, 2.9}) {
        KernelContext c(make_model({}, 1.7, phi));
        for (long d = -20; d <= 20; ++d) {
            CHECK(std::abs(c.eval(1, d, 1, 0) - equal_time_closed_form(c.model().z, d)) < 2e-12);
        }
    }
}

TEST_CASE("BetaPlus kernel matches the closed-form antiderivative") {
    // Log u - Log(1 + beta u) between e^{-i phi} and e^{i phi}.
    KernelContext ctx(make_model(single(1, FactorKind::BetaPlus, 0.5)));
    double expected = 0.5 - std::atan(0.5) / kPi;
    CHECK(std::abs(ctx.eval(0, 4, 1, 4) - expected) < 1e-12);
    CHECK(std::abs(ctx.eval(0, 4, 1, 4).real() - 0.3524164) < 1e-7);
}

TEST_CASE("series oracle agrees with quadrature on canonical models") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> par(0.05, 0.9), arg(0.1 * kPi, 0.9 * kPi);
    const FactorKind kinds[] = {FactorKind::AlphaPlus, FactorKind::AlphaMinus, FactorKind::BetaPlus,
                                FactorKind::BetaMinus, FactorKind::GammaPlus, FactorKind::GammaMinus};
    for (int trial = 0; trial < 12; ++trial) {
        PsiSequence seq;
        for (int k = 1; k <= 3; ++k) seq.set(k, {{kinds[rng() % 6], par(rng)}});
        double phi = arg(rng);
        KernelContext ctx(make_model(seq, 1.0, phi));
        for (int s = 0; s <= 3; ++s) {
            for (int t = 0; t <= 3; ++t) {
                for (long d : {-3L, -1L, 0L, 1L, 2L, 5L}) {
                    double ref = oracle::series_kernel(seq, phi, s, t, d);
                    CHECK(std::abs(ctx.eval(s, d, t, 0) - ref) < 1e-11);
                }
            }
        }
    }
}

TEST_CASE("kernel is translation invariant in the row direction") {
    PsiSequence seq;
    seq.set(1, {{FactorKind::AlphaPlus, 0.4}});
    seq.set(2, {{FactorKind::BetaMinus, 1.7}});
    KernelContext ctx(make_model(seq, 0.8, 1.1));
    for (long c : {-7L, 3L, 11L}) {
        CHECK(std::abs(ctx.eval(0, 2, 2, -1) - ctx.eval(0, 2 + c, 2, -1 + c)) < 2e-12);
        CHECK(std::abs(ctx.eval(2, 0, 1, 1) - ctx.eval(2, c, 1, 1 + c)) < 2e-12);
    }
}

TEST_CASE("halving abs_tol moves values by less than the previous tolerance") {
    PsiSequence seq;
    seq.set(1, {{FactorKind::BetaPlus, 0.8}, {FactorKind::AlphaPlus, 0.7}});
    seq.set(2, {{FactorKind::AlphaMinus, 0.9}});
    Model coarse = make_model(seq, 1.0, 0.7);
    coarse.quadrature.abs_tol = 1e-8;
    Model fine = coarse;
    fine.quadrature.abs_tol = 5e-9;
    KernelContext a(coarse), b(fine);
    for (int s = 0; s <= 2; ++s) {
        for (int t = 0; t <= 2; ++t) {
            for (long d = -4; d <= 4; ++d) {
                CHECK(std::abs(a.eval(s, d, t, 0) - b.eval(s, d, t, 0)) <= 1e-8);
            }
        }
    }
}

TEST_CASE("canonicalization swaps parameters above one and records shifts") {
    SpectralParameter i{1.0, kPi / 2};
    CanonicalForm id = canonicalize(single(1, FactorKind::BetaPlus, 0.5), i);
    CHECK(id.sequence == single(1, FactorKind::BetaPlus, 0.5));
    CHECK(id.shift(5) == 0);

    CanonicalForm am = canonicalize(single(1, FactorKind::AlphaMinus, 2.0), i);
    CHECK(am.sequence == single(1, FactorKind::AlphaPlus, 0.5));
    CHECK(am.shift(0) == 0);
    CHECK(am.shift(1) == 1);
    CHECK(am.shift(9) == 1);
    CHECK(am.conjugation_sign(1) == -1);
    CHECK(am.conjugation_log(1) == doctest::Approx(std::log(0.5)));

    CanonicalForm bm = canonicalize(single(1, FactorKind::BetaMinus, 2.0), i);
    CHECK(bm.sequence == single(1, FactorKind::BetaPlus, 0.5));
    CHECK(bm.shift(1) == -1);

    CanonicalForm keep = canonicalize(single(1, FactorKind::AlphaMinus, 0.5), i);
    CHECK(keep.sequence == single(1, FactorKind::AlphaMinus, 0.5));

    CanonicalForm scaled = canonicalize(single(0, FactorKind::BetaPlus, 0.5), {4.0, 1.0});
    CHECK(scaled.sequence == single(0, FactorKind::BetaMinus, 0.5));
    CHECK(scaled.radial_scale == 4.0);
    CHECK(scaled.z.modulus == 1.0);

    CHECK_THROWS_AS(canonicalize(single(0, FactorKind::BetaPlus, -1.0), i), Error);
    CHECK_THROWS_AS(canonicalize({}, {1.0, 0.0}), Error);
}

TEST_CASE("canonical and direct evaluation agree on models with large parameters") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> par(0.2, 4.0), mod(0.5, 2.0), arg(0.15 * kPi, 0.85 * kPi);
    const FactorKind kinds[] = {FactorKind::AlphaPlus, FactorKind::AlphaMinus, FactorKind::BetaPlus,
                                FactorKind::BetaMinus};
    for (int trial = 0; trial < 10; ++trial) {
        PsiSequence seq;
        for (int k = 1; k <= 3; ++k) seq.set(k, {{kinds[rng() % 4], par(rng)}});
        Model m = make_model(seq, mod(rng), arg(rng));
        KernelContext canon(m), direct(m, EvaluationMode::Direct);
        PsiSequence eff = canon.effective_sequence();
        for (int s = 0; s <= 3; ++s) {
            for (int t = 0; t <= 3; ++t) {
                for (long d : {-2L, 0L, 1L, 3L}) {
                    cplx a = canon.eval(s, d, t, 0), b = direct.eval(s, d, t, 0);
                    double scale = std::max(1.0, std::abs(a));
                    CHECK(std::abs(a - b) < 1e-10 * scale);
                    bool near_one = false;
                    for (const auto& [k, fs] : eff.columns()) {
                        for (const auto& f : fs) near_one |= std::abs(f.param - 1.0) < 0.05;
                    }
                    if (!near_one) {
                        CHECK(std::abs(a - oracle::series_kernel(eff, m.z.argument, s, t, d)) <
                              1e-9 * scale);
                    }
                }
            }
        }
    }
}

TEST_CASE("parameter equal to one is a regular case") {
    KernelContext ctx(make_model(single(1, FactorKind::AlphaPlus, 1.0)));
    // (1 - u) on the arc through +1: K_{0,1}(0) = phi/pi - sin(phi)/pi.
    CHECK(std::abs(ctx.eval(0, 0, 1, 0) - (0.5 - 1.0 / kPi)) < 1e-12);
}

TEST_CASE("model JSON round trip") {
    PsiSequence seq;
    seq.set(-1, {{FactorKind::GammaMinus, 0.25}});
    seq.set(2, {{FactorKind::AlphaPlus, 0.5}, {FactorKind::BetaMinus, 1.5}});
    Model m = make_model(seq, 1.25, 0.75);
    m.quadrature.abs_tol = 1e-11;
    Model back = parse_model(model_to_json(m));
    CHECK(back == m);
    CHECK_THROWS_AS(parse_model("{\"z\": {}}"), Error);
    CHECK_THROWS_AS(parse_model("not json"), Error);
}
