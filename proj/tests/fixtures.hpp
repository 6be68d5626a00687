#pragma once

#include <random>
#include <string>
#include <vector>

#include "gp/gibbs.hpp"
#include "gp/presets.hpp"

namespace fixture {

struct GibbsBox {
    std::string name;
    gp::Model model;
    gp::BoxSpec box;
    double temp_tau = 0.0;  // nonzero for geometric-progression presets
};

// Every pair of entrance and exit row subsets, ordered by bitmask. Paths can
// also enter through the ring rows, so the two counts need not agree.
inline std::vector<std::pair<std::vector<long>, std::vector<long>>> boundary_candidates(long lo, long hi) {
    std::vector<std::pair<std::vector<long>, std::vector<long>>> out;
    const long n = hi - lo + 1;
    auto rows_of = [&](long mask) {
        std::vector<long> rows;
        for (long i = 0; i < n; ++i) {
            if ((mask >> i) & 1) rows.push_back(lo + i);
        }
        return rows;
    };
    for (long a = 0; a < (1L << n); ++a) {
        for (long b = 0; b < (1L << n); ++b) out.push_back({rows_of(a), rows_of(b)});
    }
    return out;
}

inline gp::BoxSpec richest_box(const gp::Model& m, gp::Window w) {
    gp::BoxSpec best;
    std::size_t best_count = 0;
    for (const auto& [en, ex] : boundary_candidates(w.row_lo, w.row_hi)) {
        gp::BoxSpec b;
        b.box = w;
        b.entrances = en;
        b.exits = ex;
        std::size_t n = gp::enumerate_box(b, m).size();
        if (n > best_count) {
            best = b;
            best_count = n;
        }
    }
    return best;
}

inline const char* short_name(gp::FactorKind k) {
    switch (k) {
        case gp::FactorKind::AlphaPlus: return "a+";
        case gp::FactorKind::AlphaMinus: return "a-";
        case gp::FactorKind::BetaPlus: return "b+";
        case gp::FactorKind::BetaMinus: return "b-";
        default: return "?";
    }
}

// Sixteen random boxes, one per ordered pair of alpha/beta kinds, plus four
// boxes on the geometric-progression presets.
inline std::vector<GibbsBox> gibbs_boxes(std::uint64_t seed = 20240611) {
    using gp::FactorKind;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> param(0.2, 1.6);
    std::uniform_real_distribution<double> arg(0.4, 2.7);
    const FactorKind kinds[] = {FactorKind::BetaPlus, FactorKind::BetaMinus, FactorKind::AlphaPlus,
                                FactorKind::AlphaMinus};
    std::vector<GibbsBox> out;
    for (FactorKind k1 : kinds) {
        for (FactorKind k2 : kinds) {
            GibbsBox g;
            g.model.z = {1.0, arg(rng)};
            g.model.sequence.set(1, {{k1, param(rng)}});
            g.model.sequence.set(2, {{k2, param(rng)}});
            g.model.sequence.set(3, {{k1, param(rng)}});
            g.box = richest_box(g.model, {1, 2, 0, 2});
            g.name = std::string(short_name(k1)) + "/" + short_name(k2);
            out.push_back(std::move(g));
        }
    }
    auto preset = [&](gp::PresetName name, double tau, int k_lo, gp::Window w) {
        gp::PresetSpec s;
        s.name = name;
        s.temp_tau = tau;
        s.z = {1.0, 1.1};
        GibbsBox g;
        g.model = gp::instantiate_preset(s, k_lo, k_lo + w.num_cols() + 1);
        g.box = richest_box(g.model, w);
        g.name = std::string(gp::preset_name(name)) + " preset t=" + std::to_string(tau);
        g.temp_tau = tau;
        out.push_back(std::move(g));
    };
    preset(gp::PresetName::Beta, 0.5, 0, {0, 1, 0, 2});
    preset(gp::PresetName::Beta, 0.3, -1, {-1, 1, 0, 2});
    preset(gp::PresetName::AlphaBeta, 0.4, 0, {0, 1, 0, 2});
    preset(gp::PresetName::AlphaBeta, 0.25, 1, {1, 3, 0, 1});
    return out;
}

}  // namespace fixture
