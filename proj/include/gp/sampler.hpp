#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "gp/kernel.hpp"
#include "gp/lattice.hpp"

namespace gp {

struct SamplerOptions {
    std::size_t audit_interval = 64;
    double audit_threshold = 1e-8;
    std::size_t max_sites = 4096;
};

// 64-bit seed for sample number `index` of a run started with `seed`.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

// Uniform double in [0, 1) from the top 53 bits of one engine output.
double uniform01(std::mt19937_64& engine);

// Chain-rule sampler over a growing set of visited sites. The complemented
// matrix of the visited assignment is kept as an unpivoted LU factorization
// that grows by one row and column per site.
class SamplerState {
public:
    SamplerState(const KernelContext& ctx, std::uint64_t seed, SamplerOptions options = {});

    // Pr{next is a particle | visited assignment}.
    double conditional_particle_prob(const Site& next);

    // Records an outcome for next. Throws ConditioningOnNullEvent when the
    // outcome has conditional probability below 1e-14.
    void assign(const Site& next, bool particle);

    // Draws an outcome with the state's generator and records it.
    bool draw(const Site& next);

    // Relative deviation between the maintained determinant and a pivoted
    // rebuild; refreshes the factorization above the audit threshold.
    double audit_factorization();
    void refresh();

    double log_probability() const { return log_probability_; }
    const std::vector<Site>& visited() const { return sites_; }
    const std::vector<bool>& outcomes() const { return particle_; }
    std::size_t refresh_count() const { return refreshes_; }

private:
    struct Border {
        Site site;
        std::vector<cplx> lower;  // new row of L
        std::vector<cplx> upper;  // new column of U above the diagonal
        cplx pivot;
    };

    Border border(const Site& next) const;
    double particle_probability(const cplx& pivot) const;

    const KernelContext& ctx_;
    SamplerOptions options_;
    std::mt19937_64 engine_;
    std::vector<Site> sites_;
    std::vector<bool> particle_;
    std::vector<std::vector<cplx>> lower_;  // lower_[i] = L(i, 0..i-1)
    std::vector<std::vector<cplx>> upper_;  // upper_[j] = U(0..j, j)
    std::optional<Border> pending_;
    double log_probability_ = 0.0;
    std::size_t since_audit_ = 0;
    std::size_t refreshes_ = 0;
};

struct SampleResult {
    Configuration config;
    double log_probability = 0.0;
};

// Visits the window in (column, row) order. Deterministic in (model, window, seed).
SampleResult sample_window(const KernelContext& ctx, const Window& window, std::uint64_t seed,
                           const SamplerOptions& options = {});

// Sample i uses split_seed(seed, i). threads = 0 picks the hardware concurrency.
std::vector<SampleResult> sample_many(const KernelContext& ctx, const Window& window,
                                      std::uint64_t seed, std::size_t count, unsigned threads = 0,
                                      const SamplerOptions& options = {});

}  // namespace gp
