#include "gp/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "gp/errors.hpp"
#include "gp/linalg.hpp"

namespace gp {

namespace {

constexpr double kClampTolerance = 1e-8;
constexpr double kNullEvent = 1e-14;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double uniform01(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

SamplerState::SamplerState(const KernelContext& ctx, std::uint64_t seed, SamplerOptions options)
    : ctx_(ctx), options_(options), engine_(seed) {}

SamplerState::Border SamplerState::border(const Site& next) const {
    if (std::find(sites_.begin(), sites_.end(), next) != sites_.end()) {
        throw Error(ErrorCode::InvalidEvent, "site (" + std::to_string(next.col) + "," +
                                                 std::to_string(next.row) + ") already visited");
    }
    const std::size_t m = sites_.size();
    Border b{next, std::vector<cplx>(m), std::vector<cplx>(m), ctx_.entry(next, next)};
    // upper = L^{-1} c with c_i = K(v_i, next)
    for (std::size_t i = 0; i < m; ++i) {
        cplx sum = ctx_.entry(sites_[i], next);
        for (std::size_t j = 0; j < i; ++j) sum -= lower_[i][j] * b.upper[j];
        b.upper[i] = sum;
    }
    // lower U = r with r_j = K(next, v_j)
    for (std::size_t j = 0; j < m; ++j) {
        cplx sum = ctx_.entry(next, sites_[j]);
        for (std::size_t i = 0; i < j; ++i) sum -= b.lower[i] * upper_[j][i];
        b.lower[j] = sum / upper_[j][j];
    }
    for (std::size_t i = 0; i < m; ++i) b.pivot -= b.lower[i] * b.upper[i];
    return b;
}

double SamplerState::particle_probability(const cplx& pivot) const {
    double p = pivot.real();
    if (p < -kClampTolerance || p > 1.0 + kClampTolerance) {
        throw Error(ErrorCode::NumericallyIndefinite,
                    "conditional probability " + std::to_string(p) + " outside [0, 1]");
    }
    if (p < 0.0 || p > 1.0) {
        diagnostics().clamped_conditionals++;
        p = std::clamp(p, 0.0, 1.0);
    }
    return p;
}

double SamplerState::conditional_particle_prob(const Site& next) {
    if (!pending_ || pending_->site != next) pending_ = border(next);
    return particle_probability(pending_->pivot);
}

void SamplerState::assign(const Site& next, bool particle) {
    double p = conditional_particle_prob(next);
    double chosen = particle ? p : 1.0 - p;
    if (chosen < kNullEvent) {
        throw Error(ErrorCode::ConditioningOnNullEvent,
                    "outcome at (" + std::to_string(next.col) + "," + std::to_string(next.row) +
                        ") has conditional probability " + std::to_string(chosen));
    }
    Border b = std::move(*pending_);
    pending_.reset();
    cplx diag = particle ? b.pivot : b.pivot - 1.0;
    b.upper.push_back(diag);
    lower_.push_back(std::move(b.lower));
    upper_.push_back(std::move(b.upper));
    sites_.push_back(next);
    particle_.push_back(particle);
    log_probability_ += std::log(chosen);
    if (++since_audit_ >= options_.audit_interval) audit_factorization();
}

bool SamplerState::draw(const Site& next) {
    double p = conditional_particle_prob(next);
    bool particle = uniform01(engine_) < p;
    assign(next, particle);
    return particle;
}

double SamplerState::audit_factorization() {
    since_audit_ = 0;
    pending_.reset();
    const std::size_t m = sites_.size();
    if (m == 0) return 0.0;
    CMatrix a(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) a(i, j) = ctx_.entry(sites_[i], sites_[j]);
        if (!particle_[i]) a(i, i) -= 1.0;
    }
    Determinant ref = lu_determinant(a);
    double log_inc = 0.0;
    cplx phase_inc(1.0, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const cplx& u = upper_[j][j];
        log_inc += std::log(std::abs(u));
        phase_inc *= u / std::abs(u);
    }
    double deviation = std::abs(std::exp(ref.log_abs - log_inc) * ref.phase / phase_inc - 1.0);
    if (!std::isfinite(deviation)) deviation = std::numeric_limits<double>::infinity();
    if (deviation > options_.audit_threshold) refresh();
    return deviation;
}

void SamplerState::refresh() {
    pending_.reset();
    const std::size_t m = sites_.size();
    // Right-looking elimination of the complemented matrix in visit order.
    std::vector<std::vector<cplx>> a(m, std::vector<cplx>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) a[i][j] = ctx_.entry(sites_[i], sites_[j]);
        if (!particle_[i]) a[i][i] -= 1.0;
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (std::abs(a[k][k]) == 0.0) {
            throw Error(ErrorCode::ConditioningOnNullEvent, "zero pivot while refreshing");
        }
        for (std::size_t i = k + 1; i < m; ++i) {
            a[i][k] /= a[k][k];
            for (std::size_t j = k + 1; j < m; ++j) a[i][j] -= a[i][k] * a[k][j];
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        lower_[i].assign(a[i].begin(), a[i].begin() + i);
        upper_[i].resize(i + 1);
        for (std::size_t r = 0; r <= i; ++r) upper_[i][r] = a[r][i];
    }
    ++refreshes_;
    diagnostics().audit_refreshes++;
}

SampleResult sample_window(const KernelContext& ctx, const Window& window, std::uint64_t seed,
                           const SamplerOptions& options) {
    if (window.size() > options.max_sites) {
        throw Error(ErrorCode::WindowTooLarge, "window has " + std::to_string(window.size()) +
                                                   " sites, cap is " +
                                                   std::to_string(options.max_sites));
    }
    SamplerState state(ctx, seed, options);
    Configuration config(window);
    for (const Site& s : window.sites()) config.set(s, state.draw(s));
    return SampleResult{std::move(config), state.log_probability()};
}

std::vector<SampleResult> sample_many(const KernelContext& ctx, const Window& window,
                                      std::uint64_t seed, std::size_t count, unsigned threads,
                                      const SamplerOptions& options) {
    std::vector<SampleResult> out(count);
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::size_t i = next++; i < count; i = next++) {
                out[i] = sample_window(ctx, window, split_seed(seed, i), options);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace gp
