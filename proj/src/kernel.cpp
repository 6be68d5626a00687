#include "gp/kernel.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "gp/errors.hpp"

namespace gp {

namespace {

constexpr double kPoleMargin = 1e-6;

std::vector<PsiFactor> factors_between(const PsiSequence& seq, int lo_exclusive, int hi_inclusive) {
    std::vector<PsiFactor> out;
    for (auto it = seq.columns().upper_bound(lo_exclusive);
         it != seq.columns().end() && it->first <= hi_inclusive; ++it) {
        out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
}

double distance_to_arc(double pole, double radius, double argument, ContourSign sign) {
    bool on_positive_axis = pole > 0.0;
    bool crosses = (sign == ContourSign::Plus) == on_positive_axis;
    if (crosses) return std::abs(radius - std::abs(pole));
    cplx end = std::polar(radius, argument);
    return std::abs(cplx(pole) - end);
}

}  // namespace

std::size_t ContourKernel::KeyHash::operator()(const Key& k) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(k.sigma);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(k.tau);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(k.d);
    return static_cast<std::size_t>(h ^ (h >> 29));
}

ContourKernel::ContourKernel(PsiSequence sequence, double radius, double argument,
                             QuadratureSpec quadrature)
    : sequence_(std::move(sequence)), radius_(radius), argument_(argument), quadrature_(quadrature) {
    quadrature_.validate();
}

ContourSpec ContourKernel::contour(int sigma, int tau) const {
    return ContourSpec{sigma > tau ? ContourSign::Minus : ContourSign::Plus, radius_, quadrature_};
}

double ContourKernel::pole_distance(int sigma, int tau) const {
    ContourSign sign = contour(sigma, tau).sign;
    double best = radius_;
    if (sigma == tau) return best;
    bool inverse = sigma < tau;
    auto factors = inverse ? factors_between(sequence_, sigma, tau) : factors_between(sequence_, tau, sigma);
    for (const PsiFactor& f : factors) {
        double pole = 0.0;
        bool has_pole = false;
        if (inverse && f.kind == FactorKind::BetaPlus) {
            pole = -1.0 / f.param;
            has_pole = true;
        } else if (inverse && f.kind == FactorKind::BetaMinus) {
            pole = -f.param;
            has_pole = true;
        } else if (!inverse && f.kind == FactorKind::AlphaPlus) {
            pole = 1.0 / f.param;
            has_pole = true;
        } else if (!inverse && f.kind == FactorKind::AlphaMinus) {
            pole = f.param;
            has_pole = true;
        }
        if (has_pole) best = std::min(best, distance_to_arc(pole, radius_, argument_, sign));
    }
    return best;
}

std::size_t ContourKernel::cache_size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

cplx ContourKernel::value(int sigma, int tau, long d) const {
    Key key{sigma, tau, d};
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    cplx v = integrate(sigma, tau, d);
    std::unique_lock lock(mutex_);
    cache_.emplace(key, v);
    return v;
}

cplx ContourKernel::integrate(int sigma, int tau, long d) const {
    double dist = pole_distance(sigma, tau);
    if (dist < kPoleMargin) {
        throw Error(ErrorCode::PoleTooClose, "pole within " + std::to_string(dist) +
                                                 " of the contour for columns " +
                                                 std::to_string(sigma) + "," + std::to_string(tau));
    }
    bool inverse = sigma < tau;
    std::vector<PsiFactor> factors =
        sigma == tau ? std::vector<PsiFactor>{}
                     : (inverse ? factors_between(sequence_, sigma, tau)
                                : factors_between(sequence_, tau, sigma));
    const double scale = std::pow(radius_, -static_cast<double>(d)) / (2.0 * std::numbers::pi);
    auto integrand = [&](double theta) {
        cplx u = std::polar(radius_, theta);
        cplx f = inverse ? eval_psi_inverse(factors, u) : eval_psi(factors, u);
        return f * std::polar(scale, -static_cast<double>(d) * theta);
    };

    const double phi = argument_;
    double a = -phi, b = phi;
    if (sigma > tau) {
        a = phi;
        b = 2.0 * std::numbers::pi - phi;
    }
    int initial = static_cast<int>(std::ceil((b - a) * (std::abs(static_cast<double>(d)) + 4.0) / 6.0));
    QuadratureResult r = integrate_adaptive(integrand, a, b, quadrature_, initial);
    return sigma > tau ? -r.value : r.value;
}

KernelContext::KernelContext(Model model, EvaluationMode mode) : model_(std::move(model)), mode_(mode) {
    model_.validate();
    canonical_ = canonicalize(model_.sequence, model_.z);
    effective_ = radially_rescaled(model_.sequence, model_.z.modulus);
    if (mode_ == EvaluationMode::Canonical) {
        kernel_ = std::make_unique<ContourKernel>(canonical_.sequence, 1.0, model_.z.argument,
                                                  model_.quadrature);
    } else {
        kernel_ = std::make_unique<ContourKernel>(model_.sequence, model_.z.modulus,
                                                  model_.z.argument, model_.quadrature);
    }
}

cplx KernelContext::eval(int sigma, long x, int tau, long y) const {
    if (mode_ == EvaluationMode::Direct) {
        long d = x - y;
        return kernel_->value(sigma, tau, d) * std::pow(model_.z.modulus, static_cast<double>(d));
    }
    const CanonicalForm& c = canonical_;
    long xs = x - c.shift(sigma);
    long ys = y - c.shift(tau);
    double ratio = std::exp(c.conjugation_log(sigma) - c.conjugation_log(tau));
    ratio *= c.conjugation_sign(sigma) * c.conjugation_sign(tau);
    return ratio * kernel_->value(sigma, tau, xs - ys);
}

cplx KernelContext::entry(const Site& a, const Site& b) const {
    if (mode_ == EvaluationMode::Direct) return eval(a.col, a.row, b.col, b.row);
    long xs = a.row - canonical_.shift(a.col);
    long ys = b.row - canonical_.shift(b.col);
    return kernel_->value(a.col, b.col, xs - ys);
}

cplx equal_time_closed_form(const SpectralParameter& z, long d, bool radial_prefactor) {
    const double phi = z.argument;
    double v = d == 0 ? phi / std::numbers::pi
                      : std::sin(phi * static_cast<double>(d)) / (std::numbers::pi * static_cast<double>(d));
    if (radial_prefactor) v *= std::pow(z.modulus, -static_cast<double>(d));
    return cplx(v, 0.0);
}

}  // namespace gp
