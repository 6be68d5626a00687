#include "gp/psi.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>

#include "gp/errors.hpp"

namespace gp {

namespace {

constexpr double kPoleThreshold = 64.0 * DBL_EPSILON;

const std::vector<PsiFactor>& empty_column() {
    static const std::vector<PsiFactor> none;
    return none;
}

cplx checked_denominator(cplx value, const PsiFactor& f) {
    if (std::abs(value) < kPoleThreshold) {
        throw Error(ErrorCode::PoleHit,
                    std::string("evaluation point is a pole of ") + factor_kind_name(f.kind));
    }
    return value;
}

}  // namespace

const char* factor_kind_name(FactorKind kind) {
    switch (kind) {
        case FactorKind::AlphaPlus: return "AlphaPlus";
        case FactorKind::AlphaMinus: return "AlphaMinus";
        case FactorKind::BetaPlus: return "BetaPlus";
        case FactorKind::BetaMinus: return "BetaMinus";
        case FactorKind::GammaPlus: return "GammaPlus";
        case FactorKind::GammaMinus: return "GammaMinus";
    }
    return "Unknown";
}

FactorKind parse_factor_kind(const std::string& name) {
    for (FactorKind k : {FactorKind::AlphaPlus, FactorKind::AlphaMinus, FactorKind::BetaPlus,
                         FactorKind::BetaMinus, FactorKind::GammaPlus, FactorKind::GammaMinus}) {
        if (name == factor_kind_name(k)) return k;
    }
    throw Error(ErrorCode::ParseError, "unknown factor kind '" + name + "'");
}

bool is_alpha(FactorKind kind) {
    return kind == FactorKind::AlphaPlus || kind == FactorKind::AlphaMinus;
}
bool is_beta(FactorKind kind) { return kind == FactorKind::BetaPlus || kind == FactorKind::BetaMinus; }
bool is_gamma(FactorKind kind) {
    return kind == FactorKind::GammaPlus || kind == FactorKind::GammaMinus;
}
bool is_plus(FactorKind kind) {
    return kind == FactorKind::AlphaPlus || kind == FactorKind::BetaPlus ||
           kind == FactorKind::GammaPlus;
}

cplx eval_psi(std::span<const PsiFactor> factors, cplx u) {
    if (u == cplx(0.0)) throw Error(ErrorCode::PoleHit, "u = 0");
    cplx result(1.0);
    for (const PsiFactor& f : factors) {
        switch (f.kind) {
            case FactorKind::AlphaPlus:
                result /= checked_denominator(1.0 - f.param * u, f);
                break;
            case FactorKind::AlphaMinus:
                result /= checked_denominator(1.0 - f.param / u, f);
                break;
            case FactorKind::BetaPlus: result *= 1.0 + f.param * u; break;
            case FactorKind::BetaMinus: result *= 1.0 + f.param / u; break;
            case FactorKind::GammaPlus: result *= std::exp(f.param * u); break;
            case FactorKind::GammaMinus: result *= std::exp(f.param / u); break;
        }
    }
    return result;
}

cplx eval_psi_inverse(std::span<const PsiFactor> factors, cplx u) {
    if (u == cplx(0.0)) throw Error(ErrorCode::PoleHit, "u = 0");
    cplx result(1.0);
    for (const PsiFactor& f : factors) {
        switch (f.kind) {
            case FactorKind::AlphaPlus: result *= 1.0 - f.param * u; break;
            case FactorKind::AlphaMinus: result *= 1.0 - f.param / u; break;
            case FactorKind::BetaPlus:
                result /= checked_denominator(1.0 + f.param * u, f);
                break;
            case FactorKind::BetaMinus:
                result /= checked_denominator(1.0 + f.param / u, f);
                break;
            case FactorKind::GammaPlus: result *= std::exp(-f.param * u); break;
            case FactorKind::GammaMinus: result *= std::exp(-f.param / u); break;
        }
    }
    return result;
}

void PsiSequence::set(int k, std::vector<PsiFactor> factors) {
    if (factors.empty()) {
        columns_.erase(k);
    } else {
        columns_[k] = std::move(factors);
    }
}

void PsiSequence::append(int k, PsiFactor factor) { columns_[k].push_back(factor); }

const std::vector<PsiFactor>& PsiSequence::at(int k) const {
    auto it = columns_.find(k);
    return it == columns_.end() ? empty_column() : it->second;
}

int PsiSequence::k_min() const { return columns_.empty() ? 0 : columns_.begin()->first; }
int PsiSequence::k_max() const { return columns_.empty() ? -1 : columns_.rbegin()->first; }

void PsiSequence::validate() const {
    for (const auto& [k, factors] : columns_) {
        for (const PsiFactor& f : factors) {
            if (!std::isfinite(f.param) || !(f.param > 0.0)) {
                throw Error(ErrorCode::InvalidModel,
                            "column " + std::to_string(k) + ": " + factor_kind_name(f.kind) +
                                " parameter must be finite and positive");
            }
        }
    }
}

void SpectralParameter::validate() const {
    if (!std::isfinite(modulus) || !(modulus > 0.0)) {
        throw Error(ErrorCode::InvalidModel, "spectral parameter modulus must be positive");
    }
    if (!std::isfinite(argument) || !(argument > 0.0) || !(argument < std::numbers::pi)) {
        throw Error(ErrorCode::InvalidModel, "spectral parameter argument must lie in (0, pi)");
    }
}

}  // namespace gp
