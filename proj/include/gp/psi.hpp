#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gp {

using cplx = std::complex<double>;

enum class FactorKind { AlphaPlus, AlphaMinus, BetaPlus, BetaMinus, GammaPlus, GammaMinus };

const char* factor_kind_name(FactorKind kind);
FactorKind parse_factor_kind(const std::string& name);

bool is_alpha(FactorKind kind);
bool is_beta(FactorKind kind);
bool is_gamma(FactorKind kind);
bool is_plus(FactorKind kind);

struct PsiFactor {
    FactorKind kind;
    double param;

    bool operator==(const PsiFactor&) const = default;
};

// Product of the factor values at u. Throws PoleHit when u sits on a pole.
cplx eval_psi(std::span<const PsiFactor> factors, cplx u);

// Product of the reciprocals, evaluated factor by factor.
cplx eval_psi_inverse(std::span<const PsiFactor> factors, cplx u);

// Column weights psi_k. Columns absent from the map carry psi_k = 1.
class PsiSequence {
public:
    PsiSequence() = default;

    void set(int k, std::vector<PsiFactor> factors);
    void append(int k, PsiFactor factor);
    const std::vector<PsiFactor>& at(int k) const;

    bool empty() const { return columns_.empty(); }
    int k_min() const;
    int k_max() const;
    const std::map<int, std::vector<PsiFactor>>& columns() const { return columns_; }

    // Throws InvalidModel unless every parameter is finite and positive.
    void validate() const;

    bool operator==(const PsiSequence&) const = default;

private:
    std::map<int, std::vector<PsiFactor>> columns_;
};

struct SpectralParameter {
    double modulus = 1.0;
    double argument = 1.5707963267948966;

    cplx value() const { return std::polar(modulus, argument); }
    void validate() const;
    bool operator==(const SpectralParameter&) const = default;
};

}  // namespace gp
