#pragma once

#include <map>

#include "gp/psi.hpp"

namespace gp {

// A model with |z| = 1 and every alpha/beta parameter in (0, 1]. Factors keep
// their sign kind unless the parameter had to be inverted. Each inversion
// multiplies psi_k by c_k * u^{n_k}; n_k and c_k are recorded per column.
//
// With s(sigma) = sum_{m <= sigma} n_m and g(sigma) = prod_{m <= sigma} c_m,
//   K(sigma, x; tau, y) = g(sigma) / g(tau) * K_canon(sigma, x - s(sigma); tau, y - s(tau))
// where K is the original kernel with the radial prefactor |z|^{y-x} dropped.
struct CanonicalForm {
    PsiSequence sequence;
    SpectralParameter z;
    double radial_scale = 1.0;
    std::map<int, int> shift_map;
    std::map<int, double> conjugation;

    int shift(int sigma) const;
    double conjugation_log(int sigma) const;
    int conjugation_sign(int sigma) const;
};

// Multiplies plus-kind parameters by r and divides minus-kind parameters by r,
// which is the substitution u -> r u applied to every factor.
PsiSequence radially_rescaled(const PsiSequence& sequence, double r);

CanonicalForm canonicalize(const PsiSequence& sequence, const SpectralParameter& z);

}  // namespace gp
