#include "gp/canonical.hpp"

#include <cmath>

#include "gp/errors.hpp"

namespace gp {

int CanonicalForm::shift(int sigma) const {
    int s = 0;
    for (const auto& [k, n] : shift_map) {
        if (k > sigma) break;
        s += n;
    }
    return s;
}

double CanonicalForm::conjugation_log(int sigma) const {
    double sum = 0.0;
    for (const auto& [k, c] : conjugation) {
        if (k > sigma) break;
        sum += std::log(std::abs(c));
    }
    return sum;
}

int CanonicalForm::conjugation_sign(int sigma) const {
    int sign = 1;
    for (const auto& [k, c] : conjugation) {
        if (k > sigma) break;
        if (c < 0) sign = -sign;
    }
    return sign;
}

PsiSequence radially_rescaled(const PsiSequence& sequence, double r) {
    PsiSequence out;
    for (const auto& [k, factors] : sequence.columns()) {
        std::vector<PsiFactor> scaled;
        for (PsiFactor f : factors) {
            f.param = is_plus(f.kind) ? f.param * r : f.param / r;
            scaled.push_back(f);
        }
        out.set(k, std::move(scaled));
    }
    return out;
}

CanonicalForm canonicalize(const PsiSequence& sequence, const SpectralParameter& z) {
    try {
        sequence.validate();
        z.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::NotNormalizable, e.what());
    }

    CanonicalForm form;
    form.radial_scale = z.modulus;
    form.z = SpectralParameter{1.0, z.argument};
    PsiSequence rescaled = radially_rescaled(sequence, z.modulus);

    for (const auto& [k, factors] : rescaled.columns()) {
        std::vector<PsiFactor> canon;
        int n = 0;
        double c = 1.0;
        for (const PsiFactor& f : factors) {
            if (!std::isnormal(f.param)) {
                throw Error(ErrorCode::NotNormalizable,
                            "column " + std::to_string(k) +
                                ": parameter leaves the double range after radial rescaling");
            }
            if (is_gamma(f.kind) || f.param <= 1.0) {
                canon.push_back(f);
                continue;
            }
            double inv = 1.0 / f.param;
            switch (f.kind) {
                case FactorKind::AlphaPlus:
                    canon.push_back({FactorKind::AlphaMinus, inv});
                    n -= 1;
                    c *= -inv;
                    break;
                case FactorKind::AlphaMinus:
                    canon.push_back({FactorKind::AlphaPlus, inv});
                    n += 1;
                    c *= -inv;
                    break;
                case FactorKind::BetaPlus:
                    canon.push_back({FactorKind::BetaMinus, inv});
                    n += 1;
                    c *= f.param;
                    break;
                case FactorKind::BetaMinus:
                    canon.push_back({FactorKind::BetaPlus, inv});
                    n -= 1;
                    c *= f.param;
                    break;
                default: break;
            }
        }
        form.sequence.set(k, std::move(canon));
        if (n != 0) form.shift_map[k] = n;
        if (c != 1.0) form.conjugation[k] = c;
    }
    return form;
}

}  // namespace gp
