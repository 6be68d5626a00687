#pragma once

// Independent reference values used by the test suites. Nothing here calls
// into the quadrature code.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include "gp/psi.hpp"

namespace oracle {

using Series = std::map<long, double>;

inline void trim(Series& s) {
    for (auto it = s.begin(); it != s.end();) {
        if (std::abs(it->second) < 1e-22) {
            it = s.erase(it);
        } else {
            ++it;
        }
    }
}

inline Series multiply(const Series& a, const Series& b) {
    Series out;
    for (const auto& [i, x] : a) {
        for (const auto& [j, y] : b) out[i + j] += x * y;
    }
    trim(out);
    return out;
}

// Geometric-type series sum_{n>=start} coef0 * ratio^(n-start) u^(sign*n).
inline Series geometric(double first, double ratio, long start, int sign) {
    Series s;
    double c = first;
    for (long n = start; std::abs(c) > 1e-21 && n < 100000; ++n) {
        s[sign * n] = c;
        c *= ratio;
    }
    return s;
}

inline Series exponential(double gamma, int sign) {
    Series s;
    double c = 1.0;
    for (long n = 0; n < 200 && (n < 5 || std::abs(c) > 1e-21); ++n) {
        s[sign * n] = c;
        c *= gamma / (n + 1);
    }
    return s;
}

// Laurent expansion of a factor (or its reciprocal) valid on the unit circle.
inline Series laurent(const gp::PsiFactor& f, bool reciprocal) {
    using gp::FactorKind;
    double p = f.param;
    switch (f.kind) {
        case FactorKind::AlphaPlus:
            if (reciprocal) return Series{{0, 1.0}, {1, -p}};
            if (p < 1) return geometric(1.0, p, 0, +1);
            return geometric(-1.0 / p, 1.0 / p, 1, -1);
        case FactorKind::AlphaMinus:
            if (reciprocal) return Series{{0, 1.0}, {-1, -p}};
            if (p < 1) return geometric(1.0, p, 0, -1);
            return geometric(-1.0 / p, 1.0 / p, 1, +1);
        case FactorKind::BetaPlus:
            if (!reciprocal) return Series{{0, 1.0}, {1, p}};
            if (p < 1) return geometric(1.0, -p, 0, +1);
            return geometric(1.0 / p, -1.0 / p, 1, -1);
        case FactorKind::BetaMinus:
            if (!reciprocal) return Series{{0, 1.0}, {-1, p}};
            if (p < 1) return geometric(1.0, -p, 0, -1);
            return geometric(1.0 / p, -1.0 / p, 1, +1);
        case FactorKind::GammaPlus: return exponential(reciprocal ? -p : p, +1);
        case FactorKind::GammaMinus: return exponential(reciprocal ? -p : p, -1);
    }
    return Series{{0, 1.0}};
}

// (1/2 pi i) \int u^{m-1} du over the arc from e^{-i phi} to e^{i phi}
// through +1.
inline double arc_moment(double phi, long m) {
    if (m == 0) return phi / std::numbers::pi;
    return std::sin(phi * static_cast<double>(m)) / (std::numbers::pi * static_cast<double>(m));
}

// Kernel K_{sigma,tau}(d) on the unit circle from Laurent coefficients. The
// sequence must have no parameter equal to 1.
inline double series_kernel(const gp::PsiSequence& seq, double phi, int sigma, int tau, long d) {
    Series prod{{0, 1.0}};
    if (sigma != tau) {
        bool reciprocal = sigma < tau;
        int lo = std::min(sigma, tau), hi = std::max(sigma, tau);
        for (const auto& [k, factors] : seq.columns()) {
            if (k <= lo || k > hi) continue;
            for (const gp::PsiFactor& f : factors) prod = multiply(prod, laurent(f, reciprocal));
        }
    }
    double sum = 0.0;
    for (const auto& [n, c] : prod) {
        double moment = arc_moment(phi, n - d);
        if (sigma > tau && n == d) moment -= 1.0;
        sum += c * moment;
    }
    return sum;
}

// 2x2 and 3x3 style determinant by cofactor expansion, for tiny matrices.
inline double small_det(std::vector<std::vector<double>> m) {
    std::size_t n = m.size();
    if (n == 0) return 1.0;
    if (n == 1) return m[0][0];
    double det = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<double>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<double> row;
            for (std::size_t c = 0; c < n; ++c) {
                if (c != j) row.push_back(m[i][c]);
            }
            minor.push_back(row);
        }
        det += ((j % 2 == 0) ? 1.0 : -1.0) * m[0][j] * small_det(minor);
    }
    return det;
}

}  // namespace oracle
