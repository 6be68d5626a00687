#include "gp/linalg.hpp"

#include <cmath>
#include <limits>

namespace gp {

namespace {
constexpr double kGrowthWarning = 1e8;
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

Determinant lu_determinant(CMatrix a) {
    const std::size_t n = a.size();
    Determinant det;
    const double scale = a.max_abs();
    double u_max = scale;
    std::complex<double> phase(1.0, 0.0);
    double log_abs = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) {
            det.value = 0.0;
            det.log_abs = -std::numeric_limits<double>::infinity();
            det.phase = 0.0;
            det.growth = scale > 0 ? u_max / scale : 1.0;
            return det;
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            phase = -phase;
        }
        const std::complex<double> pivot = a(k, k);
        log_abs += std::log(std::abs(pivot));
        phase *= pivot / std::abs(pivot);
        for (std::size_t i = k + 1; i < n; ++i) {
            const std::complex<double> l = a(i, k) / pivot;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) -= l * a(k, j);
                u_max = std::max(u_max, std::abs(a(i, j)));
            }
        }
    }
    det.log_abs = log_abs;
    det.phase = phase;
    det.value = phase * std::exp(log_abs);
    det.growth = scale > 0 ? u_max / scale : 1.0;
    if (det.growth > kGrowthWarning) diagnostics().growth_warnings++;
    return det;
}

Diagnostics& diagnostics() {
    static Diagnostics d;
    return d;
}

}  // namespace gp
