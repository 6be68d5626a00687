#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace gp {

struct QuadratureSpec {
    int max_panels = 4096;
    double abs_tol = 1e-12;
    int nodes_per_panel = 16;

    void validate() const;
    bool operator==(const QuadratureSpec&) const = default;
};

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

struct QuadratureResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    int panels = 0;
};

// Globally adaptive bisection of [a, b]. Each panel is compared against the
// sum over its two halves; the worst panel is split until the summed estimate
// meets abs_tol. Throws QuadratureDiverged past max_panels.
QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a,
                                    double b, const QuadratureSpec& spec,
                                    int initial_panels = 1);

}  // namespace gp
