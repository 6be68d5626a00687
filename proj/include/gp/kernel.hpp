#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>

#include "gp/canonical.hpp"
#include "gp/model.hpp"

namespace gp {

struct Site {
    int col = 0;
    long row = 0;

    auto operator<=>(const Site&) const = default;
};

enum class ContourSign { Plus, Minus };

struct ContourSpec {
    ContourSign sign = ContourSign::Plus;
    double radius = 1.0;
    QuadratureSpec quadrature;
};

// Raw contour integrals (1/2 pi i) \int_C F_{sigma,tau}(u) u^{-(d+1)} du on
// circular arcs of a fixed radius, memoized by (sigma, tau, d).
class ContourKernel {
public:
    ContourKernel(PsiSequence sequence, double radius, double argument, QuadratureSpec quadrature);

    cplx value(int sigma, int tau, long d) const;

    ContourSpec contour(int sigma, int tau) const;
    // Distance from the nearest pole of the integrand to its contour.
    double pole_distance(int sigma, int tau) const;

    const PsiSequence& sequence() const { return sequence_; }
    std::size_t cache_size() const;

private:
    struct Key {
        int sigma, tau;
        long d;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };

    cplx integrate(int sigma, int tau, long d) const;

    PsiSequence sequence_;
    double radius_;
    double argument_;
    QuadratureSpec quadrature_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<Key, cplx, KeyHash> cache_;
};

enum class EvaluationMode { Canonical, Direct };

// Immutable evaluation context. Canonical mode integrates the canonical model
// on the unit circle and pulls values back. Direct mode integrates the raw
// factors on arcs of radius |z|; it is kept as an independent cross-check.
class KernelContext {
public:
    explicit KernelContext(Model model, EvaluationMode mode = EvaluationMode::Canonical);

    const Model& model() const { return model_; }
    EvaluationMode mode() const { return mode_; }
    const CanonicalForm& canonical() const { return canonical_; }

    // K(sigma, x; tau, y) of the model with the radial prefactor dropped.
    cplx eval(int sigma, long x, int tau, long y) const;

    // An entry of a kernel diagonally similar to eval(); principal minors agree.
    // This is what correlation determinants are built from.
    cplx entry(const Site& a, const Site& b) const;

    // The model parameters after the substitution u -> |z| u. Linear relations
    // between values of eval() involve these parameters.
    const PsiSequence& effective_sequence() const { return effective_; }

    const ContourKernel& contour_kernel() const { return *kernel_; }

private:
    Model model_;
    EvaluationMode mode_;
    CanonicalForm canonical_;
    PsiSequence effective_;
    std::unique_ptr<ContourKernel> kernel_;
};

// sin(phi d) / (pi d), and phi / pi at d = 0. The prefactor |z|^{-d} of the
// true integral is included only on request, matching eval().
cplx equal_time_closed_form(const SpectralParameter& z, long d, bool radial_prefactor = false);

}  // namespace gp
