#pragma once

#include <atomic>
#include <complex>
#include <cstddef>
#include <vector>

namespace gp {

class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(std::size_t n) : n_(n), data_(n * n) {}

    std::size_t size() const { return n_; }
    std::complex<double>& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const std::complex<double>& operator()(std::size_t i, std::size_t j) const {
        return data_[i * n_ + j];
    }
    double max_abs() const;

private:
    std::size_t n_ = 0;
    std::vector<std::complex<double>> data_;
};

struct Determinant {
    std::complex<double> value;
    // log|det| and det/|det|; log_abs is -inf for an exactly singular matrix.
    double log_abs = 0.0;
    std::complex<double> phase{1.0, 0.0};
    // max |U_ij| / max |A_ij| of the pivoted factorization.
    double growth = 1.0;
};

// Complex LU with partial pivoting.
Determinant lu_determinant(CMatrix a);

struct Diagnostics {
    std::atomic<long> growth_warnings{0};
    std::atomic<long> clamped_probabilities{0};
    std::atomic<long> clamped_conditionals{0};
    std::atomic<long> audit_refreshes{0};
};

Diagnostics& diagnostics();

}  // namespace gp
