#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gp/kernel.hpp"

namespace gp {

// Rectangle of sites: columns [col_lo, col_hi] x rows [row_lo, row_hi].
struct Window {
    int col_lo = 0, col_hi = -1;
    long row_lo = 0, row_hi = -1;

    int num_cols() const { return col_hi >= col_lo ? col_hi - col_lo + 1 : 0; }
    long num_rows() const { return row_hi >= row_lo ? row_hi - row_lo + 1 : 0; }
    std::size_t size() const { return static_cast<std::size_t>(num_cols()) * num_rows(); }
    bool contains(const Site& s) const {
        return s.col >= col_lo && s.col <= col_hi && s.row >= row_lo && s.row <= row_hi;
    }
    // Position of s in (column, row) lexicographic order.
    std::size_t index_of(const Site& s) const;
    Site site_at(std::size_t index) const;
    std::vector<Site> sites() const;

    bool operator==(const Window&) const = default;
};

// Parses "A:B" into an inclusive integer range.
std::pair<long, long> parse_range(const std::string& text);

class Configuration {
public:
    Configuration() = default;
    explicit Configuration(Window window)
        : window_(window), values_(window.size(), 0) {}
    Configuration(Window window, std::vector<std::uint8_t> values);

    const Window& window() const { return window_; }
    const std::vector<std::uint8_t>& values() const { return values_; }

    bool at(const Site& s) const { return values_[window_.index_of(s)] != 0; }
    void set(const Site& s, bool particle) { values_[window_.index_of(s)] = particle ? 1 : 0; }
    bool at_index(std::size_t i) const { return values_[i] != 0; }

    // Row-major text "0101..." in (column, row) order.
    std::string bits() const;
    static Configuration from_bits(const Window& window, const std::string& bits);
    // Configuration whose site i is a particle iff bit i of mask is set.
    static Configuration from_mask(const Window& window, std::uint64_t mask);
    std::uint64_t mask() const;

    bool operator==(const Configuration&) const = default;

private:
    Window window_;
    std::vector<std::uint8_t> values_;
};

}  // namespace gp
