#include "gp/lattice.hpp"

#include <stdexcept>

#include "gp/errors.hpp"

namespace gp {

std::size_t Window::index_of(const Site& s) const {
    if (!contains(s)) {
        throw Error(ErrorCode::InvalidEvent, "site (" + std::to_string(s.col) + "," +
                                                 std::to_string(s.row) + ") outside window");
    }
    return static_cast<std::size_t>(s.col - col_lo) * num_rows() + (s.row - row_lo);
}

Site Window::site_at(std::size_t index) const {
    long rows = num_rows();
    return Site{col_lo + static_cast<int>(index / rows), row_lo + static_cast<long>(index % rows)};
}

std::vector<Site> Window::sites() const {
    std::vector<Site> out;
    out.reserve(size());
    for (int c = col_lo; c <= col_hi; ++c) {
        for (long r = row_lo; r <= row_hi; ++r) out.push_back({c, r});
    }
    return out;
}

std::pair<long, long> parse_range(const std::string& text) {
    auto colon = text.find(':', 1);
    try {
        if (colon == std::string::npos) {
            long v = std::stol(text);
            return {v, v};
        }
        std::size_t used = 0;
        long a = std::stol(text.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument(text);
        std::string rest = text.substr(colon + 1);
        long b = std::stol(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(text);
        if (b < a) throw Error(ErrorCode::ParseError, "empty range '" + text + "'");
        return {a, b};
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::ParseError, "malformed range '" + text + "', expected A:B");
    }
}

Configuration::Configuration(Window window, std::vector<std::uint8_t> values)
    : window_(window), values_(std::move(values)) {
    if (values_.size() != window_.size()) {
        throw Error(ErrorCode::InvalidEvent, "configuration size does not match its window");
    }
}

std::string Configuration::bits() const {
    std::string s(values_.size(), '0');
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i]) s[i] = '1';
    }
    return s;
}

Configuration Configuration::from_bits(const Window& window, const std::string& bits) {
    if (bits.size() != window.size()) {
        throw Error(ErrorCode::ParseError, "bit string length does not match the window");
    }
    std::vector<std::uint8_t> v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') throw Error(ErrorCode::ParseError, "bad bit string");
        v[i] = bits[i] == '1';
    }
    return Configuration(window, std::move(v));
}

Configuration Configuration::from_mask(const Window& window, std::uint64_t mask) {
    Configuration c(window);
    for (std::size_t i = 0; i < c.values_.size(); ++i) c.values_[i] = (mask >> i) & 1U;
    return c;
}

std::uint64_t Configuration::mask() const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < values_.size() && i < 64; ++i) {
        if (values_[i]) m |= std::uint64_t{1} << i;
    }
    return m;
}

}  // namespace gp
