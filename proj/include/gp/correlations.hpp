#pragma once

#include <vector>

#include "gp/kernel.hpp"
#include "gp/lattice.hpp"
#include "gp/linalg.hpp"

namespace gp {

struct EventSpec {
    std::vector<Site> particles;
    std::vector<Site> holes;

    // Throws InvalidEvent on duplicates or a site listed as both.
    void validate() const;
    std::size_t size() const { return particles.size() + holes.size(); }
};

EventSpec event_from_configuration(const Configuration& config);

// Parses "(0,0),(0,1)" into sites.
std::vector<Site> parse_sites(const std::string& text);

struct EventMatrix {
    CMatrix matrix;
    std::vector<Site> sites;
    std::vector<bool> hole;
    int sign = 1;
};

// Complemented matrix over the event sites in (column, row) order: kernel
// entries off the diagonal, K(t,t) for particles and K(t,t) - 1 for holes.
EventMatrix build_event_matrix(const KernelContext& ctx, const EventSpec& ev);

// sign * det without any range check.
double event_determinant(const KernelContext& ctx, const EventSpec& ev);

// Probability of the event. Values within 1e-8 outside [0, 1] are clamped;
// anything further out raises NumericallyIndefinite.
double event_probability(const KernelContext& ctx, const EventSpec& ev);

inline constexpr std::size_t kMaxDistributionSites = 20;

struct WindowDistribution {
    Window window;
    // Indexed by Configuration::mask(); unclamped determinant values.
    std::vector<double> probabilities;
    double total = 0.0;
    double min = 0.0;

    double probability(const Configuration& c) const { return probabilities[c.mask()]; }
};

WindowDistribution window_distribution(const KernelContext& ctx, const Window& window);

}  // namespace gp
