#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gp/kernel.hpp"
#include "gp/lattice.hpp"
#include "gp/paths.hpp"

namespace gp {

inline constexpr std::size_t kMaxBoxSites = 24;

// A rectangular box with a one-site collar on every side. The collar columns
// col_lo-1 and col_hi+1 hold the entrances and exits over the box rows; the
// ring rows row_lo-1 and row_hi+1 span the collar columns too.
struct BoxSpec {
    Window box;
    std::vector<long> entrances;  // particle rows in column col_lo-1
    std::vector<long> exits;      // particle rows in column col_hi+1
    // Bits over columns col_lo-1..col_hi+1. Empty means the default fill.
    std::string top;
    std::string bottom;

    Window outer() const;
    void validate() const;
};

BoxSpec parse_box_spec(const std::string& json_text);
std::string box_spec_to_json(const BoxSpec& box);

// Ring rows chosen so that no path crosses the top or bottom edge of the box.
// Throws InvalidModel when the adjacent link kinds ask for conflicting values.
std::pair<std::string, std::string> default_ring(const BoxSpec& box, const Model& model);

// Collar configuration: the outer window with the box sites left empty.
Configuration collar_configuration(const BoxSpec& box, const Model& model);
std::vector<Site> collar_sites(const BoxSpec& box);

struct PathTuple {
    Configuration inner;  // configuration on the box
    Configuration outer;  // box plus collar
    PathEnsembleWindow paths;
    double action = 0.0;
    // False when a connector leaving the box is not determined by the collar.
    bool pinned = true;
};

std::vector<PathTuple> enumerate_box(const BoxSpec& box, const Model& model);

// exp(action) normalized over the tuples.
std::vector<double> gibbs_conditional(const std::vector<PathTuple>& tuples);

struct DeterminantalConditional {
    std::vector<double> probabilities;  // renormalized over the tuples
    double collar_probability = 0.0;
    // Conditional mass of box configurations outside the enumerated set.
    double leaked = 0.0;
};

DeterminantalConditional determinantal_conditional(const KernelContext& ctx, const BoxSpec& box,
                                                   const std::vector<PathTuple>& tuples);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

// Pairs of tuples whose inner configurations differ by one particle moving one row.
std::vector<std::pair<std::size_t, std::size_t>> move_edges(const std::vector<PathTuple>& tuples);
bool move_graph_connected(const std::vector<PathTuple>& tuples);

struct GibbsReport {
    std::size_t tuples = 0;
    double partition_function = 0.0;
    double total_variation = 0.0;
    double leaked = 0.0;
    double collar_probability = 0.0;
    bool connected = true;
    bool pinned = true;
    // Largest relative gap between exp(action difference) and the probability
    // ratio over all move edges.
    double max_move_ratio_error = 0.0;
    std::vector<double> gibbs;
    std::vector<double> determinantal;
    std::vector<std::string> inner_bits;
    std::vector<double> actions;
};

GibbsReport gibbs_check(const KernelContext& ctx, const BoxSpec& box);
std::string gibbs_report_to_json(const BoxSpec& box, const GibbsReport& report);

}  // namespace gp
