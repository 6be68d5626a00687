#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gp/lattice.hpp"
#include "gp/model.hpp"

namespace gp {

// The factor psi_{k+1} links lattice column k to column k+1.
enum class LinkKind { Identity, AlphaPlus, AlphaMinus, BetaPlus, BetaMinus };
const char* link_kind_name(LinkKind kind);

// Link kind between column k and k+1. Throws NotPathRegime unless psi_{k+1}
// is empty or a single alpha/beta factor.
LinkKind link_kind(const Model& model, int k);
double link_param(const Model& model, int k);

enum class ConnectorKind { AlphaUp, AlphaDown, BetaUp, BetaDown, Flat };
const char* connector_kind_name(ConnectorKind kind);

struct Connector {
    ConnectorKind kind = ConnectorKind::Flat;
    Site source;
    std::optional<Site> target;  // empty when the window does not determine it
    double action = 0.0;

    bool truncated() const { return !target.has_value(); }
};

struct LinkResult {
    // source row -> target row, nullopt when undetermined inside the window
    std::vector<std::pair<long, std::optional<long>>> links;
    std::vector<std::string> violations;
};

// Matches the particles of two adjacent column slices over the same rows.
LinkResult link_columns(const std::vector<std::uint8_t>& source,
                        const std::vector<std::uint8_t>& target, long row_lo, LinkKind kind);

// Determined part of pi+/pi-/chi+/chi- from column k to k+1 of config.
// Throws InterlacingViolation when the two columns cannot interlace.
std::map<long, long> interlace_map(const Configuration& config, int k, LinkKind kind);

struct PathEnsembleWindow {
    Window window;
    std::vector<LinkKind> links;  // links[i] joins columns col_lo+i and col_lo+i+1
    std::vector<Connector> connectors;
    // Each chain lists the particles it passes through, left to right.
    std::vector<std::vector<Site>> chains;
    // A chain is truncated when it starts inside the window without an
    // incoming connector, or ends on an undetermined connector.
    std::vector<bool> chain_truncated;
};

PathEnsembleWindow extract_paths(const Configuration& config, const Model& model);

// Same as extract_paths but collects violations instead of throwing.
PathEnsembleWindow extract_paths(const Configuration& config, const Model& model,
                                 std::vector<std::string>& violations);

double total_action(const PathEnsembleWindow& ensemble);

// Exact intersection test on the connector polylines in doubled coordinates.
bool connectors_intersect(const Connector& a, const Connector& b);
std::vector<std::pair<std::size_t, std::size_t>> find_intersections(const PathEnsembleWindow& ensemble);

enum class RenderMode { Paths, Lozenge };
RenderMode parse_render_mode(const std::string& name);

// Deterministic SVG. Lozenge mode needs every link to be a beta link of one
// sign (or identity); anything else raises ModeUnsupported.
std::string render_svg(const PathEnsembleWindow& ensemble, const Configuration& config,
                       RenderMode mode = RenderMode::Paths);

}  // namespace gp
