#include "gp/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "gp/errors.hpp"

namespace gp {

const char* link_kind_name(LinkKind kind) {
    switch (kind) {
        case LinkKind::Identity: return "Identity";
        case LinkKind::AlphaPlus: return "AlphaPlus";
        case LinkKind::AlphaMinus: return "AlphaMinus";
        case LinkKind::BetaPlus: return "BetaPlus";
        case LinkKind::BetaMinus: return "BetaMinus";
    }
    return "Unknown";
}

const char* connector_kind_name(ConnectorKind kind) {
    switch (kind) {
        case ConnectorKind::AlphaUp: return "AlphaUp";
        case ConnectorKind::AlphaDown: return "AlphaDown";
        case ConnectorKind::BetaUp: return "BetaUp";
        case ConnectorKind::BetaDown: return "BetaDown";
        case ConnectorKind::Flat: return "Flat";
    }
    return "Unknown";
}

LinkKind link_kind(const Model& model, int k) {
    const auto& factors = model.sequence.at(k + 1);
    if (factors.empty()) return LinkKind::Identity;
    if (factors.size() != 1 || is_gamma(factors.front().kind)) {
        throw Error(ErrorCode::NotPathRegime,
                    "column " + std::to_string(k + 1) + " must carry at most one alpha or beta factor");
    }
    switch (factors.front().kind) {
        case FactorKind::AlphaPlus: return LinkKind::AlphaPlus;
        case FactorKind::AlphaMinus: return LinkKind::AlphaMinus;
        case FactorKind::BetaPlus: return LinkKind::BetaPlus;
        case FactorKind::BetaMinus: return LinkKind::BetaMinus;
        default: break;
    }
    throw Error(ErrorCode::NotPathRegime, "unsupported factor");
}

double link_param(const Model& model, int k) {
    const auto& factors = model.sequence.at(k + 1);
    return factors.empty() ? 1.0 : factors.front().param;
}

namespace {

using Bits = std::vector<std::uint8_t>;
using IndexLinks = std::vector<std::pair<long, std::optional<long>>>;

int count_ones(const Bits& v, long lo, long hi_exclusive, std::uint8_t value) {
    int c = 0;
    for (long i = std::max(0L, lo); i < std::min<long>(hi_exclusive, v.size()); ++i) c += v[i] == value;
    return c;
}

std::string interval_text(long lo, long hi, bool lo_open, bool hi_open) {
    return std::string(lo_open ? "(" : "[") + std::to_string(lo) + "," + std::to_string(hi) +
           (hi_open ? ")" : "]");
}

void link_alpha_plus(const Bits& s, const Bits& t, long base, IndexLinks& links,
                     std::vector<std::string>& violations) {
    const long n = static_cast<long>(s.size());
    std::vector<long> particles;
    for (long i = 0; i < n; ++i) {
        if (s[i]) particles.push_back(i);
    }
    auto require = [&](long lo, long hi, bool exact) {
        int c = count_ones(t, lo, hi, 1);
        if (c > 1 || (exact && c != 1)) {
            violations.push_back("target rows " + interval_text(base + lo, base + hi, false, true) +
                                 " hold " + std::to_string(c) + " particles, expected " +
                                 (exact ? "exactly one" : "at most one"));
        }
    };
    if (particles.empty()) {
        require(0, n, false);
        return;
    }
    require(0, particles.front(), false);
    for (std::size_t i = 0; i + 1 < particles.size(); ++i) require(particles[i], particles[i + 1], true);
    require(particles.back(), n, false);
    for (long x : particles) {
        std::optional<long> target;
        for (long y = x; y < n; ++y) {
            if (t[y]) {
                target = y;
                break;
            }
        }
        links.emplace_back(x, target);
    }
}

void link_beta_plus(const Bits& s, const Bits& t, long base, IndexLinks& links,
                    std::vector<std::string>& violations) {
    const long n = static_cast<long>(s.size());
    std::vector<long> holes;
    for (long i = 0; i < n; ++i) {
        if (!s[i]) holes.push_back(i);
    }
    auto find_hole = [&](long lo, long hi_inclusive, bool exact) -> std::optional<long> {
        std::optional<long> h;
        int c = 0;
        for (long y = std::max(0L, lo); y <= std::min(hi_inclusive, n - 1); ++y) {
            if (!t[y]) {
                h = y;
                ++c;
            }
        }
        if (c > 1 || (exact && c != 1)) {
            violations.push_back("target rows " + interval_text(base + lo, base + hi_inclusive, false, false) +
                                 " hold " + std::to_string(c) + " holes, expected " +
                                 (exact ? "exactly one" : "at most one"));
        }
        return h;
    };
    auto emit = [&](long from, long to_exclusive, std::optional<long> hole, bool hole_below) {
        // hole_below: the string's target hole lies below the window when none was found.
        for (long x = from; x < to_exclusive; ++x) {
            bool shifted = hole ? x >= *hole : hole_below;
            long y = shifted ? x + 1 : x;
            links.emplace_back(x, y < n ? std::optional<long>(y) : std::nullopt);
        }
    };
    if (holes.empty()) {
        std::optional<long> h = find_hole(0, n - 1, false);
        if (h) {
            emit(0, n, h, false);
        } else {
            for (long x = 0; x < n; ++x) links.emplace_back(x, std::nullopt);
        }
        return;
    }
    // Bottom partial string: its target hole is in (h0, holes.front()] with h0 below the window.
    std::optional<long> h = find_hole(0, holes.front(), false);
    emit(0, holes.front(), h, true);
    for (std::size_t i = 0; i + 1 < holes.size(); ++i) {
        std::optional<long> hi = find_hole(holes[i] + 1, holes[i + 1], true);
        emit(holes[i] + 1, holes[i + 1], hi, false);
    }
    // Top partial string: hole in (holes.back(), h1] with h1 above the window.
    std::optional<long> ht = find_hole(holes.back() + 1, n - 1, false);
    emit(holes.back() + 1, n, ht, false);
}

}  // namespace

LinkResult link_columns(const Bits& source, const Bits& target, long row_lo, LinkKind kind) {
    if (source.size() != target.size()) {
        throw Error(ErrorCode::InvalidEvent, "column slices differ in length");
    }
    LinkResult result;
    const long n = static_cast<long>(source.size());
    if (kind == LinkKind::Identity) {
        for (long i = 0; i < n; ++i) {
            if (source[i] != target[i]) {
                result.violations.push_back("identity link: rows " + std::to_string(row_lo + i) +
                                            " differ between the two columns");
            }
            if (source[i]) result.links.emplace_back(row_lo + i, row_lo + i);
        }
        return result;
    }
    const bool minus = kind == LinkKind::AlphaMinus || kind == LinkKind::BetaMinus;
    Bits s = source, t = target;
    if (minus) {
        std::reverse(s.begin(), s.end());
        std::reverse(t.begin(), t.end());
    }
    IndexLinks idx;
    std::vector<std::string> raw_violations;
    if (kind == LinkKind::AlphaPlus || kind == LinkKind::AlphaMinus) {
        link_alpha_plus(s, t, 0, idx, raw_violations);
    } else {
        link_beta_plus(s, t, 0, idx, raw_violations);
    }
    auto to_row = [&](long i) { return row_lo + (minus ? n - 1 - i : i); };
    for (const std::string& v : raw_violations) {
        result.violations.push_back(std::string(link_kind_name(kind)) + " link: " + v +
                                    (minus ? " (row-reversed coordinates)" : ""));
    }
    std::set<long> used;
    for (const auto& [x, y] : idx) {
        std::optional<long> target_row;
        if (y) {
            target_row = to_row(*y);
            if (!t[*y]) {
                result.violations.push_back(std::string(link_kind_name(kind)) + " link: row " +
                                            std::to_string(*target_row) + " is not a particle");
            }
            if (!used.insert(*y).second) {
                result.violations.push_back(std::string(link_kind_name(kind)) + " link: row " +
                                            std::to_string(*target_row) + " reached twice");
            }
        }
        result.links.emplace_back(to_row(x), target_row);
    }
    std::sort(result.links.begin(), result.links.end());
    return result;
}

namespace {

Bits column_slice(const Configuration& config, int col) {
    const Window& w = config.window();
    Bits out;
    for (long r = w.row_lo; r <= w.row_hi; ++r) out.push_back(config.at({col, r}));
    return out;
}

}  // namespace

std::map<long, long> interlace_map(const Configuration& config, int k, LinkKind kind) {
    const Window& w = config.window();
    if (k < w.col_lo || k + 1 > w.col_hi) {
        throw Error(ErrorCode::InvalidEvent, "columns " + std::to_string(k) + "," +
                                                 std::to_string(k + 1) + " not inside the window");
    }
    LinkResult r = link_columns(column_slice(config, k), column_slice(config, k + 1), w.row_lo, kind);
    if (!r.violations.empty()) {
        throw Error(ErrorCode::InterlacingViolation,
                    "columns " + std::to_string(k) + "->" + std::to_string(k + 1) + ": " +
                        r.violations.front());
    }
    std::map<long, long> out;
    for (const auto& [x, y] : r.links) {
        if (y) out[x] = *y;
    }
    return out;
}

PathEnsembleWindow extract_paths(const Configuration& config, const Model& model,
                                 std::vector<std::string>& violations) {
    const Window& w = config.window();
    PathEnsembleWindow ens;
    ens.window = w;
    std::map<Site, std::size_t> outgoing;
    std::set<Site> incoming;
    for (int k = w.col_lo; k < w.col_hi; ++k) {
        LinkKind kind = link_kind(model, k);
        double log_param = std::log(link_param(model, k));
        ens.links.push_back(kind);
        LinkResult r = link_columns(column_slice(config, k), column_slice(config, k + 1), w.row_lo, kind);
        for (const std::string& v : r.violations) {
            violations.push_back("columns " + std::to_string(k) + "->" + std::to_string(k + 1) + ": " + v);
        }
        for (const auto& [x, y] : r.links) {
            Connector c;
            c.source = {k, x};
            switch (kind) {
                case LinkKind::Identity: c.kind = ConnectorKind::Flat; break;
                case LinkKind::AlphaPlus: c.kind = ConnectorKind::AlphaUp; break;
                case LinkKind::AlphaMinus: c.kind = ConnectorKind::AlphaDown; break;
                case LinkKind::BetaPlus: c.kind = ConnectorKind::BetaUp; break;
                case LinkKind::BetaMinus: c.kind = ConnectorKind::BetaDown; break;
            }
            if (y) {
                c.target = Site{k + 1, *y};
                c.action = kind == LinkKind::Identity ? 0.0 : std::abs(*y - x) * log_param;
                incoming.insert(*c.target);
            }
            outgoing[c.source] = ens.connectors.size();
            ens.connectors.push_back(c);
        }
    }
    for (const Site& s : w.sites()) {
        if (!config.at(s) || incoming.count(s)) continue;
        std::vector<Site> chain{s};
        bool truncated = s.col > w.col_lo;
        Site cur = s;
        while (true) {
            auto it = outgoing.find(cur);
            if (it == outgoing.end()) break;
            const Connector& c = ens.connectors[it->second];
            if (!c.target) {
                truncated = true;
                break;
            }
            cur = *c.target;
            chain.push_back(cur);
        }
        ens.chains.push_back(std::move(chain));
        ens.chain_truncated.push_back(truncated);
    }
    return ens;
}

PathEnsembleWindow extract_paths(const Configuration& config, const Model& model) {
    std::vector<std::string> violations;
    PathEnsembleWindow ens = extract_paths(config, model, violations);
    if (!violations.empty()) throw Error(ErrorCode::InterlacingViolation, violations.front());
    return ens;
}

double total_action(const PathEnsembleWindow& ensemble) {
    double sum = 0.0;
    for (const Connector& c : ensemble.connectors) {
        if (!c.truncated()) sum += c.action;
    }
    return sum;
}

namespace {

struct Point {
    long long x, y;
};
struct Segment {
    Point a, b;
};

std::vector<Segment> polyline(const Connector& c) {
    long long x0 = 2LL * c.source.col, y0 = 2LL * c.source.row;
    long long y1 = 2LL * c.target->row;
    if (c.kind == ConnectorKind::AlphaUp || c.kind == ConnectorKind::AlphaDown) {
        return {{{x0, y0}, {x0 + 1, y0}}, {{x0 + 1, y0}, {x0 + 1, y1}}, {{x0 + 1, y1}, {x0 + 2, y1}}};
    }
    return {{{x0, y0}, {x0 + 2, y1}}};
}

int orientation(Point p, Point q, Point r) {
    long long v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    return (v > 0) - (v < 0);
}

bool on_segment(Point p, Point q, Point r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
           q.y <= std::max(p.y, r.y);
}

bool segments_intersect(const Segment& s, const Segment& t) {
    int o1 = orientation(s.a, s.b, t.a), o2 = orientation(s.a, s.b, t.b);
    int o3 = orientation(t.a, t.b, s.a), o4 = orientation(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(s.a, t.a, s.b)) return true;
    if (o2 == 0 && on_segment(s.a, t.b, s.b)) return true;
    if (o3 == 0 && on_segment(t.a, s.a, t.b)) return true;
    if (o4 == 0 && on_segment(t.a, s.b, t.b)) return true;
    return false;
}

}  // namespace

bool connectors_intersect(const Connector& a, const Connector& b) {
    if (!a.target || !b.target) return false;
    for (const Segment& s : polyline(a)) {
        for (const Segment& t : polyline(b)) {
            if (segments_intersect(s, t)) return true;
        }
    }
    return false;
}

std::vector<std::pair<std::size_t, std::size_t>> find_intersections(const PathEnsembleWindow& ensemble) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const auto& cs = ensemble.connectors;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size() && cs[j].source.col == cs[i].source.col; ++j) {
            if (connectors_intersect(cs[i], cs[j])) out.emplace_back(i, j);
        }
    }
    return out;
}

RenderMode parse_render_mode(const std::string& name) {
    if (name == "paths") return RenderMode::Paths;
    if (name == "lozenge") return RenderMode::Lozenge;
    throw Error(ErrorCode::ParseError, "unknown render mode '" + name + "'");
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    if (s == "-0.000") s = "0.000";
    return s;
}

struct Canvas {
    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    bool any = false;
    std::ostringstream body;

    void extend(double x, double y) {
        if (!any) {
            min_x = max_x = x;
            min_y = max_y = y;
            any = true;
        }
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }

    std::string finish() const {
        const double margin = 10.0;
        double x0 = any ? min_x - margin : 0.0, y0 = any ? min_y - margin : 0.0;
        double w = any ? max_x - min_x + 2 * margin : 1.0, h = any ? max_y - min_y + 2 * margin : 1.0;
        std::ostringstream os;
        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(x0) << " " << fmt(y0) << " "
           << fmt(w) << " " << fmt(h) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h) << "\">\n"
           << body.str() << "</svg>\n";
        return os.str();
    }
};

constexpr double kUnit = 20.0;

std::string render_paths(const PathEnsembleWindow& ens, const Configuration& config) {
    Canvas cv;
    const Window& w = ens.window;
    auto px = [](double col) { return col * kUnit; };
    auto py = [](double row) { return -row * kUnit; };
    for (const Site& s : w.sites()) cv.extend(px(s.col), py(s.row));
    cv.body << "<g fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"2\">\n";
    for (const Connector& c : ens.connectors) {
        if (!c.target) continue;
        std::vector<std::pair<double, double>> pts;
        double x0 = c.source.col, y0 = c.source.row, y1 = c.target->row;
        if (c.kind == ConnectorKind::AlphaUp || c.kind == ConnectorKind::AlphaDown) {
            pts = {{x0, y0}, {x0 + 0.5, y0}, {x0 + 0.5, y1}, {x0 + 1, y1}};
        } else {
            pts = {{x0, y0}, {x0 + 1, y1}};
        }
        cv.body << "<polyline points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            cv.body << (i ? " " : "") << fmt(px(pts[i].first)) << "," << fmt(py(pts[i].second));
        }
        cv.body << "\"/>\n";
    }
    cv.body << "</g>\n<g stroke=\"#1f1f1f\" stroke-width=\"1\">\n";
    for (const Site& s : w.sites()) {
        bool p = config.at(s);
        cv.body << "<circle cx=\"" << fmt(px(s.col)) << "\" cy=\"" << fmt(py(s.row)) << "\" r=\""
                << (p ? "4" : "2") << "\" fill=\"" << (p ? "#1f1f1f" : "#ffffff") << "\"/>\n";
    }
    cv.body << "</g>\n";
    return cv.finish();
}

std::string render_lozenges(const PathEnsembleWindow& ens, const Configuration& config) {
    bool plus = false, minus = false;
    for (LinkKind k : ens.links) {
        if (k == LinkKind::BetaPlus) {
            plus = true;
        } else if (k == LinkKind::BetaMinus) {
            minus = true;
        } else if (k != LinkKind::Identity) {
            throw Error(ErrorCode::ModeUnsupported, "lozenge mode needs beta columns only");
        }
    }
    if (plus && minus) {
        throw Error(ErrorCode::ModeUnsupported, "lozenge mode needs beta links of a single sign");
    }
    // Rows are mirrored for beta- ensembles so that every step goes up.
    const double sign = minus ? -1.0 : 1.0;
    const Window& w = ens.window;
    Canvas cv;
    const double h = std::sqrt(3.0) / 2.0;
    // Vertex j of column s on the triangular lattice; site (s, x) is the edge V(s,x)V(s,x+1).
    auto vertex = [&](double s, double j) {
        double x = s * h * kUnit;
        double y = -(j - s / 2.0) * kUnit * sign;
        cv.extend(x, y);
        return std::make_pair(x, y);
    };
    auto mirror_row = [&](long r) { return minus ? -r - 1 : r; };
    auto polygon = [&](const char* fill, std::initializer_list<std::pair<double, double>> pts) {
        std::vector<std::pair<double, double>> v;
        for (const auto& [s, j] : pts) v.push_back(vertex(s, j));
        cv.body << "<polygon fill=\"" << fill << "\" points=\"";
        for (std::size_t i = 0; i < v.size(); ++i) {
            cv.body << (i ? " " : "") << fmt(v[i].first) << "," << fmt(v[i].second);
        }
        cv.body << "\"/>\n";
    };
    cv.body << "<g stroke=\"#333333\" stroke-width=\"0.5\">\n";
    for (const Connector& c : ens.connectors) {
        if (!c.target) continue;
        double s = c.source.col;
        double x = static_cast<double>(mirror_row(c.source.row));
        double y = static_cast<double>(mirror_row(c.target->row));
        if (y == x) {
            polygon("#e8c547", {{s, x}, {s, x + 1}, {s + 1, x + 1}, {s + 1, x}});
        } else {
            polygon("#4a7ab5", {{s, x}, {s, x + 1}, {s + 1, x + 2}, {s + 1, x + 1}});
        }
    }
    for (const Site& site : w.sites()) {
        if (config.at(site)) continue;
        double s = site.col;
        double x = static_cast<double>(mirror_row(site.row));
        polygon("#c4473a", {{s, x}, {s + 1, x + 1}, {s, x + 1}, {s - 1, x}});
    }
    cv.body << "</g>\n";
    return cv.finish();
}

}  // namespace

std::string render_svg(const PathEnsembleWindow& ensemble, const Configuration& config, RenderMode mode) {
    return mode == RenderMode::Lozenge ? render_lozenges(ensemble, config) : render_paths(ensemble, config);
}

}  // namespace gp
