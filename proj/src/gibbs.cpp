#include "gp/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>

#include <json.hpp>

#include "gp/correlations.hpp"
#include "gp/errors.hpp"

namespace gp {

using nlohmann::json;

Window BoxSpec::outer() const {
    return {box.col_lo - 1, box.col_hi + 1, box.row_lo - 1, box.row_hi + 1};
}

void BoxSpec::validate() const {
    if (box.size() == 0) throw Error(ErrorCode::InvalidEvent, "box is empty");
    if (box.size() > kMaxBoxSites) {
        throw Error(ErrorCode::BoxTooLarge, "box has " + std::to_string(box.size()) + " sites, cap is " +
                                                std::to_string(kMaxBoxSites));
    }
    auto check_rows = [&](const std::vector<long>& rows, const char* what) {
        std::set<long> seen;
        for (long r : rows) {
            if (r < box.row_lo || r > box.row_hi) {
                throw Error(ErrorCode::InvalidEvent,
                            std::string(what) + " row " + std::to_string(r) + " outside the box rows");
            }
            if (!seen.insert(r).second) {
                throw Error(ErrorCode::InvalidEvent, std::string(what) + " row " + std::to_string(r) + " repeated");
            }
        }
    };
    check_rows(entrances, "entrance");
    check_rows(exits, "exit");
    const std::size_t width = static_cast<std::size_t>(box.num_cols()) + 2;
    for (const std::string* ring : {&top, &bottom}) {
        if (ring->empty()) continue;
        if (ring->size() != width || ring->find_first_not_of("01") != std::string::npos) {
            throw Error(ErrorCode::InvalidEvent, "ring rows need " + std::to_string(width) + " bits of 0/1");
        }
    }
}

BoxSpec parse_box_spec(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
        BoxSpec b;
        b.box.col_lo = doc.at("cols").at(0).get<int>();
        b.box.col_hi = doc.at("cols").at(1).get<int>();
        b.box.row_lo = doc.at("rows").at(0).get<long>();
        b.box.row_hi = doc.at("rows").at(1).get<long>();
        b.entrances = doc.value("entrances", std::vector<long>{});
        b.exits = doc.value("exits", std::vector<long>{});
        b.top = doc.value("top", std::string{});
        b.bottom = doc.value("bottom", std::string{});
        b.validate();
        return b;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

std::string box_spec_to_json(const BoxSpec& b) {
    json doc;
    doc["cols"] = {b.box.col_lo, b.box.col_hi};
    doc["rows"] = {b.box.row_lo, b.box.row_hi};
    doc["entrances"] = b.entrances;
    doc["exits"] = b.exits;
    if (!b.top.empty()) doc["top"] = b.top;
    if (!b.bottom.empty()) doc["bottom"] = b.bottom;
    return doc.dump();
}

std::pair<std::string, std::string> default_ring(const BoxSpec& b, const Model& model) {
    const int lo = b.box.col_lo - 1, hi = b.box.col_hi + 1;
    const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
    std::string top(width, '0'), bottom(width, '0');
    // The last column is only a link target; pick values that keep paths
    // from running along the ring into the box.
    switch (link_kind(model, hi - 1)) {
        case LinkKind::AlphaPlus:
        case LinkKind::AlphaMinus: top.back() = '1'; bottom.back() = '1'; break;
        case LinkKind::Identity: bottom.back() = '1'; break;
        default: break;
    }
    // Source columns: alpha links need particles on both ring rows so that the
    // partial intervals at the edges stay inside the collar; beta links need
    // holes so that the strings at the edges end inside the collar. Identity
    // links copy their target.
    for (int c = hi - 1; c >= lo; --c) {
        std::size_t i = static_cast<std::size_t>(c - lo);
        switch (link_kind(model, c)) {
            case LinkKind::AlphaPlus:
            case LinkKind::AlphaMinus: top[i] = '1'; bottom[i] = '1'; break;
            case LinkKind::BetaPlus:
            case LinkKind::BetaMinus: top[i] = '0'; bottom[i] = '0'; break;
            case LinkKind::Identity: top[i] = top[i + 1]; bottom[i] = bottom[i + 1]; break;
        }
    }
    return {top, bottom};
}

std::vector<Site> collar_sites(const BoxSpec& b) {
    std::vector<Site> out;
    for (const Site& s : b.outer().sites()) {
        if (!b.box.contains(s)) out.push_back(s);
    }
    return out;
}

Configuration collar_configuration(const BoxSpec& b, const Model& model) {
    b.validate();
    std::string top = b.top, bottom = b.bottom;
    if (top.empty() || bottom.empty()) {
        auto [dt, db] = default_ring(b, model);
        if (top.empty()) top = dt;
        if (bottom.empty()) bottom = db;
    }
    const Window w = b.outer();
    Configuration c(w);
    for (int col = w.col_lo; col <= w.col_hi; ++col) {
        std::size_t i = static_cast<std::size_t>(col - w.col_lo);
        c.set({col, w.row_hi}, top[i] == '1');
        c.set({col, w.row_lo}, bottom[i] == '1');
    }
    for (long r : b.entrances) c.set({w.col_lo, r}, true);
    for (long r : b.exits) c.set({w.col_hi, r}, true);
    return c;
}

namespace {

std::vector<std::uint8_t> slice(const Configuration& c, int col) {
    std::vector<std::uint8_t> out;
    const Window& w = c.window();
    for (long r = w.row_lo; r <= w.row_hi; ++r) out.push_back(c.at({col, r}));
    return out;
}

}  // namespace

std::vector<PathTuple> enumerate_box(const BoxSpec& b, const Model& model) {
    Configuration outer = collar_configuration(b, model);
    const Window& w = outer.window();
    const Window& box = b.box;
    const long rows = box.num_rows();
    std::vector<LinkKind> kinds;
    for (int c = w.col_lo; c < w.col_hi; ++c) kinds.push_back(link_kind(model, c));

    std::vector<PathTuple> out;
    std::function<void(int)> dfs = [&](int col) {
        const std::size_t li = static_cast<std::size_t>(col - 1 - w.col_lo);
        if (col > box.col_hi) {
            LinkResult last = link_columns(slice(outer, col - 1), slice(outer, col), w.row_lo, kinds[li]);
            if (!last.violations.empty()) return;
            std::vector<std::string> violations;
            PathTuple t;
            t.outer = outer;
            t.paths = extract_paths(outer, model, violations);
            if (!violations.empty()) return;
            t.inner = Configuration(box);
            for (const Site& s : box.sites()) t.inner.set(s, outer.at(s));
            t.action = total_action(t.paths);
            for (const Connector& c : t.paths.connectors) {
                if (c.truncated() && box.contains(c.source)) t.pinned = false;
            }
            out.push_back(std::move(t));
            return;
        }
        const std::vector<std::uint8_t> prev = slice(outer, col - 1);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rows); ++mask) {
            for (long r = 0; r < rows; ++r) outer.set({col, box.row_lo + r}, (mask >> r) & 1U);
            LinkResult lr = link_columns(prev, slice(outer, col), w.row_lo, kinds[li]);
            if (lr.violations.empty()) dfs(col + 1);
        }
        for (long r = 0; r < rows; ++r) outer.set({col, box.row_lo + r}, false);
    };
    dfs(box.col_lo);
    return out;
}

std::vector<double> gibbs_conditional(const std::vector<PathTuple>& tuples) {
    if (tuples.empty()) throw Error(ErrorCode::EmptyEnsemble, "no path tuples in the box");
    double top = -INFINITY;
    for (const PathTuple& t : tuples) top = std::max(top, t.action);
    std::vector<double> p;
    double z = 0.0;
    for (const PathTuple& t : tuples) {
        p.push_back(std::exp(t.action - top));
        z += p.back();
    }
    for (double& v : p) v /= z;
    return p;
}

DeterminantalConditional determinantal_conditional(const KernelContext& ctx, const BoxSpec& b,
                                                   const std::vector<PathTuple>& tuples) {
    Configuration collar = collar_configuration(b, ctx.model());
    EventSpec ev;
    for (const Site& s : collar_sites(b)) (collar.at(s) ? ev.particles : ev.holes).push_back(s);
    DeterminantalConditional out;
    out.collar_probability = event_probability(ctx, ev);
    if (out.collar_probability < 1e-12) {
        throw Error(ErrorCode::NullConditioningEvent,
                    "collar configuration has probability " + std::to_string(out.collar_probability));
    }
    if (tuples.empty()) throw Error(ErrorCode::EmptyEnsemble, "no path tuples in the box");
    double sum = 0.0;
    for (const PathTuple& t : tuples) {
        double p = event_probability(ctx, event_from_configuration(t.outer)) / out.collar_probability;
        out.probabilities.push_back(p);
        sum += p;
    }
    out.leaked = 1.0 - sum;
    if (sum <= 0.0) {
        throw Error(ErrorCode::NullConditioningEvent, "enumerated tuples carry no conditional mass");
    }
    for (double& p : out.probabilities) p /= sum;
    return out;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw Error(ErrorCode::InvalidEvent, "distributions differ in size");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

std::vector<std::pair<std::size_t, std::size_t>> move_edges(const std::vector<PathTuple>& tuples) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const auto& a = tuples[i].inner;
        for (std::size_t j = i + 1; j < tuples.size(); ++j) {
            const auto& bb = tuples[j].inner;
            std::vector<Site> diff;
            for (std::size_t k = 0; k < a.values().size() && diff.size() <= 2; ++k) {
                if (a.at_index(k) != bb.at_index(k)) diff.push_back(a.window().site_at(k));
            }
            if (diff.size() == 2 && diff[0].col == diff[1].col && std::abs(diff[0].row - diff[1].row) == 1) {
                edges.emplace_back(i, j);
            }
        }
    }
    return edges;
}

bool move_graph_connected(const std::vector<PathTuple>& tuples) {
    if (tuples.size() <= 1) return true;
    std::vector<std::vector<std::size_t>> adj(tuples.size());
    for (auto [i, j] : move_edges(tuples)) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<bool> seen(tuples.size(), false);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!q.empty()) {
        std::size_t v = q.front();
        q.pop();
        for (std::size_t u : adj[v]) {
            if (!seen[u]) {
                seen[u] = true;
                ++count;
                q.push(u);
            }
        }
    }
    return count == tuples.size();
}

GibbsReport gibbs_check(const KernelContext& ctx, const BoxSpec& b) {
    GibbsReport r;
    std::vector<PathTuple> tuples = enumerate_box(b, ctx.model());
    r.tuples = tuples.size();
    if (tuples.empty()) throw Error(ErrorCode::EmptyEnsemble, "no path tuples in the box");
    for (const PathTuple& t : tuples) {
        r.partition_function += std::exp(t.action);
        r.pinned = r.pinned && t.pinned;
        r.inner_bits.push_back(t.inner.bits());
        r.actions.push_back(t.action);
    }
    r.gibbs = gibbs_conditional(tuples);
    DeterminantalConditional d = determinantal_conditional(ctx, b, tuples);
    r.determinantal = d.probabilities;
    r.leaked = d.leaked;
    r.collar_probability = d.collar_probability;
    r.total_variation = total_variation(r.gibbs, r.determinantal);
    r.connected = move_graph_connected(tuples);
    for (auto [i, j] : move_edges(tuples)) {
        double expected = std::exp(tuples[i].action - tuples[j].action);
        double observed = r.determinantal[i] / r.determinantal[j];
        r.max_move_ratio_error = std::max(r.max_move_ratio_error, std::abs(observed / expected - 1.0));
    }
    return r;
}

std::string gibbs_report_to_json(const BoxSpec& b, const GibbsReport& r) {
    json doc;
    doc["box"] = json::parse(box_spec_to_json(b));
    doc["tuples"] = r.tuples;
    doc["partition_function"] = r.partition_function;
    doc["total_variation"] = r.total_variation;
    doc["leaked"] = r.leaked;
    doc["collar_probability"] = r.collar_probability;
    doc["connected"] = r.connected;
    doc["pinned"] = r.pinned;
    doc["max_move_ratio_error"] = r.max_move_ratio_error;
    json rows = json::array();
    for (std::size_t i = 0; i < r.tuples; ++i) {
        rows.push_back({{"bits", r.inner_bits[i]},
                        {"action", r.actions[i]},
                        {"gibbs", r.gibbs[i]},
                        {"determinantal", r.determinantal[i]}});
    }
    doc["entries"] = rows;
    return doc.dump(2) + "\n";
}

}  // namespace gp
