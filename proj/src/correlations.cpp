#include "gp/correlations.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "gp/errors.hpp"

namespace gp {

namespace {
constexpr double kClampTolerance = 1e-8;

std::string site_text(const Site& s) {
    return "(" + std::to_string(s.col) + "," + std::to_string(s.row) + ")";
}
}  // namespace

void EventSpec::validate() const {
    std::set<Site> seen;
    for (const auto* list : {&particles, &holes}) {
        for (const Site& s : *list) {
            if (!seen.insert(s).second) {
                throw Error(ErrorCode::InvalidEvent, "site " + site_text(s) + " listed twice");
            }
        }
    }
}

EventSpec event_from_configuration(const Configuration& config) {
    EventSpec ev;
    const Window& w = config.window();
    for (std::size_t i = 0; i < w.size(); ++i) {
        (config.at_index(i) ? ev.particles : ev.holes).push_back(w.site_at(i));
    }
    return ev;
}

std::vector<Site> parse_sites(const std::string& text) {
    static const std::regex site_re(R"(\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\))");
    std::vector<Site> out;
    std::string rest;
    auto begin = std::sregex_iterator(text.begin(), text.end(), site_re);
    std::size_t last = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        rest += text.substr(last, it->position() - last);
        last = it->position() + it->length();
        out.push_back(Site{std::stoi((*it)[1]), std::stol((*it)[2])});
    }
    rest += text.substr(last);
    if (rest.find_first_not_of(" ,\t") != std::string::npos) {
        throw Error(ErrorCode::ParseError, "malformed site list '" + text + "'");
    }
    return out;
}

EventMatrix build_event_matrix(const KernelContext& ctx, const EventSpec& ev) {
    ev.validate();
    std::vector<std::pair<Site, bool>> all;
    for (const Site& s : ev.particles) all.emplace_back(s, false);
    for (const Site& s : ev.holes) all.emplace_back(s, true);
    std::sort(all.begin(), all.end());

    EventMatrix m;
    const std::size_t n = all.size();
    m.matrix = CMatrix(n);
    for (const auto& [site, hole] : all) {
        m.sites.push_back(site);
        m.hole.push_back(hole);
        if (hole) m.sign = -m.sign;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m.matrix(i, j) = ctx.entry(m.sites[i], m.sites[j]);
        }
        if (m.hole[i]) m.matrix(i, i) -= 1.0;
    }
    return m;
}

double event_determinant(const KernelContext& ctx, const EventSpec& ev) {
    EventMatrix m = build_event_matrix(ctx, ev);
    return m.sign * lu_determinant(m.matrix).value.real();
}

double event_probability(const KernelContext& ctx, const EventSpec& ev) {
    double p = event_determinant(ctx, ev);
    if (p < -kClampTolerance || p > 1.0 + kClampTolerance) {
        throw Error(ErrorCode::NumericallyIndefinite,
                    "event determinant " + std::to_string(p) + " outside [0, 1]");
    }
    if (p < 0.0 || p > 1.0) {
        diagnostics().clamped_probabilities++;
        p = std::clamp(p, 0.0, 1.0);
    }
    return p;
}

WindowDistribution window_distribution(const KernelContext& ctx, const Window& window) {
    const std::size_t n = window.size();
    if (n > kMaxDistributionSites) {
        throw Error(ErrorCode::WindowTooLarge, "window has " + std::to_string(n) + " sites, cap is " +
                                                   std::to_string(kMaxDistributionSites));
    }
    WindowDistribution dist;
    dist.window = window;
    const std::uint64_t count = std::uint64_t{1} << n;
    dist.probabilities.resize(count);
    dist.min = 1.0;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        Configuration c = Configuration::from_mask(window, mask);
        double p = event_determinant(ctx, event_from_configuration(c));
        dist.probabilities[mask] = p;
        dist.total += p;
        dist.min = std::min(dist.min, p);
    }
    return dist;
}

}  // namespace gp
