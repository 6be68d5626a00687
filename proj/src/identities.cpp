#include "gp/identities.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "gp/errors.hpp"

namespace gp {

namespace {

constexpr double kLinearTolerance = 1e-10;
constexpr double kDeterminantTolerance = 1e-10;
constexpr double kEnvironmentTolerance = 1e-9;
constexpr double kInterlacingSumTolerance = 1e-8;
constexpr double kForbiddenTolerance = 1e-9;

double delta(bool condition) { return condition ? 1.0 : 0.0; }

const PsiFactor& single_factor(const KernelContext& ctx, int k, const std::string& what) {
    const auto& factors = ctx.model().sequence.at(k);
    if (factors.size() != 1) {
        throw Error(ErrorCode::WrongFactorKind,
                    "column " + std::to_string(k) + " must carry a single " + what + " factor");
    }
    return factors.front();
}

double effective_param(const KernelContext& ctx, int k) {
    return ctx.effective_sequence().at(k).front().param;
}

std::string describe(const KernelContext& ctx, int k) {
    std::ostringstream os;
    os.precision(6);
    os << "z=(" << ctx.model().z.modulus << "," << ctx.model().z.argument << ")";
    for (int c : {k, k + 1}) {
        for (const PsiFactor& f : ctx.model().sequence.at(c)) {
            os << " psi_" << c << "=" << factor_kind_name(f.kind) << "(" << f.param << ")";
        }
    }
    return os.str();
}

IdentityReport relation_report(const std::string& name, const std::string& params,
                               const KernelContext& ctx, const std::vector<LinearRelation>& rels) {
    IdentityReport r;
    r.identity = name;
    r.parameters = params;
    r.tolerance = kLinearTolerance;
    for (std::size_t i = 0; i < rels.size(); ++i) {
        const LinearRelation& rel = rels[i];
        cplx first = rel.terms.front().coef * ctx.eval(rel.terms.front().sigma, rel.terms.front().d,
                                                       rel.terms.front().tau, 0);
        cplx total = rel.evaluate(ctx);
        if (i == 0) {
            r.lhs = first;
            r.rhs = first - total;
        }
        r.residual = std::max(r.residual, std::abs(total));
    }
    r.pass = r.residual <= r.tolerance;
    return r;
}

EventSpec with_environment(EventSpec ev, const std::vector<Site>& v) {
    ev.particles.insert(ev.particles.end(), v.begin(), v.end());
    return ev;
}

}  // namespace

cplx LinearRelation::evaluate(const KernelContext& ctx) const {
    cplx sum = constant;
    for (const KernelTerm& t : terms) sum += t.coef * ctx.eval(t.sigma, t.d, t.tau, 0);
    return sum;
}

LinearRelation LinearRelation::normalized() const {
    LinearRelation out = *this;
    if (terms.empty()) return out;
    cplx lead = terms.front().coef;
    for (KernelTerm& t : out.terms) t.coef /= lead;
    out.constant /= lead;
    return out;
}

std::string LinearRelation::to_string() const {
    std::ostringstream os;
    os.precision(6);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const KernelTerm& t = terms[i];
        double c = t.coef.real();
        os << (i == 0 ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
        if (std::abs(std::abs(c) - 1.0) > 1e-15) os << std::abs(c) << "*";
        os << "K[" << t.sigma << "," << t.tau << "](" << t.d << ")";
    }
    double c = constant.real();
    if (c != 0.0) os << (c < 0 ? " - " : " + ") << std::abs(c);
    os << " = 0";
    return os.str();
}

LinearRelation plus_relation(FactorKind kind, double p, int k, RelationSide side, int free_index,
                             long d) {
    LinearRelation rel;
    if (kind == FactorKind::AlphaPlus) {
        if (side == RelationSide::Row) {
            int tau = free_index;
            rel.terms = {{1.0, k - 1, tau, d}, {-1.0, k, tau, d}, {p, k, tau, d - 1}};
            rel.constant = -delta(d == 0 && tau == k - 1);
        } else {
            int sigma = free_index;
            rel.terms = {{1.0, sigma, k, d}, {-1.0, sigma, k - 1, d}, {p, sigma, k - 1, d - 1}};
            rel.constant = -delta(sigma == k && d == 0);
        }
    } else if (kind == FactorKind::BetaPlus) {
        if (side == RelationSide::Row) {
            int tau = free_index;
            rel.terms = {{1.0, k, tau, d}, {-1.0, k - 1, tau, d}, {-p, k - 1, tau, d - 1}};
            rel.constant = delta(d == 0 && tau == k - 1) + p * delta(d == 1 && tau == k - 1);
        } else {
            int sigma = free_index;
            rel.terms = {{1.0, sigma, k - 1, d}, {-p, sigma, k, d - 1}, {-1.0, sigma, k, d}};
            rel.constant = p * delta(sigma == k && d == 1) + delta(sigma == k && d == 0);
        }
    } else {
        throw Error(ErrorCode::WrongFactorKind, "plus relations need AlphaPlus or BetaPlus");
    }
    return rel;
}

LinearRelation minus_relation(FactorKind kind, double p, int k, RelationSide side, int free_index,
                              long d) {
    FactorKind plus;
    int n;
    double c;
    if (kind == FactorKind::AlphaMinus) {
        // (1 - p/u)^{-1} = -(u/p) (1 - u/p)^{-1}
        plus = FactorKind::AlphaPlus;
        n = 1;
        c = -1.0 / p;
    } else if (kind == FactorKind::BetaMinus) {
        // 1 + p/u = (p/u) (1 + u/p)
        plus = FactorKind::BetaPlus;
        n = -1;
        c = p;
    } else {
        throw Error(ErrorCode::WrongFactorKind, "minus relations need AlphaMinus or BetaMinus");
    }
    auto s = [&](int m) { return m >= k ? n : 0; };
    auto g = [&](int m) { return m >= k ? c : 1.0; };

    // With psi_k = c u^n psi'_k the swapped kernel satisfies
    //   K'_{sigma,tau}(e) = g(tau)/g(sigma) K_{sigma,tau}(e + s(sigma) - s(tau)).
    auto pull_back = [&](long d_swapped) {
        LinearRelation swapped = plus_relation(plus, 1.0 / p, k, side, free_index, d_swapped);
        LinearRelation rel;
        rel.constant = swapped.constant;
        for (const KernelTerm& t : swapped.terms) {
            rel.terms.push_back(
                {t.coef * g(t.tau) / g(t.sigma), t.sigma, t.tau, t.d + s(t.sigma) - s(t.tau)});
        }
        return rel;
    };
    // Any displacement of the swapped relation gives a valid relation; pick the
    // one whose smallest displacement is d.
    LinearRelation trial = pull_back(d);
    long lowest = trial.terms.front().d;
    for (const KernelTerm& t : trial.terms) lowest = std::min(lowest, t.d);
    return pull_back(2 * d - lowest).normalized();
}

IdentityReport check_linear_relation_alpha(const KernelContext& ctx, int k, int tau, long d) {
    const PsiFactor& f = single_factor(ctx, k, "AlphaPlus");
    if (f.kind != FactorKind::AlphaPlus) {
        throw Error(ErrorCode::WrongFactorKind, "column " + std::to_string(k) + " is not AlphaPlus");
    }
    double a = effective_param(ctx, k);
    return relation_report(
        "linear_alpha", describe(ctx, k) + " tau=" + std::to_string(tau) + " d=" + std::to_string(d),
        ctx,
        {plus_relation(FactorKind::AlphaPlus, a, k, RelationSide::Row, tau, d),
         plus_relation(FactorKind::AlphaPlus, a, k, RelationSide::Column, tau, d)});
}

IdentityReport check_linear_relation_beta(const KernelContext& ctx, int k, int tau, long d) {
    const PsiFactor& f = single_factor(ctx, k, "BetaPlus");
    if (f.kind != FactorKind::BetaPlus) {
        throw Error(ErrorCode::WrongFactorKind, "column " + std::to_string(k) + " is not BetaPlus");
    }
    double b = effective_param(ctx, k);
    return relation_report(
        "linear_beta", describe(ctx, k) + " tau=" + std::to_string(tau) + " d=" + std::to_string(d),
        ctx,
        {plus_relation(FactorKind::BetaPlus, b, k, RelationSide::Row, tau, d),
         plus_relation(FactorKind::BetaPlus, b, k, RelationSide::Column, tau, d)});
}

IdentityReport check_linear_relation_minus(const KernelContext& ctx, int k, int tau, long d) {
    const PsiFactor& f = single_factor(ctx, k, "AlphaMinus or BetaMinus");
    if (f.kind != FactorKind::AlphaMinus && f.kind != FactorKind::BetaMinus) {
        throw Error(ErrorCode::WrongFactorKind,
                    "column " + std::to_string(k) + " is not AlphaMinus or BetaMinus");
    }
    double p = effective_param(ctx, k);
    LinearRelation row = minus_relation(f.kind, p, k, RelationSide::Row, tau, d);
    LinearRelation col = minus_relation(f.kind, p, k, RelationSide::Column, tau, d);
    return relation_report("linear_minus",
                           describe(ctx, k) + " tau=" + std::to_string(tau) + " d=" +
                               std::to_string(d) + " row: " + row.to_string() +
                               " column: " + col.to_string(),
                           ctx, {row, col});
}

const char* vanishing_case_name(VanishingCase c) {
    switch (c) {
        case VanishingCase::AlphaTop: return "AlphaTop";
        case VanishingCase::AlphaBottom: return "AlphaBottom";
        case VanishingCase::BetaTop: return "BetaTop";
        case VanishingCase::BetaBottom: return "BetaBottom";
    }
    return "Unknown";
}

EventSpec vanishing_pattern(VanishingCase c, FactorKind kind, int k, long x) {
    struct Cell {
        int dc;
        int dr;
        bool particle;
    };
    std::vector<Cell> cells;
    switch (c) {
        case VanishingCase::AlphaTop: cells = {{0, 0, true}, {0, 1, true}, {1, 0, false}}; break;
        case VanishingCase::AlphaBottom: cells = {{1, 0, true}, {1, 1, true}, {0, 1, false}}; break;
        case VanishingCase::BetaTop: cells = {{0, 0, false}, {0, 1, false}, {1, 1, true}}; break;
        case VanishingCase::BetaBottom: cells = {{0, 0, true}, {1, 0, false}, {1, 1, false}}; break;
    }
    bool alpha_case = c == VanishingCase::AlphaTop || c == VanishingCase::AlphaBottom;
    if (alpha_case != is_alpha(kind) || !(is_alpha(kind) || is_beta(kind))) {
        throw Error(ErrorCode::WrongFactorKind,
                    std::string(vanishing_case_name(c)) + " does not apply to " + factor_kind_name(kind));
    }
    bool mirror = !is_plus(kind);
    EventSpec ev;
    for (const Cell& cell : cells) {
        Site s{k - 1 + cell.dc, x + (mirror ? 1 - cell.dr : cell.dr)};
        (cell.particle ? ev.particles : ev.holes).push_back(s);
    }
    return ev;
}

IdentityReport check_interlacing_vanishing(const KernelContext& ctx, VanishingCase c, int k, long x) {
    const PsiFactor& f = single_factor(ctx, k, vanishing_case_name(c));
    EventSpec ev = vanishing_pattern(c, f.kind, k, x);
    EventMatrix m = build_event_matrix(ctx, ev);
    double det = m.sign * lu_determinant(m.matrix).value.real();
    IdentityReport r;
    r.identity = std::string("vanishing_") + vanishing_case_name(c);
    r.parameters = describe(ctx, k) + " x=" + std::to_string(x);
    r.lhs = det;
    r.rhs = 0.0;
    r.residual = std::abs(det);
    r.tolerance = kDeterminantTolerance * std::max(1.0, m.matrix.max_abs());
    r.pass = r.residual <= r.tolerance;
    return r;
}

IdentityReport check_general_interlacing(const KernelContext& ctx, int k, int m, long x) {
    if (m < 1 || m > 5) throw Error(ErrorCode::InvalidEvent, "string length must be in [1, 5]");
    const PsiFactor& f = single_factor(ctx, k, "alpha or beta");
    if (!is_alpha(f.kind) && !is_beta(f.kind)) {
        throw Error(ErrorCode::WrongFactorKind, "general interlacing needs an alpha or beta factor");
    }
    const bool alpha = is_alpha(f.kind);
    EventSpec source;
    for (long r = x; r <= x + m; ++r) {
        bool end = r == x || r == x + m;
        (end == alpha ? source.particles : source.holes).push_back({k - 1, r});
    }
    // Target rows: [x, x+m) for AlphaPlus and BetaMinus, (x, x+m] for the others.
    long lo = (f.kind == FactorKind::AlphaPlus || f.kind == FactorKind::BetaMinus) ? x : x + 1;
    double p_source = event_determinant(ctx, source);
    double admissible = 0.0, worst_forbidden = 0.0;
    for (unsigned mask = 0; mask < (1U << m); ++mask) {
        EventSpec ev = source;
        int marked = 0;
        for (int j = 0; j < m; ++j) {
            bool particle = (mask >> j) & 1U;
            // Marked sites are particles for alpha strings and holes for beta strings.
            if (particle == alpha) ++marked;
            (particle ? ev.particles : ev.holes).push_back({k, lo + j});
        }
        double p = event_determinant(ctx, ev);
        if (marked == 1) {
            admissible += p;
        } else {
            worst_forbidden = std::max(worst_forbidden, std::abs(p));
        }
    }
    IdentityReport r;
    r.identity = "general_interlacing";
    std::ostringstream os;
    os << describe(ctx, k) << " m=" << m << " x=" << x << " max_forbidden=" << worst_forbidden;
    r.parameters = os.str();
    r.lhs = p_source;
    r.rhs = admissible;
    r.residual = std::abs(p_source - admissible);
    r.tolerance = kInterlacingSumTolerance;
    r.pass = r.residual <= r.tolerance && worst_forbidden <= kForbiddenTolerance;
    return r;
}

const char* move_pair_name(MovePair p) {
    switch (p) {
        case MovePair::BetaBeta: return "BetaBeta";
        case MovePair::AlphaAlpha: return "AlphaAlpha";
        case MovePair::BetaAlpha: return "BetaAlpha";
        case MovePair::AlphaBeta: return "AlphaBeta";
    }
    return "Unknown";
}

MoveEvents move_events(const KernelContext& ctx, MovePair pair, int k, long x) {
    FactorKind first = (pair == MovePair::BetaBeta || pair == MovePair::BetaAlpha) ? FactorKind::BetaPlus
                                                                                    : FactorKind::AlphaPlus;
    FactorKind second = (pair == MovePair::BetaBeta || pair == MovePair::AlphaBeta) ? FactorKind::BetaPlus
                                                                                     : FactorKind::AlphaPlus;
    const PsiFactor& f1 = single_factor(ctx, k, factor_kind_name(first));
    const PsiFactor& f2 = single_factor(ctx, k + 1, factor_kind_name(second));
    if (f1.kind != first || f2.kind != second) {
        throw Error(ErrorCode::WrongFactorKind, std::string(move_pair_name(pair)) + " needs " +
                                                    factor_kind_name(first) + " at column " +
                                                    std::to_string(k) + " and " +
                                                    factor_kind_name(second) + " at column " +
                                                    std::to_string(k + 1));
    }
    const int c0 = k - 1, c1 = k, c2 = k + 1;
    MoveEvents mv;
    mv.weight_a = effective_param(ctx, k);
    mv.weight_b = effective_param(ctx, k + 1);
    switch (pair) {
        case MovePair::BetaBeta:
            mv.a = {{{c0, x}, {c1, x}, {c2, x + 1}}, {{c1, x + 1}}};
            mv.b = {{{c0, x}, {c1, x + 1}, {c2, x + 1}}, {{c1, x}}};
            break;
        case MovePair::AlphaAlpha:
            mv.a = {{{c1, x}}, {{c0, x + 1}, {c2, x}}};
            mv.b = {{{c1, x + 1}}, {{c0, x + 1}, {c2, x}}};
            break;
        case MovePair::BetaAlpha:
            mv.a = {{{c0, x}, {c1, x}}, {{c2, x}}};
            mv.b = {{{c0, x}, {c1, x + 1}}, {{c2, x}}};
            break;
        case MovePair::AlphaBeta:
            mv.a = {{{c1, x}, {c2, x + 1}}, {{c0, x + 1}}};
            mv.b = {{{c1, x + 1}, {c2, x + 1}}, {{c0, x + 1}}};
            break;
    }
    return mv;
}

IdentityReport check_move_in_environment(const KernelContext& ctx, MovePair pair, int k,
                                         const std::vector<Site>& environment, long x) {
    MoveEvents mv = move_events(ctx, pair, k, x);
    std::set<Site> window;
    for (const EventSpec* ev : {&mv.a, &mv.b}) {
        window.insert(ev->particles.begin(), ev->particles.end());
        window.insert(ev->holes.begin(), ev->holes.end());
    }
    for (const Site& s : environment) {
        if (window.count(s)) {
            throw Error(ErrorCode::OverlapError, "environment site (" + std::to_string(s.col) + "," +
                                                     std::to_string(s.row) +
                                                     ") overlaps the move window");
        }
    }
    double pa = event_determinant(ctx, with_environment(mv.a, environment));
    double pb = event_determinant(ctx, with_environment(mv.b, environment));
    IdentityReport r;
    r.identity = environment.empty() ? std::string("move_") + move_pair_name(pair)
                                     : std::string("move_env_") + move_pair_name(pair);
    std::ostringstream os;
    os << describe(ctx, k) << " x=" << x << " V={";
    for (std::size_t i = 0; i < environment.size(); ++i) {
        os << (i ? "," : "") << "(" << environment[i].col << "," << environment[i].row << ")";
    }
    os << "}";
    r.parameters = os.str();
    r.lhs = mv.weight_a * pa;
    r.rhs = mv.weight_b * pb;
    r.residual = std::abs(r.lhs - r.rhs);
    r.tolerance = environment.empty() ? kDeterminantTolerance : kEnvironmentTolerance;
    r.pass = r.residual <= r.tolerance;
    return r;
}

IdentityReport check_move_identity(const KernelContext& ctx, MovePair pair, int k, long x) {
    return check_move_in_environment(ctx, pair, k, {}, x);
}

IdentitySuite parse_identity_suite(const std::string& name) {
    if (name == "all") return IdentitySuite::All;
    if (name == "linear") return IdentitySuite::Linear;
    if (name == "interlacing") return IdentitySuite::Interlacing;
    if (name == "moves") return IdentitySuite::Moves;
    if (name == "environment") return IdentitySuite::Environment;
    throw Error(ErrorCode::ParseError, "unknown suite '" + name + "'");
}

std::vector<IdentityReport> run_identity_suite(const KernelContext& ctx, IdentitySuite suite,
                                               int sweeps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform_int = [&](long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(rng);
    };
    auto wants = [&](IdentitySuite s) { return suite == IdentitySuite::All || suite == s; };
    std::vector<IdentityReport> out;

    auto single_kind = [&](int k, FactorKind& kind) {
        const auto& fs = ctx.model().sequence.at(k);
        if (fs.size() != 1 || is_gamma(fs.front().kind)) return false;
        kind = fs.front().kind;
        return true;
    };

    for (const auto& [k, factors] : ctx.model().sequence.columns()) {
        FactorKind kind;
        if (!single_kind(k, kind)) continue;

        if (wants(IdentitySuite::Linear)) {
            std::vector<std::pair<int, long>> cases{{k - 1, 0}, {k - 1, 1}, {k, 0}};
            for (int i = 0; i < sweeps; ++i) cases.push_back({static_cast<int>(uniform_int(k - 2, k + 1)), uniform_int(-3, 3)});
            for (const auto& [tau, d] : cases) {
                if (kind == FactorKind::AlphaPlus) {
                    out.push_back(check_linear_relation_alpha(ctx, k, tau, d));
                } else if (kind == FactorKind::BetaPlus) {
                    out.push_back(check_linear_relation_beta(ctx, k, tau, d));
                } else {
                    out.push_back(check_linear_relation_minus(ctx, k, tau, d));
                }
            }
        }
        if (wants(IdentitySuite::Interlacing)) {
            std::vector<VanishingCase> cases =
                is_alpha(kind) ? std::vector{VanishingCase::AlphaTop, VanishingCase::AlphaBottom}
                               : std::vector{VanishingCase::BetaTop, VanishingCase::BetaBottom};
            for (VanishingCase c : cases) {
                out.push_back(check_interlacing_vanishing(ctx, c, k, uniform_int(-3, 3)));
            }
            for (int m = 1; m <= 5; ++m) {
                out.push_back(check_general_interlacing(ctx, k, m, uniform_int(-3, 3)));
            }
        }

        FactorKind next;
        if (!single_kind(k + 1, next) || !is_plus(kind) || !is_plus(next)) continue;
        MovePair pair = is_beta(kind) ? (is_beta(next) ? MovePair::BetaBeta : MovePair::BetaAlpha)
                                      : (is_beta(next) ? MovePair::AlphaBeta : MovePair::AlphaAlpha);
        if (wants(IdentitySuite::Moves)) {
            for (int i = 0; i < std::max(1, sweeps); ++i) {
                out.push_back(check_move_identity(ctx, pair, k, uniform_int(-3, 3)));
            }
        }
        if (wants(IdentitySuite::Environment)) {
            for (int i = 0; i < std::max(1, sweeps); ++i) {
                long x = uniform_int(-3, 3);
                MoveEvents mv = move_events(ctx, pair, k, x);
                std::set<Site> used;
                for (const EventSpec* ev : {&mv.a, &mv.b}) {
                    used.insert(ev->particles.begin(), ev->particles.end());
                    used.insert(ev->holes.begin(), ev->holes.end());
                }
                std::vector<Site> env;
                int size = static_cast<int>(uniform_int(1, 2));
                while (static_cast<int>(env.size()) < size) {
                    Site s{static_cast<int>(uniform_int(k - 2, k + 2)), uniform_int(x - 3, x + 4)};
                    if (used.insert(s).second) env.push_back(s);
                }
                out.push_back(check_move_in_environment(ctx, pair, k, env, x));
            }
        }
    }
    return out;
}

}  // namespace gp
