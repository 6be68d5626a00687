#include "gp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "gp/errors.hpp"

namespace gp {

void QuadratureSpec::validate() const {
    if (max_panels < 1) throw Error(ErrorCode::InvalidModel, "max_panels must be at least 1");
    if (!(abs_tol > 0.0)) throw Error(ErrorCode::InvalidModel, "abs_tol must be positive");
    if (nodes_per_panel < 2) {
        throw Error(ErrorCode::InvalidModel, "nodes_per_panel must be at least 2");
    }
}

namespace {

GaussRule build_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

struct Panel {
    double a, b;
    std::complex<double> whole, left, right;
    double error;
};

struct WorseFirst {
    bool operator()(const Panel& p, const Panel& q) const { return p.error < q.error; }
};

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, GaussRule> rules;
    std::lock_guard lock(mutex);
    auto it = rules.find(n);
    if (it == rules.end()) it = rules.emplace(n, build_rule(n)).first;
    return it->second;
}

QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a,
                                    double b, const QuadratureSpec& spec,
                                    int initial_panels) {
    spec.validate();
    const GaussRule& rule = gauss_legendre(spec.nodes_per_panel);
    auto apply = [&](double lo, double hi) {
        double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        std::complex<double> sum(0.0);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
        }
        return sum * half;
    };
    auto make_panel = [&](double lo, double hi, std::complex<double> whole) {
        double mid = 0.5 * (lo + hi);
        Panel p{lo, hi, whole, apply(lo, mid), apply(mid, hi), 0.0};
        p.error = std::abs(p.left + p.right - p.whole);
        return p;
    };

    std::priority_queue<Panel, std::vector<Panel>, WorseFirst> queue;
    int panels = std::clamp(initial_panels, 1, spec.max_panels);
    double total_error = 0.0;
    for (int i = 0; i < panels; ++i) {
        double lo = a + (b - a) * i / panels;
        double hi = i + 1 == panels ? b : a + (b - a) * (i + 1) / panels;
        Panel p = make_panel(lo, hi, apply(lo, hi));
        total_error += p.error;
        queue.push(p);
    }
    while (total_error > spec.abs_tol) {
        if (panels >= spec.max_panels) {
            throw Error(ErrorCode::QuadratureDiverged,
                        "error estimate " + std::to_string(total_error) + " after " +
                            std::to_string(panels) + " panels");
        }
        Panel worst = queue.top();
        queue.pop();
        double mid = 0.5 * (worst.a + worst.b);
        Panel lo = make_panel(worst.a, mid, worst.left);
        Panel hi = make_panel(mid, worst.b, worst.right);
        total_error += lo.error + hi.error - worst.error;
        queue.push(lo);
        queue.push(hi);
        ++panels;
    }

    // Recompute the sum and error from scratch to avoid drift in the running totals.
    QuadratureResult result;
    result.panels = panels;
    std::vector<Panel> all;
    all.reserve(queue.size());
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    for (const Panel& p : all) {
        result.value += p.left + p.right;
        result.error_estimate += p.error;
    }
    return result;
}

}  // namespace gp
