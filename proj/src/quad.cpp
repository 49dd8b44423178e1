#include "rieszflow/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rieszflow/basis.hpp"
#include "rieszflow/error.hpp"

namespace rieszflow {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t order) {
    if (order < 2 || order > 64) {
        throw InvalidArgument("Gauss-Legendre order must lie in [2, 64], got " + std::to_string(order));
    }
    const std::size_t n = order;
    std::vector<double> x(n), w(n);
    const double nd = static_cast<double>(n);
    // Roots come in ± pairs; compute the positive half with Newton and mirror.
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            dp = nd * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
    return {std::move(x), std::move(w)};
}

QuadRule build_rule(double lo, double hi, std::size_t panels, std::size_t order) {
    if (!(lo < hi)) throw InvalidArgument("quadrature domain requires lo < hi");
    if (panels == 0) throw InvalidArgument("quadrature requires at least one panel");
    auto [t, tw] = gauss_legendre(order);

    QuadRule rule;
    rule.lo_ = lo;
    rule.hi_ = hi;
    rule.panels_ = panels;
    rule.order_ = order;
    rule.nodes_.reserve(panels * order);
    rule.weights_.reserve(panels * order);
    const double width = (hi - lo) / static_cast<double>(panels);
    const double half = 0.5 * width;
    for (std::size_t k = 0; k < panels; ++k) {
        const double mid = lo + (static_cast<double>(k) + 0.5) * width;
        for (std::size_t j = 0; j < order; ++j) {
            rule.nodes_.push_back(mid + half * t[j]);
            rule.weights_.push_back(half * tw[j]);
        }
    }
    return rule;
}

const QuadRule& default_rule() {
    static const QuadRule rule = build_rule(QuadSettings{});
    return rule;
}

std::vector<double> sample(const std::function<double(double)>& f, const QuadRule& rule) {
    auto nodes = rule.nodes();
    std::vector<double> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out[i] = f(nodes[i]);
        if (!std::isfinite(out[i])) throw NonFiniteSample(i, nodes[i]);
    }
    return out;
}

double inner_product(const std::function<double(double)>& f, const std::function<double(double)>& g,
                     const QuadRule& rule) {
    auto nodes = rule.nodes();
    auto w = rule.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double a = f(nodes[i]);
        const double b = g(nodes[i]);
        if (!std::isfinite(a) || !std::isfinite(b)) throw NonFiniteSample(i, nodes[i]);
        // Multiply in a fixed order so the result is symmetric in f and g.
        s += w[i] * (a * b);
    }
    return s;
}

double hermite_tail_estimate(const QuadRule& rule, std::size_t n) {
    // ∫_T^∞ γ_k² ≲ γ_k(T)² / (2T) once T is past the turning point √(2k+1).
    const double t = std::min(std::abs(rule.lo()), std::abs(rule.hi()));
    if (t <= 0.0) return 1.0;
    std::vector<double> lo_vals(n), hi_vals(n);
    hermite_all(rule.lo(), lo_vals);
    hermite_all(rule.hi(), hi_vals);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double turning = std::sqrt(2.0 * static_cast<double>(k) + 1.0);
        if (t <= turning) return 1.0;
        worst = std::max(worst, (lo_vals[k] * lo_vals[k] + hi_vals[k] * hi_vals[k]) / (2.0 * t));
    }
    return worst;
}

}  // namespace rieszflow
