#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace rieszflow {

// Composite Gauss–Legendre rule on a truncated interval [lo, hi].
// Nodes are stored panel by panel in increasing order.
class QuadRule {
public:
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] std::size_t panels() const noexcept { return panels_; }
    [[nodiscard]] std::size_t order() const noexcept { return order_; }

    friend QuadRule build_rule(double lo, double hi, std::size_t panels, std::size_t order);

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
    double lo_ = 0.0;
    double hi_ = 0.0;
    std::size_t panels_ = 0;
    std::size_t order_ = 0;
};

struct QuadSettings {
    double lo = -10.0;
    double hi = 10.0;
    std::size_t panels = 64;
    std::size_t order = 16;
};

/// Gauss–Legendre nodes and weights on [-1, 1]. order ∈ [2, 64].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t order);

/// `panels` equal subintervals of [lo, hi], `order` Gauss–Legendre nodes each.
/// Throws InvalidArgument for lo ≥ hi, panels = 0 or order outside [2, 64].
QuadRule build_rule(double lo, double hi, std::size_t panels, std::size_t order);

inline QuadRule build_rule(const QuadSettings& s) { return build_rule(s.lo, s.hi, s.panels, s.order); }

/// [-10, 10], 64 panels, order 16.
const QuadRule& default_rule();

/// Samples f at every node. Throws NonFiniteSample on the first NaN/inf.
std::vector<double> sample(const std::function<double(double)>& f, const QuadRule& rule);

/// Σ_i w_i f(x_i) g(x_i).
double inner_product(const std::function<double(double)>& f, const std::function<double(double)>& g,
                     const QuadRule& rule);

/// Rough size of the L² mass of γ_0…γ_{n-1} outside [lo, hi], from a Gaussian-tail
/// (Mills ratio) bound at the truncation points. Reported in diagnostics.
double hermite_tail_estimate(const QuadRule& rule, std::size_t n);

}  // namespace rieszflow
