#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rieszflow/basis.hpp"
#include "rieszflow/maps.hpp"
#include "rieszflow/operators.hpp"
#include "rieszflow/quad.hpp"
#include "rieszflow/target.hpp"

namespace rieszflow {

// f ≈ Σ_n c_n φ_n with φ_n = γ_n ∘ h and c_n = ⟨f, φ̃_n⟩, φ̃_n = γ_n ∘ h · h'.
struct Expansion {
    std::vector<double> coefficients;
    PerturbedBasis basis;  // Composition flavor
    double l2_error = 0.0;
    QuadSettings rule;
};

Expansion expand(const TargetFn& f, const MapSpec& map, const BasisSpec& base, std::size_t count,
                 const QuadRule& rule);

double reconstruct(const Expansion& e, double x);

/// (N, l2_error) for each N in `counts` (strictly increasing).
std::vector<std::pair<std::size_t, double>> convergence_curve(const TargetFn& f, const MapSpec& map,
                                                              const BasisSpec& base,
                                                              std::span<const std::size_t> counts,
                                                              const QuadRule& rule);

// The expansion error as a function of the map parameters, with the target
// sampled once on the rule.
class ExpansionObjective {
public:
    ExpansionObjective(const TargetFn& f, std::size_t count, const QuadRule& rule);

    [[nodiscard]] std::size_t count() const noexcept { return count_; }

    /// ‖f − Σ c_n φ_n‖ under the rule, clamped at 0.
    [[nodiscard]] double error(const MapSpec& map) const;

    /// Error and its exact gradient with respect to map.parameters(), by
    /// forward-mode differentiation of h and h' and the chain rule through
    /// the dual-coefficient expansion.
    [[nodiscard]] std::pair<double, std::vector<double>> error_and_gradient(const MapSpec& map) const;

    /// Central differences of error() with the given step.
    [[nodiscard]] std::vector<double> finite_difference_gradient(const MapSpec& map, double step) const;

private:
    std::size_t count_;
    const QuadRule* rule_;
    std::vector<double> f_;
};

enum class GradientMode { Analytic, CentralFiniteDifference };

struct OptConfig {
    std::size_t iterations = 2000;
    double learning_rate = 1e-2;
    GradientMode gradient = GradientMode::Analytic;
    double fd_step = 1e-5;
    std::uint64_t seed = 0;
    std::size_t count = 10;
    /// Affine scales are kept at or above this floor after each step.
    double alpha_floor = 1e-3;
};

struct TracePoint {
    std::size_t iter = 0;
    double l2_error = 0.0;  // error of the iterate
    double best = 0.0;      // best error seen up to and including this iterate
};

struct OptResult {
    MapSpec map;  // best-seen parameters
    std::vector<TracePoint> trace;
    double initial_error = 0.0;
    double best_error = 0.0;
};

/// Adam on all map parameters; residual nets are re-constrained and affine
/// scales floored after every step. Throws Divergence on a non-finite error.
OptResult optimize_map(const TargetFn& f, const BasisSpec& base, const MapSpec& initial, const OptConfig& cfg,
                       const QuadRule& rule);

/// Example-2 template: residual block (1 → 8 → 1, tanh, L = 0.9) followed by
/// an affine block α = 1, β = 0, weights drawn from `seed`.
MapSpec default_flow_template(std::uint64_t seed);

}  // namespace rieszflow
