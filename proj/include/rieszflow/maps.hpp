#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "rieszflow/dual.hpp"
#include "rieszflow/lipnet.hpp"

namespace rieszflow {

/// x ↦ αx + β with α > 0.
struct AffineBlock {
    double alpha = 1.0;
    double beta = 0.0;
};

/// x ↦ x + NN(x) with Lip(NN) ≤ L < 1.
struct ResidualBlock {
    LipMlp net;
};

using Block = std::variant<AffineBlock, ResidualBlock>;

// Chain of bijective blocks. blocks()[0] acts on the input first, so the map
// α(x + NN(x)) + β is {ResidualBlock, AffineBlock}.
class MapSpec {
public:
    MapSpec() = default;
    explicit MapSpec(std::vector<Block> blocks, std::size_t dimension = 1);

    static MapSpec identity() { return MapSpec{}; }
    static MapSpec affine(double alpha, double beta) { return MapSpec({AffineBlock{alpha, beta}}); }
    static MapSpec shift(double a) { return affine(1.0, -a); }
    static MapSpec residual(LipMlp net) { return MapSpec({ResidualBlock{std::move(net)}}); }

    [[nodiscard]] const std::vector<Block>& blocks() const noexcept { return blocks_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }

    [[nodiscard]] std::size_t parameter_count() const;

    /// True when every residual net's spectral-norm product is within its
    /// target Lipschitz constant (up to 1e-12 relative rounding).
    [[nodiscard]] bool residuals_constrained() const;

    /// Copy with every residual net re-constrained.
    [[nodiscard]] MapSpec constrained() const;

    /// Flat parameters in block order: Affine → (α, β); Residual → net parameters.
    [[nodiscard]] std::vector<double> parameters() const;

    /// Copy with replaced parameters. Residual nets are not re-constrained and
    /// α must stay positive.
    [[nodiscard]] MapSpec with_parameters(std::span<const double> params) const;

    /// h(x) over any scalar type; see LipMlp::forward for `lift`.
    template <class T, class Lift>
    T forward(T x, Lift&& lift) const;

private:
    std::vector<Block> blocks_;
    std::size_t dimension_ = 1;
};

enum class DensityKind {
    PushForward,         // g_h, density of B ↦ μ(h⁻¹(B))
    InversePushForward,  // g_{h⁻¹}, density of B ↦ μ(h(B))
};

double map_forward(const MapSpec& m, double x);

/// x with |h(x) − y| < tol. Affine blocks invert in closed form; residual
/// blocks by the contraction x ← y − NN(x). Throws NonConvergence when a
/// residual block has not settled after max_iters steps.
double map_inverse(const MapSpec& m, double y, double tol = 1e-12, int max_iters = 2000);

/// h'(x) (det J_h in one dimension). Strictly positive for valid maps.
double jacobian_det(const MapSpec& m, double x);

/// (h(x), h'(x)) in one pass.
std::pair<double, double> forward_with_jacobian(const MapSpec& m, double x);

/// Density at a point y: g_h(y) = 1/h'(h⁻¹(y)), g_{h⁻¹}(y) = h'(y).
/// Evaluating g_h requires an inversion.
double density(const MapSpec& m, DensityKind kind, double y);

/// Certified (r_h, R_h) with r_h|x−y| ≤ |h(x)−h(y)| ≤ R_h|x−y|. Residual
/// blocks contribute [1 − L, 1 + L]; the bound holds when residuals_constrained().
std::pair<double, double> lipschitz_interval(const MapSpec& m);

/// Residual block with a 1 → hidden → 1 tanh network, optionally followed by
/// an affine block (α, β). Weights uniform in ±init_scale before constraining.
MapSpec make_flow_map(std::span<const std::size_t> hidden, double lipschitz, std::uint64_t seed,
                      double init_scale = 0.1, bool outer_affine = true, double alpha = 1.0, double beta = 0.0);

// ---------------------------------------------------------------------------

template <class T, class Lift>
T MapSpec::forward(T x, Lift&& lift) const {
    std::size_t offset = 0;
    for (const Block& block : blocks_) {
        if (const auto* a = std::get_if<AffineBlock>(&block)) {
            x = lift(a->alpha, offset) * x + lift(a->beta, offset + 1);
            offset += 2;
        } else {
            const auto& net = std::get<ResidualBlock>(block).net;
            x = x + net.forward(x, lift, offset);
            offset += net.parameter_count();
        }
    }
    return x;
}

}  // namespace rieszflow
