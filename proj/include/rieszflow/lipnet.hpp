#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rieszflow/matrix.hpp"

namespace rieszflow {

enum class Activation { Tanh };

struct DenseLayer {
    Matrix weight;  // out × in
    std::vector<double> bias;
};

// Scalar-to-scalar MLP whose Lipschitz constant is certified below
// target_lipschitz() by per-layer spectral normalization (see constrain()).
// tanh follows every layer except the last.
class LipMlp {
public:
    LipMlp(std::vector<DenseLayer> layers, double target_lipschitz, Activation activation = Activation::Tanh);

    [[nodiscard]] const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
    [[nodiscard]] double target_lipschitz() const noexcept { return target_lipschitz_; }
    [[nodiscard]] Activation activation() const noexcept { return activation_; }

    /// Spectral norm estimates of each weight, refreshed by constrain().
    [[nodiscard]] const std::vector<double>& spectral_norms() const noexcept { return spectral_norms_; }

    /// Product of spectral_norms(): an upper bound on Lip(NN).
    [[nodiscard]] double certified_lipschitz() const;

    [[nodiscard]] std::size_t parameter_count() const;

    /// Flat parameters: per layer, weight row-major then bias.
    [[nodiscard]] std::vector<double> parameters() const;

    /// Copy with replaced parameters. The result is NOT re-constrained.
    [[nodiscard]] LipMlp with_parameters(std::span<const double> params) const;

    /// Forward pass over any scalar type T (double or nested Dual).
    /// `lift(value, offset + k)` turns parameter k into a T, which lets callers
    /// seed tangents on individual parameters.
    template <class T, class Lift>
    T forward(T x, Lift&& lift, std::size_t offset = 0) const;

    friend LipMlp constrain(const LipMlp& net);

private:
    std::vector<DenseLayer> layers_;
    double target_lipschitz_;
    Activation activation_;
    std::vector<double> spectral_norms_;
};

/// σ_max(w) by power iteration on wᵀw. Stops once consecutive Rayleigh
/// quotients agree to relative `tol` or after `iters` steps. The estimate is
/// padded upward by 1.01× the change in the last iterate. Zero matrix → 0.
double spectral_norm(const Matrix& w, int iters = 200, double tol = 1e-14);

/// Rescales each weight to w · min(1, c/σ_max(w)), c = L^{1/num_layers}.
LipMlp constrain(const LipMlp& net);

double mlp_eval(const LipMlp& net, double x);

/// d NN / dx by forward-mode differentiation.
double mlp_deriv(const LipMlp& net, double x);

/// 1 → hidden… → 1 network, weights and biases uniform in [-init_scale, init_scale],
/// then constrained to `lipschitz`.
LipMlp make_lipmlp(std::span<const std::size_t> hidden, double lipschitz, std::uint64_t seed,
                   double init_scale = 0.1);

// ---------------------------------------------------------------------------

template <class T, class Lift>
T LipMlp::forward(T x, Lift&& lift, std::size_t offset) const {
    using std::tanh;
    std::vector<T> cur{x};
    std::vector<T> next;
    std::size_t p = offset;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const DenseLayer& layer = layers_[l];
        const std::size_t rows = layer.weight.rows();
        const std::size_t cols = layer.weight.cols();
        next.assign(rows, T(0.0));
        for (std::size_t i = 0; i < rows; ++i) {
            T acc(0.0);
            for (std::size_t j = 0; j < cols; ++j) acc += lift(layer.weight(i, j), p + i * cols + j) * cur[j];
            next[i] = acc;
        }
        p += rows * cols;
        for (std::size_t i = 0; i < rows; ++i) next[i] += lift(layer.bias[i], p + i);
        p += rows;
        if (l + 1 < layers_.size()) {
            for (auto& v : next) v = tanh(v);
        }
        std::swap(cur, next);
    }
    return cur[0];
}

}  // namespace rieszflow
