#include "rieszflow/lipnet.hpp"

#include <cmath>
#include <random>
#include <string>

#include "rieszflow/dual.hpp"
#include "rieszflow/error.hpp"

namespace rieszflow {

namespace {

constexpr auto kPlain = [](double v, std::size_t) { return v; };

}  // namespace

LipMlp::LipMlp(std::vector<DenseLayer> layers, double target_lipschitz, Activation activation)
    : layers_(std::move(layers)), target_lipschitz_(target_lipschitz), activation_(activation) {
    if (layers_.empty()) throw InvalidArgument("LipMlp needs at least one layer");
    if (!(target_lipschitz_ > 0.0 && target_lipschitz_ < 1.0)) {
        throw InvalidArgument("LipMlp target Lipschitz constant must lie in (0, 1)");
    }
    if (layers_.front().weight.cols() != 1 || layers_.back().weight.rows() != 1) {
        throw Unsupported("LipMlp input and output dimension must be 1");
    }
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const DenseLayer& layer = layers_[l];
        if (layer.weight.rows() == 0 || layer.bias.size() != layer.weight.rows()) {
            throw InvalidArgument("LipMlp layer " + std::to_string(l) + ": bias length must match weight rows");
        }
        if (l > 0 && layer.weight.cols() != layers_[l - 1].weight.rows()) {
            throw InvalidArgument("LipMlp layer " + std::to_string(l) + ": input width mismatch");
        }
    }
    spectral_norms_.reserve(layers_.size());
    for (const auto& layer : layers_) spectral_norms_.push_back(spectral_norm(layer.weight));
}

double LipMlp::certified_lipschitz() const {
    double prod = 1.0;
    for (double s : spectral_norms_) prod *= s;
    return prod;
}

std::size_t LipMlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers_) n += layer.weight.data().size() + layer.bias.size();
    return n;
}

std::vector<double> LipMlp::parameters() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto& layer : layers_) {
        out.insert(out.end(), layer.weight.data().begin(), layer.weight.data().end());
        out.insert(out.end(), layer.bias.begin(), layer.bias.end());
    }
    return out;
}

LipMlp LipMlp::with_parameters(std::span<const double> params) const {
    if (params.size() != parameter_count()) throw InvalidArgument("LipMlp::with_parameters: wrong length");
    std::vector<DenseLayer> layers = layers_;
    std::size_t p = 0;
    for (auto& layer : layers) {
        for (double& v : layer.weight.data()) v = params[p++];
        for (double& v : layer.bias) v = params[p++];
    }
    return LipMlp(std::move(layers), target_lipschitz_, activation_);
}

double spectral_norm(const Matrix& w, int iters, double tol) {
    if (w.rows() == 0 || w.cols() == 0) throw InvalidArgument("spectral_norm of an empty matrix");
    if (iters < 1) throw InvalidArgument("spectral_norm needs iters >= 1");
    const std::size_t m = w.rows();
    const std::size_t n = w.cols();

    std::vector<double> v(n), u(m), z(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = 1.0 + 0.1 * static_cast<double>(j);

    auto normalize = [](std::vector<double>& a) {
        double s = 0.0;
        for (double x : a) s += x * x;
        s = std::sqrt(s);
        if (s > 0.0)
            for (double& x : a) x /= s;
        return s;
    };
    normalize(v);

    double rho_prev = -1.0;
    double rho = 0.0;
    for (int it = 0; it < iters; ++it) {
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += w(i, j) * v[j];
            u[i] = s;
        }
        rho = 0.0;
        for (double x : u) rho += x * x;  // vᵀ wᵀw v with ‖v‖ = 1
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += w(i, j) * u[i];
            z[j] = s;
        }
        if (normalize(z) == 0.0) return 0.0;
        v.swap(z);
        if (rho_prev >= 0.0 && std::abs(rho - rho_prev) <= tol * rho) break;
        rho_prev = rho;
    }
    const double sigma = std::sqrt(rho);
    const double gap = rho_prev >= 0.0 ? std::abs(sigma - std::sqrt(rho_prev)) : 0.0;
    return sigma + 1.01 * gap;
}

LipMlp constrain(const LipMlp& net) {
    LipMlp out = net;
    const double budget = std::pow(net.target_lipschitz_, 1.0 / static_cast<double>(net.layers_.size()));
    for (std::size_t l = 0; l < out.layers_.size(); ++l) {
        Matrix& w = out.layers_[l].weight;
        const double sigma = spectral_norm(w);
        double scaled = sigma;
        if (sigma > budget) {
            const double s = budget / sigma;
            for (double& v : w.data()) v *= s;
            scaled = budget;
        }
        out.spectral_norms_[l] = scaled;
    }
    return out;
}

double mlp_eval(const LipMlp& net, double x) { return net.forward(x, kPlain); }

double mlp_deriv(const LipMlp& net, double x) {
    const auto lift = [](double v, std::size_t) { return Dual<double>(v); };
    return net.forward(Dual<double>(x, 1.0), lift).d;
}

LipMlp make_lipmlp(std::span<const std::size_t> hidden, double lipschitz, std::uint64_t seed, double init_scale) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-init_scale, init_scale);
    std::vector<DenseLayer> layers;
    std::size_t in = 1;
    auto add_layer = [&](std::size_t out) {
        DenseLayer layer{Matrix(out, in), std::vector<double>(out)};
        for (double& v : layer.weight.data()) v = dist(rng);
        for (double& v : layer.bias) v = dist(rng);
        layers.push_back(std::move(layer));
        in = out;
    };
    for (std::size_t width : hidden) add_layer(width);
    add_layer(1);
    return constrain(LipMlp(std::move(layers), lipschitz));
}

}  // namespace rieszflow
