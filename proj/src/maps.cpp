#include "rieszflow/maps.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rieszflow/error.hpp"

namespace rieszflow {

namespace {

constexpr auto kPlain = [](double v, std::size_t) { return v; };

double invert_residual(const LipMlp& net, double y, double tol, int max_iters) {
    const double lip = net.target_lipschitz();
    // |x_{k+1} − x*| ≤ L/(1−L)·|x_{k+1} − x_k|
    const double step_tol = tol * (1.0 - lip) / lip;
    double x = y;
    for (int it = 0; it < max_iters; ++it) {
        const double next = y - mlp_eval(net, x);
        const double step = std::abs(next - x);
        if (!std::isfinite(next)) break;
        x = next;
        if (step < step_tol || step <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) return x;
    }
    throw NonConvergence("residual block inversion did not converge within " + std::to_string(max_iters) +
                         " iterations (is the network constrained?)");
}

}  // namespace

MapSpec::MapSpec(std::vector<Block> blocks, std::size_t dimension)
    : blocks_(std::move(blocks)), dimension_(dimension) {
    if (dimension_ != 1) throw Unsupported("only dimension 1 maps are implemented");
    for (const Block& block : blocks_) {
        if (const auto* a = std::get_if<AffineBlock>(&block)) {
            if (!(a->alpha > 0.0) || !std::isfinite(a->alpha) || !std::isfinite(a->beta)) {
                throw InvalidArgument("affine block requires finite alpha > 0 and finite beta");
            }
        }
    }
}

std::size_t MapSpec::parameter_count() const {
    std::size_t n = 0;
    for (const Block& block : blocks_) {
        if (std::holds_alternative<AffineBlock>(block)) {
            n += 2;
        } else {
            n += std::get<ResidualBlock>(block).net.parameter_count();
        }
    }
    return n;
}

bool MapSpec::residuals_constrained() const {
    for (const Block& block : blocks_) {
        if (const auto* r = std::get_if<ResidualBlock>(&block)) {
            if (r->net.certified_lipschitz() > r->net.target_lipschitz() * (1.0 + 1e-12)) return false;
        }
    }
    return true;
}

MapSpec MapSpec::constrained() const {
    std::vector<Block> blocks = blocks_;
    for (Block& block : blocks) {
        if (auto* r = std::get_if<ResidualBlock>(&block)) r->net = constrain(r->net);
    }
    return MapSpec(std::move(blocks), dimension_);
}

std::vector<double> MapSpec::parameters() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const Block& block : blocks_) {
        if (const auto* a = std::get_if<AffineBlock>(&block)) {
            out.push_back(a->alpha);
            out.push_back(a->beta);
        } else {
            auto p = std::get<ResidualBlock>(block).net.parameters();
            out.insert(out.end(), p.begin(), p.end());
        }
    }
    return out;
}

MapSpec MapSpec::with_parameters(std::span<const double> params) const {
    if (params.size() != parameter_count()) throw InvalidArgument("MapSpec::with_parameters: wrong length");
    std::vector<Block> blocks;
    blocks.reserve(blocks_.size());
    std::size_t offset = 0;
    for (const Block& block : blocks_) {
        if (std::holds_alternative<AffineBlock>(block)) {
            blocks.emplace_back(AffineBlock{params[offset], params[offset + 1]});
            offset += 2;
        } else {
            const auto& net = std::get<ResidualBlock>(block).net;
            const std::size_t n = net.parameter_count();
            blocks.emplace_back(ResidualBlock{net.with_parameters(params.subspan(offset, n))});
            offset += n;
        }
    }
    return MapSpec(std::move(blocks), dimension_);
}

double map_forward(const MapSpec& m, double x) { return m.forward(x, kPlain); }

double map_inverse(const MapSpec& m, double y, double tol, int max_iters) {
    if (!(tol > 0.0)) throw InvalidArgument("map_inverse requires tol > 0");
    if (max_iters < 1) throw InvalidArgument("map_inverse requires max_iters >= 1");
    const auto& blocks = m.blocks();
    double x = y;
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        if (const auto* a = std::get_if<AffineBlock>(&*it)) {
            x = (x - a->beta) / a->alpha;
        } else {
            x = invert_residual(std::get<ResidualBlock>(*it).net, x, tol, max_iters);
        }
    }
    return x;
}

std::pair<double, double> forward_with_jacobian(const MapSpec& m, double x) {
    const auto lift = [](double v, std::size_t) { return Dual<double>(v); };
    const Dual<double> r = m.forward(Dual<double>(x, 1.0), lift);
    return {r.v, r.d};
}

double jacobian_det(const MapSpec& m, double x) { return forward_with_jacobian(m, x).second; }

double density(const MapSpec& m, DensityKind kind, double y) {
    switch (kind) {
        case DensityKind::PushForward:
            return 1.0 / std::abs(jacobian_det(m, map_inverse(m, y)));
        case DensityKind::InversePushForward:
            return std::abs(jacobian_det(m, y));
    }
    return 0.0;
}

std::pair<double, double> lipschitz_interval(const MapSpec& m) {
    double lo = 1.0;
    double hi = 1.0;
    for (const Block& block : m.blocks()) {
        if (const auto* a = std::get_if<AffineBlock>(&block)) {
            lo *= a->alpha;
            hi *= a->alpha;
        } else {
            const double lip = std::get<ResidualBlock>(block).net.target_lipschitz();
            lo *= 1.0 - lip;
            hi *= 1.0 + lip;
        }
    }
    return {lo, hi};
}

MapSpec make_flow_map(std::span<const std::size_t> hidden, double lipschitz, std::uint64_t seed, double init_scale,
                      bool outer_affine, double alpha, double beta) {
    std::vector<Block> blocks;
    blocks.emplace_back(ResidualBlock{make_lipmlp(hidden, lipschitz, seed, init_scale)});
    if (outer_affine) blocks.emplace_back(AffineBlock{alpha, beta});
    return MapSpec(std::move(blocks));
}

}  // namespace rieszflow
