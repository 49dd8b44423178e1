#include "rieszflow/approx.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "rieszflow/adam.hpp"
#include "rieszflow/dual.hpp"
#include "rieszflow/error.hpp"
#include "rieszflow/kernels.hpp"

namespace rieszflow {

namespace {

// Composition samples φ_n(x_i) = γ_n(h(x_i)) and dual samples γ_n(h(x_i))·h'(x_i).
struct Sampled {
    Matrix phi;
    Matrix dual;
};

Sampled sample_pair(const MapSpec& map, std::size_t count, const QuadRule& rule) {
    const BasisSpec base = BasisSpec::hermite(count);
    Sampled s{sample_perturbed({base, map, Flavor::Composition}, count, rule), Matrix(count, rule.size())};
    auto nodes = rule.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double jac = jacobian_det(map, nodes[i]);
        for (std::size_t n = 0; n < count; ++n) s.dual(n, i) = s.phi(n, i) * jac;
    }
    return s;
}

double residual_error(std::span<const double> f, std::span<const double> recon, const QuadRule& rule) {
    std::vector<double> r(f.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i] - recon[i];
    const double e2 = kernels::weighted_dot(rule.weights(), r, r, rule.order());
    return std::sqrt(std::max(e2, 0.0));
}

using Jet = Dual<Dual<double>>;

}  // namespace

Expansion expand(const TargetFn& f, const MapSpec& map, const BasisSpec& base, std::size_t count,
                 const QuadRule& rule) {
    if (count == 0 || count > base.max_index()) {
        throw IndexOutOfRange("expansion length " + std::to_string(count) + " outside [1, " +
                              std::to_string(base.max_index()) + "]");
    }
    const std::vector<double> fs = sample(std::ref(f), rule);
    const Sampled s = sample_pair(map, count, rule);
    auto coefficients = kernels::project(s.dual, rule.weights(), fs, rule.order());
    const double err = residual_error(fs, kernels::synthesize(s.phi, coefficients), rule);
    return Expansion{std::move(coefficients), PerturbedBasis{base, map, Flavor::Composition}, err,
                     QuadSettings{rule.lo(), rule.hi(), rule.panels(), rule.order()}};
}

double reconstruct(const Expansion& e, double x) {
    if (e.coefficients.empty()) return 0.0;
    std::vector<double> gammas(e.coefficients.size());
    hermite_all(map_forward(e.basis.map, x), gammas);
    double s = 0.0;
    for (std::size_t n = 0; n < gammas.size(); ++n) s += e.coefficients[n] * gammas[n];
    return s;
}

std::vector<std::pair<std::size_t, double>> convergence_curve(const TargetFn& f, const MapSpec& map,
                                                              const BasisSpec& base,
                                                              std::span<const std::size_t> counts,
                                                              const QuadRule& rule) {
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (k > 0 && counts[k] <= counts[k - 1]) throw InvalidArgument("convergence_curve: counts must increase");
        out.emplace_back(counts[k], expand(f, map, base, counts[k], rule).l2_error);
    }
    return out;
}

// ---------------------------------------------------------------------------

ExpansionObjective::ExpansionObjective(const TargetFn& f, std::size_t count, const QuadRule& rule)
    : count_(count), rule_(&rule), f_(sample(std::ref(f), rule)) {
    if (count_ == 0) throw InvalidArgument("ExpansionObjective needs count >= 1");
}

double ExpansionObjective::error(const MapSpec& map) const {
    const Sampled s = sample_pair(map, count_, *rule_);
    const auto c = kernels::project(s.dual, rule_->weights(), f_, rule_->order());
    return residual_error(f_, kernels::synthesize(s.phi, c), *rule_);
}

std::pair<double, std::vector<double>> ExpansionObjective::error_and_gradient(const MapSpec& map) const {
    const QuadRule& rule = *rule_;
    auto nodes = rule.nodes();
    auto w = rule.weights();
    const std::size_t m = nodes.size();
    const std::size_t n_count = count_;

    // Γ_ni = γ_n(h(x_i)), Γ'_ni = γ_n'(h(x_i)), J_i = h'(x_i).
    Matrix gamma(n_count, m), dgamma(n_count, m), dual(n_count, m);
    std::vector<double> jac(m);
    const auto ml = static_cast<long>(m);
#pragma omp parallel
    {
        std::vector<double> g(n_count + 1);
#pragma omp for schedule(static)
        for (long li = 0; li < ml; ++li) {
            const auto i = static_cast<std::size_t>(li);
            const auto [y, jd] = forward_with_jacobian(map, nodes[i]);
            hermite_all(y, g);
            jac[i] = jd;
            for (std::size_t n = 0; n < n_count; ++n) {
                const double nd = static_cast<double>(n);
                const double down = n > 0 ? std::sqrt(nd / 2.0) * g[n - 1] : 0.0;
                gamma(n, i) = g[n];
                dgamma(n, i) = down - std::sqrt((nd + 1.0) / 2.0) * g[n + 1];
                dual(n, i) = g[n] * jd;
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::isfinite(jac[i])) throw NonFiniteSample(i, nodes[i]);
    }

    const auto c = kernels::project(dual, w, f_, rule.order());
    const auto recon = kernels::synthesize(gamma, c);
    std::vector<double> r(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = f_[i] - recon[i];
    const double e2 = std::max(kernels::weighted_dot(w, r, r, rule.order()), 0.0);
    const double err = std::sqrt(e2);

    // s_n = Σ_j w_j r_j Γ_nj
    const auto s = kernels::project(gamma, w, r, rule.order());

    // dE/dθ = Σ_j A_j ∂h_j/∂θ + B_j ∂J_j/∂θ
    std::vector<double> a_coef(m), b_coef(m);
    for (std::size_t j = 0; j < m; ++j) {
        double s_dg = 0.0, c_dg = 0.0, s_g = 0.0;
        for (std::size_t n = 0; n < n_count; ++n) {
            s_dg += s[n] * dgamma(n, j);
            c_dg += c[n] * dgamma(n, j);
            s_g += s[n] * gamma(n, j);
        }
        a_coef[j] = -2.0 * w[j] * (f_[j] * jac[j] * s_dg + r[j] * c_dg);
        b_coef[j] = -2.0 * w[j] * f_[j] * s_g;
    }

    const std::size_t np = map.parameter_count();
    std::vector<double> grad(np, 0.0);
    const auto npl = static_cast<long>(np);
#pragma omp parallel for schedule(dynamic)
    for (long lp = 0; lp < npl; ++lp) {
        const auto p = static_cast<std::size_t>(lp);
        const auto lift = [p](double v, std::size_t k) {
            return Jet(Dual<double>(v), Dual<double>(k == p ? 1.0 : 0.0));
        };
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const Jet x(Dual<double>(nodes[j], 1.0), Dual<double>(0.0));
            const Jet h = map.forward(x, lift);
            acc += a_coef[j] * h.d.v + b_coef[j] * h.d.d;
        }
        grad[p] = acc;
    }

    if (err > 0.0) {
        for (double& g : grad) g /= 2.0 * err;
    } else {
        std::fill(grad.begin(), grad.end(), 0.0);
    }
    return {err, std::move(grad)};
}

std::vector<double> ExpansionObjective::finite_difference_gradient(const MapSpec& map, double step) const {
    if (!(step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
    std::vector<double> params = map.parameters();
    std::vector<double> grad(params.size());
    for (std::size_t p = 0; p < params.size(); ++p) {
        const double keep = params[p];
        params[p] = keep + step;
        const double up = error(map.with_parameters(params));
        params[p] = keep - step;
        const double down = error(map.with_parameters(params));
        params[p] = keep;
        grad[p] = (up - down) / (2.0 * step);
    }
    return grad;
}

// ---------------------------------------------------------------------------

namespace {

void floor_affine_scales(const MapSpec& shape, std::span<double> params, double floor) {
    std::size_t offset = 0;
    for (const Block& block : shape.blocks()) {
        if (std::holds_alternative<AffineBlock>(block)) {
            params[offset] = std::max(params[offset], floor);
            offset += 2;
        } else {
            offset += std::get<ResidualBlock>(block).net.parameter_count();
        }
    }
}

}  // namespace

OptResult optimize_map(const TargetFn& f, const BasisSpec& base, const MapSpec& initial, const OptConfig& cfg,
                       const QuadRule& rule) {
    if (cfg.count == 0 || cfg.count > base.max_index()) throw ConfigError("optimize_map: count outside basis range");
    if (cfg.iterations == 0) throw ConfigError("optimize_map: iterations must be positive");
    if (!(cfg.learning_rate > 0.0)) throw ConfigError("optimize_map: learning rate must be positive");
    if (cfg.gradient == GradientMode::CentralFiniteDifference && !(cfg.fd_step > 0.0)) {
        throw ConfigError("optimize_map: finite-difference step must be positive");
    }
    if (initial.parameter_count() == 0) throw ConfigError("optimize_map: map has no trainable block");

    const ExpansionObjective objective(f, cfg.count, rule);
    MapSpec map = initial.constrained();
    std::vector<double> params = map.parameters();
    Adam adam(params.size(), AdamParameters{cfg.learning_rate, 0.9, 0.999, 1e-8});

    OptResult result;
    result.map = map;
    double best = std::numeric_limits<double>::infinity();

    auto evaluate = [&](const MapSpec& current) -> std::pair<double, std::vector<double>> {
        try {
            if (cfg.gradient == GradientMode::Analytic) return objective.error_and_gradient(current);
            return {objective.error(current), objective.finite_difference_gradient(current, cfg.fd_step)};
        } catch (const NonFiniteSample& e) {
            throw Divergence(std::string("optimization diverged: ") + e.what());
        }
    };

    for (std::size_t iter = 0; iter <= cfg.iterations; ++iter) {
        auto [err, grad] = evaluate(map);
        if (!std::isfinite(err)) {
            throw Divergence("optimization diverged at iteration " + std::to_string(iter) +
                             " (non-finite error); lower the learning rate");
        }
        if (iter == 0) result.initial_error = err;
        if (err < best) {
            best = err;
            result.map = map;
        }
        result.trace.push_back({iter, err, best});
        if (iter == cfg.iterations) break;

        for (double g : grad) {
            if (!std::isfinite(g)) throw Divergence("non-finite gradient at iteration " + std::to_string(iter));
        }
        adam.step(params, grad);
        floor_affine_scales(map, params, cfg.alpha_floor);
        map = map.with_parameters(params).constrained();
        params = map.parameters();
    }
    result.best_error = best;
    return result;
}

MapSpec default_flow_template(std::uint64_t seed) {
    const std::array<std::size_t, 1> hidden{8};
    return make_flow_map(hidden, 0.9, seed, 0.1, true, 1.0, 0.0);
}

}  // namespace rieszflow
