#include "rieszflow/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rieszflow/error.hpp"
#include "rieszflow/kernels.hpp"
#include "rieszflow/map_json.hpp"
#include "rieszflow/symmetric_eigen.hpp"

namespace rieszflow {

namespace {

double flavor_weight(Flavor flavor, double jac) {
    switch (flavor) {
        case Flavor::Composition:
            return 1.0;
        case Flavor::Weighted:
            return std::sqrt(jac);
        case Flavor::Dual:
            return jac;
    }
    return 1.0;
}

void check_index(const PerturbedBasis& pb, std::size_t n) {
    if (n >= pb.base.max_index()) {
        throw IndexOutOfRange("perturbed basis index " + std::to_string(n) + " >= max_index " +
                              std::to_string(pb.base.max_index()));
    }
}

void check_finite(const Matrix& samples, const QuadRule& rule) {
    for (std::size_t n = 0; n < samples.rows(); ++n) {
        auto row = samples.row(n);
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!std::isfinite(row[i])) throw NonFiniteSample(i, rule.nodes()[i]);
        }
    }
}

}  // namespace

double eval_perturbed(const PerturbedBasis& pb, std::size_t n, double x) {
    check_index(pb, n);
    const auto [y, jac] = forward_with_jacobian(pb.map, x);
    return basis_eval(pb.base, n, y) * flavor_weight(pb.flavor, jac);
}

Matrix sample_perturbed(const PerturbedBasis& pb, std::size_t count, const QuadRule& rule) {
    if (count == 0) return {};
    check_index(pb, count - 1);
    auto nodes = rule.nodes();
    Matrix out(count, nodes.size());
    const auto m = static_cast<long>(nodes.size());
#pragma omp parallel
    {
        std::vector<double> values(count);
#pragma omp for schedule(static)
        for (long i = 0; i < m; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const auto [y, jac] = forward_with_jacobian(pb.map, nodes[idx]);
            hermite_all(y, values);
            const double weight = flavor_weight(pb.flavor, jac);
            for (std::size_t n = 0; n < count; ++n) out(n, idx) = values[n] * weight;
        }
    }
    check_finite(out, rule);
    return out;
}

Matrix sample_perturbed_serial(const PerturbedBasis& pb, std::size_t count, const QuadRule& rule) {
    auto nodes = rule.nodes();
    Matrix out(count, nodes.size());
    for (std::size_t n = 0; n < count; ++n)
        for (std::size_t i = 0; i < nodes.size(); ++i) out(n, i) = eval_perturbed(pb, n, nodes[i]);
    check_finite(out, rule);
    return out;
}

GramReport gram_matrix(const PerturbedBasis& pb, std::size_t count, const QuadRule& rule) {
    if (count == 0) throw InvalidArgument("gram_matrix requires count >= 1");
    const Matrix samples = sample_perturbed(pb, count, rule);
    GramReport report;
    report.gram = kernels::gram(samples, rule.weights(), rule.order());
    const SymmetricEigen eig = symmetric_eigen(report.gram);
    report.eigenvalues = eig.values;
    report.eig_min = eig.values.front();
    report.eig_max = eig.values.back();
    for (std::size_t i = 0; i < count; ++i) {
        report.max_diag_dev = std::max(report.max_diag_dev, std::abs(report.gram(i, i) - 1.0));
        for (std::size_t j = 0; j < count; ++j) {
            if (i != j) report.max_offdiag_dev = std::max(report.max_offdiag_dev, std::abs(report.gram(i, j)));
        }
    }
    return report;
}

QuadRule pullback_rule(const MapSpec& map, const QuadSettings& s) {
    const double lo = std::min(s.lo, map_inverse(map, s.lo));
    const double hi = std::max(s.hi, map_inverse(map, s.hi));
    const double width = (s.hi - s.lo) / static_cast<double>(s.panels);
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / width - 1e-9));
    return build_rule(lo, hi, std::max(panels, s.panels), s.order);
}

bool same_map(const MapSpec& a, const MapSpec& b) { return map_to_json(a) == map_to_json(b); }

Matrix biorthogonality_matrix(const PerturbedBasis& primal, const PerturbedBasis& dual, std::size_t count,
                              const QuadRule& rule) {
    if (primal.flavor != Flavor::Composition || dual.flavor != Flavor::Dual) {
        throw ConfigError("biorthogonality_matrix expects a Composition primal and a Dual dual");
    }
    if (primal.base.family() != dual.base.family() || primal.base.max_index() != dual.base.max_index() ||
        !same_map(primal.map, dual.map)) {
        throw ConfigError("biorthogonality_matrix: primal and dual must share basis and map");
    }
    const Matrix phi = sample_perturbed(primal, count, rule);
    const Matrix phi_dual = sample_perturbed(dual, count, rule);
    return kernels::cross_gram(phi_dual, phi, rule.weights(), rule.order());
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Orthonormal:
            return "Orthonormal";
        case Verdict::Riesz:
            return "Riesz";
        case Verdict::Inconclusive:
            return "Inconclusive";
    }
    return "Inconclusive";
}

Certificate certify(const MapSpec& map, const BasisSpec& base, std::size_t count, const QuadRule& rule,
                    const CertifyOptions& options) {
    if (!(options.orthonormal_tol > 0.0)) throw InvalidArgument("certify requires tol > 0");
    Certificate cert;
    cert.count = count;
    cert.orthonormal_tol = options.orthonormal_tol;
    cert.riesz_floor = options.riesz_floor;
    cert.quadrature_tol = options.quadrature_tol;
    cert.lipschitz = lipschitz_interval(map);
    cert.residuals_constrained = map.residuals_constrained();
    cert.tail_estimate = hermite_tail_estimate(rule, count);

    // g_h at y = h(x_i) equals 1/h'(x_i).
    double g_lo = std::numeric_limits<double>::infinity();
    double g_hi = 0.0;
    double g_dev = 0.0;
    for (double x : rule.nodes()) {
        const double g = 1.0 / jacobian_det(map, x);
        g_lo = std::min(g_lo, g);
        g_hi = std::max(g_hi, g);
        g_dev = std::max(g_dev, std::abs(g - 1.0));
    }
    cert.density_range = {g_lo, g_hi};

    cert.gram = gram_matrix({base, map, Flavor::Composition}, count, rule);
    // An unconstrained residual can make h' negative, where √h' is undefined.
    if (cert.residuals_constrained) {
        const GramReport weighted = gram_matrix({base, map, Flavor::Weighted}, count, rule);
        cert.weighted_gram_dev = std::max(weighted.max_diag_dev, weighted.max_offdiag_dev);
    } else {
        cert.weighted_gram_dev = std::numeric_limits<double>::quiet_NaN();
    }

    const double gram_dev = std::max(cert.gram.max_diag_dev, cert.gram.max_offdiag_dev);
    if (!cert.residuals_constrained) {
        cert.verdict = Verdict::Inconclusive;
        cert.note = "a residual network exceeds its Lipschitz budget; bi-Lipschitz bounds are not certified";
    } else if (!(cert.lipschitz.first > 0.0)) {
        cert.verdict = Verdict::Inconclusive;
        cert.note = "certified lower Lipschitz bound is not positive";
    } else if (!(cert.weighted_gram_dev < options.quadrature_tol)) {
        cert.verdict = Verdict::Inconclusive;
        cert.note = "quadrature does not resolve the weighted basis; widen the domain or refine the rule";
    } else if (g_dev < options.orthonormal_tol && gram_dev < options.orthonormal_tol) {
        cert.verdict = Verdict::Orthonormal;
        cert.note = "g_h = 1 on the quadrature grid and the Gram matrix is the identity";
    } else if (cert.gram.eig_min > options.riesz_floor) {
        cert.verdict = Verdict::Riesz;
        cert.note = "bi-Lipschitz map; Gram spectrum bounded away from zero";
    } else {
        cert.verdict = Verdict::Inconclusive;
        cert.note = "smallest Gram eigenvalue below the Riesz floor";
    }
    return cert;
}

nlohmann::json certificate_to_json(const Certificate& c) {
    return {
        {"verdict", to_string(c.verdict)},
        {"gram_eig", {c.gram.eig_min, c.gram.eig_max}},
        {"lipschitz", {c.lipschitz.first, c.lipschitz.second}},
        {"density_range", {c.density_range.first, c.density_range.second}},
        {"tolerances",
         {{"orthonormal", c.orthonormal_tol}, {"riesz_floor", c.riesz_floor}, {"quadrature", c.quadrature_tol}}},
        {"n", c.count},
        {"gram_max_diag_dev", c.gram.max_diag_dev},
        {"gram_max_offdiag_dev", c.gram.max_offdiag_dev},
        {"weighted_gram_dev", c.weighted_gram_dev},
        {"tail_estimate", c.tail_estimate},
        {"residuals_constrained", c.residuals_constrained},
        {"grid", "quadrature nodes"},
        {"note", c.note},
    };
}

OperatorNorm operator_norm_estimate(const MapSpec& map, double lo, double hi, std::size_t grid_points) {
    if (grid_points < 2 || !(lo < hi)) throw InvalidArgument("operator_norm_estimate: bad grid");
    double sup = 0.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        sup = std::max(sup, 1.0 / jacobian_det(map, x));
    }
    return {std::sqrt(sup), std::sqrt(1.0 / lipschitz_interval(map).first)};
}

}  // namespace rieszflow
