#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rieszflow/basis.hpp"
#include "rieszflow/maps.hpp"
#include "rieszflow/matrix.hpp"
#include "rieszflow/quad.hpp"

namespace rieszflow {

enum class Flavor {
    Composition,  // γ_n ∘ h
    Weighted,     // γ_n ∘ h · (h')^{1/2}
    Dual,         // γ_n ∘ h · h', bi-orthogonal to Composition
};

struct PerturbedBasis {
    BasisSpec base;
    MapSpec map;
    Flavor flavor = Flavor::Composition;
};

double eval_perturbed(const PerturbedBasis& pb, std::size_t n, double x);

/// Row n holds φ_n at every quadrature node (N × rule.size()). Parallel over nodes.
Matrix sample_perturbed(const PerturbedBasis& pb, std::size_t count, const QuadRule& rule);

/// Serial reference for sample_perturbed, one eval_perturbed call per entry.
Matrix sample_perturbed_serial(const PerturbedBasis& pb, std::size_t count, const QuadRule& rule);

struct GramReport {
    Matrix gram;
    std::vector<double> eigenvalues;  // ascending
    double eig_min = 0.0;
    double eig_max = 0.0;
    double max_offdiag_dev = 0.0;  // max_{n≠m} |G_nm|
    double max_diag_dev = 0.0;     // max_n |G_nn − 1|
};

/// Gram of φ_0 … φ_{count-1} under `rule` with its spectrum.
/// Rule whose domain covers both `s.lo..s.hi` and its preimage under the map,
/// so perturbed integrands keep the reference support. Panel width is kept.
QuadRule pullback_rule(const MapSpec& map, const QuadSettings& s = {});

GramReport gram_matrix(const PerturbedBasis& pb, std::size_t count, const QuadRule& rule);

/// B_nm = ⟨φ̃_n, φ_m⟩ for the Dual flavor φ̃ and the Composition flavor φ.
/// Throws ConfigError if flavors are wrong or base/map differ.
Matrix biorthogonality_matrix(const PerturbedBasis& primal, const PerturbedBasis& dual, std::size_t count,
                              const QuadRule& rule);

enum class Verdict { Orthonormal, Riesz, Inconclusive };

std::string to_string(Verdict v);

// Evidence for the basis induced by a map. Density conditions are checked on
// the quadrature node set only; "almost everywhere" statements are not
// testable numerically.
struct Certificate {
    Verdict verdict = Verdict::Inconclusive;
    GramReport gram;                       // Composition flavor
    std::pair<double, double> lipschitz;   // certified (r_h, R_h)
    std::pair<double, double> density_range;  // min/max of g_h over h(nodes)
    double weighted_gram_dev = 0.0;        // max |W − I| of the Weighted flavor (quadrature check)
    double tail_estimate = 0.0;            // reference-basis mass outside the rule's domain
    bool residuals_constrained = true;
    std::size_t count = 0;
    double orthonormal_tol = 0.0;
    double riesz_floor = 0.0;
    double quadrature_tol = 0.0;
    std::string note;
};

struct CertifyOptions {
    double orthonormal_tol = 1e-6;
    double riesz_floor = 1e-8;
    /// Weighted-flavor Gram must match I this closely, otherwise the rule is
    /// not resolving the basis and the verdict is Inconclusive.
    double quadrature_tol = 1e-6;
};

Certificate certify(const MapSpec& map, const BasisSpec& base, std::size_t count, const QuadRule& rule,
                    const CertifyOptions& options = {});

/// {"verdict", "gram_eig", "lipschitz", "density_range", "tolerances", ...}
nlohmann::json certificate_to_json(const Certificate& c);

struct OperatorNorm {
    double estimate = 0.0;         // (sup_grid g_h)^{1/2}
    double certified_upper = 0.0;  // (1/r_h)^{1/2}
};

/// ‖C_h‖ = ‖g_h‖_∞^{1/2}, with g_h sampled at h(x) for x on a uniform grid of
/// `grid_points` points over [lo, hi].
OperatorNorm operator_norm_estimate(const MapSpec& map, double lo = -10.0, double hi = 10.0,
                                    std::size_t grid_points = 4001);

/// Structural and parameter-wise equality of two maps.
bool same_map(const MapSpec& a, const MapSpec& b);

}  // namespace rieszflow
