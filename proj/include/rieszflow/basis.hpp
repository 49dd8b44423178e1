#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rieszflow {

enum class BasisFamily { Hermite };

// Finite section γ_0 … γ_{N-1} of a reference orthonormal basis of L²(ℝ).
class BasisSpec {
public:
    BasisSpec(BasisFamily family, std::size_t max_index);

    static BasisSpec hermite(std::size_t max_index) { return {BasisFamily::Hermite, max_index}; }

    [[nodiscard]] BasisFamily family() const noexcept { return family_; }
    [[nodiscard]] std::size_t max_index() const noexcept { return max_index_; }

private:
    BasisFamily family_;
    std::size_t max_index_;
};

/// Normalized Hermite function γ_n(x) = a_n h_n(x) e^{-x²/2} with
/// a_n = (2^n n! √π)^{-1/2}, via the normalized three-term recurrence.
double hermite_eval(std::size_t n, double x);

/// Writes γ_0(x) … γ_{out.size()-1}(x) into `out` in a single recurrence pass.
void hermite_all(double x, std::span<double> out);

/// γ_n'(x) = √(n/2) γ_{n-1}(x) − √((n+1)/2) γ_{n+1}(x).
double hermite_deriv(std::size_t n, double x);

/// Element-wise γ_n over `points`. Throws IndexOutOfRange if n ≥ spec.max_index().
std::vector<double> basis_column(const BasisSpec& spec, std::size_t n, std::span<const double> points);

/// Evaluates basis function n of `spec` at x.
double basis_eval(const BasisSpec& spec, std::size_t n, double x);

}  // namespace rieszflow
