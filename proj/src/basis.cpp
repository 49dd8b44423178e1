#include "rieszflow/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rieszflow/error.hpp"

namespace rieszflow {

namespace {

// π^{-1/4}
const double kGamma0Scale = std::pow(std::numbers::pi, -0.25);

}  // namespace

BasisSpec::BasisSpec(BasisFamily family, std::size_t max_index) : family_(family), max_index_(max_index) {
    if (max_index_ < 1) throw InvalidArgument("BasisSpec: max_index must be >= 1");
}

double hermite_eval(std::size_t n, double x) {
    double prev = 0.0;
    double cur = kGamma0Scale * std::exp(-0.5 * x * x);
    for (std::size_t k = 0; k < n; ++k) {
        const double kd = static_cast<double>(k);
        const double next = x * std::sqrt(2.0 / (kd + 1.0)) * cur - std::sqrt(kd / (kd + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

void hermite_all(double x, std::span<double> out) {
    if (out.empty()) return;
    out[0] = kGamma0Scale * std::exp(-0.5 * x * x);
    // Same arithmetic as hermite_eval so both paths agree bit for bit.
    double prev = 0.0;
    for (std::size_t k = 0; k + 1 < out.size(); ++k) {
        const double kd = static_cast<double>(k);
        out[k + 1] = x * std::sqrt(2.0 / (kd + 1.0)) * out[k] - std::sqrt(kd / (kd + 1.0)) * prev;
        prev = out[k];
    }
}

double hermite_deriv(std::size_t n, double x) {
    const double nd = static_cast<double>(n);
    const double up = std::sqrt((nd + 1.0) / 2.0) * hermite_eval(n + 1, x);
    if (n == 0) return -up;
    return std::sqrt(nd / 2.0) * hermite_eval(n - 1, x) - up;
}

double basis_eval(const BasisSpec& spec, std::size_t n, double x) {
    if (n >= spec.max_index()) {
        throw IndexOutOfRange("basis index " + std::to_string(n) + " >= max_index " +
                              std::to_string(spec.max_index()));
    }
    switch (spec.family()) {
        case BasisFamily::Hermite:
            return hermite_eval(n, x);
    }
    return 0.0;
}

std::vector<double> basis_column(const BasisSpec& spec, std::size_t n, std::span<const double> points) {
    if (n >= spec.max_index()) {
        throw IndexOutOfRange("basis index " + std::to_string(n) + " >= max_index " +
                              std::to_string(spec.max_index()));
    }
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = basis_eval(spec, n, points[i]);
    return out;
}

}  // namespace rieszflow
