#include "rieszflow/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "rieszflow/error.hpp"

namespace rieszflow {

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("max_abs_diff: shape mismatch");
    double worst = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) worst = std::max(worst, std::abs(da[i] - db[i]));
    return worst;
}

namespace kernels {

namespace {

void check_sizes(std::size_t w, std::size_t a, std::size_t b) {
    if (w != a || w != b) throw InvalidArgument("kernel operand length mismatch");
}

double block_sum(const double* w, const double* a, const double* b, std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += w[i] * a[i] * b[i];
    return s;
}

}  // namespace

double weighted_dot_serial(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
    check_sizes(w.size(), a.size(), b.size());
    return block_sum(w.data(), a.data(), b.data(), 0, w.size());
}

Matrix gram_serial(const Matrix& columns, std::span<const double> w) {
    const std::size_t n = columns.rows();
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            g(i, j) = weighted_dot_serial(w, columns.row(i), columns.row(j));
            g(j, i) = g(i, j);
        }
    }
    return g;
}

Matrix cross_gram_serial(const Matrix& left, const Matrix& right, std::span<const double> w) {
    Matrix g(left.rows(), right.rows());
    for (std::size_t i = 0; i < left.rows(); ++i)
        for (std::size_t j = 0; j < right.rows(); ++j) g(i, j) = weighted_dot_serial(w, left.row(i), right.row(j));
    return g;
}

std::vector<double> project_serial(const Matrix& dual_columns, std::span<const double> w,
                                   std::span<const double> f) {
    std::vector<double> c(dual_columns.rows());
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = weighted_dot_serial(w, f, dual_columns.row(n));
    return c;
}

std::vector<double> synthesize_serial(const Matrix& columns, std::span<const double> c) {
    if (c.size() != columns.rows()) throw InvalidArgument("synthesize: coefficient count mismatch");
    std::vector<double> r(columns.cols(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        double s = 0.0;
        for (std::size_t n = 0; n < c.size(); ++n) s += c[n] * columns(n, i);
        r[i] = s;
    }
    return r;
}

double blocked_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b,
                   std::size_t block) {
    check_sizes(w.size(), a.size(), b.size());
    if (block == 0) block = w.size() > 0 ? w.size() : 1;
    double total = 0.0;
    for (std::size_t begin = 0; begin < w.size(); begin += block) {
        total += block_sum(w.data(), a.data(), b.data(), begin, std::min(begin + block, w.size()));
    }
    return total;
}

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b,
                    std::size_t block) {
    check_sizes(w.size(), a.size(), b.size());
    if (block == 0) block = w.size() > 0 ? w.size() : 1;
    const std::size_t nblocks = (w.size() + block - 1) / block;
    std::vector<double> partial(nblocks);
    const auto nb = static_cast<long>(nblocks);
#pragma omp parallel for schedule(static)
    for (long k = 0; k < nb; ++k) {
        const std::size_t begin = static_cast<std::size_t>(k) * block;
        partial[static_cast<std::size_t>(k)] =
            block_sum(w.data(), a.data(), b.data(), begin, std::min(begin + block, w.size()));
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

Matrix gram(const Matrix& columns, std::span<const double> w, std::size_t block) {
    const std::size_t n = columns.rows();
    Matrix g(n, n);
    const auto npairs = static_cast<long>(n * (n + 1) / 2);
#pragma omp parallel for schedule(dynamic)
    for (long p = 0; p < npairs; ++p) {
        // Unrank p into (i, j), i ≤ j, row-major over the upper triangle.
        std::size_t i = 0;
        auto rem = static_cast<std::size_t>(p);
        while (rem >= n - i) {
            rem -= n - i;
            ++i;
        }
        const std::size_t j = i + rem;
        const double v = blocked_dot(w, columns.row(i), columns.row(j), block);
        g(i, j) = v;
        g(j, i) = v;
    }
    return g;
}

Matrix cross_gram(const Matrix& left, const Matrix& right, std::span<const double> w, std::size_t block) {
    Matrix g(left.rows(), right.rows());
    const auto total = static_cast<long>(left.rows() * right.rows());
#pragma omp parallel for schedule(dynamic)
    for (long p = 0; p < total; ++p) {
        const std::size_t i = static_cast<std::size_t>(p) / right.rows();
        const std::size_t j = static_cast<std::size_t>(p) % right.rows();
        g(i, j) = blocked_dot(w, left.row(i), right.row(j), block);
    }
    return g;
}

std::vector<double> project(const Matrix& dual_columns, std::span<const double> w, std::span<const double> f,
                            std::size_t block) {
    std::vector<double> c(dual_columns.rows());
    const auto n = static_cast<long>(c.size());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k) {
        c[static_cast<std::size_t>(k)] = blocked_dot(w, f, dual_columns.row(static_cast<std::size_t>(k)), block);
    }
    return c;
}

std::vector<double> synthesize(const Matrix& columns, std::span<const double> c) {
    if (c.size() != columns.rows()) throw InvalidArgument("synthesize: coefficient count mismatch");
    std::vector<double> r(columns.cols(), 0.0);
    const auto m = static_cast<long>(r.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t n = 0; n < c.size(); ++n) s += c[n] * columns(n, static_cast<std::size_t>(i));
        r[static_cast<std::size_t>(i)] = s;
    }
    return r;
}

}  // namespace kernels
}  // namespace rieszflow
