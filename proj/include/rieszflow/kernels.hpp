#pragma once

// Data-parallel inner loops. Every OpenMP kernel has a serial reference
// counterpart (suffix _serial) kept for tests and benchmarks.
//
// Reductions are blocked: a sum over M nodes is split into contiguous blocks
// of `block` entries (one quadrature panel by default), each block is summed
// left to right and block partials are combined left to right. The result
// depends only on `block`, never on the thread count or schedule.

#include <cstddef>
#include <span>
#include <vector>

#include "rieszflow/matrix.hpp"

namespace rieszflow::kernels {

// --- serial reference -------------------------------------------------------

/// Σ_i w_i a_i b_i, summed left to right.
double weighted_dot_serial(std::span<const double> w, std::span<const double> a, std::span<const double> b);

/// G_nm = Σ_i w_i C_ni C_mi for the rows of `columns` (one row per function).
Matrix gram_serial(const Matrix& columns, std::span<const double> w);

/// B_nm = Σ_i w_i L_ni R_mi.
Matrix cross_gram_serial(const Matrix& left, const Matrix& right, std::span<const double> w);

/// c_n = Σ_i w_i f_i D_ni.
std::vector<double> project_serial(const Matrix& dual_columns, std::span<const double> w,
                                   std::span<const double> f);

/// r_i = Σ_n c_n C_ni.
std::vector<double> synthesize_serial(const Matrix& columns, std::span<const double> c);

// --- OpenMP -----------------------------------------------------------------

/// Blocked sum, evaluated on one thread. Reference for the blocked kernels.
double blocked_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b,
                   std::size_t block);

/// Parallel over blocks; bit-identical to blocked_dot.
double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b,
                    std::size_t block);

/// Parallel over (n, m) pairs; each entry is a blocked_dot.
Matrix gram(const Matrix& columns, std::span<const double> w, std::size_t block);

Matrix cross_gram(const Matrix& left, const Matrix& right, std::span<const double> w, std::size_t block);

std::vector<double> project(const Matrix& dual_columns, std::span<const double> w, std::span<const double> f,
                            std::size_t block);

/// Parallel over nodes; each r_i sums over n in order, so it matches synthesize_serial exactly.
std::vector<double> synthesize(const Matrix& columns, std::span<const double> c);

}  // namespace rieszflow::kernels
