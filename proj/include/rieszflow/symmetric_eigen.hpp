#pragma once

#include <vector>

#include "rieszflow/matrix.hpp"

namespace rieszflow {

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k pairs with values[k]
};

/// Cyclic Jacobi rotations on a symmetric matrix. Deterministic: the sweep
/// order is fixed and no randomness or threading is involved. Sweeps stop once
/// the off-diagonal Frobenius norm falls below tol·‖A‖_F.
SymmetricEigen symmetric_eigen(const Matrix& a, double tol = 1e-15, int max_sweeps = 100);

}  // namespace rieszflow
