#pragma once

#include "rodeodb/types.hpp"

namespace rodeodb::reference {

// Serial implementations written as literal dense matrix expressions.
// They follow a different computational route than the production kernels
// and serve as oracles in the tests and as the baseline in the benchmark.

Matrix pairwise_edm(const PointConfiguration& pts);

Matrix gram_from_edm(const Matrix& D, const Vector& s);

Matrix anchor_gram_A(const Matrix& E);

Matrix op_B(const Matrix& E, const Matrix& F);

Matrix op_A(const Matrix& E, const Vector& f_central, const Matrix& B, int k);

Matrix hard_threshold(const Matrix& Z, double xi, int protected_row);

// dense tangent-space projection U U^T M + M V V^T - U U^T M V V^T
Matrix tangent_project(const Matrix& M, const Matrix& U, const Matrix& V);

}  // namespace rodeodb::reference
