#pragma once

#include <functional>

#include "rodeodb/dual_basis.hpp"
#include "rodeodb/types.hpp"

namespace rodeodb {

struct SolverConfig {
    int rank_d = 2;
    double xi0_scale = 1.2;
    double gamma = 0.95;
    double conv_tol = 1e-14;
    double mask_tol = 1e-3;
    int patience = 3;
    int max_iter = 2000;
    int central_row_k = 0;

    void validate() const;
};

enum class StopReason { tolerance, mask_stable, max_iter };

const char* to_string(StopReason r);

struct DbapReport {
    Matrix B_hat;
    Matrix S_hat;
    int iterations = 0;
    double final_rel_err = 0.0;
    bool converged = false;
    StopReason stop_reason = StopReason::max_iter;
};

// iterate state: rank-d factors of the current Gram block estimate plus
// the sparse estimate and threshold
struct DbapState {
    Matrix U;
    Vector sigma;
    Matrix V;
    Matrix S;
    double xi = 0.0;
    int iter = 0;
    std::vector<double> rel_err_history;
};

using ProgressFn =
    std::function<void(int iter, double rel_err, double xi, long support_size)>;

struct SvdTriple {
    Matrix U;
    Vector sigma;
    Matrix V;
};

// keeps entries with |z| strictly above xi; the protected row is forced to
// zero regardless of magnitude (pass a negative index to disable)
Matrix hard_threshold(const Matrix& Z, double xi, int protected_row);

// best rank-d approximation factors, singular values nonincreasing; sign
// fixed so the largest-magnitude entry of each left vector is positive
SvdTriple truncated_rank_d(const Matrix& M, int d);

// projection onto the tangent space of the rank-d manifold at (U, V),
// computed by the factored small-core route
Matrix tangent_project(const Matrix& M, const Matrix& U, const Matrix& V);

// rank-d truncation of tangent_project(M, U, V) via the 2d x 2d core SVD
SvdTriple tangent_truncate(const Matrix& M, const Matrix& U, const Matrix& V, int d);

DbapReport dbap_run(const Matrix& F, const DualBasisContext& ctx, const SolverConfig& cfg,
                    const ProgressFn& progress = {});

}  // namespace rodeodb
