#pragma once

#include "rodeodb/dbap.hpp"
#include "rodeodb/types.hpp"

namespace rodeodb {

struct Embedding {
    PointConfiguration points;
    Vector eigenvalues_topd;  // nonincreasing, negatives clipped to zero
    int clipped_negatives = 0;
};

struct ReconstructionResult {
    PointConfiguration points_hat;  // split order: anchors first, then targets
    GramBlocks gram_hat;
    DbapReport dbap;
    Vector eigenvalues_topd;
    int clipped_negatives = 0;
};

// target/target Gram block via the Nystrom extension C = B^T A^+ B; the
// pseudoinverse drops eigenvalues below 1e-10 times the largest
Matrix nystrom_extend(const Matrix& A, const Matrix& B_hat, int rank_d);

// symmetric Gram matrix [[A, B], [B^T, C]]
Matrix assemble_gram(const Matrix& A, const Matrix& B_hat, const Matrix& C_hat);

// top-d spectral embedding of a symmetric Gram matrix; negative
// eigenvalues among the top d are clipped to zero and counted
Embedding embed_points(const Matrix& X_hat, int d);

// full recovery: A from E, DBAP on F, Nystrom completion, embedding
ReconstructionResult reconstruct(const Matrix& E, const Matrix& F, const SolverConfig& cfg,
                                 const ProgressFn& progress = {});

}  // namespace rodeodb
