#include "rodeodb/pipeline.hpp"

#include <Eigen/Eigenvalues>

#include "rodeodb/dual_basis.hpp"

namespace rodeodb {

namespace {

constexpr double kPinvCutoffRel = 1e-10;

void validate_distance_inputs(const Matrix& E, const Matrix& F) {
    const int m = static_cast<int>(E.rows());
    if (E.cols() != m) throw DimensionMismatch("reconstruct: E must be square");
    if (F.rows() != m) throw DimensionMismatch("reconstruct: F row count must match E");
    if (!E.allFinite() || !F.allFinite())
        throw InvalidArgument("reconstruct: non-finite distance entry");
    const double scale = std::max(1.0, E.cwiseAbs().maxCoeff());
    for (int i = 0; i < m; ++i) {
        if (std::abs(E(i, i)) > 1e-12 * scale)
            throw InvalidArgument("reconstruct: E has a nonzero diagonal entry");
        for (int j = 0; j < m; ++j) {
            if (E(i, j) < 0.0) throw InvalidArgument("reconstruct: E has a negative entry");
            if (std::abs(E(i, j) - E(j, i)) > 1e-9 * scale)
                throw InvalidArgument("reconstruct: E is not symmetric");
        }
    }
}

}  // namespace

Matrix nystrom_extend(const Matrix& A, const Matrix& B_hat, int rank_d) {
    const int m = static_cast<int>(A.rows());
    if (A.cols() != m) throw DimensionMismatch("nystrom_extend: A must be square");
    if (B_hat.rows() != m) throw DimensionMismatch("nystrom_extend: B row count must match A");
    const Matrix A_sym = 0.5 * (A + A.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(A_sym);
    if (eig.info() != Eigen::Success)
        throw DegenerateAnchors("nystrom_extend: eigendecomposition failed");
    const Vector& lam = eig.eigenvalues();
    const double lam_max = lam(m - 1);
    if (!(lam_max > 0.0))
        throw DegenerateAnchors("nystrom_extend: anchor Gram block has no positive eigenvalue");
    const double cutoff = kPinvCutoffRel * lam_max;
    int kept = 0;
    for (int i = 0; i < m; ++i)
        if (lam(i) > cutoff) ++kept;
    if (kept < rank_d)
        throw DegenerateAnchors("nystrom_extend: anchor Gram block rank below embedding dimension");
    // C = (U^T B)^T diag(1/lambda) (U^T B) over the kept spectrum
    const Matrix W = eig.eigenvectors().rightCols(kept).transpose() * B_hat;
    const Vector inv_lam = lam.tail(kept).cwiseInverse();
    const Matrix C = W.transpose() * inv_lam.asDiagonal() * W;
    return 0.5 * (C + C.transpose());
}

Matrix assemble_gram(const Matrix& A, const Matrix& B_hat, const Matrix& C_hat) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(B_hat.cols());
    if (A.cols() != m || B_hat.rows() != m)
        throw DimensionMismatch("assemble_gram: block shape mismatch");
    if (C_hat.rows() != n || C_hat.cols() != n)
        throw DimensionMismatch("assemble_gram: C shape mismatch");
    Matrix X(m + n, m + n);
    X.topLeftCorner(m, m) = 0.5 * (A + A.transpose());
    X.topRightCorner(m, n) = B_hat;
    X.bottomLeftCorner(n, m) = B_hat.transpose();
    X.bottomRightCorner(n, n) = 0.5 * (C_hat + C_hat.transpose());
    return X;
}

Embedding embed_points(const Matrix& X_hat, int d) {
    const int T = static_cast<int>(X_hat.rows());
    if (X_hat.cols() != T) throw DimensionMismatch("embed_points: X must be square");
    if (d < 1 || d > T) throw InvalidArgument("embed_points: bad embedding dimension");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (X_hat + X_hat.transpose()));
    if (eig.info() != Eigen::Success)
        throw InvalidArgument("embed_points: eigendecomposition failed");
    Embedding emb;
    emb.eigenvalues_topd.resize(d);
    Matrix P(d, T);
    for (int c = 0; c < d; ++c) {
        const int src = T - 1 - c;  // eigenvalues ascend; take the top d
        double lam = eig.eigenvalues()(src);
        Vector u = eig.eigenvectors().col(src);
        if (lam < 0.0) {
            lam = 0.0;
            ++emb.clipped_negatives;
        }
        int idx = 0;
        u.cwiseAbs().maxCoeff(&idx);
        if (u(idx) < 0.0) u = -u;
        emb.eigenvalues_topd(c) = lam;
        P.row(c) = std::sqrt(lam) * u.transpose();
    }
    emb.points = PointConfiguration(std::move(P));
    return emb;
}

ReconstructionResult reconstruct(const Matrix& E, const Matrix& F, const SolverConfig& cfg,
                                 const ProgressFn& progress) {
    cfg.validate();
    validate_distance_inputs(E, F);
    const int m = static_cast<int>(E.rows());
    if (cfg.central_row_k >= m)
        throw InvalidArgument("reconstruct: central row out of range");
    if (m < cfg.rank_d + 1)
        throw InvalidArgument("reconstruct: need at least rank_d + 1 anchors");

    ReconstructionResult res;
    const Matrix A = anchor_gram_A(E);
    const DualBasisContext ctx(E, F, cfg.central_row_k);
    res.dbap = dbap_run(F, ctx, cfg, progress);
    const Matrix C = nystrom_extend(A, res.dbap.B_hat, cfg.rank_d);
    const Matrix X = assemble_gram(A, res.dbap.B_hat, C);
    Embedding emb = embed_points(X, cfg.rank_d);
    res.points_hat = std::move(emb.points);
    res.eigenvalues_topd = std::move(emb.eigenvalues_topd);
    res.clipped_negatives = emb.clipped_negatives;
    res.gram_hat.A = A;
    res.gram_hat.B = res.dbap.B_hat;
    res.gram_hat.C = C;
    return res;
}

}  // namespace rodeodb
