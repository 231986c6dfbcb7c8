#include "rodeodb/dbap.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace rodeodb {

void SolverConfig::validate() const {
    if (rank_d < 1) throw InvalidArgument("SolverConfig: rank_d must be positive");
    if (!(xi0_scale > 0.0)) throw InvalidArgument("SolverConfig: xi0_scale must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("SolverConfig: gamma must be in (0,1)");
    if (!(conv_tol >= 0.0)) throw InvalidArgument("SolverConfig: conv_tol must be nonnegative");
    if (!(mask_tol >= 0.0)) throw InvalidArgument("SolverConfig: mask_tol must be nonnegative");
    if (patience < 1) throw InvalidArgument("SolverConfig: patience must be positive");
    if (max_iter < 1) throw InvalidArgument("SolverConfig: max_iter must be positive");
    if (central_row_k < 0) throw InvalidArgument("SolverConfig: central_row_k must be nonnegative");
}

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::tolerance: return "tolerance";
        case StopReason::mask_stable: return "mask_stable";
        case StopReason::max_iter: return "max_iter";
    }
    return "unknown";
}

Matrix hard_threshold(const Matrix& Z, double xi, int protected_row) {
    Matrix out = Matrix::Zero(Z.rows(), Z.cols());
    const int m = static_cast<int>(Z.rows());
    const int n = static_cast<int>(Z.cols());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
        if (i == protected_row) continue;
        for (int j = 0; j < n; ++j)
            if (std::abs(Z(i, j)) > xi) out(i, j) = Z(i, j);
    }
    return out;
}

namespace {

// Thresholds R into S, collects the kept linear indices (row-major, sorted)
// and the sum of squares of the dropped entries. Per-row partials are merged
// in row order so the result does not depend on the thread count.
void threshold_fused(const Matrix& R, double xi, int protected_row, Matrix& S,
                     std::vector<int>& support, double& sumsq_dropped) {
    const int m = static_cast<int>(R.rows());
    const int n = static_cast<int>(R.cols());
    S.resize(m, n);
    std::vector<std::vector<int>> row_supp(m);
    std::vector<double> row_sumsq(m, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
        double acc = 0.0;
        auto& supp = row_supp[i];
        if (i == protected_row) {
            for (int j = 0; j < n; ++j) {
                S(i, j) = 0.0;
                acc += R(i, j) * R(i, j);
            }
        } else {
            for (int j = 0; j < n; ++j) {
                const double v = R(i, j);
                if (std::abs(v) > xi) {
                    S(i, j) = v;
                    supp.push_back(i * n + j);
                } else {
                    S(i, j) = 0.0;
                    acc += v * v;
                }
            }
        }
        row_sumsq[i] = acc;
    }
    support.clear();
    sumsq_dropped = 0.0;
    for (int i = 0; i < m; ++i) {
        support.insert(support.end(), row_supp[i].begin(), row_supp[i].end());
        sumsq_dropped += row_sumsq[i];
    }
}

double jaccard_distance(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t ia = 0, ib = 0, inter = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] == b[ib]) {
            ++inter;
            ++ia;
            ++ib;
        } else if (a[ia] < b[ib]) {
            ++ia;
        } else {
            ++ib;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    if (uni == 0) return 0.0;
    return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

void fix_signs(Matrix& U, Matrix& V) {
    for (int c = 0; c < U.cols(); ++c) {
        int idx = 0;
        U.col(c).cwiseAbs().maxCoeff(&idx);
        if (U(idx, c) < 0.0) {
            U.col(c) = -U.col(c);
            V.col(c) = -V.col(c);
        }
    }
}

}  // namespace

SvdTriple truncated_rank_d(const Matrix& M, int d) {
    if (d < 1) throw InvalidArgument("truncated_rank_d: d must be positive");
    if (d > std::min(M.rows(), M.cols()))
        throw InvalidArgument("truncated_rank_d: d exceeds matrix dimensions");
    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdTriple t;
    t.U = svd.matrixU().leftCols(d);
    t.sigma = svd.singularValues().head(d);
    t.V = svd.matrixV().leftCols(d);
    fix_signs(t.U, t.V);
    return t;
}

namespace {

void check_orthonormal(const Matrix& Q, const char* name) {
    const int d = static_cast<int>(Q.cols());
    const double dev =
        (Q.transpose() * Q - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > 1e-8)
        throw InvalidArgument(std::string("tangent projection: ") + name +
                              " does not have orthonormal columns");
}

struct TangentCore {
    Matrix basis_left;   // [U Ql], m x 2d
    Matrix basis_right;  // [V Qr], n x 2d
    Matrix K;            // 2d x 2d core
};

TangentCore tangent_core(const Matrix& M, const Matrix& U, const Matrix& V) {
    const int m = static_cast<int>(M.rows());
    const int n = static_cast<int>(M.cols());
    const int d = static_cast<int>(U.cols());
    if (U.rows() != m || V.rows() != n || V.cols() != d)
        throw DimensionMismatch("tangent projection: factor shape mismatch");
    const Matrix Y = M * V;                         // m x d
    const Matrix W = M.transpose() * U;             // n x d
    const Matrix C = U.transpose() * Y;             // d x d
    const Matrix Lres = Y - U * C;                  // (I - U U^T) M V
    const Matrix Rres = W - V * C.transpose();      // (I - V V^T) M^T U
    Eigen::HouseholderQR<Matrix> qr_l(Lres);
    Eigen::HouseholderQR<Matrix> qr_r(Rres);
    const Matrix Ql = qr_l.householderQ() * Matrix::Identity(m, d);
    const Matrix Qr = qr_r.householderQ() * Matrix::Identity(n, d);
    const Matrix Rl =
        qr_l.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    const Matrix Rr =
        qr_r.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    TangentCore tc;
    tc.basis_left.resize(m, 2 * d);
    tc.basis_left << U, Ql;
    tc.basis_right.resize(n, 2 * d);
    tc.basis_right << V, Qr;
    tc.K.resize(2 * d, 2 * d);
    tc.K << C, Rr.transpose(), Rl, Matrix::Zero(d, d);
    return tc;
}

}  // namespace

Matrix tangent_project(const Matrix& M, const Matrix& U, const Matrix& V) {
    check_orthonormal(U, "U");
    check_orthonormal(V, "V");
    const TangentCore tc = tangent_core(M, U, V);
    return tc.basis_left * tc.K * tc.basis_right.transpose();
}

SvdTriple tangent_truncate(const Matrix& M, const Matrix& U, const Matrix& V, int d) {
    if (d != U.cols())
        throw InvalidArgument("tangent_truncate: d must match the factor rank");
    const TangentCore tc = tangent_core(M, U, V);
    Eigen::JacobiSVD<Matrix> svd(tc.K, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdTriple t;
    t.U = tc.basis_left * svd.matrixU().leftCols(d);
    t.sigma = svd.singularValues().head(d);
    t.V = tc.basis_right * svd.matrixV().leftCols(d);
    fix_signs(t.U, t.V);
    return t;
}

DbapReport dbap_run(const Matrix& F, const DualBasisContext& ctx, const SolverConfig& cfg,
                    const ProgressFn& progress) {
    cfg.validate();
    const int m = static_cast<int>(F.rows());
    const int n = static_cast<int>(F.cols());
    if (m != ctx.m() || n != ctx.n()) throw DimensionMismatch("dbap_run: F shape mismatch");
    const int d = cfg.rank_d;
    if (m < d || n < d)
        throw InvalidArgument("dbap_run: rank exceeds block dimensions");
    const int kp = ctx.central_row();

    DbapReport rep;
    const double norm_f = F.norm();
    if (norm_f == 0.0) {
        rep.B_hat = Matrix::Zero(m, n);
        rep.S_hat = Matrix::Zero(m, n);
        rep.iterations = 0;
        rep.final_rel_err = 0.0;
        rep.converged = true;
        rep.stop_reason = StopReason::tolerance;
        return rep;
    }

    DbapState st;
    double xi0 = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == kp) continue;
        for (int j = 0; j < n; ++j) xi0 = std::max(xi0, std::abs(F(i, j)));
    }
    st.xi = cfg.xi0_scale * xi0;

    std::vector<int> supp_prev, supp_cur;
    double sumsq_dropped = 0.0;
    threshold_fused(F, st.xi, kp, st.S, supp_prev, sumsq_dropped);

    Matrix work_fs = F - st.S;
    Matrix Z, Fk, R;
    op_B_into(work_fs, ctx, Z);
    SvdTriple t = truncated_rank_d(Z, d);
    const bool b0_zero = (t.sigma.size() == 0) || (t.sigma.maxCoeff() == 0.0);
    Matrix B = t.U * t.sigma.asDiagonal() * t.V.transpose();

    int streak = 0;
    bool stopped = false;
    const std::size_t full_mask = static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(n);
    for (int it = 1; it <= cfg.max_iter; ++it) {
        op_A_into(B, ctx, Fk);
        st.xi *= cfg.gamma;
        R = F - Fk;
        threshold_fused(R, st.xi, kp, st.S, supp_cur, sumsq_dropped);
        work_fs = F - st.S;
        op_B_into(work_fs, ctx, Z);
        if (it == 1 && b0_zero)
            t = truncated_rank_d(Z, d);
        else
            t = tangent_truncate(Z, t.U, t.V, d);
        B.noalias() = t.U * t.sigma.asDiagonal() * t.V.transpose();

        const double rel_err = std::sqrt(sumsq_dropped) / norm_f;
        if (!std::isfinite(rel_err) || !B.allFinite())
            throw SolverDiverged("dbap_run: non-finite iterate", it, rel_err);

        const double jd = jaccard_distance(supp_prev, supp_cur);
        streak = (jd < cfg.mask_tol) ? streak + 1 : 0;

        st.iter = it;
        st.rel_err_history.push_back(rel_err);
        rep.iterations = it;
        rep.final_rel_err = rel_err;
        if (progress) progress(it, rel_err, st.xi, static_cast<long>(supp_cur.size()));

        if (rel_err <= cfg.conv_tol && streak >= cfg.patience) {
            rep.converged = true;
            rep.stop_reason = (supp_cur.size() == full_mask) ? StopReason::mask_stable
                                                             : StopReason::tolerance;
            stopped = true;
            break;
        }
        supp_prev.swap(supp_cur);
    }
    if (!stopped) {
        rep.converged = false;
        rep.stop_reason = StopReason::max_iter;
    }
    rep.B_hat = std::move(B);
    rep.S_hat = st.S;
    return rep;
}

}  // namespace rodeodb
