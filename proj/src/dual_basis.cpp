#include "rodeodb/dual_basis.hpp"

namespace rodeodb {

DualBasisContext::DualBasisContext(const Matrix& E, const Matrix& F_observed, int central_row_k) {
    const int m = static_cast<int>(E.rows());
    if (E.cols() != m) throw DimensionMismatch("DualBasisContext: E must be square");
    if (F_observed.rows() != m)
        throw DimensionMismatch("DualBasisContext: F row count must match E");
    if (central_row_k < 0 || central_row_k >= m)
        throw InvalidArgument("DualBasisContext: central row out of range");
    if (!E.allFinite() || !F_observed.allFinite())
        throw InvalidArgument("DualBasisContext: non-finite input");
    k_ = central_row_k;
    e_row_sums_ = E.rowwise().sum();
    e_mean_ = E.sum() / (static_cast<double>(m) * static_cast<double>(m));
    f_central_ = F_observed.row(central_row_k);
}

Matrix anchor_gram_A(const Matrix& E) {
    const int m = static_cast<int>(E.rows());
    if (E.cols() != m) throw DimensionMismatch("anchor_gram_A: E must be square");
    const Vector r = E.rowwise().sum() / m;
    const double mu = E.sum() / (static_cast<double>(m) * static_cast<double>(m));
    Matrix A(m, m);
    for (int i = 0; i < m; ++i) {
        A(i, i) = -0.5 * (E(i, i) - r(i) - r(i) + mu);
        for (int j = i + 1; j < m; ++j) {
            const double v = -0.5 * (E(i, j) - r(i) - r(j) + mu);
            A(i, j) = v;
            A(j, i) = v;
        }
    }
    return A;
}

void op_B_into(const Matrix& F, const DualBasisContext& ctx, Matrix& out) {
    const int m = ctx.m(), n = ctx.n();
    if (F.rows() != m || F.cols() != n) throw DimensionMismatch("op_B: F shape mismatch");
    out.resize(m, n);
    const Vector& e1 = ctx.e_row_sums();
    const double mu = ctx.e_mean();
    const double inv_m = 1.0 / m;
    const Eigen::RowVectorXd col_means = F.colwise().sum() * inv_m;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        const double cm = col_means(j);
        for (int i = 0; i < m; ++i)
            out(i, j) = -0.5 * (F(i, j) - cm - inv_m * e1(i) + mu);
    }
}

void op_A_into(const Matrix& B, const DualBasisContext& ctx, Matrix& out) {
    const int m = ctx.m(), n = ctx.n();
    if (B.rows() != m || B.cols() != n) throw DimensionMismatch("op_A: B shape mismatch");
    out.resize(m, n);
    const int k = ctx.central_row();
    const Vector& e1 = ctx.e_row_sums();
    const Vector& fk = ctx.f_central();
    const double inv_m = 1.0 / m;
    Vector row_off(m);
    for (int i = 0; i < m; ++i) row_off(i) = inv_m * (e1(i) - e1(k));
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        const double bk = B(k, j);
        const double fkj = fk(j);
        for (int i = 0; i < m; ++i)
            out(i, j) = fkj - 2.0 * (B(i, j) - bk) + row_off(i);
    }
}

Matrix op_B(const Matrix& F, const DualBasisContext& ctx) {
    Matrix out;
    op_B_into(F, ctx, out);
    return out;
}

Matrix op_A(const Matrix& B, const DualBasisContext& ctx) {
    Matrix out;
    op_A_into(B, ctx, out);
    return out;
}

}  // namespace rodeodb
