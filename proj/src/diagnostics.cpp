#include "rodeodb/diagnostics.hpp"

#include <Eigen/SVD>

namespace rodeodb {

Incoherence incoherence(const Matrix& M, int r) {
    const int m = static_cast<int>(M.rows());
    const int n = static_cast<int>(M.cols());
    if (r < 1 || r > std::min(m, n))
        throw InvalidArgument("incoherence: r must be in [1, min(m, n)]");
    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    Incoherence out;
    int num_rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * sv(0)) ++num_rank;
    out.rank_deficient = num_rank < r;
    const Matrix Ur = svd.matrixU().leftCols(r);
    const Matrix Vr = svd.matrixV().leftCols(r);
    out.mu1 = (static_cast<double>(m) / r) * Ur.rowwise().squaredNorm().maxCoeff();
    out.mu2 = (static_cast<double>(n) / r) * Vr.rowwise().squaredNorm().maxCoeff();
    return out;
}

std::pair<double, double> alpha_sparsity(const Matrix& S) {
    const int m = static_cast<int>(S.rows());
    const int n = static_cast<int>(S.cols());
    if (m == 0 || n == 0) throw InvalidArgument("alpha_sparsity: empty matrix");
    int max_row = 0, max_col = 0;
    std::vector<int> col_counts(n, 0);
    for (int i = 0; i < m; ++i) {
        int row_count = 0;
        for (int j = 0; j < n; ++j) {
            if (S(i, j) != 0.0) {
                ++row_count;
                ++col_counts[j];
            }
        }
        max_row = std::max(max_row, row_count);
    }
    for (int j = 0; j < n; ++j) max_col = std::max(max_col, col_counts[j]);
    return {static_cast<double>(max_row) / n, static_cast<double>(max_col) / m};
}

double centering_norm(int T, int m_anchors) {
    if (m_anchors < 1 || m_anchors > T)
        throw InvalidArgument("centering_norm: need 1 <= m <= T");
    const CenteringVector cv = CenteringVector::anchor_uniform(T, m_anchors);
    const Matrix J =
        Matrix::Identity(T, T) - Vector::Ones(T) * cv.s.transpose();
    Eigen::BDCSVD<Matrix> svd(J);
    return svd.singularValues()(0);
}

}  // namespace rodeodb
