#include "rodeodb/reference.hpp"

namespace rodeodb::reference {

Matrix pairwise_edm(const PointConfiguration& pts) {
    const int T = pts.n_points();
    const Matrix& P = pts.coords;
    Matrix D(T, T);
    for (int i = 0; i < T; ++i)
        for (int j = 0; j < T; ++j) D(i, j) = (P.col(i) - P.col(j)).squaredNorm();
    return D;
}

Matrix gram_from_edm(const Matrix& D, const Vector& s) {
    const int T = static_cast<int>(D.rows());
    const Matrix J = Matrix::Identity(T, T) - Vector::Ones(T) * s.transpose();
    return -0.5 * J * D * J.transpose();
}

Matrix anchor_gram_A(const Matrix& E) {
    const int m = static_cast<int>(E.rows());
    const Matrix ones = Matrix::Ones(m, m);
    const double mu = E.mean();
    return -0.5 * (E - ones * E / m - E * ones / m + mu * ones);
}

Matrix op_B(const Matrix& E, const Matrix& F) {
    const int m = static_cast<int>(F.rows());
    const int n = static_cast<int>(F.cols());
    const Matrix ones_mm = Matrix::Ones(m, m);
    const Matrix ones_mn = Matrix::Ones(m, n);
    const double mu = E.mean();
    return -0.5 * (F - ones_mm * F / m - E * ones_mn / m + mu * ones_mn);
}

Matrix op_A(const Matrix& E, const Vector& f_central, const Matrix& B, int k) {
    const int m = static_cast<int>(B.rows());
    const int n = static_cast<int>(B.cols());
    const Vector ones_m = Vector::Ones(m);
    const Vector e1 = E * Vector::Ones(m);
    return ones_m * f_central.transpose() - 2.0 * (B - ones_m * B.row(k)) +
           (1.0 / m) * (e1 - e1(k) * ones_m) * Eigen::RowVectorXd::Ones(n);
}

Matrix hard_threshold(const Matrix& Z, double xi, int protected_row) {
    Matrix out = Matrix::Zero(Z.rows(), Z.cols());
    for (int i = 0; i < Z.rows(); ++i) {
        if (i == protected_row) continue;
        for (int j = 0; j < Z.cols(); ++j)
            if (std::abs(Z(i, j)) > xi) out(i, j) = Z(i, j);
    }
    return out;
}

Matrix tangent_project(const Matrix& M, const Matrix& U, const Matrix& V) {
    const Matrix Pu = U * U.transpose();
    const Matrix Pv = V * V.transpose();
    return Pu * M + M * Pv - Pu * M * Pv;
}

}  // namespace rodeodb::reference
