#include "rodeodb/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>

namespace rodeodb {

namespace {

double sq_dist(const Matrix& P, int i, int j) {
    double acc = 0.0;
    for (int k = 0; k < P.rows(); ++k) {
        const double diff = P(k, i) - P(k, j);
        acc += diff * diff;
    }
    return acc;
}

}  // namespace

Matrix pairwise_edm(const PointConfiguration& pts) {
    const int T = pts.n_points();
    const Matrix& P = pts.coords;
    Matrix D(T, T);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < T; ++i) {
        D(i, i) = 0.0;
        for (int j = i + 1; j < T; ++j) {
            const double v = sq_dist(P, i, j);
            D(i, j) = v;
            D(j, i) = v;
        }
    }
    return D;
}

std::pair<Matrix, Matrix> edm_blocks(const PointConfiguration& pts, const AnchorSplit& split) {
    split.validate(pts.n_points());
    const Matrix& P = pts.coords;
    const int m = split.m(), n = split.n();
    Matrix E(m, m), F(m, n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
        E(i, i) = 0.0;
        for (int j = i + 1; j < m; ++j) {
            const double v = sq_dist(P, split.anchors[i], split.anchors[j]);
            E(i, j) = v;
            E(j, i) = v;
        }
        for (int j = 0; j < n; ++j)
            F(i, j) = sq_dist(P, split.anchors[i], split.targets[j]);
    }
    return {std::move(E), std::move(F)};
}

DistanceBlocks split_blocks(const Matrix& D, const AnchorSplit& split) {
    const int T = static_cast<int>(D.rows());
    if (D.cols() != T) throw DimensionMismatch("split_blocks: D must be square");
    split.validate(T);
    const int m = split.m(), n = split.n();
    DistanceBlocks out;
    out.E.resize(m, m);
    out.F.resize(m, n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) out.E(i, j) = D(split.anchors[i], split.anchors[j]);
        for (int j = 0; j < n; ++j) out.F(i, j) = D(split.anchors[i], split.targets[j]);
    }
    Matrix G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = D(split.targets[i], split.targets[j]);
    out.G = std::move(G);
    return out;
}

PointConfiguration center_anchors(const PointConfiguration& pts, const AnchorSplit& split) {
    split.validate(pts.n_points());
    if (split.m() == 0) throw InvalidArgument("center_anchors: no anchors");
    Vector centroid = Vector::Zero(pts.dim());
    for (int a : split.anchors) centroid += pts.coords.col(a);
    centroid /= split.m();
    PointConfiguration out;
    out.coords = pts.coords.colwise() - centroid;
    return out;
}

Matrix gram_from_edm(const Matrix& D, const CenteringVector& cv) {
    const int T = static_cast<int>(D.rows());
    if (D.cols() != T) throw DimensionMismatch("gram_from_edm: D must be square");
    if (cv.s.size() != T) throw DimensionMismatch("gram_from_edm: s length mismatch");
    const Vector c = D * cv.s;             // row weights
    const double q = cv.s.dot(c);          // s^T D s
    Matrix X(T, T);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < T; ++i) {
        X(i, i) = -0.5 * (D(i, i) - c(i) - c(i) + q);
        for (int j = i + 1; j < T; ++j) {
            const double v = -0.5 * (D(i, j) - c(i) - c(j) + q);
            X(i, j) = v;
            X(j, i) = v;
        }
    }
    return X;
}

PointConfiguration procrustes_align(const PointConfiguration& estimate,
                                    const PointConfiguration& truth) {
    if (estimate.dim() != truth.dim() || estimate.n_points() != truth.n_points())
        throw DimensionMismatch("procrustes_align: shape mismatch");
    const int d = estimate.dim();
    const Vector mu_e = estimate.coords.rowwise().mean();
    const Vector mu_t = truth.coords.rowwise().mean();
    const Matrix Ec = estimate.coords.colwise() - mu_e;
    const Matrix Tc = truth.coords.colwise() - mu_t;
    const Matrix M = Tc * Ec.transpose();  // d x d cross-covariance
    Matrix Q;
    if (M.norm() == 0.0) {
        Q = Matrix::Identity(d, d);
    } else {
        Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Q = svd.matrixU() * svd.matrixV().transpose();
    }
    PointConfiguration out;
    out.coords = (Q * Ec).colwise() + mu_t;
    return out;
}

double rmse(const PointConfiguration& estimate, const PointConfiguration& truth) {
    const PointConfiguration aligned = procrustes_align(estimate, truth);
    const double err = (aligned.coords - truth.coords).norm();
    return err / std::sqrt(static_cast<double>(truth.n_points()));
}

PointConfiguration permute_to_split(const PointConfiguration& pts, const AnchorSplit& split) {
    split.validate(pts.n_points());
    Matrix out(pts.dim(), pts.n_points());
    int col = 0;
    for (int a : split.anchors) out.col(col++) = pts.coords.col(a);
    for (int t : split.targets) out.col(col++) = pts.coords.col(t);
    PointConfiguration p;
    p.coords = std::move(out);
    return p;
}

AnchorSplit AnchorSplit::contiguous(int T, int m_anchors) {
    if (m_anchors < 1 || m_anchors > T)
        throw InvalidArgument("AnchorSplit: need 1 <= m <= T");
    AnchorSplit s;
    s.anchors.resize(m_anchors);
    s.targets.resize(T - m_anchors);
    for (int i = 0; i < m_anchors; ++i) s.anchors[i] = i;
    for (int i = m_anchors; i < T; ++i) s.targets[i - m_anchors] = i;
    return s;
}

AnchorSplit AnchorSplit::sample(int T, int m_anchors, Rng& rng) {
    if (m_anchors < 1 || m_anchors > T)
        throw InvalidArgument("AnchorSplit: need 1 <= m <= T");
    AnchorSplit s;
    s.anchors = rng.sample_without_replacement(T, m_anchors);
    s.targets.reserve(T - m_anchors);
    std::size_t k = 0;
    for (int i = 0; i < T; ++i) {
        if (k < s.anchors.size() && s.anchors[k] == i) {
            ++k;
        } else {
            s.targets.push_back(i);
        }
    }
    return s;
}

void AnchorSplit::validate(int T) const {
    if (static_cast<int>(anchors.size() + targets.size()) != T)
        throw InvalidArgument("AnchorSplit: sizes do not cover the point set");
    std::vector<char> seen(T, 0);
    auto mark = [&](int idx) {
        if (idx < 0 || idx >= T) throw InvalidArgument("AnchorSplit: index out of range");
        if (seen[idx]) throw InvalidArgument("AnchorSplit: duplicate index");
        seen[idx] = 1;
    };
    for (int a : anchors) mark(a);
    for (int t : targets) mark(t);
    if (anchors.empty()) throw InvalidArgument("AnchorSplit: at least one anchor required");
}

}  // namespace rodeodb
