#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rodeodb/geometry.hpp"
#include "rodeodb/reference.hpp"
#include "rodeodb/rng.hpp"

using namespace rodeodb;

namespace {

PointConfiguration random_cloud(int d, int T, Rng& rng, double scale = 50.0) {
    Matrix P(d, T);
    for (int j = 0; j < T; ++j)
        for (int i = 0; i < d; ++i) P(i, j) = rng.uniform(-scale, scale);
    return PointConfiguration(std::move(P));
}

Matrix random_orthogonal(int d, Rng& rng) {
    Matrix G(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G(i, j) = rng.normal();
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ();
    if (rng.uniform() < 0.5) Q.col(0) = -Q.col(0);  // mix in reflections
    return Q;
}

}  // namespace

TEST_CASE("pairwise_edm matches the double-loop oracle") {
    Rng rng(101);
    for (int rep = 0; rep < 8; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(4));
        const int T = 2 + static_cast<int>(rng.below(40));
        const PointConfiguration pts = random_cloud(d, T, rng);
        const Matrix D = pairwise_edm(pts);
        const Matrix D_ref = reference::pairwise_edm(pts);
        CHECK((D - D_ref).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + D_ref.cwiseAbs().maxCoeff()));
        CHECK(D.diagonal().cwiseAbs().maxCoeff() == 0.0);
        CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(D.minCoeff() >= 0.0);
    }
}

TEST_CASE("pairwise_edm of a single point is [[0]]") {
    PointConfiguration p(Matrix::Constant(3, 1, 2.5));
    const Matrix D = pairwise_edm(p);
    REQUIRE(D.rows() == 1);
    REQUIRE(D.cols() == 1);
    CHECK(D(0, 0) == 0.0);
}

TEST_CASE("edm_blocks agrees with split_blocks on the full matrix") {
    Rng rng(102);
    const PointConfiguration pts = random_cloud(3, 25, rng);
    Rng rng_split(103);
    const AnchorSplit split = AnchorSplit::sample(25, 7, rng_split);
    const Matrix D = pairwise_edm(pts);
    const DistanceBlocks blocks = split_blocks(D, split);
    const auto [E, F] = edm_blocks(pts, split);
    CHECK((E - blocks.E).cwiseAbs().maxCoeff() == 0.0);
    CHECK((F - blocks.F).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(blocks.G.has_value());
    // index-lookup oracle
    for (int i = 0; i < split.m(); ++i)
        for (int j = 0; j < split.n(); ++j)
            CHECK(blocks.F(i, j) == D(split.anchors[i], split.targets[j]));
    for (int i = 0; i < split.n(); ++i)
        for (int j = 0; j < split.n(); ++j)
            CHECK((*blocks.G)(i, j) == D(split.targets[i], split.targets[j]));
}

TEST_CASE("split_blocks with every point an anchor leaves F and G empty") {
    Rng rng(104);
    const PointConfiguration pts = random_cloud(2, 9, rng);
    const AnchorSplit split = AnchorSplit::contiguous(9, 9);
    const DistanceBlocks blocks = split_blocks(pairwise_edm(pts), split);
    CHECK(blocks.E.rows() == 9);
    CHECK(blocks.F.cols() == 0);
    REQUIRE(blocks.G.has_value());
    CHECK(blocks.G->rows() == 0);
}

TEST_CASE("center_anchors sends the anchor centroid to the origin and keeps distances") {
    Rng rng(105);
    const PointConfiguration pts = random_cloud(3, 30, rng);
    Rng rng_split(106);
    const AnchorSplit split = AnchorSplit::sample(30, 11, rng_split);
    const PointConfiguration centered = center_anchors(pts, split);
    Vector centroid = Vector::Zero(3);
    for (int a : split.anchors) centroid += centered.coords.col(a);
    centroid /= split.m();
    CHECK(centroid.cwiseAbs().maxCoeff() <= 1e-12 * 50.0);
    const Matrix D0 = pairwise_edm(pts);
    const Matrix D1 = pairwise_edm(centered);
    CHECK((D0 - D1).cwiseAbs().maxCoeff() <= 1e-8 * D0.maxCoeff());
}

TEST_CASE("gram_from_edm frozen two-point example") {
    Matrix D(2, 2);
    D << 0.0, 4.0, 4.0, 0.0;
    const CenteringVector cv = CenteringVector::anchor_uniform(2, 1);
    const Matrix X = gram_from_edm(D, cv);
    CHECK(X(0, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(X(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(X(1, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(X(1, 1) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("gram_from_edm recovers the Gram matrix of anchor-centered points") {
    Rng rng(107);
    for (int rep = 0; rep < 6; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const int T = 5 + static_cast<int>(rng.below(30));
        const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(T)));
        const PointConfiguration pts = random_cloud(d, T, rng);
        const AnchorSplit split = AnchorSplit::contiguous(T, m);
        const PointConfiguration centered = center_anchors(pts, split);
        const Matrix X = gram_from_edm(pairwise_edm(pts), CenteringVector::anchor_uniform(T, m));
        const Matrix gram = centered.coords.transpose() * centered.coords;
        const double scale = 1.0 + gram.cwiseAbs().maxCoeff();
        CHECK((X - gram).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    }
}

TEST_CASE("gram_from_edm matches the dense centering-matrix route") {
    Rng rng(108);
    const PointConfiguration pts = random_cloud(3, 40, rng);
    const Matrix D = pairwise_edm(pts);
    const CenteringVector cv = CenteringVector::anchor_uniform(40, 13);
    const Matrix X = gram_from_edm(D, cv);
    const Matrix X_ref = reference::gram_from_edm(D, cv.s);
    CHECK((X - X_ref).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + X_ref.cwiseAbs().maxCoeff()));
}

TEST_CASE("procrustes_align undoes a rigid motion exactly") {
    Rng rng(109);
    for (int rep = 0; rep < 6; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(2));
        const PointConfiguration truth = random_cloud(d, 50, rng);
        const Matrix Q = random_orthogonal(d, rng);
        Vector t(d);
        for (int i = 0; i < d; ++i) t(i) = rng.uniform(-20.0, 20.0);
        PointConfiguration moved;
        moved.coords = (Q * truth.coords).colwise() + t;
        CHECK(rmse(moved, truth) <= 1e-9);
    }
}

TEST_CASE("procrustes_align is optimal over sampled orthogonal maps") {
    Rng rng(110);
    for (int rep = 0; rep < 5; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(2));
        const PointConfiguration truth = random_cloud(d, 30, rng);
        PointConfiguration est = random_cloud(d, 30, rng);
        const PointConfiguration aligned = procrustes_align(est, truth);
        const double best = (aligned.coords - truth.coords).norm();
        const Vector mu_e = est.coords.rowwise().mean();
        const Vector mu_t = truth.coords.rowwise().mean();
        const Matrix Ec = est.coords.colwise() - mu_e;
        for (int trial = 0; trial < 200; ++trial) {
            const Matrix Q = random_orthogonal(d, rng);
            const Matrix candidate = (Q * Ec).colwise() + mu_t;
            CHECK(best <= (candidate - truth.coords).norm() + 1e-9);
        }
    }
}

TEST_CASE("procrustes_align handles coincident clouds without blowing up") {
    PointConfiguration a(Matrix::Constant(2, 5, 1.0));
    PointConfiguration b(Matrix::Constant(2, 5, -3.0));
    const PointConfiguration aligned = procrustes_align(a, b);
    CHECK(aligned.coords.allFinite());
    CHECK(rmse(a, b) <= 1e-12);  // both clouds collapse to their centroids
}

TEST_CASE("rmse is invariant under rigid motion of the estimate") {
    Rng rng(111);
    const PointConfiguration truth = random_cloud(3, 40, rng);
    PointConfiguration est = random_cloud(3, 40, rng);
    const double r0 = rmse(est, truth);
    const Matrix Q = random_orthogonal(3, rng);
    PointConfiguration moved;
    moved.coords = (Q * est.coords).colwise() + Vector::Constant(3, 7.5);
    CHECK(rmse(moved, truth) == doctest::Approx(r0).epsilon(1e-9));
}

TEST_CASE("rmse normalizes by sqrt(T)") {
    Matrix truth(1, 4);
    truth << 0.0, 1.0, 2.0, 3.0;
    Matrix est = truth;
    est(0, 3) += 2.0;  // centered+rotated alignment will shrink this, so bound only
    const double r = rmse(PointConfiguration(est), PointConfiguration(truth));
    CHECK(r > 0.0);
    CHECK(r <= 2.0 / std::sqrt(4.0) + 1e-12);
}

TEST_CASE("AnchorSplit sample covers the index set and validates") {
    Rng rng(112);
    const AnchorSplit split = AnchorSplit::sample(50, 12, rng);
    CHECK(split.m() == 12);
    CHECK(split.n() == 38);
    split.validate(50);
    CHECK(std::is_sorted(split.anchors.begin(), split.anchors.end()));
    AnchorSplit bad = split;
    bad.targets[0] = bad.anchors[0];
    CHECK_THROWS_AS(bad.validate(50), InvalidArgument);
    AnchorSplit out_of_range = split;
    out_of_range.anchors[0] = 50;
    CHECK_THROWS_AS(out_of_range.validate(50), InvalidArgument);
}

TEST_CASE("AnchorSplit rejects empty anchor sets and bad sizes") {
    CHECK_THROWS_AS(AnchorSplit::contiguous(10, 0), InvalidArgument);
    CHECK_THROWS_AS(AnchorSplit::contiguous(10, 11), InvalidArgument);
    AnchorSplit s = AnchorSplit::contiguous(4, 2);
    s.targets.pop_back();
    CHECK_THROWS_AS(s.validate(4), InvalidArgument);
}

TEST_CASE("permute_to_split places anchors first") {
    Rng rng(113);
    const PointConfiguration pts = random_cloud(2, 10, rng);
    Rng rng_split(114);
    const AnchorSplit split = AnchorSplit::sample(10, 3, rng_split);
    const PointConfiguration perm = permute_to_split(pts, split);
    for (int i = 0; i < split.m(); ++i)
        CHECK((perm.coords.col(i) - pts.coords.col(split.anchors[i])).cwiseAbs().maxCoeff() ==
              0.0);
    for (int j = 0; j < split.n(); ++j)
        CHECK((perm.coords.col(split.m() + j) - pts.coords.col(split.targets[j]))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
}

TEST_CASE("CenteringVector layouts agree for contiguous splits") {
    const AnchorSplit split = AnchorSplit::contiguous(12, 5);
    const CenteringVector a = CenteringVector::anchor_uniform(12, 5);
    const CenteringVector b = CenteringVector::anchor_uniform(12, split);
    CHECK((a.s - b.s).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.s.sum() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("PointConfiguration rejects non-finite and empty input") {
    Matrix bad(2, 2);
    bad << 1.0, 2.0, std::numeric_limits<double>::quiet_NaN(), 4.0;
    CHECK_THROWS_AS(PointConfiguration{bad}, InvalidArgument);
    CHECK_THROWS_AS(PointConfiguration{Matrix(0, 0)}, InvalidArgument);
}
