#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rodeodb/dual_basis.hpp"
#include "rodeodb/geometry.hpp"
#include "rodeodb/reference.hpp"
#include "rodeodb/rng.hpp"

using namespace rodeodb;

namespace {

struct ExactInstance {
    Matrix E, F;       // distance blocks
    Matrix A_true, B_true;  // Gram blocks of the anchor-centered configuration
    int m, n, d;
};

ExactInstance make_instance(int d, int m, int n, std::uint64_t seed, double scale = 50.0) {
    Rng rng(seed);
    Matrix P(d, m + n);
    for (int j = 0; j < m + n; ++j)
        for (int i = 0; i < d; ++i) P(i, j) = rng.uniform(-scale, scale);
    const AnchorSplit split = AnchorSplit::contiguous(m + n, m);
    PointConfiguration pts(P);
    const PointConfiguration centered = center_anchors(pts, split);
    ExactInstance inst;
    inst.m = m;
    inst.n = n;
    inst.d = d;
    auto [E, F] = edm_blocks(pts, split);
    inst.E = std::move(E);
    inst.F = std::move(F);
    const Matrix Pa = centered.coords.leftCols(m);
    const Matrix Pt = centered.coords.rightCols(n);
    inst.A_true = Pa.transpose() * Pa;
    inst.B_true = Pa.transpose() * Pt;
    return inst;
}

double rel_err(const Matrix& got, const Matrix& want) {
    const double base = want.norm();
    if (base == 0.0) return got.norm();
    return (got - want).norm() / base;
}

}  // namespace

TEST_CASE("anchor_gram_A frozen two-anchor example") {
    Matrix E(2, 2);
    E << 0.0, 9.0, 9.0, 0.0;
    const Matrix A = anchor_gram_A(E);
    CHECK(A(0, 0) == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(A(0, 1) == doctest::Approx(-2.25).epsilon(1e-14));
    CHECK(A(1, 0) == doctest::Approx(-2.25).epsilon(1e-14));
    CHECK(A(1, 1) == doctest::Approx(2.25).epsilon(1e-14));
}

TEST_CASE("anchor_gram_A recovers the centered anchor Gram block") {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
        const ExactInstance inst = make_instance(2 + seed % 2, 10, 20, seed);
        const Matrix A = anchor_gram_A(inst.E);
        CHECK(rel_err(A, inst.A_true) <= 1e-10);
        CHECK((A - A.transpose()).cwiseAbs().maxCoeff() == 0.0);
        // rows sum to zero under anchor centering
        CHECK(A.rowwise().sum().cwiseAbs().maxCoeff() <=
              1e-10 * (1.0 + A.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("anchor_gram_A matches the dense-expression route") {
    const ExactInstance inst = make_instance(3, 14, 5, 21);
    const Matrix A = anchor_gram_A(inst.E);
    const Matrix A_ref = reference::anchor_gram_A(inst.E);
    CHECK((A - A_ref).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + A_ref.cwiseAbs().maxCoeff()));
}

TEST_CASE("DualBasisContext precomputes the anchor summaries") {
    Matrix E(3, 3);
    E << 0, 1, 4, 1, 0, 9, 4, 9, 0;
    Matrix F(3, 2);
    F << 1, 2, 3, 4, 5, 6;
    const DualBasisContext ctx(E, F, 1);
    CHECK(ctx.m() == 3);
    CHECK(ctx.n() == 2);
    CHECK(ctx.central_row() == 1);
    CHECK(ctx.e_row_sums()(0) == 5.0);
    CHECK(ctx.e_row_sums()(1) == 10.0);
    CHECK(ctx.e_row_sums()(2) == 13.0);
    CHECK(ctx.e_mean() == doctest::Approx(28.0 / 9.0).epsilon(1e-15));
    CHECK(ctx.f_central()(0) == 3.0);
    CHECK(ctx.f_central()(1) == 4.0);
}

TEST_CASE("DualBasisContext validates shapes and the central row") {
    Matrix E = Matrix::Zero(3, 3);
    Matrix F = Matrix::Zero(3, 2);
    CHECK_THROWS_AS(DualBasisContext(Matrix::Zero(3, 2), F, 0), DimensionMismatch);
    CHECK_THROWS_AS(DualBasisContext(E, Matrix::Zero(2, 2), 0), DimensionMismatch);
    CHECK_THROWS_AS(DualBasisContext(E, F, 3), InvalidArgument);
    CHECK_THROWS_AS(DualBasisContext(E, F, -1), InvalidArgument);
    Matrix E_bad = E;
    E_bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(DualBasisContext(E_bad, F, 0), InvalidArgument);
}

TEST_CASE("op_B maps exact distances to the true Gram block") {
    for (std::uint64_t seed : {31u, 32u, 33u}) {
        const ExactInstance inst = make_instance(2, 8, 25, seed);
        const DualBasisContext ctx(inst.E, inst.F, 0);
        const Matrix B = op_B(inst.F, ctx);
        CHECK(rel_err(B, inst.B_true) <= 1e-10);
        // column sums vanish under anchor centering
        CHECK(B.colwise().sum().cwiseAbs().maxCoeff() <=
              1e-10 * (1.0 + B.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("op_B matches the dense-expression route on arbitrary input") {
    Rng rng(41);
    Matrix E(6, 6), F(6, 9);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) E(i, j) = rng.uniform(0.0, 10.0);
    E = (E + E.transpose()).eval();
    E.diagonal().setZero();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 9; ++j) F(i, j) = rng.uniform(-5.0, 5.0);
    const DualBasisContext ctx(E, F, 2);
    const Matrix got = op_B(F, ctx);
    const Matrix want = reference::op_B(E, F);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + want.cwiseAbs().maxCoeff()));
}

TEST_CASE("op_A matches the dense-expression route on arbitrary input") {
    Rng rng(42);
    const ExactInstance inst = make_instance(3, 9, 12, 43);
    Matrix B(9, 12);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 12; ++j) B(i, j) = rng.uniform(-100.0, 100.0);
    for (int k : {0, 4, 8}) {
        const DualBasisContext ctx(inst.E, inst.F, k);
        const Matrix got = op_A(B, ctx);
        const Matrix want = reference::op_A(inst.E, inst.F.row(k), B, k);
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + want.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("op_A reproduces the observed central row bitwise") {
    Rng rng(44);
    const ExactInstance inst = make_instance(2, 7, 15, 45);
    Matrix B(7, 15);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 15; ++j) B(i, j) = rng.uniform(-3.0, 3.0);
    for (int k = 0; k < 7; ++k) {
        const DualBasisContext ctx(inst.E, inst.F, k);
        const Matrix out = op_A(B, ctx);
        for (int j = 0; j < 15; ++j) CHECK(out(k, j) == inst.F(k, j));
    }
}

TEST_CASE("op_A inverts op_B on exact instances") {
    for (std::uint64_t seed : {51u, 52u, 53u, 54u, 55u}) {
        const int d = 2 + static_cast<int>(seed % 2);
        const ExactInstance inst = make_instance(d, 6 + static_cast<int>(seed % 5), 30, seed);
        for (int k : {0, inst.m - 1}) {
            const DualBasisContext ctx(inst.E, inst.F, k);
            const Matrix F_back = op_A(op_B(inst.F, ctx), ctx);
            CHECK(rel_err(F_back, inst.F) <= 1e-10);
        }
    }
}

TEST_CASE("op_A applied to the true Gram block returns exact distances") {
    const ExactInstance inst = make_instance(3, 12, 40, 61);
    const DualBasisContext ctx(inst.E, inst.F, 0);
    const Matrix F_rec = op_A(inst.B_true, ctx);
    CHECK(rel_err(F_rec, inst.F) <= 1e-10);
}

TEST_CASE("operators reject mismatched shapes") {
    const ExactInstance inst = make_instance(2, 5, 8, 71);
    const DualBasisContext ctx(inst.E, inst.F, 0);
    CHECK_THROWS_AS(op_B(Matrix::Zero(5, 9), ctx), DimensionMismatch);
    CHECK_THROWS_AS(op_B(Matrix::Zero(4, 8), ctx), DimensionMismatch);
    CHECK_THROWS_AS(op_A(Matrix::Zero(6, 8), ctx), DimensionMismatch);
}
