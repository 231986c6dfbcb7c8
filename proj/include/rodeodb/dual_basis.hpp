#pragma once

#include "rodeodb/types.hpp"

namespace rodeodb {

// Precomputed anchor-side quantities shared by the two dual operators.
// Immutable after construction. The central row k is the anchor whose
// observed distance row pins the distance-to-Gram correspondence.
class DualBasisContext {
public:
    DualBasisContext(const Matrix& E, const Matrix& F_observed, int central_row_k);

    int m() const { return static_cast<int>(e_row_sums_.size()); }
    int n() const { return static_cast<int>(f_central_.size()); }
    int central_row() const { return k_; }
    const Vector& e_row_sums() const { return e_row_sums_; }   // E 1
    double e_mean() const { return e_mean_; }                  // mean over all m^2 entries
    const Vector& f_central() const { return f_central_; }     // observed row k of F

private:
    int k_;
    Vector e_row_sums_;
    double e_mean_;
    Vector f_central_;
};

// anchor Gram block from anchor distances:
// A = -1/2 (E - (1/m) 1 1^T E - (1/m) E 1 1^T + mean(E) 1 1^T)
Matrix anchor_gram_A(const Matrix& E);

// distance-to-Gram operator applied to an anchor/target distance block:
// B(F) = -1/2 (F - (1/m) 1 1^T F - (1/m) E 1 1^T + mean(E) 1 1^T)
Matrix op_B(const Matrix& F, const DualBasisContext& ctx);

// Gram-to-distance operator; row k reproduces the observed central row
// exactly:
// A(B) = 1 F_k - 2 (B - 1 B_k) + (1/m)(E1 - (E1)_k 1) 1^T
Matrix op_A(const Matrix& B, const DualBasisContext& ctx);

// in-place variants used by the solver loop to avoid reallocation
void op_B_into(const Matrix& F, const DualBasisContext& ctx, Matrix& out);
void op_A_into(const Matrix& B, const DualBasisContext& ctx, Matrix& out);

}  // namespace rodeodb
