#pragma once

#include "rodeodb/types.hpp"

namespace rodeodb {

struct Incoherence {
    double mu1 = 0.0;  // row-space coherence (m/r) max_i ||U_r^T e_i||^2
    double mu2 = 0.0;  // column-space coherence (n/r) max_j ||V_r^T e_j||^2
    bool rank_deficient = false;  // numerical rank came out below the requested r
};

// structural condition numbers of a problem instance; informational only
struct InstanceDiagnostics {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double alpha_row = 0.0;
    double alpha_col = 0.0;
    double kappa_D = 0.0;
    double kappa_X = 0.0;
    double J_norm = 0.0;
};

// coherence of the rank-r row/column spaces of M; if the numerical rank of
// M falls below r, the computation proceeds over the top r directions and
// the report is flagged
Incoherence incoherence(const Matrix& M, int r);

// (max nonzeros per row / n, max nonzeros per column / m)
std::pair<double, double> alpha_sparsity(const Matrix& S);

// spectral norm of the anchor centering map I - 1 s^T, computed numerically
double centering_norm(int T, int m_anchors);

}  // namespace rodeodb
