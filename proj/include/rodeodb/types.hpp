#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rodeodb/rng.hpp"

namespace rodeodb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct InvalidArgument : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct DegenerateAnchors : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverDiverged : std::runtime_error {
    SolverDiverged(const std::string& what, int iter, double rel_err)
        : std::runtime_error(what), iteration(iter), last_rel_err(rel_err) {}
    int iteration;
    double last_rel_err;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : IoError {
    ParseError(const std::string& what, long line_no)
        : IoError(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    long line;
};

// d x T matrix of point coordinates, one point per column
struct PointConfiguration {
    Matrix coords;

    PointConfiguration() = default;
    explicit PointConfiguration(Matrix c) : coords(std::move(c)) {
        if (coords.rows() < 1 || coords.cols() < 1)
            throw InvalidArgument("PointConfiguration: needs at least one point and one dimension");
        if (!coords.allFinite())
            throw InvalidArgument("PointConfiguration: non-finite coordinate");
    }

    int dim() const { return static_cast<int>(coords.rows()); }
    int n_points() const { return static_cast<int>(coords.cols()); }
};

// partition of {0,...,T-1} into anchor and target index sets
struct AnchorSplit {
    std::vector<int> anchors;
    std::vector<int> targets;

    int m() const { return static_cast<int>(anchors.size()); }
    int n() const { return static_cast<int>(targets.size()); }
    int total() const { return m() + n(); }

    // anchors = {0,...,m-1}, targets = the rest
    static AnchorSplit contiguous(int T, int m_anchors);

    // m distinct anchor indices drawn uniformly from {0,...,T-1}
    static AnchorSplit sample(int T, int m_anchors, Rng& rng);

    // checks disjointness, coverage of {0,...,T-1}, and bounds
    void validate(int T) const;
};

// observed distance data: E = anchor/anchor squared distances (exact),
// F = anchor/target squared distances (possibly corrupted), G unobserved
// in the recovery problem but carried when a full EDM was split
struct DistanceBlocks {
    Matrix E;
    Matrix F;
    std::optional<Matrix> G;
    bool corrupted = false;
};

struct GramBlocks {
    Matrix A;
    Matrix B;
    std::optional<Matrix> C;
};

// centering weight vector s: 1/m on anchors, 0 on targets
struct CenteringVector {
    Vector s;

    // split-ordered layout: anchors occupy the first m positions
    static CenteringVector anchor_uniform(int T, int m_anchors) {
        if (m_anchors < 1 || m_anchors > T)
            throw InvalidArgument("CenteringVector: need 1 <= m <= T");
        CenteringVector c;
        c.s = Vector::Zero(T);
        c.s.head(m_anchors).setConstant(1.0 / m_anchors);
        return c;
    }

    // original index layout: weight 1/m at each anchor position
    static CenteringVector anchor_uniform(int T, const AnchorSplit& split) {
        CenteringVector c;
        c.s = Vector::Zero(T);
        for (int a : split.anchors) {
            if (a < 0 || a >= T) throw InvalidArgument("CenteringVector: anchor index out of range");
            c.s(a) = 1.0 / split.m();
        }
        return c;
    }
};

}  // namespace rodeodb
