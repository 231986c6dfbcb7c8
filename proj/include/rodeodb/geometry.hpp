#pragma once

#include "rodeodb/types.hpp"

namespace rodeodb {

// T x T matrix of pairwise squared Euclidean distances
Matrix pairwise_edm(const PointConfiguration& pts);

// E and F blocks of the split EDM without forming the full T x T matrix
std::pair<Matrix, Matrix> edm_blocks(const PointConfiguration& pts, const AnchorSplit& split);

// extracts E = D[anchors,anchors], F = D[anchors,targets], G = D[targets,targets]
DistanceBlocks split_blocks(const Matrix& D, const AnchorSplit& split);

// translates all points so the anchor centroid sits at the origin
PointConfiguration center_anchors(const PointConfiguration& pts, const AnchorSplit& split);

// Gram matrix X = -1/2 (I - 1 s^T) D (I - s 1^T) via the four-term
// per-entry expansion
Matrix gram_from_edm(const Matrix& D, const CenteringVector& s);

// rigid alignment of estimate onto truth over the full orthogonal group
// (rotations and reflections), both clouds centered first
PointConfiguration procrustes_align(const PointConfiguration& estimate,
                                    const PointConfiguration& truth);

// ||estimate - truth||_F / sqrt(T) after procrustes_align
double rmse(const PointConfiguration& estimate, const PointConfiguration& truth);

// reorders columns to split order: anchors first, then targets
PointConfiguration permute_to_split(const PointConfiguration& pts, const AnchorSplit& split);

}  // namespace rodeodb
