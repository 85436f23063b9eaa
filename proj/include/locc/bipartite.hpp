#pragma once

#include <vector>

#include <Eigen/Dense>

#include "locc/measure.hpp"
#include "locc/polytope.hpp"
#include "locc/schmidt.hpp"

namespace locc {

inline constexpr int kMaxSourceDim = 11;

// Intrinsic volume of the sorted region {x sorted, sum x = 1, x >= 0}; also
// the largest possible source and accessible volume in dimension d.
double sorted_region_volume(int d);

// Permutation-sum closed form; throws bipartite.DimensionTooLarge past the cap.
double source_volume(const SchmidtVector& lambda);

MeasureReport source_entanglement(const SchmidtVector& lambda);

// Source entanglement of the state embedded in dimension k >= d, normalised
// by its maximum over d-dimensional states.
MeasureReport source_entanglement_k(const SchmidtVector& lambda, int k);

// sup over d-dimensional phi of E_s(embed(phi, k)); cached.
double source_entanglement_sup(int d, int k);

// Vertices of the unsorted source polytope: all distinct permutations of lambda.
std::vector<Eigen::VectorXd> source_polytope_vertices(const SchmidtVector& lambda);

// Halfspaces of the unsorted source polytope in R^d: one row per proper subset S,
// sum_{i in S} x_i <= E_|S|, plus sum x = 1 as two rows.
HalfspaceSystem source_polytope_hrep(const SchmidtVector& lambda);

// Accessible set in projected coordinates (first d-1 components).
HalfspaceSystem accessible_hrep(const SchmidtVector& lambda);
// Same, restricted to vectors with at most k nonzero components (k-1 variables).
HalfspaceSystem accessible_hrep(const SchmidtVector& lambda, int k);

struct AccessibleGeometry {
    HalfspaceSystem hrep;
    VertexSet vertices;
    VolumeResult projected;
    VolumeResult intrinsic;
    int k = 0;
};

AccessibleGeometry accessible_geometry(const SchmidtVector& lambda, int k);

VolumeResult accessible_volume(const SchmidtVector& lambda);
VolumeResult accessible_volume_k(const SchmidtVector& lambda, int k);

MeasureReport accessible_entanglement(const SchmidtVector& lambda);
MeasureReport accessible_entanglement_k(const SchmidtVector& lambda, int k);

// v_1 .. v_{d-2}, verified against the enumerated accessible vertices.
std::vector<std::vector<double>> guaranteed_vertices(const SchmidtVector& lambda);

// lambda_1 <= 1/k, with the k-level maximally entangled vector confirmed as a
// vertex of the accessible polytope when true.
bool max_entangled_accessible(const SchmidtVector& lambda, int k);

// Lifts projected coordinates back to R^k by appending 1 - sum.
Eigen::VectorXd lift(const Eigen::VectorXd& projected);

}  // namespace locc
