#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace locc {

// Feasible set {x : A x + b >= 0}.
struct HalfspaceSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;

    int rows() const { return static_cast<int>(A.rows()); }
    int dim() const { return static_cast<int>(A.cols()); }
};

struct VertexSet {
    std::vector<Eigen::VectorXd> vertices;
    // Row indices of the halfspaces each vertex satisfies with equality (sorted).
    std::vector<std::vector<int>> tight_sets;

    int size() const { return static_cast<int>(vertices.size()); }
};

using Adjacency = std::vector<std::vector<int>>;

enum class Convention { Intrinsic, Projected };

// Relates a polytope in the hyperplane sum(x) = 1 of R^d to its image under
// dropping the last coordinate.
struct EmbeddingFrame {
    int ambient_dim = 1;
    Convention convention = Convention::Intrinsic;

    double scale() const;
};

struct VolumeResult {
    double volume = 0.0;
    int dimension = 0;
    bool degenerate = false;  // affine hull is a single point
};

struct BrionVertexData {
    Eigen::VectorXd vertex;
    std::vector<Eigen::VectorXd> edge_vectors;  // vertex minus neighbour
    std::vector<int> neighbors;
    Eigen::VectorXd xi;
};

// Exhaustive k-subset intersection. Throws polytope.Unbounded or
// polytope.Infeasible.
VertexSet enumerate_vertices(const HalfspaceSystem& h);

// Builds a VertexSet for known points, recording tight rows. Throws
// polytope.InconsistentInput when a point violates a row.
VertexSet with_tight_sets(const HalfspaceSystem& h, const std::vector<Eigen::VectorXd>& points);

Adjacency vertex_adjacency(const HalfspaceSystem& h, const VertexSet& v);

int affine_dimension(const std::vector<Eigen::VectorXd>& points);

bool is_simple(const VertexSet& v, const Adjacency& adj);

// Facet halfspaces of conv(points) inside its affine hull. Brute force over
// point subsets; intended for small inputs.
HalfspaceSystem hull_halfspaces(const std::vector<Eigen::VectorXd>& points);

// Fan triangulation from face centroids, recursively down the face lattice.
// The tight sets of v must refer to the rows of h.
VolumeResult volume_triangulation(const HalfspaceSystem& h, const VertexSet& v);
// Same, deriving the facet structure from the points when no H is at hand.
VolumeResult volume_triangulation(const VertexSet& v);

// Number of simplices in the triangulation used by volume_triangulation.
int triangulation_size(const HalfspaceSystem& h, const VertexSet& v);

std::vector<BrionVertexData> brion_data(const VertexSet& v, const Adjacency& adj,
                                        const std::optional<Eigen::VectorXd>& xi = std::nullopt);

// Intrinsic volume of a simple polytope. Throws polytope.NotSimple or
// polytope.XiDegenerate.
double brion_volume(const VertexSet& v, const Adjacency& adj, const EmbeddingFrame& frame,
                    const std::optional<Eigen::VectorXd>& xi = std::nullopt);

double convert_frame(double volume, const EmbeddingFrame& frame, Convention target);

}  // namespace locc
