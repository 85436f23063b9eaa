#include "locc/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "locc/error.hpp"
#include "locc/numeric.hpp"
#include "locc/rng.hpp"

namespace locc {

namespace {

// Calls f(subset) for every k-subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& f) {
    if (k > n || k < 0) return;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        f(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& a, const std::vector<int>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), a.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = a.row(rows[i]);
    return out;
}

int matrix_rank(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    const double tol = kEpsGeom * std::max(1.0, s(0));
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol) ++r;
    return r;
}

struct AffineHull {
    Eigen::VectorXd origin;
    Eigen::MatrixXd basis;       // n x r, orthonormal directions
    Eigen::MatrixXd complement;  // n x (n - r), orthonormal normals
    int dim = 0;
};

AffineHull affine_hull(const std::vector<Eigen::VectorXd>& pts) {
    AffineHull h;
    const auto n = pts.front().size();
    h.origin = Eigen::VectorXd::Zero(n);
    for (const auto& p : pts) h.origin += p;
    h.origin /= static_cast<double>(pts.size());
    Eigen::MatrixXd diff(n, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) diff.col(static_cast<Eigen::Index>(i)) = pts[i] - h.origin;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > kEpsGeom) ++r;
    h.dim = r;
    h.basis = svd.matrixU().leftCols(r);
    h.complement = svd.matrixU().rightCols(n - r);
    return h;
}

std::vector<int> tight_rows(const HalfspaceSystem& h, const Eigen::VectorXd& x) {
    const Eigen::VectorXd slack = h.A * x + h.b;
    std::vector<int> t;
    for (int i = 0; i < h.rows(); ++i)
        if (std::fabs(slack(i)) <= kEpsGeom) t.push_back(i);
    return t;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void check_shape(const HalfspaceSystem& h) {
    if (h.A.rows() != h.b.size())
        throw Error("polytope.InconsistentInput", "A and b have different row counts");
    if (h.A.cols() < 1) throw Error("polytope.InconsistentInput", "zero-dimensional system");
}

// Vertices of {x : A x + b >= 0} when A has full column rank.
std::vector<Eigen::VectorXd> intersect_subsets(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    const int k = static_cast<int>(a.cols());
    const int m = static_cast<int>(a.rows());
    std::vector<Eigen::VectorXd> found;
    for_each_subset(m, k, [&](const std::vector<int>& rows) {
        const Eigen::MatrixXd sub = select_rows(a, rows);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
        lu.setThreshold(1e-12);
        if (!lu.isInvertible()) return;
        Eigen::VectorXd rhs(k);
        for (int i = 0; i < k; ++i) rhs(i) = -b(rows[static_cast<std::size_t>(i)]);
        const Eigen::VectorXd x = lu.solve(rhs);
        if (!x.allFinite()) return;
        if ((a * x + b).minCoeff() < -kEpsGeom) return;
        for (const auto& y : found)
            if ((y - x).norm() <= kEpsGeom) return;
        found.push_back(x);
    });
    return found;
}

bool has_recession_ray(const Eigen::MatrixXd& a) {
    const int k = static_cast<int>(a.cols());
    const int m = static_cast<int>(a.rows());
    bool ray = false;
    auto test = [&](const Eigen::VectorXd& d) {
        for (double s : {1.0, -1.0})
            if ((a * (s * d)).minCoeff() >= -1e-12) ray = true;
    };
    if (k == 1) {
        test(Eigen::VectorXd::Ones(1));
        return ray;
    }
    for_each_subset(m, k - 1, [&](const std::vector<int>& rows) {
        if (ray) return;
        const Eigen::MatrixXd sub = select_rows(a, rows);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeFullV);
        if (matrix_rank(sub) != k - 1) return;
        test(svd.matrixV().col(k - 1));
    });
    return ray;
}

}  // namespace

double EmbeddingFrame::scale() const { return std::sqrt(static_cast<double>(ambient_dim)); }

VertexSet enumerate_vertices(const HalfspaceSystem& h) {
    check_shape(h);
    const int k = h.dim();
    const int r = matrix_rank(h.A);
    if (r < k) {
        // The set contains a line whenever it is non-empty; decide which via
        // the system restricted to the row space of A.
        if (r == 0) {
            if (h.b.size() == 0 || h.b.minCoeff() >= -kEpsGeom)
                throw Error("polytope.Unbounded", "constraint matrix is zero; feasible set is all of R^k");
            throw Error("polytope.Infeasible", "no point satisfies the constraints");
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(h.A, Eigen::ComputeFullV);
        const Eigen::MatrixXd q = svd.matrixV().leftCols(r);
        if (!intersect_subsets(h.A * q, h.b).empty())
            throw Error("polytope.Unbounded", "feasible set contains a line");
        throw Error("polytope.Infeasible", "no point satisfies the constraints");
    }
    auto pts = intersect_subsets(h.A, h.b);
    if (pts.empty()) throw Error("polytope.Infeasible", "no point satisfies the constraints");
    if (has_recession_ray(h.A)) throw Error("polytope.Unbounded", "feasible set has a recession ray");
    VertexSet v;
    for (auto& p : pts) {
        v.tight_sets.push_back(tight_rows(h, p));
        v.vertices.push_back(std::move(p));
    }
    return v;
}

VertexSet with_tight_sets(const HalfspaceSystem& h, const std::vector<Eigen::VectorXd>& points) {
    check_shape(h);
    VertexSet v;
    for (const auto& p : points) {
        if (p.size() != h.dim())
            throw Error("polytope.InconsistentInput", "point dimension differs from system dimension");
        if ((h.A * p + h.b).minCoeff() < -kEpsGeom)
            throw Error("polytope.InconsistentInput", "point violates a halfspace");
        bool dup = false;
        for (const auto& q : v.vertices)
            if ((q - p).norm() <= kEpsGeom) dup = true;
        if (dup) continue;
        v.vertices.push_back(p);
        v.tight_sets.push_back(tight_rows(h, p));
    }
    return v;
}

Adjacency vertex_adjacency(const HalfspaceSystem& h, const VertexSet& v) {
    check_shape(h);
    const int k = h.dim();
    if (v.tight_sets.size() != v.vertices.size())
        throw Error("polytope.InconsistentInput", "tight sets missing");
    for (int i = 0; i < v.size(); ++i)
        if (tight_rows(h, v.vertices[static_cast<std::size_t>(i)]) != v.tight_sets[static_cast<std::size_t>(i)])
            throw Error("polytope.InconsistentInput",
                        "tight set of vertex " + std::to_string(i) + " does not match the system");
    Adjacency adj(static_cast<std::size_t>(v.size()));
    for (int i = 0; i < v.size(); ++i) {
        for (int j = i + 1; j < v.size(); ++j) {
            const auto common = intersect(v.tight_sets[static_cast<std::size_t>(i)],
                                          v.tight_sets[static_cast<std::size_t>(j)]);
            if (static_cast<int>(common.size()) < k - 1) continue;
            if (matrix_rank(select_rows(h.A, common)) < k - 1) continue;
            const Eigen::VectorXd mid =
                0.5 * (v.vertices[static_cast<std::size_t>(i)] + v.vertices[static_cast<std::size_t>(j)]);
            if ((h.A * mid + h.b).minCoeff() < -kEpsGeom) continue;
            adj[static_cast<std::size_t>(i)].push_back(j);
            adj[static_cast<std::size_t>(j)].push_back(i);
        }
    }
    return adj;
}

int affine_dimension(const std::vector<Eigen::VectorXd>& points) {
    if (points.size() < 2) return 0;
    return affine_hull(points).dim;
}

bool is_simple(const VertexSet& v, const Adjacency& adj) {
    if (v.vertices.empty()) return false;
    const int r = affine_dimension(v.vertices);
    for (const auto& nb : adj)
        if (static_cast<int>(nb.size()) != r) return false;
    return true;
}

HalfspaceSystem hull_halfspaces(const std::vector<Eigen::VectorXd>& points) {
    if (points.empty()) throw Error("polytope.InconsistentInput", "no points");
    const auto hull = affine_hull(points);
    const int r = hull.dim;
    const auto n = hull.origin.size();
    const int m = static_cast<int>(points.size());
    if (binomial(m, r) * m > 5e8)
        throw Error("polytope.TooLarge", "too many points for the brute-force hull");

    std::vector<Eigen::VectorXd> y;
    for (const auto& p : points) y.push_back(hull.basis.transpose() * (p - hull.origin));

    std::vector<std::pair<Eigen::VectorXd, double>> facets;  // normal . y - c >= 0
    auto add_facet = [&](Eigen::VectorXd nrm, double c) {
        const double len = nrm.norm();
        nrm /= len;
        c /= len;
        for (const auto& [fn, fc] : facets)
            if ((fn - nrm).norm() < 1e-7 && std::fabs(fc - c) < 1e-7) return;
        facets.emplace_back(std::move(nrm), c);
    };
    if (r == 1) {
        double lo = y[0](0), hi = y[0](0);
        for (const auto& p : y) {
            lo = std::min(lo, p(0));
            hi = std::max(hi, p(0));
        }
        add_facet(Eigen::VectorXd::Ones(1), lo);
        add_facet(-Eigen::VectorXd::Ones(1), -hi);
    } else if (r >= 2) {
        for_each_subset(m, r, [&](const std::vector<int>& s) {
            Eigen::MatrixXd diff(r - 1, r);
            for (int i = 1; i < r; ++i)
                diff.row(i - 1) = (y[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])] -
                                   y[static_cast<std::size_t>(s[0])])
                                      .transpose();
            if (matrix_rank(diff) != r - 1) return;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff, Eigen::ComputeFullV);
            Eigen::VectorXd nrm = svd.matrixV().col(r - 1);
            const double c = nrm.dot(y[static_cast<std::size_t>(s[0])]);
            bool pos = true, neg = true;
            for (const auto& p : y) {
                const double t = nrm.dot(p) - c;
                if (t < -kEpsGeom) pos = false;
                if (t > kEpsGeom) neg = false;
            }
            if (pos)
                add_facet(nrm, c);
            else if (neg)
                add_facet(-nrm, -c);
        });
    }
    const auto rows = static_cast<Eigen::Index>(facets.size() + 2 * static_cast<std::size_t>(n - r));
    HalfspaceSystem h{Eigen::MatrixXd(rows, n), Eigen::VectorXd(rows)};
    Eigen::Index row = 0;
    for (const auto& [nrm, c] : facets) {
        const Eigen::VectorXd a = hull.basis * nrm;
        h.A.row(row) = a.transpose();
        h.b(row) = -a.dot(hull.origin) - c;
        ++row;
    }
    for (Eigen::Index j = 0; j < hull.complement.cols(); ++j) {
        const Eigen::VectorXd q = hull.complement.col(j);
        for (double s : {1.0, -1.0}) {
            h.A.row(row) = s * q.transpose();
            h.b(row) = -s * q.dot(hull.origin);
            ++row;
        }
    }
    return h;
}

namespace {

// Recursive fan triangulation. Faces are identified by their vertex index
// sets; facets of a face are the maximal vertex subsets sharing one extra
// tight row.
class FanTriangulator {
public:
    FanTriangulator(const VertexSet& v, std::vector<Eigen::VectorXd> coords)
        : v_(v), pts_(std::move(coords)) {}

    template <class Sink>
    void run(int dim, Sink&& sink) {
        std::vector<int> all(pts_.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        std::vector<Eigen::VectorXd> apexes;
        recurse(all, dim, apexes, sink);
    }

private:
    template <class Sink>
    void recurse(const std::vector<int>& face, int dim, std::vector<Eigen::VectorXd>& apexes, Sink& sink) {
        if (dim == 1) {
            int a = face[0], b = face[0];
            double best = -1.0;
            for (int i : face)
                for (int j : face) {
                    const double dd = (pts_[static_cast<std::size_t>(i)] - pts_[static_cast<std::size_t>(j)]).norm();
                    if (dd > best) {
                        best = dd;
                        a = i;
                        b = j;
                    }
                }
            std::vector<Eigen::VectorXd> simplex = apexes;
            simplex.push_back(pts_[static_cast<std::size_t>(a)]);
            simplex.push_back(pts_[static_cast<std::size_t>(b)]);
            sink(simplex);
            return;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(pts_.front().size());
        for (int i : face) centroid += pts_[static_cast<std::size_t>(i)];
        centroid /= static_cast<double>(face.size());
        apexes.push_back(centroid);
        for (const auto& f : facets_of(face, dim)) recurse(f, dim - 1, apexes, sink);
        apexes.pop_back();
    }

    const std::vector<std::vector<int>>& facets_of(const std::vector<int>& face, int dim) {
        auto it = memo_.find(face);
        if (it != memo_.end()) return it->second;
        std::vector<int> common = v_.tight_sets[static_cast<std::size_t>(face[0])];
        std::vector<int> rows = common;
        for (int i : face) {
            const auto& t = v_.tight_sets[static_cast<std::size_t>(i)];
            common = intersect(common, t);
            std::vector<int> merged;
            std::set_union(rows.begin(), rows.end(), t.begin(), t.end(), std::back_inserter(merged));
            rows = std::move(merged);
        }
        std::vector<std::vector<int>> out;
        for (int row : rows) {
            if (std::binary_search(common.begin(), common.end(), row)) continue;
            std::vector<int> sub;
            for (int i : face) {
                const auto& t = v_.tight_sets[static_cast<std::size_t>(i)];
                if (std::binary_search(t.begin(), t.end(), row)) sub.push_back(i);
            }
            if (static_cast<int>(sub.size()) < dim) continue;
            if (std::find(out.begin(), out.end(), sub) != out.end()) continue;
            std::vector<Eigen::VectorXd> sp;
            for (int i : sub) sp.push_back(pts_[static_cast<std::size_t>(i)]);
            if (affine_dimension(sp) != dim - 1) continue;
            out.push_back(std::move(sub));
        }
        return memo_.emplace(face, std::move(out)).first->second;
    }

    const VertexSet& v_;
    std::vector<Eigen::VectorXd> pts_;
    std::map<std::vector<int>, std::vector<std::vector<int>>> memo_;
};

template <class Sink>
int triangulate(const HalfspaceSystem& h, const VertexSet& v, Sink&& sink) {
    if (v.vertices.empty()) throw Error("polytope.InconsistentInput", "empty vertex set");
    if (v.tight_sets.size() != v.vertices.size())
        throw Error("polytope.InconsistentInput", "tight sets missing");
    for (const auto& t : v.tight_sets)
        for (int row : t)
            if (row < 0 || row >= h.rows())
                throw Error("polytope.InconsistentInput", "tight set refers to a missing row");
    const auto hull = affine_hull(v.vertices);
    if (hull.dim == 0) return 0;
    std::vector<Eigen::VectorXd> coords;
    for (const auto& p : v.vertices) coords.push_back(hull.basis.transpose() * (p - hull.origin));
    FanTriangulator tri(v, std::move(coords));
    tri.run(hull.dim, sink);
    return hull.dim;
}

}  // namespace

VolumeResult volume_triangulation(const HalfspaceSystem& h, const VertexSet& v) {
    VolumeResult res;
    CompensatedSum total;
    int r = 0;
    r = triangulate(h, v, [&](const std::vector<Eigen::VectorXd>& s) {
        const auto dim = static_cast<Eigen::Index>(s.size() - 1);
        Eigen::MatrixXd e(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) e.col(i) = s[static_cast<std::size_t>(i + 1)] - s[0];
        total.add(std::fabs(e.determinant()) / factorial(static_cast<int>(dim)));
    });
    res.dimension = r;
    res.degenerate = (r == 0);
    res.volume = res.degenerate ? 0.0 : total.value();
    return res;
}

VolumeResult volume_triangulation(const VertexSet& v) {
    if (v.vertices.empty()) throw Error("polytope.InconsistentInput", "empty vertex set");
    const auto h = hull_halfspaces(v.vertices);
    return volume_triangulation(h, with_tight_sets(h, v.vertices));
}

int triangulation_size(const HalfspaceSystem& h, const VertexSet& v) {
    int count = 0;
    triangulate(h, v, [&](const std::vector<Eigen::VectorXd>&) { ++count; });
    return count;
}

std::vector<BrionVertexData> brion_data(const VertexSet& v, const Adjacency& adj,
                                        const std::optional<Eigen::VectorXd>& xi) {
    if (v.vertices.empty()) throw Error("polytope.InconsistentInput", "empty vertex set");
    if (adj.size() != v.vertices.size()) throw Error("polytope.InconsistentInput", "adjacency size mismatch");
    const auto hull = affine_hull(v.vertices);
    const int r = hull.dim;
    for (std::size_t i = 0; i < adj.size(); ++i)
        if (static_cast<int>(adj[i].size()) != r)
            throw Error("polytope.NotSimple", "vertex " + std::to_string(i) + " has " +
                                                  std::to_string(adj[i].size()) + " neighbours, expected " +
                                                  std::to_string(r));

    std::vector<BrionVertexData> data(v.vertices.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i].vertex = v.vertices[i];
        data[i].neighbors = adj[i];
        for (int j : adj[i]) data[i].edge_vectors.push_back(v.vertices[i] - v.vertices[static_cast<std::size_t>(j)]);
    }
    auto valid = [&](const Eigen::VectorXd& x) {
        const double xn = x.norm();
        if (!(xn > 0.0)) return false;
        for (const auto& d : data)
            for (const auto& e : d.edge_vectors)
                if (std::fabs(e.dot(x)) <= kEpsGeom * xn * e.norm()) return false;
        return true;
    };
    Eigen::VectorXd chosen;
    if (xi) {
        if (xi->size() != hull.origin.size())
            throw Error("polytope.InconsistentInput", "xi has the wrong dimension");
        chosen = hull.basis * (hull.basis.transpose() * *xi);
        if (!valid(chosen)) throw Error("polytope.XiDegenerate", "supplied xi is orthogonal to an edge");
    } else {
        bool ok = false;
        for (std::uint64_t attempt = 0; attempt < 64 && !ok; ++attempt) {
            SampleStream rng(0x6272696f6eULL, attempt);
            Eigen::VectorXd g(r);
            for (int i = 0; i < r; ++i) g(i) = rng.normal();
            chosen = hull.basis * g;
            ok = valid(chosen);
        }
        if (!ok) throw Error("polytope.XiDegenerate", "no direction avoids all edges after 64 draws");
    }
    for (auto& d : data) d.xi = chosen;
    return data;
}

double brion_volume(const VertexSet& v, const Adjacency& adj, const EmbeddingFrame& frame,
                    const std::optional<Eigen::VectorXd>& xi) {
    const auto data = brion_data(v, adj, xi);
    const auto hull = affine_hull(v.vertices);
    const int r = hull.dim;
    if (r == 0) return 0.0;
    const auto n = hull.origin.size();
    CompensatedSum sum;
    for (const auto& d : data) {
        // Border the edge matrix with an orthonormal basis of the normal space
        // so |det| is the r-dimensional parallelotope volume.
        Eigen::MatrixXd m(n, n);
        m.leftCols(n - r) = hull.complement;
        for (int i = 0; i < r; ++i) m.col(n - r + i) = d.edge_vectors[static_cast<std::size_t>(i)];
        const double det = std::fabs(m.determinant());
        double den = 1.0;
        for (const auto& e : d.edge_vectors) den *= e.dot(d.xi);
        const double num = std::pow((d.vertex - hull.origin).dot(d.xi), r);
        sum.add(det * num / den);
    }
    // With edges taken as vertex minus neighbour the sign factor of the
    // outward-edge convention cancels.
    double vol = sum.value() / factorial(r);
    if (frame.convention == Convention::Projected) vol *= frame.scale();
    return vol;
}

double convert_frame(double volume, const EmbeddingFrame& frame, Convention target) {
    if (frame.convention == target) return volume;
    return target == Convention::Intrinsic ? volume * frame.scale() : volume / frame.scale();
}

}  // namespace locc
