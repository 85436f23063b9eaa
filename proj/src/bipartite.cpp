#include "locc/bipartite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "locc/error.hpp"
#include "locc/numeric.hpp"

namespace locc {

namespace {

constexpr int kMaxSupDim = 9;

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

void check_source_dim(int d) {
    if (d < 2) throw Error("bipartite.DimensionTooSmall", "source volume needs d >= 2");
    if (d > kMaxSourceDim)
        throw Error("bipartite.DimensionTooLarge", "d = " + std::to_string(d) + " exceeds the permutation-sum cap of " +
                                                       std::to_string(kMaxSourceDim));
}

// sum over sigma of (sum_k sigma(k) lambda_k - (d+1)/2)^(d-1) / prod_k (sigma(k) - sigma(k+1))
double permutation_sum(const SchmidtVector& lambda) {
    const int d = lambda.dim();
    check_source_dim(d);
    const double shift = 0.5 * (d + 1);
    CompensatedSum acc;
    Permutation sigma = Permutation::identity(d);
    do {
        double s = -shift;
        long long den = 1;
        for (int k = 1; k <= d; ++k) {
            s += sigma(k) * lambda[k - 1];
            if (k < d) den *= sigma(k) - sigma(k + 1);
        }
        acc.add(ipow(s, d - 1) / static_cast<double>(den));
    } while (sigma.advance());
    return acc.value();
}

double clamp_unit(double e) {
    if (e < 0.0 && e > -kEpsNorm) return 0.0;
    if (e > 1.0 && e < 1.0 + kEpsNorm) return 1.0;
    return e;
}

std::string sorted_region_symbol(int d) {
    return "√" + std::to_string(d) + "/(" + std::to_string(d) + "!·" + std::to_string(d - 1) + "!)";
}

double raw_source_entanglement(const SchmidtVector& lambda) { return 1.0 - permutation_sum(lambda); }

// Non-increasing integer vectors of length d summing to n.
void partitions(int n, int d, int cap, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (d == 0) {
        if (n == 0) out.push_back(cur);
        return;
    }
    for (int v = std::min(n, cap); v >= 0; --v) {
        if (v * d < n) break;
        cur.push_back(v);
        partitions(n - v, d - 1, v, cur, out);
        cur.pop_back();
    }
}

double search_sup(int d, int k) {
    auto value = [&](const std::vector<double>& phi) {
        return raw_source_entanglement(embed(SchmidtVector::canonicalize(phi), k));
    };
    const int grid = d <= 4 ? 12 : std::max(d, 8);
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    partitions(grid, d, grid, cur, parts);

    std::vector<std::pair<double, std::vector<double>>> scored;
    for (const auto& p : parts) {
        std::vector<double> phi(p.begin(), p.end());
        for (double& x : phi) x /= grid;
        scored.emplace_back(value(phi), phi);
    }
    std::vector<double> flat(static_cast<std::size_t>(d), 1.0 / d);
    scored.emplace_back(value(flat), flat);
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    double best = scored.front().first;
    const std::size_t starts = std::min<std::size_t>(3, scored.size());
    for (std::size_t s = 0; s < starts; ++s) {
        auto [fx, x] = scored[s];
        double h = 1.0 / grid;
        while (h > 1e-10) {
            bool improved = false;
            for (int i = 0; i < d && !improved; ++i)
                for (int j = 0; j < d && !improved; ++j) {
                    if (i == j || x[static_cast<std::size_t>(j)] < h) continue;
                    auto y = x;
                    y[static_cast<std::size_t>(i)] += h;
                    y[static_cast<std::size_t>(j)] -= h;
                    const double fy = value(y);
                    if (fy > fx + 1e-15) {
                        fx = fy;
                        x = SchmidtVector::canonicalize(y).vec();
                        improved = true;
                    }
                }
            if (!improved) h *= 0.5;
        }
        best = std::max(best, fx);
    }
    return best;
}

HalfspaceSystem lifted_system(const HalfspaceSystem& projected) {
    const int k = projected.dim() + 1;
    HalfspaceSystem h{Eigen::MatrixXd::Zero(projected.rows() + 2, k), Eigen::VectorXd(projected.rows() + 2)};
    h.A.topLeftCorner(projected.rows(), k - 1) = projected.A;
    h.b.head(projected.rows()) = projected.b;
    h.A.row(projected.rows()).setOnes();
    h.b(projected.rows()) = -1.0;
    h.A.row(projected.rows() + 1).setConstant(-1.0);
    h.b(projected.rows() + 1) = 1.0;
    return h;
}

}  // namespace

double sorted_region_volume(int d) {
    if (d < 1) throw Error("bipartite.DimensionTooSmall", "dimension must be positive");
    return std::sqrt(static_cast<double>(d)) / (factorial(d) * factorial(d - 1));
}

double source_volume(const SchmidtVector& lambda) {
    return permutation_sum(lambda) * sorted_region_volume(lambda.dim());
}

MeasureReport source_entanglement(const SchmidtVector& lambda) {
    const int d = lambda.dim();
    const double sum = permutation_sum(lambda);
    MeasureReport r;
    r.quantity = Quantity::Source;
    r.sup = sorted_region_volume(d);
    r.sup_symbolic = sorted_region_symbol(d);
    r.volume = sum * r.sup;
    r.dimension = d - 1;
    r.entanglement = clamp_unit(1.0 - sum);
    r.family_k = d;
    return r;
}

double source_entanglement_sup(int d, int k) {
    if (k < d) throw Error("schmidt.ShrinkNotAllowed", "k must be at least d");
    if (k == d) return 1.0;
    check_source_dim(k);
    if (k > kMaxSupDim)
        throw Error("bipartite.DimensionTooLarge",
                    "numerical supremum search is limited to k <= " + std::to_string(kMaxSupDim));
    static std::mutex mu;
    static std::map<std::pair<int, int>, double> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({d, k});
        if (it != cache.end()) return it->second;
    }
    const double s = search_sup(d, k);
    std::lock_guard<std::mutex> lock(mu);
    cache[{d, k}] = s;
    return s;
}

MeasureReport source_entanglement_k(const SchmidtVector& lambda, int k) {
    const SchmidtVector big = embed(lambda, k);
    if (k == lambda.dim()) return source_entanglement(lambda);
    MeasureReport r = source_entanglement(big);
    const double sup = source_entanglement_sup(lambda.dim(), k);
    r.sup = sup;
    r.sup_symbolic.clear();
    r.entanglement = clamp_unit(r.entanglement / sup);
    r.family_k = k;
    return r;
}

std::vector<Eigen::VectorXd> source_polytope_vertices(const SchmidtVector& lambda) {
    std::vector<double> v = lambda.vec();
    std::sort(v.begin(), v.end());
    std::vector<Eigen::VectorXd> out;
    do {
        out.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

HalfspaceSystem source_polytope_hrep(const SchmidtVector& lambda) {
    const int d = lambda.dim();
    if (d > 16) throw Error("bipartite.DimensionTooLarge", "subset system grows as 2^d");
    const int subsets = (1 << d) - 2;
    HalfspaceSystem h{Eigen::MatrixXd::Zero(subsets + 2, d), Eigen::VectorXd(subsets + 2)};
    for (int mask = 1, row = 0; mask < (1 << d) - 1; ++mask, ++row) {
        int size = 0;
        for (int i = 0; i < d; ++i)
            if (mask & (1 << i)) {
                h.A(row, i) = -1.0;
                ++size;
            }
        h.b(row) = lambda.partial_sum(size);
    }
    h.A.row(subsets).setOnes();
    h.b(subsets) = -1.0;
    h.A.row(subsets + 1).setConstant(-1.0);
    h.b(subsets + 1) = 1.0;
    return h;
}

HalfspaceSystem accessible_hrep(const SchmidtVector& lambda) { return accessible_hrep(lambda, lambda.dim()); }

HalfspaceSystem accessible_hrep(const SchmidtVector& lambda, int k) {
    if (k < 2 || k > lambda.dim())
        throw Error("bipartite.InvalidLevel", "k must satisfy 2 <= k <= d, got " + std::to_string(k));
    const int n = k - 1;
    const int m = 2 * k - 1;
    HalfspaceSystem h{Eigen::MatrixXd::Zero(m, n), Eigen::VectorXd::Zero(m)};
    int row = 0;
    for (int j = 1; j <= n; ++j, ++row) {
        h.A.row(row).head(j).setOnes();
        h.b(row) = -lambda.partial_sum(j);
    }
    for (int j = 0; j + 1 < n; ++j, ++row) {
        h.A(row, j) = 1.0;
        h.A(row, j + 1) = -1.0;
    }
    // x_{k-1} >= 1 - sum(x)
    h.A.row(row).setOnes();
    h.A(row, n - 1) += 1.0;
    h.b(row) = -1.0;
    ++row;
    // 1 - sum(x) >= 0
    h.A.row(row).setConstant(-1.0);
    h.b(row) = 1.0;
    return h;
}

Eigen::VectorXd lift(const Eigen::VectorXd& projected) {
    Eigen::VectorXd out(projected.size() + 1);
    out.head(projected.size()) = projected;
    out(projected.size()) = 1.0 - projected.sum();
    return out;
}

AccessibleGeometry accessible_geometry(const SchmidtVector& lambda, int k) {
    AccessibleGeometry g;
    g.k = k;
    g.hrep = accessible_hrep(lambda, k);
    g.vertices = enumerate_vertices(g.hrep);
    g.projected = volume_triangulation(g.hrep, g.vertices);
    if (g.projected.dimension == k - 1) {
        g.intrinsic = g.projected;
        g.intrinsic.volume = convert_frame(g.projected.volume, EmbeddingFrame{k, Convention::Projected},
                                           Convention::Intrinsic);
    } else {
        const auto lifted_h = lifted_system(g.hrep);
        std::vector<Eigen::VectorXd> pts;
        for (const auto& v : g.vertices.vertices) pts.push_back(lift(v));
        g.intrinsic = volume_triangulation(lifted_h, with_tight_sets(lifted_h, pts));
    }
    return g;
}

VolumeResult accessible_volume(const SchmidtVector& lambda) {
    return accessible_geometry(lambda, lambda.dim()).intrinsic;
}

VolumeResult accessible_volume_k(const SchmidtVector& lambda, int k) { return accessible_geometry(lambda, k).intrinsic; }

MeasureReport accessible_entanglement_k(const SchmidtVector& lambda, int k) {
    const auto vol = accessible_volume_k(lambda, k);
    MeasureReport r;
    r.quantity = Quantity::Accessible;
    r.volume = vol.volume;
    r.dimension = vol.dimension;
    r.sup = sorted_region_volume(k);
    r.sup_symbolic = sorted_region_symbol(k);
    r.entanglement = vol.dimension == k - 1 ? clamp_unit(vol.volume / r.sup) : 0.0;
    r.family_k = k;
    return r;
}

MeasureReport accessible_entanglement(const SchmidtVector& lambda) {
    if (lambda.dim() < 2) throw Error("bipartite.DimensionTooSmall", "accessible volume needs d >= 2");
    return accessible_entanglement_k(lambda, lambda.dim());
}

std::vector<std::vector<double>> guaranteed_vertices(const SchmidtVector& lambda) {
    const int d = lambda.dim();
    if (d < 3) throw Error("bipartite.DimensionTooSmall", "guaranteed vertices need d >= 3");
    const auto geo = accessible_geometry(lambda, d);
    std::vector<std::vector<double>> out;
    for (int i = 1; i <= d - 2; ++i) {
        std::vector<double> v(static_cast<std::size_t>(d), 0.0);
        for (int j = 0; j < i; ++j) v[static_cast<std::size_t>(j)] = lambda[j];
        const double li = lambda[i - 1];
        double rest = 1.0 - lambda.partial_sum(i);
        int pos = i;
        if (li > 0.0) {
            while (pos < d && rest >= li - kEpsNorm) {
                v[static_cast<std::size_t>(pos++)] = li;
                rest -= li;
            }
        }
        if (pos < d) v[static_cast<std::size_t>(pos)] = std::max(0.0, rest);
        Eigen::VectorXd proj(d - 1);
        for (int j = 0; j < d - 1; ++j) proj(j) = v[static_cast<std::size_t>(j)];
        bool found = false;
        for (const auto& w : geo.vertices.vertices)
            if ((w - proj).norm() <= 10 * kEpsGeom) found = true;
        if (!found)
            throw Error("bipartite.VertexCheckFailed",
                        "v_" + std::to_string(i) + " is not among the enumerated accessible vertices");
        out.push_back(std::move(v));
    }
    return out;
}

bool max_entangled_accessible(const SchmidtVector& lambda, int k) {
    const int d = lambda.dim();
    if (k < 1 || k > d) throw Error("bipartite.InvalidLevel", "k must satisfy 1 <= k <= d");
    const bool accessible = lambda[0] <= 1.0 / k + kEpsNorm;
    if (!accessible || d < 2) return accessible;
    const auto geo = accessible_geometry(lambda, d);
    Eigen::VectorXd target = Eigen::VectorXd::Zero(d - 1);
    for (int j = 0; j < std::min(k, d - 1); ++j) target(j) = 1.0 / k;
    for (const auto& w : geo.vertices.vertices)
        if ((w - target).norm() <= 10 * kEpsGeom) return true;
    throw Error("bipartite.VertexCheckFailed", "maximally entangled vector is accessible but not a vertex");
}

}  // namespace locc
