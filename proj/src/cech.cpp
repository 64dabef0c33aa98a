#include "pdkde/cech.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pdkde/parallel.hpp"

namespace pdkde {

namespace {

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

struct VertexKeyHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 0x811C9DC5u;
        for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x01000193u;
        return h;
    }
};


// Solves the k x k system G s = rhs by Gaussian elimination with partial
// pivoting. Returns false when G is (numerically) singular.
bool solve_small(std::vector<std::vector<double>>& g, std::vector<double>& rhs) {
    const std::size_t k = rhs.size();
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(g[r][col]) > std::abs(g[piv][col])) piv = r;
        if (std::abs(g[piv][col]) < 1e-14) return false;
        std::swap(g[piv], g[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < k; ++r) {
            const double f = g[r][col] / g[col][col];
            for (std::size_t c = col; c < k; ++c) g[r][c] -= f * g[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t col = k; col-- > 0;) {
        for (std::size_t c = col + 1; c < k; ++c) rhs[col] -= g[col][c] * rhs[c];
        rhs[col] /= g[col][col];
    }
    return true;
}

// Smallest ball with the given support points on its boundary, centered in
// their affine hull. Returns {center, radius}; radius < 0 when the support
// is affinely degenerate.
std::pair<std::vector<double>, double> circumball(std::span<const std::vector<double>> support) {
    const std::size_t k = support.size() - 1;
    const std::vector<double>& p0 = support[0];
    if (k == 0) return {p0, 0.0};
    if (k == 1) {
        // same arithmetic as the edge radius, so shared faces sort first
        std::vector<double> center(p0.size());
        for (std::size_t c = 0; c < p0.size(); ++c) center[c] = 0.5 * (p0[c] + support[1][c]);
        return {center, 0.5 * std::sqrt(dist2(p0, support[1]))};
    }

    std::vector<std::vector<double>> v(k);
    for (std::size_t i = 0; i < k; ++i) {
        v[i].resize(p0.size());
        for (std::size_t c = 0; c < p0.size(); ++c) v[i][c] = support[i + 1][c] - p0[c];
    }
    std::vector<std::vector<double>> gram(k, std::vector<double>(k, 0.0));
    std::vector<double> rhs(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t c = 0; c < p0.size(); ++c) gram[i][j] += v[i][c] * v[j][c];
        rhs[i] = 0.5 * gram[i][i];
    }
    if (!solve_small(gram, rhs)) return {{}, -1.0};

    std::vector<double> center = p0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = 0; c < p0.size(); ++c) center[c] += rhs[i] * v[i][c];
    return {center, std::sqrt(dist2(center, p0))};
}

}  // namespace

double min_enclosing_ball_radius(std::span<const std::vector<double>> points) {
    if (points.empty()) throw std::invalid_argument("min_enclosing_ball_radius: empty point set");
    const std::size_t n = points.size();
    for (const auto& p : points)
        if (p.size() != points[0].size())
            throw std::invalid_argument("min_enclosing_ball_radius: mixed dimensions");
    if (n == 1) return 0.0;

    const std::size_t dim = points[0].size();
    if (dim > 3 || n > 4)
        throw std::invalid_argument("min_enclosing_ball_radius: supports <= 4 points, dim <= 3");

    double best = -1.0;
    std::vector<std::vector<double>> support;
    // Every candidate support subset of size 2..n; the minimal enclosing
    // ball is the smallest circumball that contains all points.
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        const int bits = __builtin_popcount(mask);
        if (bits < 2) continue;
        support.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) support.push_back(points[i]);
        auto [center, radius] = circumball(support);
        if (radius < 0.0) continue;
        if (best >= 0.0 && radius >= best) continue;
        bool contains = true;
        const double limit = radius * radius * (1.0 + 1e-12) + 1e-300;
        for (std::size_t i = 0; i < n && contains; ++i)
            if (!(mask & (1u << i))) contains = dist2(center, points[i]) <= limit;
        if (contains) best = radius;
    }
    if (best < 0.0) throw std::runtime_error("min_enclosing_ball_radius: no valid support found");
    return best;
}

namespace {

struct SimplexOrder {
    bool operator()(const Simplex& a, const Simplex& b) const {
        if (a.radius != b.radius) return a.radius < b.radius;
        if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
        return a.vertices < b.vertices;
    }
};

// All simplices on `cloud` of dimension `target_dim` whose vertex set is
// pairwise within 2*max_radius, starting at first vertex v0. Appends
// survivors (enclosing radius <= max_radius) to `out`.
void collect_dim(const PointCloud& cloud, const std::vector<std::vector<int>>& nbrs,
                 int target_dim, int v0, double max_radius, std::vector<Simplex>& out) {
    std::vector<int> current{v0};
    std::vector<int> candidates = nbrs[v0];
    std::vector<std::vector<double>> pts;

    // depth-first extension over common neighbors
    std::function<void(std::vector<int>&)> extend = [&](std::vector<int>& cands) {
        if (static_cast<int>(current.size()) == target_dim + 1) {
            pts.clear();
            for (int v : current) pts.push_back(cloud.points[v]);
            const double r = min_enclosing_ball_radius(pts);
            if (r <= max_radius) out.push_back(Simplex{current, r});
            return;
        }
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const int v = cands[i];
            std::vector<int> next;
            for (std::size_t j = i + 1; j < cands.size(); ++j) {
                const int w = cands[j];
                if (std::binary_search(nbrs[v].begin(), nbrs[v].end(), w)) next.push_back(w);
            }
            if (static_cast<int>(current.size()) + 1 + static_cast<int>(next.size()) <
                target_dim + 1)
                continue;
            current.push_back(v);
            extend(next);
            current.pop_back();
        }
    };
    extend(candidates);
}

}  // namespace

Filtration cech_filtration(const PointCloud& cloud, int max_dim, double max_radius,
                           int n_threads) {
    if (max_dim < 1) throw std::invalid_argument("cech_filtration: max_dim must be >= 1");
    if (cloud.points.empty()) throw std::invalid_argument("cech_filtration: empty cloud");
    const int n = static_cast<int>(cloud.points.size());

    Filtration filt;
    filt.max_dim = max_dim;
    for (int i = 0; i < n; ++i) filt.simplices.push_back(Simplex{{i}, 0.0});

    // neighbor lists under the edge cutoff (edge radius = half distance)
    std::vector<std::vector<int>> nbrs(n);
    const double cut2 = 4.0 * max_radius * max_radius;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dist2(cloud.points[i], cloud.points[j]) <= cut2) nbrs[i].push_back(j);

    std::unordered_map<std::vector<int>, double, VertexKeyHash> face_radius;
    for (int i = 0; i < n; ++i) {
        for (int j : nbrs[i]) {
            const double r = 0.5 * std::sqrt(dist2(cloud.points[i], cloud.points[j]));
            filt.simplices.push_back(Simplex{{i, j}, r});
            face_radius.emplace(std::vector<int>{i, j}, r);
        }
    }

    const int threads = resolve_threads(n_threads);
    for (int d = 2; d <= max_dim; ++d) {
        std::vector<std::vector<Simplex>> local(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int v0 = 0; v0 < n; ++v0) collect_dim(cloud, nbrs, d, v0, max_radius, local[v0]);

        // clamp each radius to its faces' radii: a no-op mathematically,
        // but it pins down filtration monotonicity against rounding
        std::unordered_map<std::vector<int>, double, VertexKeyHash> next_radius;
        for (auto& chunk : local) {
            for (Simplex& s : chunk) {
                bool keep = true;
                std::vector<int> face(s.vertices.size() - 1);
                for (std::size_t drop = 0; drop < s.vertices.size() && keep; ++drop) {
                    face.clear();
                    for (std::size_t i = 0; i < s.vertices.size(); ++i)
                        if (i != drop) face.push_back(s.vertices[i]);
                    const auto it = face_radius.find(face);
                    if (it == face_radius.end())
                        keep = false;  // face fell on the far side of the cutoff
                    else
                        s.radius = std::max(s.radius, it->second);
                }
                if (keep && s.radius <= max_radius) {
                    next_radius.emplace(s.vertices, s.radius);
                    filt.simplices.push_back(std::move(s));
                }
            }
        }
        face_radius = std::move(next_radius);
    }

    std::sort(filt.simplices.begin(), filt.simplices.end(), SimplexOrder{});
    return filt;
}

Filtration cech_filtration_serial(const PointCloud& cloud, int max_dim, double max_radius) {
    return cech_filtration(cloud, max_dim, max_radius, 1);
}

double default_max_radius(const PointCloud& cloud) {
    double diam2 = 0.0;
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        for (std::size_t j = i + 1; j < cloud.points.size(); ++j)
            diam2 = std::max(diam2, dist2(cloud.points[i], cloud.points[j]));
    return 0.62 * std::sqrt(diam2) + 1e-12;
}

PersistenceDiagram persistence(const Filtration& filtration, int max_degree) {
    if (max_degree >= filtration.max_dim)
        throw std::invalid_argument("persistence: max_degree must be < filtration max_dim");
    const auto& simplices = filtration.simplices;
    const std::size_t m = simplices.size();

    std::unordered_map<std::vector<int>, int, VertexKeyHash> index;
    index.reserve(2 * m);
    for (std::size_t i = 0; i < m; ++i) index.emplace(simplices[i].vertices, static_cast<int>(i));

    // Boundary columns as sorted row-index lists; reduce left to right,
    // cancelling with the column that owns the same lowest one.
    std::vector<int> pivot_owner(m, -1);
    std::vector<std::vector<int>> reduced(m);
    PersistenceDiagram diagram;

    std::vector<int> faces, merged;
    for (std::size_t j = 0; j < m; ++j) {
        const Simplex& s = simplices[j];
        if (s.dim() == 0) continue;
        faces.clear();
        std::vector<int> fv(s.vertices.size() - 1);
        for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
            fv.clear();
            for (std::size_t i = 0; i < s.vertices.size(); ++i)
                if (i != drop) fv.push_back(s.vertices[i]);
            auto it = index.find(fv);
            if (it == index.end() || static_cast<std::size_t>(it->second) >= j)
                throw std::invalid_argument("persistence: filtration is missing a face");
            faces.push_back(it->second);
        }
        std::sort(faces.begin(), faces.end());

        std::vector<int>& col = reduced[j];
        col = faces;
        while (!col.empty()) {
            const int low = col.back();
            const int owner = pivot_owner[low];
            if (owner < 0) break;
            // col ^= reduced[owner] (symmetric difference of sorted lists)
            merged.clear();
            std::set_symmetric_difference(col.begin(), col.end(), reduced[owner].begin(),
                                          reduced[owner].end(), std::back_inserter(merged));
            col.swap(merged);
        }
        if (!col.empty()) {
            const int low = col.back();
            pivot_owner[low] = static_cast<int>(j);
            const Simplex& born = simplices[low];
            if (born.dim() <= max_degree && s.radius > born.radius)
                diagram.features.push_back(Feature{born.radius, s.radius, born.dim()});
        }
    }
    return diagram;
}

PersistenceDiagram cech_diagram(const PointCloud& cloud, int max_degree, double max_radius,
                                int n_threads) {
    if (max_radius < 0.0) max_radius = default_max_radius(cloud);
    const Filtration filt = cech_filtration(cloud, max_degree + 1, max_radius, n_threads);
    return persistence(filt, max_degree);
}

}  // namespace pdkde
