#include "pdkde/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pdkde {

std::pair<PersistenceDiagram, PersistenceDiagram> split(const PersistenceDiagram& d,
                                                        double sigma_split, int degree) {
    PersistenceDiagram upper, lower;
    for (const Feature& f : d.features) {
        if (f.degree != degree) continue;
        if (f.persistence() >= sigma_split)
            upper.features.push_back(f);
        else
            lower.features.push_back(f);
    }
    return {std::move(upper), std::move(lower)};
}

double max_persistence(const PersistenceDiagram& d) {
    double m = 0.0;
    for (const Feature& f : d.features) m = std::max(m, f.persistence());
    return m;
}

namespace {

double linf(const Feature& a, const Feature& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double diag_cost(const Feature& f) { return 0.5 * f.persistence(); }

// Perfect-matching feasibility at threshold t on the augmented bipartite
// graph: left = features of A plus |B| diagonal slots, right = features of
// B plus |A| diagonal slots. Kuhn's augmenting paths; sizes are small.
class MatchingTest {
public:
    MatchingTest(const std::vector<Feature>& a, const std::vector<Feature>& b)
        : a_(a), b_(b), nl_(a.size() + b.size()), nr_(b.size() + a.size()) {}

    bool feasible(double t) const {
        std::vector<int> match_r(nr_, -1);
        std::vector<char> visited;
        std::size_t matched = 0;
        for (std::size_t u = 0; u < nl_; ++u) {
            visited.assign(nr_, 0);
            if (augment(u, t, match_r, visited)) ++matched;
        }
        return matched == nl_;
    }

private:
    bool edge(std::size_t u, std::size_t v, double t) const {
        const bool u_real = u < a_.size();
        const bool v_real = v < b_.size();
        if (u_real && v_real) return linf(a_[u], b_[v]) <= t;
        if (u_real) return diag_cost(a_[u]) <= t;
        if (v_real) return diag_cost(b_[v]) <= t;
        return true;  // diagonal to diagonal is free
    }

    bool augment(std::size_t u, double t, std::vector<int>& match_r,
                 std::vector<char>& visited) const {
        for (std::size_t v = 0; v < nr_; ++v) {
            if (visited[v] || !edge(u, v, t)) continue;
            visited[v] = 1;
            if (match_r[v] < 0 ||
                augment(static_cast<std::size_t>(match_r[v]), t, match_r, visited)) {
                match_r[v] = static_cast<int>(u);
                return true;
            }
        }
        return false;
    }

    const std::vector<Feature>& a_;
    const std::vector<Feature>& b_;
    std::size_t nl_, nr_;
};

}  // namespace

double bottleneck_single_degree(const std::vector<Feature>& a, const std::vector<Feature>& b) {
    if (a.empty() && b.empty()) return 0.0;

    // Candidate distances: the optimum is realized by some pairwise
    // distance or some diagonal projection cost.
    std::set<double> cand{0.0};
    for (const Feature& f : a) cand.insert(diag_cost(f));
    for (const Feature& f : b) cand.insert(diag_cost(f));
    for (const Feature& fa : a)
        for (const Feature& fb : b) cand.insert(linf(fa, fb));

    std::vector<double> c(cand.begin(), cand.end());
    MatchingTest test(a, b);
    std::size_t lo = 0, hi = c.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (test.feasible(c[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return c[lo];
}

double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    std::set<int> degrees;
    for (const Feature& f : a.features) degrees.insert(f.degree);
    for (const Feature& f : b.features) degrees.insert(f.degree);

    double result = 0.0;
    for (int k : degrees) {
        std::vector<Feature> fa, fb;
        for (const Feature& f : a.features)
            if (f.degree == k) fa.push_back(f);
        for (const Feature& f : b.features)
            if (f.degree == k) fb.push_back(f);
        result = std::max(result, bottleneck_single_degree(fa, fb));
    }
    return result;
}

}  // namespace pdkde
