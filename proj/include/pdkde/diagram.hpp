#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace pdkde {

// One homological feature: born at scale `birth`, filled at scale `death`,
// with degree of homology `degree`. Lives in the multiwedge
// {(b, d) : d > b >= 0} x {degrees}.
struct Feature {
    double birth = 0.0;
    double death = 0.0;
    int degree = 0;

    double persistence() const { return death - birth; }

    friend bool operator==(const Feature& a, const Feature& b) {
        return a.birth == b.birth && a.death == b.death && a.degree == b.degree;
    }
};

// Finite multiset of features. Features with equal coordinates are kept as
// distinct multiset elements.
struct PersistenceDiagram {
    std::vector<Feature> features;

    PersistenceDiagram() = default;
    explicit PersistenceDiagram(std::vector<Feature> f) : features(std::move(f)) {}

    std::size_t size() const { return features.size(); }
    bool empty() const { return features.empty(); }
};

// Features of the given degree with persistence >= sigma_split go to
// `upper`, the rest of that degree to `lower` (the boundary case
// persistence == sigma_split is upper).
std::pair<PersistenceDiagram, PersistenceDiagram> split(const PersistenceDiagram& d,
                                                        double sigma_split, int degree);

// 0 for an empty diagram, otherwise max over features of death - birth.
double max_persistence(const PersistenceDiagram& d);

// Bottleneck distance. Each degree of homology is matched separately
// (features may be matched to the diagonal at cost persistence/2) and the
// result is the max over degrees. Exact: binary search over the candidate
// distances with a bipartite matching feasibility test.
double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b);

// Bottleneck between two same-degree feature lists, degrees ignored.
double bottleneck_single_degree(const std::vector<Feature>& a, const std::vector<Feature>& b);

}  // namespace pdkde
