#pragma once

#include <span>
#include <vector>

#include "pdkde/datagen.hpp"
#include "pdkde/diagram.hpp"

namespace pdkde {

// Simplex given by its sorted vertex indices and the radius at which it
// enters the Cech filtration (the minimal enclosing ball radius of its
// vertices). Monotone: the radius of every proper face is <= this radius.
struct Simplex {
    std::vector<int> vertices;
    double radius = 0.0;

    int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

// Simplices sorted by (radius, dimension, lexicographic vertices), so every
// face appears before its cofaces.
struct Filtration {
    std::vector<Simplex> simplices;
    int max_dim = 1;
};

// Radius of the smallest ball containing all points. Exact (closed-form
// support enumeration) for up to 4 points in ambient dimension <= 3.
double min_enclosing_ball_radius(std::span<const std::vector<double>> points);

// All simplices of dimension <= max_dim with enclosing-ball radius
// <= max_radius. Vertices enter at 0, edges at half the pairwise distance.
// Radius computations run in parallel over candidate simplices when
// n_threads != 1; the output is identical to the serial version.
Filtration cech_filtration(const PointCloud& cloud, int max_dim, double max_radius,
                           int n_threads = 0);

// Single-threaded reference implementation, kept for testing.
Filtration cech_filtration_serial(const PointCloud& cloud, int max_dim, double max_radius);

// Default filtration cutoff: no feature of the cloud survives past this
// radius (the complex is a cone once the whole cloud fits in one ball, and
// that happens by 0.62 * diameter in ambient dimension <= 3).
double default_max_radius(const PointCloud& cloud);

// Persistence diagram of the filtration by left-to-right column reduction
// of the Z2 boundary matrix. Features of degree 0..max_degree; unpaired
// (infinite-death) and zero-persistence pairs are dropped.
PersistenceDiagram persistence(const Filtration& filtration, int max_degree);

// Convenience pipeline: filtration with default radius + reduction.
PersistenceDiagram cech_diagram(const PointCloud& cloud, int max_degree, double max_radius = -1.0,
                                int n_threads = 0);

}  // namespace pdkde
