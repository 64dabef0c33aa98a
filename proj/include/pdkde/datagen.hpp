#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace pdkde {

// Point cloud in R^dim; all points share the same dimension and all
// coordinates are finite.
struct PointCloud {
    int dim = 2;
    std::vector<std::vector<double>> points;

    std::size_t size() const { return points.size(); }
};

// n_points on the unit circle, angle uniform in [0, 2*pi), plus independent
// per-coordinate Gaussian noise with standard deviation noise_std.
// Identical arguments give bit-identical clouds.
PointCloud sample_circle(std::size_t n_points, double noise_std, std::uint64_t seed);

// Points on a polar curve r(theta) sampled uniformly in angle, plus
// Gaussian noise as above.
PointCloud sample_polar_curve(std::size_t n_points, double noise_std, std::uint64_t seed,
                              const std::function<double(double)>& radius_fn);

// Two-lobed pinched curve r(theta) = 0.5 + |cos(theta)|; lobe radius 1.5,
// pinch radius 0.5 at theta = pi/2 and 3*pi/2.
PointCloud sample_two_lobed(std::size_t n_points, double noise_std, std::uint64_t seed);

double two_lobed_radius(double theta);

}  // namespace pdkde
