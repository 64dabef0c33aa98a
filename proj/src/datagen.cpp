#include "pdkde/datagen.hpp"

#include <cmath>
#include <stdexcept>

#include "pdkde/numeric.hpp"
#include "pdkde/rng.hpp"

namespace pdkde {

namespace {

PointCloud sample_curve(std::size_t n_points, double noise_std, std::uint64_t seed,
                        const std::function<double(double)>& radius_fn) {
    if (n_points == 0) throw std::invalid_argument("point cloud needs at least one point");
    if (noise_std < 0.0) throw std::invalid_argument("noise_std must be nonnegative");
    RngStream rng(seed);
    PointCloud cloud;
    cloud.dim = 2;
    cloud.points.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        const double r = radius_fn(theta);
        // noise draws happen even for noise_std == 0 so the stream layout
        // does not depend on the noise level
        const double nx = noise_std * rng.normal();
        const double ny = noise_std * rng.normal();
        cloud.points.push_back({r * std::cos(theta) + nx, r * std::sin(theta) + ny});
    }
    return cloud;
}

}  // namespace

PointCloud sample_circle(std::size_t n_points, double noise_std, std::uint64_t seed) {
    return sample_curve(n_points, noise_std, seed, [](double) { return 1.0; });
}

PointCloud sample_polar_curve(std::size_t n_points, double noise_std, std::uint64_t seed,
                              const std::function<double(double)>& radius_fn) {
    return sample_curve(n_points, noise_std, seed, radius_fn);
}

double two_lobed_radius(double theta) { return 0.5 + std::abs(std::cos(theta)); }

PointCloud sample_two_lobed(std::size_t n_points, double noise_std, std::uint64_t seed) {
    return sample_curve(n_points, noise_std, seed, two_lobed_radius);
}

}  // namespace pdkde
