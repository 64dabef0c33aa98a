#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdkde/datagen.hpp"
#include "pdkde/diagram.hpp"
#include "pdkde/kernel.hpp"

namespace pdkde {

// Uniform mixture of kernels, one per sample diagram.
struct KdeModel {
    std::vector<DegreeKernels> components;
    std::vector<int> degrees;
    double sigma_split = 1.0;
    double sigma_band = 1.0;

    std::size_t n() const { return components.size(); }
};

// sigma(n) = scale * n^(-alpha), decreasing in n. alpha defaults to the
// Silverman-style exponent 1/(2M+4) for maximal cardinality M.
struct BandwidthSchedule {
    double alpha = 0.125;
    double scale = 1.0;
    int max_cardinality = 2;

    double sigma(std::size_t n) const;
    static BandwidthSchedule for_max_cardinality(int m, double scale = 1.0);
};

double silverman_sigma(std::size_t n, int max_cardinality, double scale);

// Maximal-cardinality bound used by the model: three times the largest
// observed diagram (covers the doubled lower support plus slack).
int suggested_max_cardinality(const std::vector<PersistenceDiagram>& diagrams);

KdeModel fit(const std::vector<PersistenceDiagram>& diagrams, double sigma_split,
             double sigma_band, const std::vector<int>& degrees = {1},
             const NuFunction& nu = nu_triangular);

// Multiset-convention density at z: arithmetic mean of the component
// kernel densities.
double eval(const KdeModel& model, const PersistenceDiagram& z);

struct GridSpec {
    double bmin = 0.0, bmax = 1.0;
    double dmin = 0.0, dmax = 1.0;
    int res = 200;

    double cell_b(int i) const { return bmin + (i + 0.5) * (bmax - bmin) / res; }
    double cell_d(int j) const { return dmin + (j + 0.5) * (dmax - dmin) / res; }
    double cell_area() const { return (bmax - bmin) / res * ((dmax - dmin) / res); }
};

// Density slice on a (b, d) lattice of cell centers; values[i * res + j]
// holds the density at (cell_b(i), cell_d(j)), zero on or below the
// diagonal.
struct SliceGrid {
    GridSpec spec;
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * spec.res + j]; }
};

// Evaluates z -> eval(model, {xi} union fixed) over the grid; xi carries
// the given degree. Parallel over grid points.
SliceGrid eval_slice(const KdeModel& model, const std::vector<Feature>& fixed,
                     const GridSpec& grid, int degree, int n_threads = 0);

// Single-threaded reference implementation, kept for testing.
SliceGrid eval_slice_serial(const KdeModel& model, const std::vector<Feature>& fixed,
                            const GridSpec& grid, int degree);

// Location of the grid argmax; ties resolved toward smaller (b, d).
std::array<double, 2> slice_mode(const SliceGrid& grid);

// Riemann-sum L1 distance between two slices on the same grid.
double slice_l1(const SliceGrid& a, const SliceGrid& b);

PersistenceDiagram sample(const KdeModel& model, RngStream& rng);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
};

using DiagramFunctional = std::function<double(const PersistenceDiagram&)>;

// Monte Carlo set integral of g against the fitted density: mean and
// standard error of g over sampled diagrams. Work is split into fixed
// 256-sample blocks with per-block substreams and merged in block order,
// so the result is identical for any thread count.
McEstimate set_integral_mc(const KdeModel& model, const DiagramFunctional& g,
                           std::size_t n_samples, std::uint64_t seed, int n_threads = 0);

// Mean absolute bottleneck deviation from the origin diagram.
McEstimate mad_estimate(const KdeModel& model, const PersistenceDiagram& origin,
                        std::size_t n_samples, std::uint64_t seed, int n_threads = 0);

// ---------------------------------------------------------------------------
// Convergence experiment: generate datasets, compute diagrams, fit a KDE
// per (n, sigma) step, track slice grids, their successive L1 distances,
// slice modes, and the MAD.
// ---------------------------------------------------------------------------

enum class DatasetKind { circle, two_lobed };

struct GeneratorSpec {
    DatasetKind kind = DatasetKind::circle;
    std::size_t n_points = 10;
    double noise_std = 0.02;
    // when set, every dataset of the sweep reuses this seed (constant cloud)
    std::optional<std::uint64_t> fixed_seed;
};

PointCloud make_cloud(const GeneratorSpec& gen, std::uint64_t seed);

struct SweepStep {
    int n = 0;
    double sigma = 0.0;
};

struct SweepConfig {
    GeneratorSpec generator;
    std::vector<SweepStep> schedule;
    std::vector<std::vector<Feature>> slices;  // fixed features per slice
    GridSpec grid;
    int degree = 1;
    std::uint64_t seed = 1;
    PersistenceDiagram mad_origin;             // empty diagram by default
    std::size_t mad_samples = 4000;
    int n_threads = 0;
};

struct SliceResult {
    std::vector<Feature> fixed;
    SliceGrid grid;
    std::array<double, 2> mode{0.0, 0.0};
    std::optional<double> l1_to_previous;
};

struct SweepStepResult {
    int n = 0;
    double sigma = 0.0;
    std::vector<SliceResult> slices;
    McEstimate mad;
};

struct SweepReport {
    std::vector<SweepStepResult> steps;
};

SweepReport convergence_sweep(const SweepConfig& config);

}  // namespace pdkde
