#include "pdkde/kde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pdkde/cech.hpp"
#include "pdkde/numeric.hpp"
#include "pdkde/parallel.hpp"

namespace pdkde {

double silverman_sigma(std::size_t n, int max_cardinality, double scale) {
    if (n < 1) throw std::invalid_argument("silverman_sigma: n must be >= 1");
    if (max_cardinality < 1) throw std::invalid_argument("silverman_sigma: M must be >= 1");
    if (scale <= 0.0) throw std::invalid_argument("silverman_sigma: scale must be positive");
    return scale * std::pow(static_cast<double>(n), -1.0 / (2.0 * max_cardinality + 4.0));
}

double BandwidthSchedule::sigma(std::size_t n) const {
    return scale * std::pow(static_cast<double>(n), -alpha);
}

BandwidthSchedule BandwidthSchedule::for_max_cardinality(int m, double scale) {
    BandwidthSchedule s;
    s.max_cardinality = m;
    s.alpha = 1.0 / (2.0 * m + 4.0);
    s.scale = scale;
    return s;
}

int suggested_max_cardinality(const std::vector<PersistenceDiagram>& diagrams) {
    std::size_t largest = 0;
    for (const auto& d : diagrams) largest = std::max(largest, d.size());
    return 3 * std::max<int>(1, static_cast<int>(largest));
}

KdeModel fit(const std::vector<PersistenceDiagram>& diagrams, double sigma_split,
             double sigma_band, const std::vector<int>& degrees, const NuFunction& nu) {
    if (diagrams.empty()) throw std::invalid_argument("fit: need at least one diagram");
    KdeModel model;
    model.degrees = degrees;
    model.sigma_split = sigma_split;
    model.sigma_band = sigma_band;
    model.components.reserve(diagrams.size());
    for (const auto& d : diagrams)
        model.components.push_back(build_degree_kernels(d, degrees, sigma_split, sigma_band, nu));
    return model;
}

double eval(const KdeModel& model, const PersistenceDiagram& z) {
    double sum = 0.0;
    for (const auto& ks : model.components) sum += eval_multi_degree(ks, z);
    return sum / static_cast<double>(model.n());
}

namespace {

SliceGrid eval_slice_impl(const KdeModel& model, const std::vector<Feature>& fixed,
                          const GridSpec& grid, int degree, int threads) {
    SliceGrid out;
    out.spec = grid;
    out.values.assign(static_cast<std::size_t>(grid.res) * grid.res, 0.0);

#pragma omp parallel for collapse(2) schedule(static) num_threads(threads)
    for (int i = 0; i < grid.res; ++i) {
        for (int j = 0; j < grid.res; ++j) {
            const double b = grid.cell_b(i);
            const double d = grid.cell_d(j);
            if (!(d > b) || b < 0.0) continue;
            PersistenceDiagram z;
            z.features.reserve(fixed.size() + 1);
            z.features.push_back(Feature{b, d, degree});
            z.features.insert(z.features.end(), fixed.begin(), fixed.end());
            out.values[static_cast<std::size_t>(i) * grid.res + j] = eval(model, z);
        }
    }
    return out;
}

}  // namespace

SliceGrid eval_slice(const KdeModel& model, const std::vector<Feature>& fixed,
                     const GridSpec& grid, int degree, int n_threads) {
    return eval_slice_impl(model, fixed, grid, degree, resolve_threads(n_threads));
}

SliceGrid eval_slice_serial(const KdeModel& model, const std::vector<Feature>& fixed,
                            const GridSpec& grid, int degree) {
    return eval_slice_impl(model, fixed, grid, degree, 1);
}

std::array<double, 2> slice_mode(const SliceGrid& grid) {
    const int res = grid.spec.res;
    int best_i = 0, best_j = 0;
    double best = -1.0;
    for (int i = 0; i < res; ++i) {
        for (int j = 0; j < res; ++j) {
            const double v = grid.at(i, j);
            if (v > best) {
                best = v;
                best_i = i;
                best_j = j;
            }
        }
    }
    return {grid.spec.cell_b(best_i), grid.spec.cell_d(best_j)};
}

double slice_l1(const SliceGrid& a, const SliceGrid& b) {
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("slice_l1: grids must have the same resolution");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) sum += std::abs(a.values[i] - b.values[i]);
    return sum * a.spec.cell_area();
}

PersistenceDiagram sample(const KdeModel& model, RngStream& rng) {
    const std::size_t i = rng.uniform_index(model.n());
    return sample_degree_kernels(model.components[i], rng);
}

McEstimate set_integral_mc(const KdeModel& model, const DiagramFunctional& g,
                           std::size_t n_samples, std::uint64_t seed, int n_threads) {
    if (n_samples < 2) throw std::invalid_argument("set_integral_mc: need at least 2 samples");
    constexpr std::size_t kBlock = 256;
    const std::size_t n_blocks = (n_samples + kBlock - 1) / kBlock;
    std::vector<MeanAccumulator> partial(n_blocks);
    const int threads = resolve_threads(n_threads);
    const RngStream root(seed);

#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::size_t b = 0; b < n_blocks; ++b) {
        RngStream rng = root.substream(b);
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(lo + kBlock, n_samples);
        for (std::size_t s = lo; s < hi; ++s) partial[b].add(g(sample(model, rng)));
    }

    MeanAccumulator total;
    for (const auto& acc : partial) total.merge(acc);
    return McEstimate{total.mean(), total.std_error(), total.n};
}

McEstimate mad_estimate(const KdeModel& model, const PersistenceDiagram& origin,
                        std::size_t n_samples, std::uint64_t seed, int n_threads) {
    return set_integral_mc(
        model, [&origin](const PersistenceDiagram& z) { return bottleneck(origin, z); }, n_samples,
        seed, n_threads);
}

PointCloud make_cloud(const GeneratorSpec& gen, std::uint64_t seed) {
    switch (gen.kind) {
        case DatasetKind::circle:
            return sample_circle(gen.n_points, gen.noise_std, seed);
        case DatasetKind::two_lobed:
            return sample_two_lobed(gen.n_points, gen.noise_std, seed);
    }
    throw std::invalid_argument("make_cloud: unknown dataset kind");
}

SweepReport convergence_sweep(const SweepConfig& config) {
    if (config.schedule.empty()) throw std::invalid_argument("convergence_sweep: empty schedule");
    const int threads = resolve_threads(config.n_threads);
    SweepReport report;

    for (std::size_t step = 0; step < config.schedule.size(); ++step) {
        const auto [n, sigma] = config.schedule[step];
        std::vector<PersistenceDiagram> diagrams(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int i = 0; i < n; ++i) {
            const std::uint64_t seed = config.generator.fixed_seed
                                           ? *config.generator.fixed_seed
                                           : derive_seed(config.seed, step, i);
            const PointCloud cloud = make_cloud(config.generator, seed);
            diagrams[i] = cech_diagram(cloud, config.degree, -1.0, 1);
        }

        const KdeModel model = fit(diagrams, sigma, sigma, {config.degree});

        SweepStepResult result;
        result.n = n;
        result.sigma = sigma;
        for (std::size_t s = 0; s < config.slices.size(); ++s) {
            SliceResult slice;
            slice.fixed = config.slices[s];
            slice.grid = eval_slice(model, slice.fixed, config.grid, config.degree, threads);
            slice.mode = slice_mode(slice.grid);
            if (step > 0)
                slice.l1_to_previous = slice_l1(slice.grid, report.steps.back().slices[s].grid);
            result.slices.push_back(std::move(slice));
        }
        if (config.mad_samples >= 2)
            result.mad = mad_estimate(model, config.mad_origin, config.mad_samples,
                                      derive_seed(config.seed, step, 0xABCDEF), threads);
        report.steps.push_back(std::move(result));
    }
    return report;
}

}  // namespace pdkde
