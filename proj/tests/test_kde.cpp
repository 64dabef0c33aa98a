#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pdkde/cech.hpp"
#include "pdkde/kde.hpp"
#include "pdkde/numeric.hpp"
#include "pdkde/rng.hpp"

using namespace pdkde;

namespace {

const PersistenceDiagram kCenter{{{1.0, 3.0, 1}, {2.0, 4.0, 1}, {1.0, 1.3, 1}, {3.0, 3.2, 1}}};

PersistenceDiagram shifted_center(double offset) {
    PersistenceDiagram d = kCenter;
    for (auto& f : d.features) {
        f.birth += offset;
        f.death += offset;
    }
    return d;
}

}  // namespace

TEST_CASE("silverman bandwidth") {
    CHECK(silverman_sigma(100, 2, 1.0) == doctest::Approx(std::pow(100.0, -0.125)).epsilon(1e-14));
    CHECK(silverman_sigma(1, 5, 0.37) == doctest::Approx(0.37).epsilon(1e-14));
    CHECK(silverman_sigma(200, 2, 1.0) < silverman_sigma(100, 2, 1.0));
    CHECK_THROWS_AS(silverman_sigma(0, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(silverman_sigma(10, 0, 1.0), std::invalid_argument);

    const auto sched = BandwidthSchedule::for_max_cardinality(2, 1.0);
    CHECK(sched.alpha == doctest::Approx(0.125));
    CHECK(sched.sigma(100) == doctest::Approx(silverman_sigma(100, 2, 1.0)));
    CHECK(sched.sigma(400) < sched.sigma(100));
}

TEST_CASE("suggested maximal cardinality triples the largest diagram") {
    std::vector<PersistenceDiagram> diagrams{kCenter, PersistenceDiagram{}};
    CHECK(suggested_max_cardinality(diagrams) == 12);
    CHECK(suggested_max_cardinality({PersistenceDiagram{}}) == 3);
}

TEST_CASE("fit validates input and keeps one kernel per diagram") {
    CHECK_THROWS_AS(fit({}, 0.5, 0.5), std::invalid_argument);
    const std::vector<PersistenceDiagram> diagrams{kCenter, shifted_center(0.5)};
    const KdeModel model = fit(diagrams, 0.5, 0.5);
    CHECK(model.n() == 2);
}

TEST_CASE("a single-diagram KDE equals its kernel everywhere") {
    const KdeModel model = fit({kCenter}, 0.5, 0.5);
    const DegreeKernels ks = build_degree_kernels(kCenter, {1}, 0.5, 0.5);
    RngStream rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        PersistenceDiagram z;
        const int n = static_cast<int>(rng.uniform_index(4));
        for (int i = 0; i < n; ++i) {
            const double b = rng.uniform(0.0, 4.0);
            z.features.push_back(Feature{b, b + rng.uniform(0.01, 3.0), 1});
        }
        CHECK(eval(model, z) == doctest::Approx(eval_multi_degree(ks, z)).epsilon(1e-15));
    }
}

TEST_CASE("KDE evaluation is the arithmetic mean of the component kernels") {
    const std::vector<PersistenceDiagram> diagrams{kCenter, shifted_center(0.3),
                                                   shifted_center(0.9)};
    const KdeModel model = fit(diagrams, 0.5, 0.5);
    RngStream rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        PersistenceDiagram z;
        const int n = static_cast<int>(rng.uniform_index(3));
        for (int i = 0; i < n; ++i) {
            const double b = rng.uniform(0.0, 4.0);
            z.features.push_back(Feature{b, b + rng.uniform(0.01, 3.0), 1});
        }
        double mean = 0.0;
        for (const auto& ks : model.components) mean += eval_multi_degree(ks, z);
        mean /= static_cast<double>(model.n());
        CHECK(eval(model, z) == doctest::Approx(mean).epsilon(1e-15));
    }
}

TEST_CASE("KDE density vanishes outside the multiwedge") {
    const KdeModel model = fit({kCenter}, 0.5, 0.5);
    CHECK(eval(model, PersistenceDiagram{{{3.0, 1.0, 1}}}) == 0.0);
    CHECK(eval(model, PersistenceDiagram{{{-0.5, 1.0, 1}}}) == 0.0);
}

TEST_CASE("single-kernel slice matches direct kernel evaluation and its shape") {
    const KdeModel model = fit({kCenter}, 0.5, 0.5);
    GridSpec grid{0.0, 4.5, 0.0, 4.5, 90};
    const SliceGrid slice = eval_slice(model, {}, grid, 1);

    const DegreeKernels ks = build_degree_kernels(kCenter, {1}, 0.5, 0.5);
    for (auto [i, j] : {std::pair{20, 60}, {40, 80}, {10, 30}}) {
        const double b = grid.cell_b(i), d = grid.cell_d(j);
        if (!(d > b)) continue;
        CHECK(slice.at(i, j) ==
              doctest::Approx(eval_multi_degree(ks, PersistenceDiagram{{{b, d, 1}}}))
                  .epsilon(1e-13));
    }

    // grid cells on or below the diagonal hold zero
    CHECK(slice.at(40, 40) == 0.0);
    CHECK(slice.at(50, 10) == 0.0);

    // the upper Gaussian bumps dominate the near-diagonal mass
    auto cell = [&](double b, double d) {
        const int i = static_cast<int>((b - grid.bmin) / (grid.bmax - grid.bmin) * grid.res);
        const int j = static_cast<int>((d - grid.dmin) / (grid.dmax - grid.dmin) * grid.res);
        return slice.at(i, j);
    };
    CHECK(cell(1.0, 3.0) > 50.0 * cell(1.15, 1.35));
    const auto mode = slice_mode(slice);
    CHECK(std::abs(mode[0] - 1.0) < 0.1);
    CHECK(std::abs(mode[1] - 3.0) < 0.1);
}

TEST_CASE("slice mode ties resolve toward smaller (b, d)") {
    SliceGrid g;
    g.spec = GridSpec{0.0, 1.0, 0.0, 1.0, 4};
    g.values.assign(16, 0.0);
    g.values[1 * 4 + 2] = 3.0;  // (i=1, j=2)
    g.values[3 * 4 + 3] = 3.0;  // same height, larger (b, d)
    const auto mode = slice_mode(g);
    CHECK(mode[0] == doctest::Approx(g.spec.cell_b(1)));
    CHECK(mode[1] == doctest::Approx(g.spec.cell_d(2)));
}

TEST_CASE("mixture sampling picks components uniformly") {
    // two kernels with far-separated centers; classify samples by location
    const std::vector<PersistenceDiagram> diagrams{
        PersistenceDiagram{{{1.0, 3.0, 1}}}, PersistenceDiagram{{{11.0, 13.0, 1}}}};
    const KdeModel model = fit(diagrams, 0.5, 0.5);
    RngStream rng(47);
    const std::size_t n = 20000;
    std::size_t high = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto z = sample(model, rng);
        if (!z.empty() && z.features[0].birth > 6.0) ++high;
    }
    const double p = static_cast<double>(high) / n;
    CHECK(std::abs(p - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("sampled cardinalities follow the mixture pmf") {
    const std::vector<PersistenceDiagram> diagrams{kCenter, PersistenceDiagram{{{1.0, 3.0, 1}}}};
    const KdeModel model = fit(diagrams, 0.5, 0.5);

    // mixture cardinality pmf = mean of the per-kernel pmfs
    std::vector<double> pmf(8, 0.0);
    for (const auto& ks : model.components) {
        const auto p = cardinality_pmf(ks.by_degree.at(1));
        for (std::size_t i = 0; i < p.size(); ++i) pmf[i] += 0.5 * p[i];
    }

    RngStream rng(48);
    const std::size_t n = 20000;
    std::vector<double> freq(pmf.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto z = sample(model, rng);
        REQUIRE(z.size() < pmf.size());
        freq[z.size()] += 1.0 / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        const double se = std::sqrt(std::max(pmf[i] * (1.0 - pmf[i]), 1e-12) / n);
        CHECK(std::abs(freq[i] - pmf[i]) < 4.0 * se + 1e-9);
    }
}

TEST_CASE("set integral of the constant 1 is exactly 1") {
    const KdeModel model = fit({kCenter}, 0.5, 0.5);
    const McEstimate est =
        set_integral_mc(model, [](const PersistenceDiagram&) { return 1.0; }, 1000, 3);
    CHECK(est.estimate == 1.0);
    CHECK(est.std_error == 0.0);
    CHECK(est.n_samples == 1000);
}

TEST_CASE("set integral of the cardinality matches the pmf mean") {
    const std::vector<PersistenceDiagram> diagrams{kCenter, shifted_center(0.4)};
    const KdeModel model = fit(diagrams, 0.5, 0.5);
    double expected = 0.0;
    for (const auto& ks : model.components) {
        const auto pmf = cardinality_pmf(ks.by_degree.at(1));
        for (std::size_t i = 0; i < pmf.size(); ++i)
            expected += 0.5 * static_cast<double>(i) * pmf[i];
    }
    const McEstimate est = set_integral_mc(
        model, [](const PersistenceDiagram& z) { return static_cast<double>(z.size()); }, 40000,
        17);
    CHECK(std::abs(est.estimate - expected) < 3.0 * est.std_error);
}

TEST_CASE("set integral of a containment indicator matches the analytic product") {
    // center away from b = 0 so every component normalization is exact
    const PersistenceDiagram center{{{2.0, 4.0, 1}, {3.0, 3.3, 1}}};
    const KdeModel model = fit({center}, 0.5, 0.5);
    const Kernel& k = model.components[0].by_degree.at(1);

    const double ax = 1.0, bx = 4.6, ay = 1.0, by = 4.6;
    // P[Z subset box] = prod_j (1 - q_j + q_j m_j(box)) * sum_n nu(n) m_l(box)^n
    double expected = 1.0;
    for (const auto& s : k.upper) {
        const double m = oracles::wedge_box_integral(
            [&](double b, double d) { return upper_pdf(s, 1, Feature{b, d, 1}); }, ax, bx, ay, by,
            1e-8);
        expected *= 1.0 - s.q + s.q * m;
    }
    const double ml = oracles::lower_box_mass(k.lower, ax, bx, ay, by, 1e-8);
    double lower_term = 0.0;
    for (std::size_t nl = 0; nl < k.lower.nu.size(); ++nl)
        lower_term += k.lower.nu[nl] * std::pow(ml, static_cast<double>(nl));
    expected *= lower_term;

    auto inside = [&](const PersistenceDiagram& z) {
        for (const auto& f : z.features)
            if (f.birth < ax || f.birth > bx || f.death < ay || f.death > by) return 0.0;
        return 1.0;
    };
    const McEstimate est = set_integral_mc(model, inside, 40000, 29);
    CHECK(std::abs(est.estimate - expected) < 3.0 * est.std_error);
}

TEST_CASE("MAD: vanishing bandwidth pins the estimate near zero") {
    const double sigma = 1e-3;
    const PersistenceDiagram origin{{{0.77, 0.98, 1}}};
    const KdeModel model = fit({origin}, sigma, sigma);
    const McEstimate est = mad_estimate(model, origin, 2000, 99);
    CHECK(est.estimate <= 5.0 * sigma);
}

TEST_CASE("MAD from the empty diagram is the mean half max persistence") {
    const KdeModel model = fit({kCenter}, 0.5, 0.5);
    const McEstimate mad = mad_estimate(model, PersistenceDiagram{}, 4000, 55);
    const McEstimate half_pers = set_integral_mc(
        model, [](const PersistenceDiagram& z) { return 0.5 * max_persistence(z); }, 4000, 55);
    CHECK(mad.estimate == half_pers.estimate);  // identical sample paths
    CHECK(mad.std_error == half_pers.std_error);
}

TEST_CASE("MAD agrees with the exhaustive bottleneck oracle on the same samples") {
    const KdeModel model = fit({kCenter}, 0.5, 0.5);
    const PersistenceDiagram origin{{{1.0, 3.0, 1}, {2.0, 4.0, 1}}};
    const McEstimate fast = mad_estimate(model, origin, 3000, 66);
    const McEstimate slow = set_integral_mc(
        model,
        [&](const PersistenceDiagram& z) {
            return oracles::brute_force_bottleneck(origin.features, z.features);
        },
        3000, 66);
    CHECK(fast.estimate == doctest::Approx(slow.estimate).epsilon(1e-14));
}

TEST_CASE("set_integral_mc standard error shrinks like 1/sqrt(n)") {
    const KdeModel model = fit({kCenter}, 0.5, 0.5);
    auto g = [](const PersistenceDiagram& z) { return static_cast<double>(z.size()); };
    const McEstimate a = set_integral_mc(model, g, 4000, 7);
    const McEstimate b = set_integral_mc(model, g, 16000, 7);
    CHECK(b.std_error < a.std_error);
    CHECK(b.std_error == doctest::Approx(0.5 * a.std_error).epsilon(0.15));
}

TEST_CASE("constant generator gives identical KDEs across sweep steps") {
    SweepConfig cfg;
    cfg.generator = GeneratorSpec{DatasetKind::circle, 8, 0.0};
    cfg.generator.fixed_seed = 1234;
    cfg.schedule = {{3, 0.05}, {5, 0.05}};
    cfg.slices = {{}};
    cfg.grid = GridSpec{0.0, 1.25, 0.0, 1.25, 60};
    cfg.degree = 1;
    cfg.seed = 9;
    cfg.mad_samples = 0;
    const SweepReport report = convergence_sweep(cfg);
    REQUIRE(report.steps.size() == 2);
    REQUIRE(report.steps[1].slices[0].l1_to_previous.has_value());
    // averaging 3 vs 5 identical kernels differs only in rounding
    CHECK(*report.steps[1].slices[0].l1_to_previous < 1e-12);
    CHECK(report.steps[0].slices[0].mode == report.steps[1].slices[0].mode);
}

TEST_CASE("circle KDE slice with the main feature fixed has two near-diagonal modes") {
    // fit on 300 ten-point circle diagrams and slice with (0.77, 0.98)
    // fixed; what remains concentrates near the diagonal, by the origin and
    // near (1, 1)
    std::vector<PersistenceDiagram> diagrams(300);
    for (int i = 0; i < 300; ++i)
        diagrams[i] = cech_diagram(sample_circle(10, 0.02, derive_seed(202, 1, i)), 1);
    const KdeModel model = fit(diagrams, 0.025, 0.025);
    const GridSpec grid{0.0, 1.25, 0.0, 1.25, 125};
    const SliceGrid slice = eval_slice(model, {Feature{0.77, 0.98, 1}}, grid, 1);

    // strongest grid point in the low corner and in the (1,1) region
    double low_peak = 0.0, high_peak = 0.0, elsewhere = 0.0;
    for (int i = 0; i < grid.res; ++i) {
        for (int j = 0; j < grid.res; ++j) {
            const double b = grid.cell_b(i), d = grid.cell_d(j);
            const double v = slice.at(i, j);
            const bool near_diag = d - b < 0.25;
            if (near_diag && b < 0.4 && d < 0.4)
                low_peak = std::max(low_peak, v);
            else if (near_diag && b > 0.75 && d > 0.75)
                high_peak = std::max(high_peak, v);
            else
                elsewhere = std::max(elsewhere, v);
        }
    }
    CHECK(low_peak > elsewhere);
    CHECK(high_peak > elsewhere);
}

TEST_CASE("noisy-circle sweep stabilizes and shows a second near-diagonal mode") {
    // 25-point circle with sizable noise over a shrinking-bandwidth schedule
    SweepConfig cfg;
    cfg.generator = GeneratorSpec{DatasetKind::circle, 25, 1.0 / 6.0};
    cfg.schedule = {{20, 0.05}, {100, 0.03}, {300, 0.02}};
    cfg.slices = {{}};
    cfg.grid = GridSpec{0.0, 1.25, 0.0, 1.25, 100};
    cfg.degree = 1;
    cfg.seed = 4242;
    cfg.mad_samples = 0;
    const SweepReport report = convergence_sweep(cfg);
    REQUIRE(report.steps.size() == 3);

    const SliceGrid& grid = report.steps[2].slices[0].grid;
    const auto mode = report.steps[2].slices[0].mode;
    // the dominant mode sits at moderate birth and death below 1
    CHECK(mode[0] > 0.2);
    CHECK(mode[0] < 0.65);
    CHECK(mode[1] > 0.6);
    CHECK(mode[1] < 1.0);

    // count strict 8-neighbor local maxima above 5% of the peak
    int n_modes = 0;
    double peak = 0.0;
    for (double v : grid.values) peak = std::max(peak, v);
    const int res = grid.spec.res;
    for (int i = 1; i + 1 < res; ++i) {
        for (int j = 1; j + 1 < res; ++j) {
            const double v = grid.at(i, j);
            if (v < 0.05 * peak) continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    if (grid.at(i + di, j + dj) >= v) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max) ++n_modes;
        }
    }
    CHECK(n_modes >= 2);
}
