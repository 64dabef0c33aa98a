#include <cstdint>
#include <iostream>

#include <CLI11.hpp>

#include "pdkde/cli.hpp"

namespace {

void add_threads(CLI::App* cmd, int& threads) {
    cmd->add_option("--threads", threads,
                    "worker cap (default: PDKDE_THREADS env or all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cech persistence diagrams and kernel densities for random diagrams"};
    app.require_subcommand(1);

    using namespace pdkde::cli;

    GenConfig gen;
    auto* cmd_gen_app = app.add_subcommand("gen", "generate a synthetic point cloud CSV");
    cmd_gen_app->add_option("--kind", gen.kind, "circle|twolobe")->capture_default_str();
    cmd_gen_app->add_option("--n", gen.n_points, "number of points")->required();
    cmd_gen_app->add_option("--noise", gen.noise_std, "Gaussian noise stddev")
        ->capture_default_str();
    cmd_gen_app->add_option("--seed", gen.seed, "RNG seed")->required();
    cmd_gen_app->add_option("--out", gen.out_path, "output cloud CSV")->required();

    DiagramConfig dgm;
    auto* cmd_dgm_app =
        app.add_subcommand("diagram", "Cech persistence diagram of a point cloud CSV");
    cmd_dgm_app->add_option("--in", dgm.in_path, "input cloud CSV")->required();
    cmd_dgm_app->add_option("--max-degree", dgm.max_degree, "top homology degree")
        ->capture_default_str();
    cmd_dgm_app->add_option("--max-radius", dgm.max_radius,
                            "filtration cutoff (default: 0.62 * diameter)");
    add_threads(cmd_dgm_app, dgm.threads);
    cmd_dgm_app->add_option("--out", dgm.out_path, "output diagram CSV")->required();

    SliceConfig slice;
    auto* cmd_slice_app =
        app.add_subcommand("slice", "KDE density slice over a (b,d) grid from a diagram dir");
    cmd_slice_app->add_option("--dir", slice.diagrams_dir, "directory of diagram CSVs")
        ->required();
    cmd_slice_app->add_option("--sigma-split", slice.sigma_split, "split threshold")->required();
    cmd_slice_app->add_option("--sigma-band", slice.sigma_band, "Gaussian bandwidth")->required();
    cmd_slice_app->add_option("--degree", slice.degree, "homology degree")->capture_default_str();
    cmd_slice_app->add_option("--fixed", slice.fixed, "fixed features b,d[;b,d...] or none")
        ->capture_default_str();
    cmd_slice_app->add_option("--grid", slice.grid, "bmin:bmax:dmin:dmax:res")
        ->capture_default_str();
    add_threads(cmd_slice_app, slice.threads);
    cmd_slice_app->add_option("--out", slice.out_path, "output grid CSV")->required();

    PhdConfig phd;
    auto* cmd_phd_app =
        app.add_subcommand("phd", "probability hypothesis density grid of one kernel");
    cmd_phd_app->add_option("--diagram", phd.diagram_path, "center diagram CSV");
    cmd_phd_app->add_option("--kernel", phd.kernel_spec_path, "kernel spec JSON");
    cmd_phd_app->add_option("--sigma-split", phd.sigma_split, "split threshold");
    cmd_phd_app->add_option("--sigma-band", phd.sigma_band, "Gaussian bandwidth");
    cmd_phd_app->add_option("--degree", phd.degree, "homology degree")->capture_default_str();
    cmd_phd_app->add_option("--grid", phd.grid, "bmin:bmax:dmin:dmax:res")->capture_default_str();
    add_threads(cmd_phd_app, phd.threads);
    cmd_phd_app->add_option("--out", phd.out_path, "output grid CSV")->required();

    SampleConfig smp;
    auto* cmd_sample_app = app.add_subcommand("sample", "draw diagrams from a kernel density");
    cmd_sample_app->add_option("--diagram", smp.diagram_path, "center diagram CSV");
    cmd_sample_app->add_option("--kernel", smp.kernel_spec_path, "kernel spec JSON");
    cmd_sample_app->add_option("--sigma-split", smp.sigma_split, "split threshold");
    cmd_sample_app->add_option("--sigma-band", smp.sigma_band, "Gaussian bandwidth");
    cmd_sample_app->add_option("--degree", smp.degree, "homology degree")->capture_default_str();
    cmd_sample_app->add_option("--n", smp.n_samples, "number of samples")->required();
    cmd_sample_app->add_option("--seed", smp.seed, "RNG seed")->required();
    cmd_sample_app->add_option("--out", smp.out_path, "output samples JSON")->required();

    MadConfig mad;
    auto* cmd_mad_app =
        app.add_subcommand("mad", "mean absolute bottleneck deviation of a fitted KDE");
    cmd_mad_app->add_option("--dir", mad.diagrams_dir, "directory of diagram CSVs")->required();
    cmd_mad_app->add_option("--origin", mad.origin_path,
                            "origin diagram CSV (default: empty diagram)");
    cmd_mad_app->add_option("--sigma-split", mad.sigma_split, "split threshold")->required();
    cmd_mad_app->add_option("--sigma-band", mad.sigma_band, "Gaussian bandwidth")->required();
    cmd_mad_app->add_option("--degree", mad.degree, "homology degree")->capture_default_str();
    cmd_mad_app->add_option("--samples", mad.n_samples, "Monte Carlo sample count")
        ->capture_default_str();
    cmd_mad_app->add_option("--seed", mad.seed, "RNG seed")->required();
    add_threads(cmd_mad_app, mad.threads);
    cmd_mad_app->add_option("--out", mad.out_path, "output JSON (default: stdout)");

    ConvergeConfig cvg;
    auto* cmd_cvg_app =
        app.add_subcommand("converge", "KDE convergence experiment over an (n, sigma) schedule");
    cmd_cvg_app->add_option("--kind", cvg.kind, "circle|twolobe")->capture_default_str();
    cmd_cvg_app->add_option("--n-points", cvg.n_points, "points per dataset")
        ->capture_default_str();
    cmd_cvg_app->add_option("--noise", cvg.noise_std, "Gaussian noise stddev")
        ->capture_default_str();
    cmd_cvg_app->add_option("--schedule", cvg.schedule, "n:sigma[,n:sigma...]")
        ->capture_default_str();
    cmd_cvg_app
        ->add_option("--slice", cvg.slices,
                     "slice spec, repeatable: none or fixed features b,d[;b,d...]")
        ->take_all();
    cmd_cvg_app->add_option("--grid", cvg.grid, "bmin:bmax:dmin:dmax:res")->capture_default_str();
    cmd_cvg_app->add_option("--degree", cvg.degree, "homology degree")->capture_default_str();
    cmd_cvg_app->add_option("--seed", cvg.seed, "RNG seed")->required();
    cmd_cvg_app->add_option("--mad-origin", cvg.mad_origin_path,
                            "origin diagram CSV for the MAD (default: empty diagram)");
    cmd_cvg_app->add_option("--mad-samples", cvg.mad_samples, "MAD Monte Carlo samples")
        ->capture_default_str();
    add_threads(cmd_cvg_app, cvg.threads);
    cmd_cvg_app->add_option("--out", cvg.out_path, "output report JSON")->required();
    cmd_cvg_app->add_option("--grid-dir", cvg.grid_dir, "directory for per-step slice CSVs");

    auto* cmd_ex1_app =
        app.add_subcommand("example1", "print the worked closed-form reference quantities");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_gen_app->parsed()) cmd_gen(gen);
        if (cmd_dgm_app->parsed()) cmd_diagram(dgm);
        if (cmd_slice_app->parsed()) cmd_slice(slice);
        if (cmd_phd_app->parsed()) cmd_phd(phd);
        if (cmd_sample_app->parsed()) cmd_sample(smp);
        if (cmd_mad_app->parsed()) cmd_mad(mad, std::cout);
        if (cmd_cvg_app->parsed()) cmd_converge(cvg);
        if (cmd_ex1_app->parsed()) cmd_example1(std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
