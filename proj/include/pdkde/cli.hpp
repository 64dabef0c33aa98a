#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pdkde/kde.hpp"

namespace pdkde::cli {

// Parses "bmin:bmax:dmin:dmax:res".
GridSpec parse_grid(const std::string& text);

// Parses "b,d[;b,d...]" into degree-tagged features; "none" or "" is empty.
std::vector<Feature> parse_fixed(const std::string& text, int degree);

// Parses "n:sigma[,n:sigma...]".
std::vector<SweepStep> parse_schedule(const std::string& text);

struct GenConfig {
    std::string kind = "circle";  // circle | twolobe
    std::size_t n_points = 10;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
    std::string out_path;
};
void cmd_gen(const GenConfig& cfg);

struct DiagramConfig {
    std::string in_path;
    int max_degree = 1;
    double max_radius = -1.0;  // negative = default cutoff
    int threads = 0;
    std::string out_path;
};
void cmd_diagram(const DiagramConfig& cfg);

struct SliceConfig {
    std::string diagrams_dir;
    double sigma_split = 0.0;
    double sigma_band = 0.0;
    int degree = 1;
    std::string fixed;  // "b,d[;b,d...]" or "none"
    std::string grid = "0:1.25:0:1.25:200";
    int threads = 0;
    std::string out_path;
};
void cmd_slice(const SliceConfig& cfg);

struct PhdConfig {
    std::string diagram_path;      // center diagram CSV, or
    std::string kernel_spec_path;  // kernel spec JSON
    double sigma_split = 0.0;
    double sigma_band = 0.0;
    int degree = 1;
    std::string grid = "0:1.25:0:1.25:200";
    int threads = 0;
    std::string out_path;
};
void cmd_phd(const PhdConfig& cfg);

struct SampleConfig {
    std::string diagram_path;
    std::string kernel_spec_path;
    double sigma_split = 0.0;
    double sigma_band = 0.0;
    int degree = 1;
    std::size_t n_samples = 1;
    std::uint64_t seed = 0;
    std::string out_path;
};
void cmd_sample(const SampleConfig& cfg);

struct MadConfig {
    std::string diagrams_dir;
    std::string origin_path;  // empty = empty origin diagram
    double sigma_split = 0.0;
    double sigma_band = 0.0;
    int degree = 1;
    std::size_t n_samples = 10000;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out_path;  // empty = stdout
};
void cmd_mad(const MadConfig& cfg, std::ostream& console);

struct ConvergeConfig {
    std::string kind = "circle";
    std::size_t n_points = 10;
    double noise_std = 0.02;
    std::string schedule = "100:0.03,300:0.025,1000:0.020";
    std::vector<std::string> slices;  // each "none" or "b,d[;b,d...]"
    std::string grid = "0:1.25:0:1.25:200";
    int degree = 1;
    std::uint64_t seed = 0;
    std::string mad_origin_path;  // empty = empty origin diagram
    std::size_t mad_samples = 4000;
    int threads = 0;
    std::string out_path;
    std::string grid_dir;  // optional: write per-step slice CSVs here
};
void cmd_converge(const ConvergeConfig& cfg);

// Prints the closed-form quantities of the two worked singleton/kernel
// examples next to their expected values.
void cmd_example1(std::ostream& console);

}  // namespace pdkde::cli
