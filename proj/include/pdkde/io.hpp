#pragma once

#include <string>
#include <vector>

#include "pdkde/datagen.hpp"
#include "pdkde/diagram.hpp"
#include "pdkde/kde.hpp"

namespace pdkde {

// Doubles are written with %.17g so values round-trip exactly.
std::string format_double(double v);

// Point-cloud CSV: one point per line, comma-separated coordinates, no
// header. Read errors carry the path and 1-based line number.
void write_point_cloud_csv(const std::string& path, const PointCloud& cloud);
PointCloud read_point_cloud_csv(const std::string& path);

// Diagram CSV: one `birth,death,degree` line per feature, no header. An
// empty file is a valid empty diagram.
void write_diagram_csv(const std::string& path, const PersistenceDiagram& diagram);
PersistenceDiagram read_diagram_csv(const std::string& path);

// Diagram JSON interchange form: [{"b":..,"d":..,"k":..}, ...]
std::string diagram_to_json(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_json(const std::string& text);

// Sampled diagrams as a JSON array of diagram arrays.
void write_samples_json(const std::string& path, const std::vector<PersistenceDiagram>& samples);

// Kernel spec JSON: {"center": [...diagram...], "sigma_split": s1,
// "sigma_band": s2, "nu": "triangular"}
struct KernelSpec {
    PersistenceDiagram center;
    double sigma_split = 0.0;
    double sigma_band = 0.0;
    std::string nu_name = "triangular";
};
KernelSpec read_kernel_spec_json(const std::string& path);
void write_kernel_spec_json(const std::string& path, const KernelSpec& spec);

// Density grid CSV: `b,d,density` lines preceded by comment lines
// `# fixed: [...]` and `# n=..., sigma=...`.
void write_slice_csv(const std::string& path, const SliceGrid& grid,
                     const std::vector<Feature>& fixed, std::size_t n, double sigma);

void write_sweep_report_json(const std::string& path, const SweepReport& report);
std::string sweep_report_to_json(const SweepReport& report);

// Sorted list of *.csv files directly inside `dir`.
std::vector<std::string> list_csv_files(const std::string& dir);

}  // namespace pdkde
