#include "pdkde/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pdkde {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return in;
}

double parse_field(const std::string& field, const std::string& path, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size() || !std::isfinite(v))
            parse_fail(path, line, "bad number '" + field + "'");
        return v;
    } catch (const std::invalid_argument&) {
        parse_fail(path, line, "bad number '" + field + "'");
    } catch (const std::out_of_range&) {
        parse_fail(path, line, "number out of range '" + field + "'");
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_point_cloud_csv(const std::string& path, const PointCloud& cloud) {
    std::ofstream out = open_out(path);
    for (const auto& p : cloud.points) {
        for (std::size_t c = 0; c < p.size(); ++c) {
            if (c) out << ',';
            out << format_double(p[c]);
        }
        out << '\n';
    }
}

PointCloud read_point_cloud_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    PointCloud cloud;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        std::vector<double> point;
        for (const auto& f : fields) point.push_back(parse_field(f, path, lineno));
        if (point.empty()) parse_fail(path, lineno, "empty point");
        if (!cloud.points.empty() && point.size() != cloud.points.front().size())
            parse_fail(path, lineno, "inconsistent point dimension");
        cloud.points.push_back(std::move(point));
    }
    if (cloud.points.empty()) parse_fail(path, std::max<std::size_t>(lineno, 1), "no points");
    cloud.dim = static_cast<int>(cloud.points.front().size());
    return cloud;
}

void write_diagram_csv(const std::string& path, const PersistenceDiagram& diagram) {
    std::ofstream out = open_out(path);
    for (const Feature& f : diagram.features)
        out << format_double(f.birth) << ',' << format_double(f.death) << ',' << f.degree << '\n';
}

PersistenceDiagram read_diagram_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    PersistenceDiagram diagram;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) parse_fail(path, lineno, "expected birth,death,degree");
        Feature f;
        f.birth = parse_field(fields[0], path, lineno);
        f.death = parse_field(fields[1], path, lineno);
        f.degree = static_cast<int>(parse_field(fields[2], path, lineno));
        if (!(f.death > f.birth) || f.birth < 0.0)
            parse_fail(path, lineno, "feature outside the wedge d > b >= 0");
        diagram.features.push_back(f);
    }
    return diagram;
}

namespace {

json feature_to_json(const Feature& f) {
    return json{{"b", f.birth}, {"d", f.death}, {"k", f.degree}};
}

Feature feature_from_json(const json& j) {
    Feature f;
    f.birth = j.at("b").get<double>();
    f.death = j.at("d").get<double>();
    f.degree = j.at("k").get<int>();
    return f;
}

json diagram_json(const PersistenceDiagram& d) {
    json arr = json::array();
    for (const Feature& f : d.features) arr.push_back(feature_to_json(f));
    return arr;
}

}  // namespace

std::string diagram_to_json(const PersistenceDiagram& diagram) {
    return diagram_json(diagram).dump();
}

PersistenceDiagram diagram_from_json(const std::string& text) {
    const json arr = json::parse(text);
    PersistenceDiagram d;
    for (const auto& j : arr) d.features.push_back(feature_from_json(j));
    return d;
}

void write_samples_json(const std::string& path, const std::vector<PersistenceDiagram>& samples) {
    json arr = json::array();
    for (const auto& d : samples) arr.push_back(diagram_json(d));
    std::ofstream out = open_out(path);
    out << arr.dump(2) << '\n';
}

KernelSpec read_kernel_spec_json(const std::string& path) {
    std::ifstream in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    KernelSpec spec;
    for (const auto& f : j.at("center")) spec.center.features.push_back(feature_from_json(f));
    spec.sigma_split = j.at("sigma_split").get<double>();
    spec.sigma_band = j.at("sigma_band").get<double>();
    spec.nu_name = j.value("nu", "triangular");
    if (spec.nu_name != "triangular")
        throw std::runtime_error(path + ": unknown nu '" + spec.nu_name + "'");
    return spec;
}

void write_kernel_spec_json(const std::string& path, const KernelSpec& spec) {
    json j;
    j["center"] = diagram_json(spec.center);
    j["sigma_split"] = spec.sigma_split;
    j["sigma_band"] = spec.sigma_band;
    j["nu"] = spec.nu_name;
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_slice_csv(const std::string& path, const SliceGrid& grid,
                     const std::vector<Feature>& fixed, std::size_t n, double sigma) {
    std::ofstream out = open_out(path);
    out << "# fixed: [";
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (i) out << "; ";
        out << format_double(fixed[i].birth) << ',' << format_double(fixed[i].death);
    }
    out << "]\n";
    out << "# n=" << n << ", sigma=" << format_double(sigma) << '\n';
    out << "# density: multiset convention (N! times the symmetric vector density)\n";
    for (int i = 0; i < grid.spec.res; ++i)
        for (int j = 0; j < grid.spec.res; ++j)
            out << format_double(grid.spec.cell_b(i)) << ',' << format_double(grid.spec.cell_d(j))
                << ',' << format_double(grid.at(i, j)) << '\n';
}

std::string sweep_report_to_json(const SweepReport& report) {
    json steps = json::array();
    for (const auto& step : report.steps) {
        json slices = json::array();
        for (const auto& slice : step.slices) {
            json s;
            s["fixed"] = diagram_json(PersistenceDiagram{slice.fixed});
            s["mode"] = {slice.mode[0], slice.mode[1]};
            if (slice.l1_to_previous)
                s["l1_to_previous"] = *slice.l1_to_previous;
            else
                s["l1_to_previous"] = nullptr;
            slices.push_back(std::move(s));
        }
        json j;
        j["n"] = step.n;
        j["sigma"] = step.sigma;
        j["slices"] = std::move(slices);
        j["mad"] = {{"estimate", step.mad.estimate},
                    {"std_error", step.mad.std_error},
                    {"n_samples", step.mad.n_samples}};
        steps.push_back(std::move(j));
    }
    json root;
    root["steps"] = std::move(steps);
    root["convention"] = "multiset (set density = N! * symmetric vector density)";
    return root.dump(2);
}

void write_sweep_report_json(const std::string& path, const SweepReport& report) {
    std::ofstream out = open_out(path);
    out << sweep_report_to_json(report) << '\n';
}

std::vector<std::string> list_csv_files(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace pdkde
