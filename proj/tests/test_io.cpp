#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "pdkde/datagen.hpp"
#include "pdkde/io.hpp"

using namespace pdkde;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pdkde_io_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("point cloud CSV round trip is exact") {
    TempDir tmp;
    const PointCloud cloud = sample_circle(17, 0.3, 91);
    const std::string path = tmp.file("cloud.csv");
    write_point_cloud_csv(path, cloud);
    const PointCloud back = read_point_cloud_csv(path);
    REQUIRE(back.size() == cloud.size());
    CHECK(back.dim == 2);
    for (std::size_t i = 0; i < cloud.size(); ++i) CHECK(back.points[i] == cloud.points[i]);
}

TEST_CASE("point cloud CSV errors carry the line number") {
    TempDir tmp;
    const std::string path = tmp.file("bad.csv");
    {
        std::ofstream out(path);
        out << "1.0,2.0\n1.0,oops\n";
    }
    try {
        read_point_cloud_csv(path);
        FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }

    const std::string empty = tmp.file("empty.csv");
    std::ofstream{empty};
    CHECK_THROWS_AS(read_point_cloud_csv(empty), std::runtime_error);
    CHECK_THROWS_AS(read_point_cloud_csv(tmp.file("missing.csv")), std::runtime_error);
}

TEST_CASE("diagram CSV round trip; empty file is an empty diagram") {
    TempDir tmp;
    const PersistenceDiagram d{{{0.0, 1.5, 0}, {0.5, 0.70710678118654757, 1}}};
    const std::string path = tmp.file("dgm.csv");
    write_diagram_csv(path, d);
    const PersistenceDiagram back = read_diagram_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back.features[0] == d.features[0]);
    CHECK(back.features[1] == d.features[1]);

    const std::string empty = tmp.file("empty.csv");
    std::ofstream{empty};
    CHECK(read_diagram_csv(empty).empty());

    const std::string bad = tmp.file("bad.csv");
    {
        std::ofstream out(bad);
        out << "2.0,1.0,1\n";  // death < birth
    }
    CHECK_THROWS_AS(read_diagram_csv(bad), std::runtime_error);
}

TEST_CASE("diagram JSON round trip") {
    const PersistenceDiagram d{{{0.25, 1.5, 1}, {0.0, 2.0, 0}}};
    const PersistenceDiagram back = diagram_from_json(diagram_to_json(d));
    REQUIRE(back.size() == 2);
    CHECK(back.features[0] == d.features[0]);
    CHECK(back.features[1] == d.features[1]);
}

TEST_CASE("kernel spec JSON round trip and validation") {
    TempDir tmp;
    KernelSpec spec;
    spec.center = PersistenceDiagram{{{1.0, 3.0, 1}, {3.0, 3.2, 1}}};
    spec.sigma_split = 0.5;
    spec.sigma_band = 0.4;
    const std::string path = tmp.file("kernel.json");
    write_kernel_spec_json(path, spec);
    const KernelSpec back = read_kernel_spec_json(path);
    CHECK(back.sigma_split == 0.5);
    CHECK(back.sigma_band == 0.4);
    REQUIRE(back.center.size() == 2);
    CHECK(back.center.features[0] == spec.center.features[0]);

    const std::string bad = tmp.file("bad.json");
    {
        std::ofstream out(bad);
        out << R"({"center": [], "sigma_split": 0.5, "sigma_band": 0.5, "nu": "bespoke"})";
    }
    CHECK_THROWS_AS(read_kernel_spec_json(bad), std::runtime_error);
}

TEST_CASE("slice CSV carries the fixed-feature and parameter comments") {
    TempDir tmp;
    SliceGrid grid;
    grid.spec = GridSpec{0.0, 1.0, 0.0, 1.0, 3};
    grid.values.assign(9, 0.5);
    const std::string path = tmp.file("slice.csv");
    write_slice_csv(path, grid, {Feature{0.77, 0.98, 1}}, 42, 0.02);

    std::ifstream in(path);
    std::string line1, line2, line3, line4;
    std::getline(in, line1);
    std::getline(in, line2);
    std::getline(in, line3);
    std::getline(in, line4);
    CHECK(line1.find("# fixed: [0.77") == 0);
    CHECK(line2.find("# n=42, sigma=0.02") == 0);
    CHECK(line3.find("# density: multiset convention") == 0);
    CHECK(line4.find('#') == std::string::npos);
    std::size_t rows = 1;
    std::string rest;
    while (std::getline(in, rest)) ++rows;
    CHECK(rows == 9);
}

TEST_CASE("list_csv_files is sorted and rejects missing directories") {
    TempDir tmp;
    std::ofstream{tmp.file("b.csv")};
    std::ofstream{tmp.file("a.csv")};
    std::ofstream{tmp.file("notes.txt")};
    const auto files = list_csv_files(tmp.path.string());
    REQUIRE(files.size() == 2);
    CHECK(files[0].find("a.csv") != std::string::npos);
    CHECK(files[1].find("b.csv") != std::string::npos);
    CHECK_THROWS_AS(list_csv_files(tmp.file("nope")), std::runtime_error);
}
