#include <doctest.h>

#include "wavesift/io.hpp"
#include "wavesift/pipeline.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace wavesift;
namespace fs = std::filesystem;

namespace {

// Fresh directory under the system temp root, removed when the case ends.
struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
    {
        path = fs::temp_directory_path() / ("wavesift_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string& name) const { return path / name; }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Complex> random_chi(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<Complex> chi(n);
    for (auto& c : chi) c = Complex(u(rng), u(rng));
    return chi;
}

RunConfig small_run_config(const fs::path& out)
{
    RunConfig config;
    config.phantom = "twin_squares";
    config.n_i = 2;
    config.seed = 7;
    config.k_max = 2;
    config.out_dir = out;
    return config;
}

} // namespace

TEST_CASE("grid CSV dumps reproduce every value exactly")
{
    TempDir tmp("grid_csv");
    auto grid = create_uniform_grid(SamplingBox::square(-0.6, 0.6), 0.3);
    grid = set_active(grid, {1, 2, 5, 10});
    const auto chi = random_chi(grid.size(), 21);

    const fs::path file = tmp / "grid.csv";
    write_grid_csv(file, grid, chi);

    {
        std::ifstream in(file);
        std::string header;
        std::getline(in, header);
        CHECK(header == "x,y,h,active,chi_re,chi_im");
    }

    const GridDump dump = read_grid_csv(file);
    CHECK(dump.dim == 2);
    CHECK(dump.h == grid.h);
    REQUIRE(dump.size() == grid.size());
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const Point want = grid.center(m);
        CHECK(dump.centers[m][0] == want[0]);
        CHECK(dump.centers[m][1] == want[1]);
        CHECK(dump.centers[m][2] == 0.0);
        CHECK(dump.active[m] == grid.active[m]);
        CHECK(dump.chi[m] == chi[m]);
    }

    // Same contract in three dimensions, including the extra column.
    const auto grid3 = create_uniform_grid(SamplingBox::cube(-0.8, 0.8), 0.8);
    const auto chi3 = random_chi(grid3.size(), 22);
    const fs::path file3 = tmp / "grid3.csv";
    write_grid_csv(file3, grid3, chi3);
    const GridDump dump3 = read_grid_csv(file3);
    CHECK(dump3.dim == 3);
    REQUIRE(dump3.size() == grid3.size());
    for (std::size_t m = 0; m < grid3.size(); ++m) {
        CHECK(dump3.centers[m][2] == grid3.center(m)[2]);
        CHECK(dump3.chi[m] == chi3[m]);
    }

    CHECK_THROWS_AS(write_grid_csv(file, grid, {chi[0]}), DimensionMismatch);
    CHECK_THROWS_AS(read_grid_csv(tmp / "absent.csv"), IoError);

    std::ofstream(tmp / "bad.csv") << "x,h,active\n";
    CHECK_THROWS_AS(read_grid_csv(tmp / "bad.csv"), IoError);
    std::ofstream(tmp / "short.csv") << "x,y,h,active,chi_re,chi_im\n1,2,3\n";
    CHECK_THROWS_AS(read_grid_csv(tmp / "short.csv"), IoError);
    std::ofstream(tmp / "garbled.csv") << "x,y,h,active,chi_re,chi_im\n1,2,0.3,1,nope,0\n";
    CHECK_THROWS_AS(read_grid_csv(tmp / "garbled.csv"), IoError);
}

TEST_CASE("measurement files round-trip through CSV plus sidecar")
{
    TempDir tmp("scatter");
    ScatterData data;
    data.k = 2.0 * std::numbers::pi;
    data.xi = 0.1;
    data.seed = 42;
    data.receivers.dim = 2;
    data.receivers.points = {{5.0, 0.0, 0.0}, {0.0, 5.0, 0.0}, {-5.0, 0.0, 0.0}};
    data.receivers.weights = {1.5, 1.5, 1.5};
    data.incidences.dim = 2;
    data.incidences.directions = {{1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}};
    data.u = {{{0.1, -0.2}, {1.0 / 3.0, 0.0}, {-1e-17, 2.5}},
              {{0.0, 0.0}, {7.25, -0.125}, {0.3, 0.3}}};

    const fs::path csv = tmp / "data.csv";
    write_scatter(csv, data);
    CHECK(fs::exists(tmp / "data.json"));

    const ScatterData back = read_scatter(csv);
    CHECK(back.k == data.k);
    CHECK(back.xi == data.xi);
    CHECK(back.seed == data.seed);
    REQUIRE(back.n_i() == data.n_i());
    REQUIRE(back.n_s() == data.n_s());
    for (std::size_t j = 0; j < data.n_i(); ++j)
        for (std::size_t q = 0; q < data.n_s(); ++q) CHECK(back.u[j][q] == data.u[j][q]);
    REQUIRE(back.receivers.size() == data.receivers.size());
    for (std::size_t q = 0; q < data.receivers.size(); ++q) {
        CHECK(back.receivers.points[q] == data.receivers.points[q]);
        CHECK(back.receivers.weights[q] == data.receivers.weights[q]);
    }
    REQUIRE(back.incidences.size() == data.incidences.size());
    for (std::size_t j = 0; j < data.incidences.size(); ++j)
        CHECK(back.incidences.directions[j] == data.incidences.directions[j]);

    // Losing the sidecar or rows must be detected, not papered over.
    fs::remove(tmp / "data.json");
    CHECK_THROWS_AS(read_scatter(csv), IoError);
    write_scatter(csv, data);
    {
        const std::string all = slurp(csv);
        const auto cut = all.rfind('\n', all.size() - 2);
        std::ofstream out(csv);
        out << all.substr(0, cut + 1);
    }
    CHECK_THROWS_AS(read_scatter(csv), IoError);
}

TEST_CASE("VTK dump reconstructs the raster with pruned cells zeroed")
{
    TempDir tmp("vtk");
    // Refine a partial selection so the dump covers only part of its raster.
    auto level0 = create_uniform_grid(SamplingBox::square(-0.6, 0.6), 0.6);
    level0 = set_active(level0, {0, 3});
    auto grid = refine(level0); // 8 of the 16 level-1 cells remain
    grid = set_active(grid, {0, 1, 2});
    const auto chi = random_chi(grid.size(), 23);

    const fs::path file = tmp / "grid.vtk";
    write_vtk(file, grid, chi);

    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# vtk DataFile Version 3.0");
    std::getline(in, line); // free-form title
    std::getline(in, line);
    CHECK(line == "ASCII");
    std::getline(in, line);
    CHECK(line == "DATASET STRUCTURED_POINTS");

    std::string key;
    std::size_t nx = 0, ny = 0, nz = 0;
    in >> key >> nx >> ny >> nz;
    CHECK(key == "DIMENSIONS");
    CHECK(nx == 4);
    CHECK(ny == 4);
    CHECK(nz == 1);
    double ox = 0, oy = 0, oz = 0, sx = 0, sy = 0, sz = 0;
    in >> key >> ox >> oy >> oz;
    CHECK(key == "ORIGIN");
    CHECK(ox == doctest::Approx(-0.45).epsilon(1e-14));
    CHECK(oy == doctest::Approx(-0.45).epsilon(1e-14));
    CHECK(oz == 0.0);
    in >> key >> sx >> sy >> sz;
    CHECK(key == "SPACING");
    CHECK(sx == grid.h);
    CHECK(sy == grid.h);

    std::size_t total = 0;
    in >> key >> total;
    CHECK(key == "POINT_DATA");
    REQUIRE(total == nx * ny * nz);
    std::string name, type, comps;
    in >> key >> name >> type >> comps;
    CHECK(key == "SCALARS");
    CHECK(name == "chi_abs");
    CHECK(type == "double");
    in >> key >> name; // LOOKUP_TABLE default

    // Index every dumped cell by its raster position; the rest must be zero.
    std::vector<double> want_mod(total, 0.0);
    std::vector<int> want_act(total, 0);
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const Point c = grid.center(m);
        const auto i = static_cast<std::size_t>(std::llround((c[0] - ox) / grid.h));
        const auto j = static_cast<std::size_t>(std::llround((c[1] - oy) / grid.h));
        want_mod[j * nx + i] = std::abs(chi[m]);
        want_act[j * nx + i] = grid.active[m];
    }
    for (std::size_t i = 0; i < total; ++i) {
        double v = -1.0;
        in >> v;
        CHECK(v == want_mod[i]);
    }
    in >> key >> name >> type >> comps;
    CHECK(key == "SCALARS");
    CHECK(name == "active");
    CHECK(type == "int");
    in >> key >> name;
    for (std::size_t i = 0; i < total; ++i) {
        int v = -1;
        in >> v;
        CHECK(v == want_act[i]);
    }
    CHECK(in.good());
}

TEST_CASE("config JSON: defaults, overlays, and diagnostics")
{
    TempDir tmp("config");

    const RunConfig base = preset_config("paper");
    CHECK(base.phantom == "twin_squares");
    CHECK(base.n_i == 6);
    CHECK(base.n_s == 30);
    CHECK(base.big_m == 100.0);
    CHECK(base.eps == 1e-3);
    CHECK(base.xi == 0.1);
    CHECK_THROWS_AS(preset_config("fast"), ConfigError);

    const fs::path file = tmp / "run.json";
    std::ofstream(file) << R"({"phantom": "annulus", "xi": 0.05, "seed": 9,
        "formats": ["csv", "vtk"], "out_dir": "elsewhere",
        "box": {"dim": 2, "lower": [-2.0, -2.0], "upper": [2.0, 2.0]}})";
    const RunConfig loaded = load_config_json(file);
    CHECK(loaded.phantom == "annulus");
    CHECK(loaded.xi == 0.05);
    CHECK(loaded.seed == 9);
    CHECK(loaded.n_i == 6); // untouched fields keep their defaults
    CHECK(loaded.out_dir == fs::path("elsewhere"));
    REQUIRE(loaded.formats.size() == 2);
    CHECK(loaded.formats[1] == "vtk");
    REQUIRE(loaded.box.has_value());
    CHECK(loaded.box->lower[0] == -2.0);
    CHECK(loaded.box->upper[1] == 2.0);

    std::ofstream(tmp / "unknown.json") << R"({"phantom": "annulus", "noise": 0.1})";
    CHECK_THROWS_WITH_AS(load_config_json(tmp / "unknown.json"),
                         doctest::Contains("noise"), ConfigError);
    std::ofstream(tmp / "badtype.json") << R"({"n_i": "six"})";
    CHECK_THROWS_WITH_AS(load_config_json(tmp / "badtype.json"), doctest::Contains("n_i"),
                         ConfigError);
    std::ofstream(tmp / "badbox.json") << R"({"box": {"dim": 2, "lower": [0, 0], "upper": [-1, 1]}})";
    CHECK_THROWS_WITH_AS(load_config_json(tmp / "badbox.json"), doctest::Contains("box"),
                         ConfigError);
    std::ofstream(tmp / "notjson.json") << "phantom: annulus";
    CHECK_THROWS_AS(load_config_json(tmp / "notjson.json"), ConfigError);
    CHECK_THROWS_AS(load_config_json(tmp / "absent.json"), IoError);

    RunConfig bad = base;
    bad.big_m = 1.0;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("big_m"), ConfigError);
    bad = base;
    bad.formats = {"hdf5"};
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("hdf5"), ConfigError);

    // config_to_json emits the file format back.
    RunConfig round = loaded;
    std::ofstream(tmp / "round.json") << config_to_json(round).dump(2);
    const RunConfig again = load_config_json(tmp / "round.json");
    CHECK(again.phantom == round.phantom);
    CHECK(again.xi == round.xi);
    CHECK(again.seed == round.seed);
    CHECK(again.box->lower[0] == round.box->lower[0]);
    CHECK(again.formats == round.formats);
}

TEST_CASE("scenario presets scale with the wavelength")
{
    RunConfig config;
    config.phantom = "annulus";
    resolve_scenario(config);
    REQUIRE(config.box.has_value());
    CHECK(config.box->dim == 2);
    CHECK(config.box->lower[0] == doctest::Approx(-2.8).epsilon(1e-14));
    CHECK(config.h0 == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(config.k_max == 6);

    RunConfig halved;
    halved.phantom = "twin_cubes";
    halved.k = 4.0 * std::numbers::pi; // lambda = 1/2
    resolve_scenario(halved);
    CHECK(halved.box->dim == 3);
    CHECK(halved.box->upper[2] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(halved.h0 == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(halved.k_max == 4);

    // Explicit values win over the preset.
    RunConfig pinned;
    pinned.phantom = "twin_squares";
    pinned.h0 = 0.3;
    pinned.box = SamplingBox::square(-0.9, 0.9);
    resolve_scenario(pinned);
    CHECK(pinned.h0 == 0.3);
    CHECK(pinned.box->upper[0] == 0.9);
    CHECK(pinned.k_max == 6);

    RunConfig unknown;
    unknown.phantom = "blob";
    CHECK_THROWS_AS(resolve_scenario(unknown), ConfigError);
}

TEST_CASE("custom geometry gets a box snapped to the level-0 lattice")
{
    TempDir tmp("custom");
    const fs::path geom = tmp / "disk.json";
    std::ofstream(geom) << R"({"dim": 2, "shapes": [
        {"type": "sphere", "center": [0.1, 0.0], "radius": 0.25, "contrast": [1.0, 0.5]}]})";

    RunConfig config;
    config.phantom = geom.string();
    resolve_scenario(config);
    REQUIRE(config.box.has_value());
    CHECK(config.h0 == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(config.k_max == 6);
    // Sides are exact multiples of h0 and cover the shape with padding.
    for (int a = 0; a < 2; ++a) {
        const double cells = config.box->side(a) / config.h0;
        CHECK(cells == doctest::Approx(std::round(cells)).epsilon(1e-12));
    }
    CHECK(config.box->contains({0.35, 0.0, 0.0}));
    CHECK(config.box->contains({-0.15, -0.25, 0.0}));
}

TEST_CASE("pipeline reruns write byte-identical manifests apart from timings")
{
    TempDir tmp("pipeline");
    const auto art_a = run_pipeline(small_run_config(tmp / "a"));
    REQUIRE(fs::exists(art_a.manifest));
    const std::string first = slurp(art_a.manifest);
    const auto art_b = run_pipeline(small_run_config(tmp / "a"));

    REQUIRE(fs::exists(art_b.manifest));
    auto ja = nlohmann::ordered_json::parse(first);
    auto jb = nlohmann::ordered_json::parse(slurp(art_b.manifest));
    CHECK(ja.contains("timings"));
    ja.erase("timings");
    jb.erase("timings");
    CHECK(ja.dump(2) == jb.dump(2));

    // Every artifact named by the run exists on disk.
    CHECK(fs::exists(art_a.data_csv));
    CHECK(fs::exists(fs::path(art_a.data_csv).replace_extension(".json")));
    REQUIRE(!art_a.grid_files.empty());
    for (const auto& f : art_a.grid_files) CHECK(fs::exists(f));
    // csv and json per iteration by default.
    CHECK(art_a.grid_files.size() == 2 * art_a.result.iterations.size());

    // The manifest's iteration table mirrors the in-memory result.
    const auto& its = ja.at("iterations");
    REQUIRE(its.size() == art_a.result.iterations.size());
    for (std::size_t i = 0; i < its.size(); ++i) {
        CHECK(its[i].at("cutoff").get<double>() == art_a.result.iterations[i].cutoff);
        CHECK(its[i].at("components").get<std::size_t>() ==
              art_a.result.iterations[i].components);
    }
}

TEST_CASE("reconstruction from saved measurements matches the direct run")
{
    TempDir tmp("invert");
    const auto direct = run_pipeline(small_run_config(tmp / "a"));

    RunConfig config = small_run_config(tmp / "b");
    config.seed = 999; // overwritten by the file's metadata
    config.xi = 0.9;
    const auto replay = invert_from_file(direct.data_csv, config);

    REQUIRE(replay.result.iterations.size() == direct.result.iterations.size());
    CHECK(replay.result.cutoffs == direct.result.cutoffs);
    for (std::size_t i = 0; i < replay.result.iterations.size(); ++i) {
        const auto& a = direct.result.iterations[i].grid;
        const auto& b = replay.result.iterations[i].grid;
        CHECK(a.cells == b.cells);
        CHECK(a.active == b.active);
        for (std::size_t m = 0; m < a.size(); ++m)
            CHECK(direct.result.iterations[i].chi[m] == replay.result.iterations[i].chi[m]);
    }

    auto jb = nlohmann::ordered_json::parse(slurp(replay.manifest));
    CHECK(jb.at("config").at("seed").get<std::uint64_t>() == 7);
    CHECK(jb.at("config").at("xi").get<double>() == 0.1);
}

TEST_CASE("export re-emits one iteration in any format")
{
    TempDir tmp("export");
    const auto art = run_pipeline(small_run_config(tmp / "run"));
    const std::size_t last = art.result.iterations.size() - 1;

    const fs::path csv = export_grid(art.result, last, ExportFormat::csv, tmp / "exp");
    CHECK(csv.filename() == ("iteration_" + std::to_string(last) + ".csv"));
    const GridDump dump = read_grid_csv(csv);
    CHECK(dump.size() == art.result.iterations[last].grid.size());

    const fs::path json = export_grid(art.result, 0, ExportFormat::json, tmp / "exp");
    const auto j = nlohmann::ordered_json::parse(slurp(json));
    CHECK(j.at("iteration").get<std::size_t>() == 0);
    CHECK(j.at("cutoff").get<double>() == art.result.iterations[0].cutoff);
    CHECK(j.at("cells").size() == art.result.iterations[0].grid.size());

    const fs::path vtk = export_grid(art.result, last, ExportFormat::vtk, tmp / "exp");
    CHECK(slurp(vtk).rfind("# vtk DataFile", 0) == 0);

    CHECK_THROWS_AS(export_grid(art.result, last + 1, ExportFormat::csv, tmp / "exp"),
                    IterationOutOfRange);
    CHECK(parse_format("vtk") == ExportFormat::vtk);
    CHECK_THROWS_AS(parse_format("hdf5"), UnknownFormat);
}
