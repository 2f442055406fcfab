#include "wavesift/io.hpp"

#include "wavesift/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace wavesift {

namespace {

// Shortest exact decimal form; %.17g round-trips every finite double.
std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return in;
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double parse_num(const std::string& s, const std::filesystem::path& path)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw IoError("malformed number '" + s + "' in " + path.string());
    }
    if (pos != s.size()) throw IoError("malformed number '" + s + "' in " + path.string());
    return v;
}

std::filesystem::path sidecar_path(std::filesystem::path csv_path)
{
    return csv_path.replace_extension(".json");
}

} // namespace

GridDump make_dump(const SamplingGrid& grid, const std::vector<Complex>& chi)
{
    if (chi.size() != grid.size())
        throw DimensionMismatch("make_dump: one chi value per cell required");
    GridDump dump;
    dump.dim = grid.dim();
    dump.h = grid.h;
    dump.chi = chi;
    dump.active.assign(grid.active.begin(), grid.active.end());
    dump.centers.reserve(grid.size());
    for (std::size_t m = 0; m < grid.size(); ++m) dump.centers.push_back(grid.center(m));
    return dump;
}

void write_grid_csv(const std::filesystem::path& path, const SamplingGrid& grid,
                    const std::vector<Complex>& chi)
{
    if (chi.size() != grid.size())
        throw DimensionMismatch("write_grid_csv: one chi value per cell required");
    auto out = open_out(path);
    out << (grid.dim() == 3 ? "x,y,z,h,active,chi_re,chi_im\n" : "x,y,h,active,chi_re,chi_im\n");
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const Point c = grid.center(m);
        out << num(c[0]) << ',' << num(c[1]) << ',';
        if (grid.dim() == 3) out << num(c[2]) << ',';
        out << num(grid.h) << ',' << int(grid.active[m]) << ',' << num(chi[m].real()) << ','
            << num(chi[m].imag()) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

GridDump read_grid_csv(const std::filesystem::path& path)
{
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty grid dump: " + path.string());
    GridDump dump;
    if (line == "x,y,z,h,active,chi_re,chi_im")
        dump.dim = 3;
    else if (line == "x,y,h,active,chi_re,chi_im")
        dump.dim = 2;
    else
        throw IoError("unrecognized grid dump header in " + path.string());

    const std::size_t ncol = dump.dim == 3 ? 7 : 6;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != ncol)
            throw IoError("expected " + std::to_string(ncol) + " columns in " + path.string());
        std::size_t i = 0;
        Point c{0.0, 0.0, 0.0};
        c[0] = parse_num(f[i++], path);
        c[1] = parse_num(f[i++], path);
        if (dump.dim == 3) c[2] = parse_num(f[i++], path);
        dump.h = parse_num(f[i++], path);
        dump.centers.push_back(c);
        dump.active.push_back(parse_num(f[i], path) != 0.0);
        ++i;
        const double re = parse_num(f[i++], path);
        const double im = parse_num(f[i++], path);
        dump.chi.emplace_back(re, im);
    }
    if (dump.centers.empty()) throw IoError("grid dump has no rows: " + path.string());
    return dump;
}

void write_scatter(const std::filesystem::path& csv_path, const ScatterData& data)
{
    data.validate();
    auto out = open_out(csv_path);
    out << "incidence,receiver,re,im\n";
    for (std::size_t j = 0; j < data.n_i(); ++j)
        for (std::size_t q = 0; q < data.n_s(); ++q)
            out << j << ',' << q << ',' << num(data.u[j][q].real()) << ','
                << num(data.u[j][q].imag()) << '\n';
    if (!out) throw IoError("write failed: " + csv_path.string());

    nlohmann::ordered_json meta;
    meta["k"] = data.k;
    meta["xi"] = data.xi;
    meta["seed"] = data.seed;
    meta["n_i"] = data.n_i();
    meta["n_s"] = data.n_s();
    meta["receivers"]["dim"] = data.receivers.dim;
    for (std::size_t q = 0; q < data.receivers.size(); ++q) {
        const Point& p = data.receivers.points[q];
        meta["receivers"]["points"].push_back({p[0], p[1], p[2]});
        meta["receivers"]["weights"].push_back(data.receivers.weights[q]);
    }
    meta["incidences"]["dim"] = data.incidences.dim;
    for (const Point& d : data.incidences.directions)
        meta["incidences"]["directions"].push_back({d[0], d[1], d[2]});

    auto side = open_out(sidecar_path(csv_path));
    side << meta.dump(2) << '\n';
    if (!side) throw IoError("write failed: " + sidecar_path(csv_path).string());
}

ScatterData read_scatter(const std::filesystem::path& csv_path)
{
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(open_in(sidecar_path(csv_path)));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad sidecar " + sidecar_path(csv_path).string() + ": " + e.what());
    }

    ScatterData data;
    try {
        data.k = meta.at("k").get<double>();
        data.xi = meta.at("xi").get<double>();
        data.seed = meta.at("seed").get<std::uint64_t>();
        const auto& rec = meta.at("receivers");
        data.receivers.dim = rec.at("dim").get<int>();
        for (const auto& p : rec.at("points"))
            data.receivers.points.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                                             p.at(2).get<double>()});
        data.receivers.weights = rec.at("weights").get<std::vector<double>>();
        const auto& inc = meta.at("incidences");
        data.incidences.dim = inc.at("dim").get<int>();
        for (const auto& d : inc.at("directions"))
            data.incidences.directions.push_back({d.at(0).get<double>(), d.at(1).get<double>(),
                                                  d.at(2).get<double>()});
        data.u.assign(meta.at("n_i").get<std::size_t>(),
                      std::vector<Complex>(meta.at("n_s").get<std::size_t>()));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad sidecar " + sidecar_path(csv_path).string() + ": " + e.what());
    }

    auto in = open_in(csv_path);
    std::string line;
    if (!std::getline(in, line) || line != "incidence,receiver,re,im")
        throw IoError("unrecognized measurement header in " + csv_path.string());
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 4) throw IoError("expected 4 columns in " + csv_path.string());
        const auto j = static_cast<std::size_t>(parse_num(f[0], csv_path));
        const auto q = static_cast<std::size_t>(parse_num(f[1], csv_path));
        if (j >= data.n_i() || q >= data.n_s())
            throw IoError("measurement index out of range in " + csv_path.string());
        data.u[j][q] = Complex(parse_num(f[2], csv_path), parse_num(f[3], csv_path));
        ++rows;
    }
    if (rows != data.n_i() * data.n_s())
        throw IoError("measurement row count does not match sidecar in " + csv_path.string());
    data.validate();
    return data;
}

void write_grid_json(const std::filesystem::path& path, const GridDump& dump,
                     std::size_t iteration, double cutoff, std::size_t components)
{
    nlohmann::ordered_json j;
    j["iteration"] = iteration;
    j["h"] = dump.h;
    j["cutoff"] = cutoff;
    j["components"] = components;
    j["active"] = std::count(dump.active.begin(), dump.active.end(), char(1));
    auto& cells = j["cells"];
    cells = nlohmann::ordered_json::array();
    for (std::size_t m = 0; m < dump.size(); ++m) {
        const Point& c = dump.centers[m];
        nlohmann::ordered_json row;
        row["center"] = dump.dim == 3 ? nlohmann::ordered_json{c[0], c[1], c[2]}
                                      : nlohmann::ordered_json{c[0], c[1]};
        row["active"] = bool(dump.active[m]);
        row["chi"] = {dump.chi[m].real(), dump.chi[m].imag()};
        cells.push_back(std::move(row));
    }
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

void write_vtk(const std::filesystem::path& path, const SamplingGrid& grid,
               const std::vector<Complex>& chi)
{
    write_vtk(path, make_dump(grid, chi));
}

void write_vtk(const std::filesystem::path& path, const GridDump& dump)
{
    if (dump.size() == 0) throw DomainError("write_vtk: empty dump");
    if (!(dump.h > 0.0)) throw DomainError("write_vtk: mesh size must be positive");

    // Rebuild the full raster; the dump may cover only part of it.
    Point lo = dump.centers[0], hi = dump.centers[0];
    for (const Point& c : dump.centers)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], c[a]);
            hi[a] = std::max(hi[a], c[a]);
        }
    std::array<std::size_t, 3> n{1, 1, 1};
    for (int a = 0; a < dump.dim; ++a)
        n[a] = static_cast<std::size_t>(std::llround((hi[a] - lo[a]) / dump.h)) + 1;
    const std::size_t total = n[0] * n[1] * n[2];
    std::vector<double> mod(total, 0.0);
    std::vector<char> act(total, 0);
    for (std::size_t m = 0; m < dump.size(); ++m) {
        std::size_t idx[3] = {0, 0, 0};
        for (int a = 0; a < dump.dim; ++a) {
            const auto i = std::llround((dump.centers[m][a] - lo[a]) / dump.h);
            if (i < 0 || static_cast<std::size_t>(i) >= n[a])
                throw DomainError("write_vtk: centers do not sit on a uniform lattice");
            idx[a] = static_cast<std::size_t>(i);
        }
        const std::size_t flat = (idx[2] * n[1] + idx[1]) * n[0] + idx[0];
        mod[flat] = std::abs(dump.chi[m]);
        act[flat] = dump.active[m];
    }

    auto out = open_out(path);
    out << "# vtk DataFile Version 3.0\n"
        << "contrast indicator on the cell-center lattice, h=" << num(dump.h) << "\n"
        << "ASCII\n"
        << "DATASET STRUCTURED_POINTS\n"
        << "DIMENSIONS " << n[0] << ' ' << n[1] << ' ' << n[2] << '\n'
        << "ORIGIN " << num(lo[0]) << ' ' << num(lo[1]) << ' ' << num(lo[2]) << '\n'
        << "SPACING " << num(dump.h) << ' ' << num(dump.h) << ' ' << num(dump.h) << '\n'
        << "POINT_DATA " << total << '\n'
        << "SCALARS chi_abs double 1\n"
        << "LOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < total; ++i) out << num(mod[i]) << '\n';
    out << "SCALARS active int 1\n"
        << "LOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < total; ++i) out << int(act[i]) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace wavesift
