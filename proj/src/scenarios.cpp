#include "wavesift/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <vector>

#include <json.hpp>

namespace wavesift {

namespace {

using std::numbers::pi;

bool in_box(const Point& p, const Point& lo, const Point& hi, int dim)
{
    for (int a = 0; a < dim; ++a)
        if (p[a] < lo[a] || p[a] > hi[a]) return false;
    return true;
}

// Separable sine contrast peaking at |x| = |y| = 0.3 lambda and vanishing on
// the square edges |x|, |y| in {0.15, 0.45} lambda.
Complex sine_profile(const Point& p, double lambda)
{
    const double sx = std::sin(pi * (10.0 * std::abs(p[0]) / lambda - 1.5) / 3.0);
    const double sy = std::sin(pi * (10.0 * std::abs(p[1]) / lambda - 1.5) / 3.0);
    return Complex(sx * sy, 0.0);
}

Phantom twin_squares(double lambda, bool sine)
{
    const double c = 0.3 * lambda, half = 0.15 * lambda;
    Phantom ph;
    ph.name = sine ? "twin_squares_sine" : "twin_squares";
    ph.dim = 2;
    ph.bounding_box = SamplingBox::square(-c - half, c + half);
    auto in_square = [=](const Point& p, double sx, double sy) {
        return std::abs(p[0] - sx) <= half && std::abs(p[1] - sy) <= half;
    };
    ph.support = [=](const Point& p) {
        return in_square(p, -c, -c) || in_square(p, c, c);
    };
    ph.contrast = [=](const Point& p) -> Complex {
        if (!in_square(p, -c, -c) && !in_square(p, c, c)) return 0.0;
        if (sine) return sine_profile(p, lambda);
        return in_square(p, c, c) ? 2.0 : 1.0;
    };
    return ph;
}

Phantom annulus(double lambda)
{
    const double r0 = 0.3 * lambda, r1 = 0.5 * lambda;
    Phantom ph;
    ph.name = "annulus";
    ph.dim = 2;
    ph.bounding_box = SamplingBox::square(-r1, r1);
    ph.support = [=](const Point& p) {
        const double r = std::hypot(p[0], p[1]);
        return r >= r0 && r <= r1;
    };
    ph.contrast = [support = ph.support](const Point& p) -> Complex {
        return support(p) ? 2.0 : 0.0;
    };
    return ph;
}

Phantom twin_cubes(double lambda)
{
    const double a = 0.15 * lambda, b = 0.45 * lambda;
    Phantom ph;
    ph.name = "twin_cubes";
    ph.dim = 3;
    ph.bounding_box = SamplingBox::cube(-b, b);
    ph.support = [=](const Point& p) {
        return in_box(p, {-b, -b, -b}, {-a, -a, -a}, 3) ||
               in_box(p, {a, a, a}, {b, b, b}, 3);
    };
    ph.contrast = [support = ph.support](const Point& p) -> Complex {
        return support(p) ? 2.0 : 0.0;
    };
    return ph;
}

Phantom torus(double lambda)
{
    const double R = 0.4 * lambda, r = 0.1 * lambda;
    Phantom ph;
    ph.name = "torus";
    ph.dim = 3;
    ph.bounding_box = SamplingBox({-(R + r), -(R + r), -r}, {R + r, R + r, r}, 3);
    ph.support = [=](const Point& p) {
        const double q = R - std::hypot(p[0], p[1]);
        return q * q + p[2] * p[2] <= r * r;
    };
    ph.contrast = [support = ph.support](const Point& p) -> Complex {
        return support(p) ? 2.0 : 0.0;
    };
    return ph;
}

// Unit Fibonacci-spiral points: deterministic, pairwise distinct, roughly
// equidistributed on the sphere.
std::vector<Point> fibonacci_sphere(std::size_t n)
{
    const double golden_angle = pi * (3.0 - std::sqrt(5.0));
    std::vector<Point> pts(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double z = 1.0 - (2.0 * (static_cast<double>(j) + 0.5)) / static_cast<double>(n);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * static_cast<double>(j);
        pts[j] = {rho * std::cos(phi), rho * std::sin(phi), z};
    }
    return pts;
}

} // namespace

Phantom make_phantom(const std::string& name, double lambda)
{
    if (!(lambda > 0.0)) throw DomainError("make_phantom: wavelength must be positive");
    if (name == "twin_squares") return twin_squares(lambda, false);
    if (name == "twin_squares_sine") return twin_squares(lambda, true);
    if (name == "annulus") return annulus(lambda);
    if (name == "twin_cubes") return twin_cubes(lambda);
    if (name == "torus") return torus(lambda);
    throw UnknownPhantom("unknown phantom: " + name);
}

Phantom load_phantom_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open phantom file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("phantom file " + path + ": " + e.what());
    }

    const double lambda = j.value("lambda", 1.0);
    const int dim = j.value("dim", 2);
    if (dim != 2 && dim != 3) throw ConfigError("phantom dim must be 2 or 3");
    if (!j.contains("shapes") || !j["shapes"].is_array() || j["shapes"].empty())
        throw ConfigError("phantom file needs a nonempty \"shapes\" array");

    struct Shape {
        std::function<bool(const Point&)> inside;
        std::function<Complex(const Point&)> value;
        Point lo, hi;
    };
    auto read_point = [dim](const nlohmann::json& v, const char* what) {
        if (!v.is_array() || static_cast<int>(v.size()) != dim)
            throw ConfigError(std::string(what) + " must be an array of length dim");
        Point p{0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a) p[a] = v[static_cast<std::size_t>(a)].get<double>();
        return p;
    };
    auto read_contrast = [lambda](const nlohmann::json& s) -> std::function<Complex(const Point&)> {
        if (!s.contains("contrast")) return [](const Point&) { return Complex(1.0); };
        const auto& c = s["contrast"];
        if (c.is_number()) {
            const Complex v(c.get<double>(), 0.0);
            return [v](const Point&) { return v; };
        }
        if (c.is_array() && c.size() == 2) {
            const Complex v(c[0].get<double>(), c[1].get<double>());
            return [v](const Point&) { return v; };
        }
        if (c.is_string() && c.get<std::string>() == "sine")
            return [lambda](const Point& p) { return sine_profile(p, lambda); };
        throw ConfigError("contrast must be a number, [re,im], or \"sine\"");
    };

    std::vector<Shape> shapes;
    for (const auto& s : j["shapes"]) {
        const std::string type = s.value("type", "");
        Shape sh;
        sh.value = read_contrast(s);
        if (type == "box") {
            const Point lo = read_point(s.at("lower"), "lower");
            const Point hi = read_point(s.at("upper"), "upper");
            sh.inside = [lo, hi, dim](const Point& p) { return in_box(p, lo, hi, dim); };
            sh.lo = lo;
            sh.hi = hi;
        } else if (type == "sphere") {
            const Point c = read_point(s.at("center"), "center");
            const double r = s.at("radius").get<double>();
            sh.inside = [c, r](const Point& p) { return distance(p, c) <= r; };
            for (int a = 0; a < 3; ++a) {
                sh.lo[a] = c[a] - r;
                sh.hi[a] = c[a] + r;
            }
        } else if (type == "annulus") {
            const Point c = read_point(s.at("center"), "center");
            const double r0 = s.at("inner").get<double>();
            const double r1 = s.at("outer").get<double>();
            if (!(0.0 <= r0 && r0 < r1)) throw ConfigError("annulus needs 0 <= inner < outer");
            sh.inside = [c, r0, r1](const Point& p) {
                const double r = distance(p, c);
                return r >= r0 && r <= r1;
            };
            for (int a = 0; a < 3; ++a) {
                sh.lo[a] = c[a] - r1;
                sh.hi[a] = c[a] + r1;
            }
        } else if (type == "torus") {
            const Point c = read_point(s.at("center"), "center");
            const double R = s.at("major").get<double>();
            const double r = s.at("minor").get<double>();
            sh.inside = [c, R, r](const Point& p) {
                const double q = R - std::hypot(p[0] - c[0], p[1] - c[1]);
                const double z = p[2] - c[2];
                return q * q + z * z <= r * r;
            };
            sh.lo = {c[0] - R - r, c[1] - R - r, c[2] - r};
            sh.hi = {c[0] + R + r, c[1] + R + r, c[2] + r};
        } else {
            throw ConfigError("unknown shape type: \"" + type + "\"");
        }
        shapes.push_back(std::move(sh));
    }

    Point lo = shapes[0].lo, hi = shapes[0].hi;
    for (const auto& s : shapes)
        for (int a = 0; a < dim; ++a) {
            lo[a] = std::min(lo[a], s.lo[a]);
            hi[a] = std::max(hi[a], s.hi[a]);
        }
    if (dim == 2) lo[2] = hi[2] = 0.0;

    Phantom ph;
    ph.name = j.value("name", "custom");
    ph.dim = dim;
    ph.bounding_box = SamplingBox(lo, hi, dim);
    auto shared = std::make_shared<std::vector<Shape>>(std::move(shapes));
    ph.support = [shared](const Point& p) {
        for (const auto& s : *shared)
            if (s.inside(p)) return true;
        return false;
    };
    ph.contrast = [shared](const Point& p) -> Complex {
        for (const auto& s : *shared)
            if (s.inside(p)) return s.value(p);
        return 0.0;
    };
    return ph;
}

IncidenceSet incidence_directions(std::size_t n_i, int dim)
{
    if (n_i < 1) throw DomainError("incidence_directions: need at least one incidence");
    IncidenceSet set;
    set.dim = dim;
    set.directions.reserve(n_i);
    if (dim == 2) {
        for (std::size_t jj = 0; jj < n_i; ++jj) {
            const double th = 2.0 * pi * static_cast<double>(jj) / static_cast<double>(n_i);
            set.directions.push_back({-std::cos(th), -std::sin(th), 0.0});
        }
    } else if (dim == 3) {
        for (const Point& p : fibonacci_sphere(n_i))
            set.directions.push_back({-p[0], -p[1], -p[2]});
    } else {
        throw DomainError("incidence_directions: dimension must be 2 or 3");
    }
    set.validate();
    return set;
}

ReceiverSet receiver_positions(std::size_t n_s, double radius, int dim)
{
    if (n_s < 1) throw DomainError("receiver_positions: need at least one receiver");
    if (!(radius > 0.0)) throw DomainError("receiver_positions: radius must be positive");
    ReceiverSet set;
    set.dim = dim;
    set.points.reserve(n_s);
    if (dim == 2) {
        for (std::size_t q = 0; q < n_s; ++q) {
            const double th = 2.0 * pi * static_cast<double>(q) / static_cast<double>(n_s);
            set.points.push_back({radius * std::cos(th), radius * std::sin(th), 0.0});
        }
        set.weights.assign(n_s, 2.0 * pi * radius / static_cast<double>(n_s));
    } else if (dim == 3) {
        for (const Point& p : fibonacci_sphere(n_s))
            set.points.push_back({radius * p[0], radius * p[1], radius * p[2]});
        set.weights.assign(n_s, 4.0 * pi * radius * radius / static_cast<double>(n_s));
    } else {
        throw DomainError("receiver_positions: dimension must be 2 or 3");
    }
    set.validate();
    return set;
}

} // namespace wavesift
