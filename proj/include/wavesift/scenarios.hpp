#pragma once

#include "wavesift/errors.hpp"
#include "wavesift/geometry.hpp"
#include "wavesift/physics.hpp"

#include <functional>
#include <string>

namespace wavesift {

// Ground-truth scatterer: a support predicate plus a contrast evaluator that
// vanishes outside the support. Pure functions, safe to share across threads.
struct Phantom {
    std::string name;
    int dim = 2;
    SamplingBox bounding_box;
    std::function<bool(const Point&)> support;
    std::function<Complex(const Point&)> contrast;
};

// Built-in phantoms: twin_squares, twin_squares_sine, annulus, twin_cubes,
// torus. Geometry scales with the wavelength. Throws UnknownPhantom.
Phantom make_phantom(const std::string& name, double lambda = 1.0);

// Custom phantom from a JSON geometry description: a union of shapes (box,
// sphere, annulus, torus), each with a constant complex contrast or the named
// "sine" profile; the first shape containing a point wins.
Phantom load_phantom_json(const std::string& path);

// Unit directions of plane waves sent from equally spaced points on the
// measurement circle (2D) or a Fibonacci-spiral point set on the sphere (3D),
// pointing inward. Deterministic.
IncidenceSet incidence_directions(std::size_t n_i, int dim);

// Receiver points on the circle/sphere of the given radius with equal
// quadrature weights summing to its measure.
ReceiverSet receiver_positions(std::size_t n_s, double radius, int dim);

} // namespace wavesift
