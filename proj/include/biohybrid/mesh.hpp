#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "biohybrid/tensor.hpp"

namespace biohybrid {

// Hexahedron node order (natural coordinates):
//   0 (-,-,-)  1 (+,-,-)  2 (+,+,-)  3 (-,+,-)
//   4 (-,-,+)  5 (+,-,+)  6 (+,+,+)  7 (-,+,+)
// Local faces, each listed counter-clockwise seen from outside:
//   0 zeta=-1, 1 zeta=+1, 2 eta=-1, 3 xi=+1, 4 eta=+1, 5 xi=-1
constexpr std::array<std::array<int, 4>, 6> kHexFaces{
    {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}}};

struct FaceRef
{
    int element = 0;
    int face = 0;
    bool operator==(const FaceRef&) const = default;
};

struct Mesh
{
    std::vector<Vec3> nodes; // mm
    std::vector<std::array<int, 8>> hex8;
    std::map<std::string, std::vector<int>> node_sets;
    std::map<std::string, std::vector<FaceRef>> face_sets;

    std::size_t num_nodes() const { return nodes.size(); }
    std::size_t num_elements() const { return hex8.size(); }

    // Indices in range and a positive reference Jacobian at every Gauss
    // point.  Throws ParameterDomainError / ElementInversion.
    void validate() const;

    bool operator==(const Mesh&) const = default;
};

// Structured box [0,l] x [0,w] x [0,t] with nx * ny * nz elements.
// Node sets: x0, x1, y0, y1, z0, z1.  Face sets: bottom (z = 0), top (z = t),
// x0, x1, y0, y1.
Mesh make_strip_mesh(double l, double w, double t, int nx, int ny, int nz);

} // namespace biohybrid
