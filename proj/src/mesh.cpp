#include "biohybrid/mesh.hpp"

#include <sstream>

#include "biohybrid/errors.hpp"
#include "hex8_shape.hpp"

namespace biohybrid {

void Mesh::validate() const
{
    const int nn = static_cast<int>(nodes.size());
    for (std::size_t e = 0; e < hex8.size(); ++e) {
        std::array<Vec3, 8> X;
        for (int a = 0; a < 8; ++a) {
            const int id = hex8[e][a];
            if (id < 0 || id >= nn) {
                std::ostringstream os;
                os << "element " << e << " references node " << id << " outside [0, " << nn << ")";
                throw ParameterDomainError(os.str());
            }
            X[a] = nodes[id];
        }
        for (const auto& gp : detail::hex_gauss_points()) {
            if (!(detail::hex_jacobian(X, gp).det() > 0.0)) {
                std::ostringstream os;
                os << "element " << e << " has a non-positive reference Jacobian";
                throw ElementInversion(os.str(), static_cast<int>(e));
            }
        }
    }
    for (const auto& [name, ids] : node_sets)
        for (int id : ids)
            if (id < 0 || id >= nn)
                throw ParameterDomainError("node set '" + name + "' references a node out of range");
    for (const auto& [name, faces] : face_sets)
        for (const FaceRef& f : faces)
            if (f.element < 0 || f.element >= static_cast<int>(hex8.size()) || f.face < 0 || f.face > 5)
                throw ParameterDomainError("face set '" + name + "' references an invalid face");
}

Mesh make_strip_mesh(double l, double w, double t, int nx, int ny, int nz)
{
    if (!(l > 0 && w > 0 && t > 0) || nx < 1 || ny < 1 || nz < 1)
        throw ParameterDomainError("strip mesh needs positive dimensions and element counts");
    Mesh m;
    auto nid = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };
    for (int k = 0; k <= nz; ++k)
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i) {
                m.nodes.push_back({l * i / nx, w * j / ny, t * k / nz});
                const int id = nid(i, j, k);
                if (i == 0)
                    m.node_sets["x0"].push_back(id);
                if (i == nx)
                    m.node_sets["x1"].push_back(id);
                if (j == 0)
                    m.node_sets["y0"].push_back(id);
                if (j == ny)
                    m.node_sets["y1"].push_back(id);
                if (k == 0)
                    m.node_sets["z0"].push_back(id);
                if (k == nz)
                    m.node_sets["z1"].push_back(id);
            }
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int e = static_cast<int>(m.hex8.size());
                m.hex8.push_back({nid(i, j, k), nid(i + 1, j, k), nid(i + 1, j + 1, k), nid(i, j + 1, k),
                                  nid(i, j, k + 1), nid(i + 1, j, k + 1), nid(i + 1, j + 1, k + 1),
                                  nid(i, j + 1, k + 1)});
                if (k == 0)
                    m.face_sets["bottom"].push_back({e, 0});
                if (k == nz - 1)
                    m.face_sets["top"].push_back({e, 1});
                if (j == 0)
                    m.face_sets["y0"].push_back({e, 2});
                if (i == nx - 1)
                    m.face_sets["x1"].push_back({e, 3});
                if (j == ny - 1)
                    m.face_sets["y1"].push_back({e, 4});
                if (i == 0)
                    m.face_sets["x0"].push_back({e, 5});
            }
    return m;
}

} // namespace biohybrid
