#pragma once

#include <array>
#include <cmath>

#include "biohybrid/tensor.hpp"

namespace biohybrid::detail {

constexpr std::array<std::array<double, 3>, 8> kHexNatural{{{-1, -1, -1},
                                                           {1, -1, -1},
                                                           {1, 1, -1},
                                                           {-1, 1, -1},
                                                           {-1, -1, 1},
                                                           {1, -1, 1},
                                                           {1, 1, 1},
                                                           {-1, 1, 1}}};

struct HexGaussPoint
{
    std::array<double, 8> N;
    std::array<Vec3, 8> dN; // d N / d xi
};

// 2x2x2 rule, unit weights.
inline const std::array<HexGaussPoint, 8>& hex_gauss_points()
{
    static const std::array<HexGaussPoint, 8> pts = [] {
        std::array<HexGaussPoint, 8> out{};
        const double g = 1.0 / std::sqrt(3.0);
        for (int q = 0; q < 8; ++q) {
            const double xi = g * kHexNatural[q][0], eta = g * kHexNatural[q][1], zeta = g * kHexNatural[q][2];
            for (int a = 0; a < 8; ++a) {
                const double xa = kHexNatural[a][0], ya = kHexNatural[a][1], za = kHexNatural[a][2];
                out[q].N[a] = 0.125 * (1 + xi * xa) * (1 + eta * ya) * (1 + zeta * za);
                out[q].dN[a] = {0.125 * xa * (1 + eta * ya) * (1 + zeta * za),
                                0.125 * ya * (1 + xi * xa) * (1 + zeta * za),
                                0.125 * za * (1 + xi * xa) * (1 + eta * ya)};
            }
        }
        return out;
    }();
    return pts;
}

// dX/dxi at a Gauss point: J0(i, j) = sum_a X_a,i dN_a/dxi_j
inline Tensor3 hex_jacobian(const std::array<Vec3, 8>& X, const HexGaussPoint& gp)
{
    Tensor3 j;
    for (int a = 0; a < 8; ++a)
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k)
                j(i, k) += X[a][i] * gp.dN[a][k];
    return j;
}

} // namespace biohybrid::detail
