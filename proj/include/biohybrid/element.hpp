#pragma once

#include <array>

#include <Eigen/Core>

#include "biohybrid/constitutive.hpp"

namespace biohybrid {

using ElementVector = Eigen::Matrix<double, 24, 1>;
using ElementMatrix = Eigen::Matrix<double, 24, 24>;

struct GaussPointData
{
    GrowthState state;
    Tensor3 F = Tensor3::identity();
    SymTensor3 S;
    SymTensor3 sigma;
    double psi_m = 0.0;
    double fiber_strain = 0.0;
};

using ElementGaussData = std::array<GaussPointData, 8>;

struct ElementOptions
{
    bool mean_dilatation = true;
    bool want_tangent = true;
    LocalNewtonControls local;
};

struct ElementOutput
{
    ElementVector r = ElementVector::Zero();   // internal nodal forces, (node, component)
    ElementMatrix K = ElementMatrix::Zero();   // d r / d u
    ElementGaussData gauss;                    // updated Gauss point data
    double energy = 0.0;                       // stored energy in the element
};

// Total-Lagrangian hex8, 2x2x2 Gauss rule.  With mean_dilatation the
// volumetric part of the matrix energy is evaluated once per element with the
// volume ratio v/V, which is an exact potential and yields a consistent
// tangent.  Throws ElementInversion (carrying element_id) for det F <= 0.
ElementOutput element_residual_stiffness(const std::array<Vec3, 8>& X, const std::array<Vec3, 8>& u,
                                         const ElementGaussData& history, const MaterialParams& params,
                                         double dt, double t, int element_id, const ElementOptions& opt = {});

using FaceVector = Eigen::Matrix<double, 12, 1>;
using FaceMatrix = Eigen::Matrix<double, 12, 12>;

struct FaceLoad
{
    FaceVector f = FaceVector::Zero(); // external nodal forces
    FaceMatrix K = FaceMatrix::Zero(); // d f / d x
};

// Follower pressure P on a bilinear quad with nodes listed counter-clockwise
// seen from outside the loaded solid; the traction is -P times the current
// outward normal.  2x2 Gauss rule.  Throws ParameterDomainError for a
// degenerate face.
FaceLoad pressure_load(const std::array<Vec3, 4>& x, double P);

} // namespace biohybrid
