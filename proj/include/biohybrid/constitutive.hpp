#pragma once

#include "biohybrid/growth.hpp"
#include "biohybrid/kinematics.hpp"
#include "biohybrid/tensor.hpp"

namespace biohybrid {

// All stresses in MPa, densities in ug/mm^3, energies per unit reference
// volume in MPa (= mJ/mm^3), mass-specific energies in MPa*mm^3/ug.

// Compressible Neo-Hooke ground matrix.
struct MatrixParams
{
    double lambda = 10.0;
    double mu = 0.05;

    void validate() const;
    bool operator==(const MatrixParams&) const = default;
};

// Exponential collagen fibers with a generalized structural tensor.
struct CollagenParams
{
    double k1 = 0.825;
    double k2 = 4.0;
    double kappa = 0.0;
    Direction a{1.0, 0.0, 0.0};
    double rho_f = 38.71; // density at which the fitted stiffness applies

    void validate() const;
    bool operator==(const CollagenParams&) const = default;
};

// Orthotropic textile scaffold.  The stiffnesses are stored in MPa.
//
//   psi = K1_1 (I2-1)^beta1 + K1_2 (I3-1)^beta2
//       + K2_1 (I4-1)^gamma1 + K2_2 (I5-1)^gamma2
//       + Kcoup1 (I1-3)^delta1 (I2-1)^delta1 + Kcoup2 (I1-3)^delta2 (I4-1)^delta2
//       + KcoupAni (I2-1)^xi (I4-1)^xi
//
// Odd exponents make psi negative when the corresponding invariant drops
// below its reference value; the law is meant for tension.
struct TextileParams
{
    double K1_1 = 38.51e-3;
    double K1_2 = 1.48e-3;
    double K2_1 = 214.39e-3;
    double K2_2 = 0.0001e-3;
    double Kcoup1 = 183.72e-3;
    double Kcoup2 = 58.71e-3;
    double KcoupAni = 571.83e-3;
    int beta1 = 3;
    int beta2 = 2;
    int gamma1 = 4;
    int gamma2 = 2;
    int delta1 = 2;
    int delta2 = 3;
    int xi = 12;
    Direction n1{1.0, 0.0, 0.0};
    Direction n2{0.0, 1.0, 0.0};

    // K >= 0, exponents >= 2.
    void validate() const;
    bool operator==(const TextileParams&) const = default;
};

struct MaterialParams
{
    MatrixParams matrix;
    CollagenParams collagen;
    TextileParams textile;
    GrowthParams growth;

    void validate() const;
    bool operator==(const MaterialParams&) const = default;
};

struct StressTangent
{
    SymTensor3 S;
    Tangent CC = Tangent::Zero();
};

struct EnergyResponse
{
    double psi = 0.0;
    StressTangent st;
};

// psi = mu/2 (tr C - 3) - mu ln J + lambda/4 (J^2 - 1 - 2 ln J), J = sqrt(det C).
EnergyResponse matrix_psi_stress_tangent(const SymTensor3& c, const MatrixParams& p);

// The lambda/4 (J^2 - 1 - 2 ln J) part alone, as a function of J.  Used by the
// mean-dilatation element which evaluates it with an element-averaged J.
struct VolumetricResponse
{
    double U;   // energy
    double dU;  // dU/dJ
    double d2U; // d2U/dJ2
};
VolumetricResponse matrix_volumetric(double J, const MatrixParams& p);
EnergyResponse matrix_volumetric_psi_stress_tangent(const SymTensor3& c, const MatrixParams& p);

struct CollagenMassEnergy
{
    double psi_m = 0.0;
    SymTensor3 dpsi_m_dC;
    Tangent d2psi_m_dC2 = Tangent::Zero(); // plain second derivative (no factor 4)
    FiberStrain fiber{1.0, 0.0};
};

// Mass-specific fiber energy k1/(2 k2) (exp(k2 E^2) - 1) / rho_f, zero when the
// fiber stretch is below one.
CollagenMassEnergy collagen_psi_mass(const SymTensor3& c, const CollagenParams& p);

// Collagen stress 2 (psi_m drho/dC + rho dpsi_m/dC) with drho/dC formed from
// the growth sensitivities in `density`; the tangent includes the chain terms
// through d2rho/dpsi_m2.  Throws StateCorruption for rho < 0.
StressTangent collagen_stress(const SymTensor3& c, const CollagenParams& p, const GrowthState& density);

EnergyResponse textile_psi_stress_tangent(const SymTensor3& c, const TextileParams& p);

struct ResponseOptions
{
    // The mean-dilatation element adds the matrix volumetric term itself.
    bool include_matrix_volumetric = true;
    LocalNewtonControls local;
};

struct PointResponse
{
    StressTangent st;
    double psi = 0.0;   // total energy per reference volume
    double psi_m = 0.0; // collagen mass-specific energy driving growth
    double fiber_strain = 0.0;
    GrowthState state;  // updated history
};

// Growth update at this point followed by the sum of matrix, collagen and
// textile responses.  dt = 0 freezes the density (pure equilibrium).
PointResponse total_response(const Tensor3& f, const MaterialParams& params, const GrowthState& state_n,
                             double dt, double t, const ResponseOptions& opt = {});

// sigma = J^-1 F S F^T
SymTensor3 cauchy_stress(const Tensor3& f, const SymTensor3& s);

} // namespace biohybrid
