#pragma once

#include "biohybrid/tensor.hpp"

namespace biohybrid {

// C = F^T F.  Throws InvalidDeformation unless det F > 0.
SymTensor3 right_cauchy_green(const Tensor3& f);

// H = kappa I + (1 - 3 kappa) a (x) a, with 0 <= kappa <= 1/3.
// kappa = 0 is a perfectly aligned fiber family, kappa = 1/3 isotropic.
SymTensor3 gen_structural_tensor(const Direction& a, double kappa);

// M = n (x) n
SymTensor3 structural_tensor(const Direction& n);

struct FiberStrain
{
    double lambda_sq; // tr(C H)
    double strain;    // lambda_sq - 1
};

FiberStrain fiber_strain(const SymTensor3& c, const SymTensor3& h);

struct TextileInvariants
{
    double I1;  // tr C
    double I2t; // tr(C M1)
    double I3t; // tr(C^2 M1)
    double I4t; // tr(C M2)
    double I5t; // tr(C^2 M2)
};

TextileInvariants textile_invariants(const SymTensor3& c, const SymTensor3& m1, const SymTensor3& m2);

} // namespace biohybrid
