#include "biohybrid/kinematics.hpp"

#include "biohybrid/errors.hpp"

namespace biohybrid {

SymTensor3 right_cauchy_green(const Tensor3& f)
{
    if (!(f.det() > 0.0))
        throw InvalidDeformation("deformation gradient must have det(F) > 0");
    SymTensor3 c;
    for (int k = 0; k < 6; ++k) {
        const auto [i, j] = kVoigtPair[k];
        c[k] = f(0, i) * f(0, j) + f(1, i) * f(1, j) + f(2, i) * f(2, j);
    }
    return c;
}

SymTensor3 gen_structural_tensor(const Direction& a, double kappa)
{
    if (!(kappa >= 0.0 && kappa <= 1.0 / 3.0))
        throw ParameterDomainError("dispersion kappa must lie in [0, 1/3]");
    return kappa * SymTensor3::identity() + (1.0 - 3.0 * kappa) * SymTensor3::dyad(a.vec());
}

SymTensor3 structural_tensor(const Direction& n)
{
    return SymTensor3::dyad(n.vec());
}

FiberStrain fiber_strain(const SymTensor3& c, const SymTensor3& h)
{
    const double lsq = trace_product(c, h);
    return {lsq, lsq - 1.0};
}

TextileInvariants textile_invariants(const SymTensor3& c, const SymTensor3& m1, const SymTensor3& m2)
{
    const SymTensor3 c2 = square(c);
    return {c.trace(), trace_product(c, m1), trace_product(c2, m1), trace_product(c, m2),
            trace_product(c2, m2)};
}

} // namespace biohybrid
