#pragma once

// Test-only reference computations.  Nothing here calls into the analytic
// derivative paths it is used to check.

#include <cmath>
#include <functional>
#include <random>

#include "biohybrid/tensor.hpp"

namespace oracle {

using biohybrid::SymTensor3;
using biohybrid::Tangent;
using biohybrid::Tensor3;

// Symmetric perturbation of Voigt component J by eps (both C_kl and C_lk
// for shear components).
inline SymTensor3 perturbed(SymTensor3 c, int J, double eps)
{
    c[J] += eps;
    return c;
}

// S = 2 dpsi/dC by central differences.  A normal component perturbation
// eps changes psi by S_kk eps / 2; a shear one by S_kl eps.
inline SymTensor3 fd_stress(const std::function<double(const SymTensor3&)>& psi, const SymTensor3& c,
                            double h = 1e-6)
{
    SymTensor3 s;
    for (int J = 0; J < 6; ++J) {
        const double w = J < 3 ? 2.0 : 1.0;
        s[J] = w * (psi(perturbed(c, J, h)) - psi(perturbed(c, J, -h))) / (2.0 * h);
    }
    return s;
}

// CC = 2 dS/dC by central differences of a stress function.
inline Tangent fd_tangent(const std::function<SymTensor3(const SymTensor3&)>& stress, const SymTensor3& c,
                          double h = 1e-6)
{
    Tangent t;
    for (int J = 0; J < 6; ++J) {
        const double w = J < 3 ? 2.0 : 1.0;
        const SymTensor3 sp = stress(perturbed(c, J, h));
        const SymTensor3 sm = stress(perturbed(c, J, -h));
        for (int I = 0; I < 6; ++I)
            t(I, J) = w * (sp[I] - sm[I]) / (2.0 * h);
    }
    return t;
}

inline double rel_err(const SymTensor3& a, const SymTensor3& b)
{
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 6; ++k) {
        num = std::max(num, std::abs(a[k] - b[k]));
        den = std::max(den, std::max(std::abs(a[k]), std::abs(b[k])));
    }
    return den > 0.0 ? num / den : num;
}

inline double rel_err(const Tangent& a, const Tangent& b)
{
    const double den = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
    const double num = (a - b).cwiseAbs().maxCoeff();
    return den > 0.0 ? num / den : num;
}

// Random rotation from a normalized random quaternion.
inline Tensor3 random_rotation(std::mt19937& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    double q[4];
    double s = 0.0;
    for (double& x : q) {
        x = n(rng);
        s += x * x;
    }
    s = std::sqrt(s);
    const double w = q[0] / s, x = q[1] / s, y = q[2] / s, z = q[3] / s;
    return Tensor3({1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
                    2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
                    2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)});
}

// F = I + perturbation with entries uniform in [-amp, amp] plus an optional
// stretch bias on the diagonal; retried until det F > 0.2.
inline Tensor3 random_deformation(std::mt19937& rng, double amp, double bias = 0.0)
{
    std::uniform_real_distribution<double> u(-amp, amp);
    for (;;) {
        Tensor3 f = Tensor3::identity();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                f(i, j) += u(rng) + (i == j ? bias : 0.0);
        if (f.det() > 0.2)
            return f;
    }
}

inline SymTensor3 cauchy_green_of(const Tensor3& f)
{
    return SymTensor3::symmetric_part(f.transpose() * f);
}

} // namespace oracle
