#include "biohybrid/constitutive.hpp"

#include <array>
#include <cmath>

#include "biohybrid/errors.hpp"

namespace biohybrid {

namespace {

void require(bool ok, const char* msg)
{
    if (!ok)
        throw ParameterDomainError(msg);
}

// x^n for small non-negative integer n.
double ipow(double x, int n)
{
    double r = 1.0;
    for (int k = 0; k < n; ++k)
        r *= x;
    return r;
}

// Power term x^n with its first two derivatives.
struct PowerTerm
{
    double v, d1, d2;
};

PowerTerm power_term(double x, int n)
{
    return {ipow(x, n), n * ipow(x, n - 1), n * (n - 1) * ipow(x, n - 2)};
}

double det_c_checked(const SymTensor3& c)
{
    const double d = c.det();
    if (!(d > 0.0))
        throw InvalidDeformation("right Cauchy-Green tensor must have det(C) > 0");
    return d;
}

// mu/2 (tr C - 3) - mu ln J
EnergyResponse matrix_shear_part(const SymTensor3& c, const MatrixParams& p)
{
    const double J2 = det_c_checked(c);
    const SymTensor3 ci = c.inverse();
    EnergyResponse r;
    r.psi = 0.5 * p.mu * (c.trace() - 3.0) - 0.5 * p.mu * std::log(J2);
    r.st.S = p.mu * (SymTensor3::identity() - ci);
    r.st.CC = 2.0 * p.mu * sym_outer_product(ci);
    return r;
}

} // namespace

void MatrixParams::validate() const
{
    require(mu > 0.0, "matrix mu must be > 0");
    require(lambda >= 0.0, "matrix lambda must be >= 0");
}

void CollagenParams::validate() const
{
    require(k1 > 0.0, "collagen k1 must be > 0");
    require(k2 > 0.0, "collagen k2 must be > 0");
    require(kappa >= 0.0 && kappa <= 1.0 / 3.0, "collagen kappa must lie in [0, 1/3]");
    require(rho_f > 0.0, "collagen rho_f must be > 0");
}

void TextileParams::validate() const
{
    for (double k : {K1_1, K1_2, K2_1, K2_2, Kcoup1, Kcoup2, KcoupAni})
        require(k >= 0.0 && std::isfinite(k), "textile stiffnesses must be >= 0");
    for (int e : {beta1, beta2, gamma1, gamma2, delta1, delta2, xi})
        require(e >= 2, "textile exponents must be integers >= 2");
}

void MaterialParams::validate() const
{
    matrix.validate();
    collagen.validate();
    textile.validate();
    growth.validate();
}

//------------------------------------------------------------------------------
// Matrix
//------------------------------------------------------------------------------

VolumetricResponse matrix_volumetric(double J, const MatrixParams& p)
{
    if (!(J > 0.0))
        throw InvalidDeformation("volume ratio must be > 0");
    const double lnJ = std::log(J);
    return {0.25 * p.lambda * (J * J - 1.0 - 2.0 * lnJ), 0.5 * p.lambda * (J - 1.0 / J),
            0.5 * p.lambda * (1.0 + 1.0 / (J * J))};
}

EnergyResponse matrix_volumetric_psi_stress_tangent(const SymTensor3& c, const MatrixParams& p)
{
    const double J2 = det_c_checked(c);
    const double J = std::sqrt(J2);
    const SymTensor3 ci = c.inverse();
    EnergyResponse r;
    r.psi = matrix_volumetric(J, p).U;
    r.st.S = (0.5 * p.lambda * (J2 - 1.0)) * ci;
    r.st.CC = p.lambda * J2 * outer(ci, ci) - p.lambda * (J2 - 1.0) * sym_outer_product(ci);
    return r;
}

EnergyResponse matrix_psi_stress_tangent(const SymTensor3& c, const MatrixParams& p)
{
    const double J2 = det_c_checked(c);
    const double lnJ = 0.5 * std::log(J2);
    const SymTensor3 ci = c.inverse();
    EnergyResponse r;
    r.psi = 0.5 * p.mu * (c.trace() - 3.0) - p.mu * lnJ + 0.25 * p.lambda * (J2 - 1.0 - 2.0 * lnJ);
    const double coef = 0.5 * p.lambda * (J2 - 1.0) - p.mu;
    r.st.S = p.mu * SymTensor3::identity() + coef * ci;
    r.st.CC = p.lambda * J2 * outer(ci, ci) - 2.0 * coef * sym_outer_product(ci);
    return r;
}

//------------------------------------------------------------------------------
// Collagen
//------------------------------------------------------------------------------

CollagenMassEnergy collagen_psi_mass(const SymTensor3& c, const CollagenParams& p)
{
    const SymTensor3 h = gen_structural_tensor(p.a, p.kappa);
    CollagenMassEnergy out;
    out.fiber = fiber_strain(c, h);
    const double E = out.fiber.strain;
    // tension-only switch: lambda_co >= 1 <=> E >= 0
    if (E < 0.0)
        return out;
    const double ex = std::exp(p.k2 * E * E);
    const double s = 1.0 / p.rho_f;
    out.psi_m = s * p.k1 / (2.0 * p.k2) * (ex - 1.0);
    out.dpsi_m_dC = (s * p.k1 * E * ex) * h;
    out.d2psi_m_dC2 = (s * p.k1 * ex * (1.0 + 2.0 * p.k2 * E * E)) * outer(h, h);
    return out;
}

StressTangent collagen_stress(const SymTensor3& c, const CollagenParams& p, const GrowthState& density)
{
    if (!(density.rho >= 0.0))
        throw StateCorruption("collagen density must be >= 0");
    const CollagenMassEnergy m = collagen_psi_mass(c, p);
    // psi_co = Phi(psi_m) with Phi' = rho + psi_m rho', Phi'' = 2 rho' + psi_m rho''
    const double phi1 = density.rho + m.psi_m * density.drho_dpsim;
    const double phi2 = 2.0 * density.drho_dpsim + m.psi_m * density.d2rho_dpsim2;
    StressTangent st;
    st.S = (2.0 * phi1) * m.dpsi_m_dC;
    st.CC = 4.0 * (phi2 * outer(m.dpsi_m_dC, m.dpsi_m_dC) + phi1 * m.d2psi_m_dC2);
    return st;
}

//------------------------------------------------------------------------------
// Textile
//------------------------------------------------------------------------------

EnergyResponse textile_psi_stress_tangent(const SymTensor3& c, const TextileParams& p)
{
    const SymTensor3 m1 = structural_tensor(p.n1);
    const SymTensor3 m2 = structural_tensor(p.n2);
    const TextileInvariants inv = textile_invariants(c, m1, m2);

    // reduced invariants x_a and their reference values
    const std::array<double, 5> x{inv.I1 - 3.0, inv.I2t - 1.0, inv.I3t - 1.0, inv.I4t - 1.0, inv.I5t - 1.0};
    double psi = 0.0;
    std::array<double, 5> g{};
    std::array<std::array<double, 5>, 5> hs{};

    auto single = [&](double K, int a, int n) {
        if (K == 0.0)
            return;
        const PowerTerm t = power_term(x[a], n);
        psi += K * t.v;
        g[a] += K * t.d1;
        hs[a][a] += K * t.d2;
    };
    auto product = [&](double K, int a, int b, int n) {
        if (K == 0.0)
            return;
        const PowerTerm ta = power_term(x[a], n);
        const PowerTerm tb = power_term(x[b], n);
        psi += K * ta.v * tb.v;
        g[a] += K * ta.d1 * tb.v;
        g[b] += K * ta.v * tb.d1;
        hs[a][a] += K * ta.d2 * tb.v;
        hs[b][b] += K * ta.v * tb.d2;
        hs[a][b] += K * ta.d1 * tb.d1;
        hs[b][a] += K * ta.d1 * tb.d1;
    };

    single(p.K1_1, 1, p.beta1);
    single(p.K1_2, 2, p.beta2);
    single(p.K2_1, 3, p.gamma1);
    single(p.K2_2, 4, p.gamma2);
    product(p.Kcoup1, 0, 1, p.delta1);
    product(p.Kcoup2, 0, 3, p.delta2);
    product(p.KcoupAni, 1, 3, p.xi);

    const std::array<SymTensor3, 5> dI{SymTensor3::identity(), m1, sym_product(c, m1), m2, sym_product(c, m2)};

    EnergyResponse r;
    r.psi = psi;
    SymTensor3 grad;
    for (int a = 0; a < 5; ++a)
        grad += g[a] * dI[a];
    Tangent hess = g[2] * square_product_derivative(m1) + g[4] * square_product_derivative(m2);
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
            if (hs[a][b] != 0.0)
                hess += hs[a][b] * outer(dI[a], dI[b]);
    r.st.S = 2.0 * grad;
    r.st.CC = 4.0 * hess;
    return r;
}

//------------------------------------------------------------------------------
// Mixture
//------------------------------------------------------------------------------

PointResponse total_response(const Tensor3& f, const MaterialParams& params, const GrowthState& state_n,
                             double dt, double t, const ResponseOptions& opt)
{
    if (!(dt >= 0.0))
        throw ParameterDomainError("time step must be >= 0");
    const SymTensor3 c = right_cauchy_green(f);

    PointResponse out;
    const CollagenMassEnergy cm = collagen_psi_mass(c, params.collagen);
    out.psi_m = cm.psi_m;
    out.fiber_strain = cm.fiber.strain;
    if (dt > 0.0)
        out.state = update_density(state_n, t, dt, cm.psi_m, params.growth, opt.local);
    else
        out.state = {state_n.rho, 0.0, 0.0};

    const EnergyResponse mat = opt.include_matrix_volumetric ? matrix_psi_stress_tangent(c, params.matrix)
                                                             : matrix_shear_part(c, params.matrix);
    const EnergyResponse tex = textile_psi_stress_tangent(c, params.textile);
    const StressTangent col = collagen_stress(c, params.collagen, out.state);

    out.st.S = mat.st.S + col.S + tex.st.S;
    out.st.CC = mat.st.CC + col.CC + tex.st.CC;
    out.psi = mat.psi + out.state.rho * cm.psi_m + tex.psi;
    return out;
}

SymTensor3 cauchy_stress(const Tensor3& f, const SymTensor3& s)
{
    const double J = f.det();
    if (!(J > 0.0))
        throw InvalidDeformation("deformation gradient must have det(F) > 0");
    return (1.0 / J) * push_forward(f, s);
}

} // namespace biohybrid
