#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "biohybrid/constitutive.hpp"
#include "biohybrid/errors.hpp"
#include "oracles.hpp"

using namespace biohybrid;
using doctest::Approx;

namespace {

// F with F^T F = C via Cholesky (C = L L^T, F = L^T).
Tensor3 deformation_from(const SymTensor3& c)
{
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m(i, j) = c(i, j);
    const Eigen::Matrix3d l = m.llt().matrixL();
    Tensor3 f;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            f(i, j) = l(j, i);
    return f;
}

// Growth kinetics scaled so the mechanical branch is active at moderate
// fiber strains.
MaterialParams active_growth_params()
{
    MaterialParams p;
    p.collagen.kappa = 0.1;
    p.collagen.a = Direction(1.0, 0.3, 0.1);
    p.growth.psi_crit = 2e-4;
    p.growth.a2 = 5e-5;
    return p;
}

double max_abs(const Tangent& t) { return t.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("matrix: reference state and closed form")
{
    const MatrixParams p{10.0, 0.05};
    const EnergyResponse ref = matrix_psi_stress_tangent(SymTensor3::identity(), p);
    CHECK(std::abs(ref.psi) < 1e-15);
    for (int k = 0; k < 6; ++k)
        CHECK(std::abs(ref.st.S[k]) < 1e-15);

    const EnergyResponse r = matrix_psi_stress_tangent(SymTensor3::diag(1.44, 1.0, 1.0), p);
    // mu (1 - 1/1.44) + lambda/2 (1.44 - 1) / 1.44
    CHECK(r.st.S[0] == Approx(1.5430555556).epsilon(1e-9));

    const SymTensor3 c = SymTensor3::diag(1.44, 1.0, 1.0);
    const SymTensor3 fd =
        oracle::fd_stress([&](const SymTensor3& x) { return matrix_psi_stress_tangent(x, p).psi; }, c);
    CHECK(oracle::rel_err(fd, r.st.S) < 1e-8);

    CHECK_THROWS_AS(matrix_psi_stress_tangent(SymTensor3::diag(-1.0, 1.0, 1.0), p), InvalidDeformation);
}

TEST_CASE("matrix: volumetric part splits off exactly")
{
    const MatrixParams p{10.0, 0.05};
    std::mt19937 rng(4);
    for (int n = 0; n < 50; ++n) {
        const SymTensor3 c = oracle::cauchy_green_of(oracle::random_deformation(rng, 0.2));
        const EnergyResponse vol = matrix_volumetric_psi_stress_tangent(c, p);
        const SymTensor3 fd =
            oracle::fd_stress([&](const SymTensor3& x) { return matrix_volumetric_psi_stress_tangent(x, p).psi; }, c);
        REQUIRE(oracle::rel_err(fd, vol.st.S) < 1e-6);
        const Tangent fdt = oracle::fd_tangent(
            [&](const SymTensor3& x) { return matrix_volumetric_psi_stress_tangent(x, p).st.S; }, c);
        REQUIRE(oracle::rel_err(fdt, vol.st.CC) < 1e-5);

        const double J = std::sqrt(c.det());
        const VolumetricResponse u = matrix_volumetric(J, p);
        const double h = 1e-6;
        REQUIRE(u.dU == Approx((matrix_volumetric(J + h, p).U - matrix_volumetric(J - h, p).U) / (2 * h)).epsilon(1e-7));
        REQUIRE(u.d2U == Approx((matrix_volumetric(J + h, p).dU - matrix_volumetric(J - h, p).dU) / (2 * h)).epsilon(1e-7));
    }
}

TEST_CASE("collagen: mass-specific energy")
{
    CollagenParams p; // k1 0.825, k2 4, kappa 0, a = e1, rho_f 38.71
    const CollagenMassEnergy ref = collagen_psi_mass(SymTensor3::identity(), p);
    CHECK(ref.psi_m == 0.0);
    CHECK(ref.dpsi_m_dC == SymTensor3{});

    // fiber compression: lambda_co = 0.9
    const CollagenMassEnergy comp = collagen_psi_mass(SymTensor3::diag(0.81, 1.2, 1.2), p);
    CHECK(comp.psi_m == 0.0);
    CHECK(comp.dpsi_m_dC == SymTensor3{});

    // k1/(2 k2) (exp(4 * 0.0441) - 1) / 38.71
    const CollagenMassEnergy t = collagen_psi_mass(SymTensor3::diag(1.21, 1.0, 1.0), p);
    CHECK(t.psi_m == Approx(5.139e-4).epsilon(1e-3));
    CHECK(t.psi_m == Approx(0.825 / 8.0 * std::expm1(4.0 * 0.0441) / 38.71).epsilon(1e-12));
}

TEST_CASE("collagen: stress")
{
    CollagenParams p;
    CHECK(collagen_stress(SymTensor3::diag(1.21, 1.0, 1.0), p, {0.0}).S == SymTensor3{});

    // rho = rho_f, no sensitivity: S11 = 2 k1 E exp(k2 E^2)
    const StressTangent st = collagen_stress(SymTensor3::diag(1.21, 1.0, 1.0), p, {p.rho_f});
    CHECK(st.S[0] == Approx(2.0 * 0.825 * 0.21 * std::exp(4.0 * 0.0441)).epsilon(1e-13));
    CHECK(st.S[0] == Approx(0.4133).epsilon(2e-4));
    CHECK(st.S[1] == 0.0);

    // exact linearity in the density
    const StressTangent low = collagen_stress(SymTensor3::diag(1.21, 1.0, 1.0), p, {0.6060 * p.rho_f});
    CHECK(low.S[0] == Approx(0.6060 * st.S[0]).epsilon(1e-15));

    CHECK_THROWS_AS(collagen_stress(SymTensor3::identity(), p, {-1e-9}), StateCorruption);
}

TEST_CASE("collagen: tension-only switch")
{
    std::mt19937 rng(31);
    CollagenParams p;
    p.kappa = 0.05;
    p.a = Direction(1.0, 1.0, 0.0);
    int compressed = 0;
    for (int n = 0; n < 500; ++n) {
        const SymTensor3 c = oracle::cauchy_green_of(oracle::random_deformation(rng, 0.3));
        const auto fs = fiber_strain(c, gen_structural_tensor(p.a, p.kappa));
        const StressTangent st = collagen_stress(c, p, {20.0, 0.3, 0.1});
        if (fs.lambda_sq < 1.0) {
            ++compressed;
            REQUIRE(st.S == SymTensor3{});
            REQUIRE(max_abs(st.CC) == 0.0);
        }
    }
    CHECK(compressed > 50);
}

TEST_CASE("textile: reference state and equibiaxial stretch")
{
    const TextileParams p;
    const EnergyResponse ref = textile_psi_stress_tangent(SymTensor3::identity(), p);
    CHECK(ref.psi == 0.0);
    CHECK(ref.st.S == SymTensor3{});

    const SymTensor3 c = SymTensor3::diag(1.05 * 1.05, 1.05 * 1.05, 1.0 / std::pow(1.05, 4));
    const EnergyResponse r = textile_psi_stress_tangent(c, p);
    CHECK(r.psi > 0.0);
    const SymTensor3 fd =
        oracle::fd_stress([&](const SymTensor3& x) { return textile_psi_stress_tangent(x, p).psi; }, c);
    CHECK(oracle::rel_err(fd, r.st.S) < 1e-6);
    const Tangent fdt =
        oracle::fd_tangent([&](const SymTensor3& x) { return textile_psi_stress_tangent(x, p).st.S; }, c);
    CHECK(oracle::rel_err(fdt, r.st.CC) < 1e-5);
}

TEST_CASE("textile: family-two terms are flat when I4 = 1")
{
    TextileParams p;
    p.K1_1 = p.K1_2 = p.Kcoup1 = p.Kcoup2 = p.KcoupAni = 0.0;
    // stretch along n1 only, I4 = 1
    const EnergyResponse r = textile_psi_stress_tangent(SymTensor3::diag(1.2, 1.0, 1.0), p);
    CHECK(r.psi == 0.0);
    CHECK(r.st.S == SymTensor3{});
}

TEST_CASE("textile: exponent validation")
{
    TextileParams p;
    CHECK_NOTHROW(p.validate());
    p.xi = 1;
    CHECK_THROWS_AS(p.validate(), ParameterDomainError);
    p = {};
    p.K2_2 = -1.0;
    CHECK_THROWS_AS(p.validate(), ParameterDomainError);
}

TEST_CASE("every constituent against finite differences on random states")
{
    std::mt19937 rng(2024);
    const MatrixParams mp{10.0, 0.05};
    const TextileParams tp;
    CollagenParams cp;
    cp.kappa = 0.12;
    cp.a = Direction(1.0, 0.2, -0.3);
    int checked_collagen = 0;
    for (int n = 0; n < 150; ++n) {
        const SymTensor3 c = oracle::cauchy_green_of(oracle::random_deformation(rng, 0.08, 0.06));

        const EnergyResponse m = matrix_psi_stress_tangent(c, mp);
        REQUIRE(oracle::rel_err(oracle::fd_stress([&](const SymTensor3& x) { return matrix_psi_stress_tangent(x, mp).psi; }, c), m.st.S) < 1e-6);
        REQUIRE(oracle::rel_err(oracle::fd_tangent([&](const SymTensor3& x) { return matrix_psi_stress_tangent(x, mp).st.S; }, c), m.st.CC) < 1e-5);
        REQUIRE(oracle::rel_err(m.st.CC, m.st.CC.transpose()) < 1e-12);

        const EnergyResponse t = textile_psi_stress_tangent(c, tp);
        REQUIRE(oracle::rel_err(oracle::fd_stress([&](const SymTensor3& x) { return textile_psi_stress_tangent(x, tp).psi; }, c), t.st.S) < 1e-6);
        REQUIRE(oracle::rel_err(oracle::fd_tangent([&](const SymTensor3& x) { return textile_psi_stress_tangent(x, tp).st.S; }, c), t.st.CC) < 1e-5);
        REQUIRE(oracle::rel_err(t.st.CC, t.st.CC.transpose()) < 1e-12);

        const auto fs = fiber_strain(c, gen_structural_tensor(cp.a, cp.kappa));
        if (fs.strain < 1e-3)
            continue;
        ++checked_collagen;
        const GrowthState rho{17.0};
        const StressTangent col = collagen_stress(c, cp, rho);
        auto psi_co = [&](const SymTensor3& x) { return rho.rho * collagen_psi_mass(x, cp).psi_m; };
        REQUIRE(oracle::rel_err(oracle::fd_stress(psi_co, c), col.S) < 1e-6);
        REQUIRE(oracle::rel_err(oracle::fd_tangent([&](const SymTensor3& x) { return collagen_stress(x, cp, rho).S; }, c), col.CC) < 1e-5);
        REQUIRE(oracle::rel_err(col.CC, col.CC.transpose()) < 1e-12);
    }
    CHECK(checked_collagen >= 100);
}

TEST_CASE("total response: additivity and special cases")
{
    MaterialParams p;
    const PointResponse ref = total_response(Tensor3::identity(), p, {0.0}, 0.0, 0.0);
    CHECK(ref.st.S == SymTensor3{});

    std::mt19937 rng(8);
    for (int n = 0; n < 50; ++n) {
        const Tensor3 f = oracle::random_deformation(rng, 0.1, 0.05);
        const SymTensor3 c = right_cauchy_green(f);
        const GrowthState s{12.0};
        const PointResponse r = total_response(f, p, s, 0.0, 3.0);
        const SymTensor3 sum = matrix_psi_stress_tangent(c, p.matrix).st.S + collagen_stress(c, p.collagen, s).S +
                               textile_psi_stress_tangent(c, p.textile).st.S;
        REQUIRE(oracle::rel_err(r.st.S, sum) < 1e-15);
    }

    MaterialParams bare = p;
    bare.textile.K1_1 = bare.textile.K1_2 = bare.textile.K2_1 = bare.textile.K2_2 = 0.0;
    bare.textile.Kcoup1 = bare.textile.Kcoup2 = bare.textile.KcoupAni = 0.0;
    const Tensor3 f = Tensor3::diag(1.2, 0.95, 1.01);
    const PointResponse r = total_response(f, bare, {0.0}, 0.0, 0.0);
    const EnergyResponse m = matrix_psi_stress_tangent(right_cauchy_green(f), bare.matrix);
    CHECK(r.st.S == m.st.S);
    CHECK(r.st.CC == m.st.CC);
    CHECK(r.psi == m.psi);
}

TEST_CASE("total response: tangent with active growth")
{
    const MaterialParams p = active_growth_params();
    std::mt19937 rng(77);
    int active = 0;
    for (int n = 0; n < 150; ++n) {
        const Tensor3 f0 = oracle::random_deformation(rng, 0.05, 0.08);
        const SymTensor3 c = right_cauchy_green(f0);
        const GrowthState sn{5.0};
        const double dt = 0.25, t = 10.0;
        auto stress = [&](const SymTensor3& x) { return total_response(deformation_from(x), p, sn, dt, t).st.S; };
        const PointResponse r = total_response(f0, p, sn, dt, t);
        // keep away from the threshold kink
        if (std::abs(r.psi_m / p.growth.psi_crit - 1.0) < 1e-3)
            continue;
        if (r.state.drho_dpsim > 0.0)
            ++active;
        REQUIRE(oracle::rel_err(oracle::fd_tangent(stress, c), r.st.CC) < 1e-5);
    }
    CHECK(active >= 100);
}

TEST_CASE("total response: frame indifference of the energy")
{
    const MaterialParams p;
    std::mt19937 rng(13);
    for (int n = 0; n < 200; ++n) {
        const Tensor3 f = oracle::random_deformation(rng, 0.2, 0.05);
        const Tensor3 q = oracle::random_rotation(rng);
        const double a = total_response(f, p, {20.0}, 0.0, 0.0).psi;
        const double b = total_response(q * f, p, {20.0}, 0.0, 0.0).psi;
        REQUIRE(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("total response: zero time step freezes the density")
{
    const MaterialParams p = active_growth_params();
    const PointResponse r = total_response(Tensor3::diag(1.3, 0.9, 0.9), p, {4.0}, 0.0, 5.0);
    CHECK(r.state.rho == 4.0);
    CHECK(r.state.drho_dpsim == 0.0);
    CHECK_THROWS_AS(total_response(Tensor3::identity(), p, {0.0}, -1.0, 0.0), ParameterDomainError);
    CHECK_THROWS_AS(total_response(Tensor3::diag(-1.0, 1.0, 1.0), p, {0.0}, 0.0, 0.0), InvalidDeformation);
}

TEST_CASE("Cauchy stress")
{
    const SymTensor3 s({1.0, 2.0, 3.0, 0.1, 0.2, 0.3});
    CHECK(cauchy_stress(Tensor3::identity(), s) == s);

    const SymTensor3 sig = cauchy_stress(Tensor3::diag(2.0, 1.0, 1.0), SymTensor3::diag(1.0, 0.0, 0.0));
    CHECK(sig[0] == Approx(2.0));
    CHECK(sig[1] == 0.0);
    CHECK(sig[2] == 0.0);

    std::mt19937 rng(1);
    const Tensor3 q = oracle::random_rotation(rng);
    const SymTensor3 rot = cauchy_stress(q, s);
    CHECK(rot.trace() == Approx(s.trace()).epsilon(1e-14));
    const SymTensor3 expect = push_forward(q, s);
    CHECK(oracle::rel_err(rot, expect) < 1e-14);
}
