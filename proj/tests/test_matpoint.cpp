#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "biohybrid/errors.hpp"
#include "biohybrid/matpoint.hpp"

using namespace biohybrid;
using doctest::Approx;

namespace {

MaterialParams no_textile(MaterialParams p = {})
{
    p.textile.K1_1 = p.textile.K1_2 = p.textile.K2_1 = p.textile.K2_2 = 0.0;
    p.textile.Kcoup1 = p.textile.Kcoup2 = p.textile.KcoupAni = 0.0;
    return p;
}

MaterialParams only_textile()
{
    MaterialParams p;
    p.matrix.mu = 1e-9; // the matrix must stay admissible; keep it negligible
    p.matrix.lambda = 0.0;
    return p;
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v;
    for (int k = 0; k < n; ++k)
        v.push_back(a + (b - a) * k / (n - 1));
    return v;
}

} // namespace

TEST_CASE("all axes fixed at unit stretch without growth stays stress free")
{
    MaterialParams p;
    p.growth.a1 = 0.0;
    p.growth.a2 = 0.0;
    const auto recs = solve_mixed_point(LoadProgram::held({1.0, 2.0, 5.0, 10.0}, {1.0, 1.0, 1.0}), p, {});
    REQUIRE(recs.size() == 4);
    for (const auto& r : recs) {
        CHECK(r.S == SymTensor3{});
        CHECK(r.rho == 0.0);
    }
}

TEST_CASE("uniaxial tension leaves the lateral Cauchy stresses at zero")
{
    const MaterialParams p;
    MixedSolveOptions opt;
    opt.evolve_density = false;
    const auto recs = solve_mixed_point(LoadProgram::uniaxial(linspace(1.01, 1.3, 15)), p, {20.0}, opt);
    REQUIRE(recs.size() == 15);
    double prev = 0.0;
    for (const auto& r : recs) {
        CHECK(std::abs(r.sigma[1]) < 1e-10);
        CHECK(std::abs(r.sigma[2]) < 1e-10);
        CHECK(r.P[0] > prev);
        prev = r.P[0];
        CHECK(r.P[0] == Approx(r.F(0, 0) * r.S[0]).epsilon(1e-15));
    }
}

TEST_CASE("collagen contribution scales with the relative density")
{
    const MaterialParams p = no_textile();
    MixedSolveOptions opt;
    opt.evolve_density = false;
    LoadProgram prog;
    // all axes controlled so that the deformation is identical across densities
    prog.steps.push_back({1.0, {1.1, 1.0 / std::sqrt(1.1), 1.0 / std::sqrt(1.1)}});
    const double S_matrix = solve_mixed_point(prog, p, {0.0}, opt).back().S[0];
    const double S_full = solve_mixed_point(prog, p, {p.collagen.rho_f}, opt).back().S[0];
    for (double rel : {0.6060, 0.8357, 1.0}) {
        const double S = solve_mixed_point(prog, p, {rel * p.collagen.rho_f}, opt).back().S[0];
        CHECK((S - S_matrix) == Approx(rel * (S_full - S_matrix)).epsilon(1e-13));
    }
}

TEST_CASE("equibiaxial textile response is monotone and stiffening")
{
    const MaterialParams p = only_textile();
    MixedSolveOptions opt;
    opt.evolve_density = false;
    const auto strains = linspace(0.0, 0.12, 13);
    const auto recs = solve_mixed_point(LoadProgram::biaxial(strains, 1.0), p, {}, opt);
    REQUIRE(recs.size() == strains.size());
    CHECK(std::abs(recs[0].P[0]) < 1e-14);
    for (std::size_t k = 1; k < recs.size(); ++k) {
        CHECK(recs[k].P[0] > recs[k - 1].P[0]);
        CHECK(recs[k].P[1] > recs[k - 1].P[1]);
        CHECK(std::abs(recs[k].sigma[2]) < 1e-10);
    }
    // secant stiffness grows along the curve
    for (std::size_t k = 2; k < recs.size(); ++k)
        CHECK(recs[k].P[0] - recs[k - 1].P[0] > recs[k - 1].P[0] - recs[k - 2].P[0]);
}

TEST_CASE("loading then unloading with frozen density returns to zero stress")
{
    const MaterialParams p;
    MixedSolveOptions opt;
    opt.evolve_density = false;
    std::vector<double> path = linspace(1.0, 1.25, 10);
    const auto back = linspace(1.25, 1.0, 10);
    path.insert(path.end(), back.begin() + 1, back.end());
    const auto recs = solve_mixed_point(LoadProgram::uniaxial(path), p, {10.0}, opt);
    const auto& last = recs.back();
    for (int k = 0; k < 6; ++k)
        CHECK(std::abs(last.S[k]) < 1e-10);
    CHECK(last.F(1, 1) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("doubling a2 never decreases the density")
{
    MaterialParams p;
    p.growth.psi_crit = 2e-4;
    MaterialParams q = p;
    q.growth.a2 *= 2.0;
    std::vector<double> times;
    for (int k = 1; k <= 80; ++k)
        times.push_back(0.25 * k);
    const LoadProgram prog = LoadProgram::held(times, {1.15, 0.95, 0.95});
    const auto a = solve_mixed_point(prog, p, {});
    const auto b = solve_mixed_point(prog, q, {});
    bool strictly = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(b[k].rho >= a[k].rho);
        strictly = strictly || b[k].rho > a[k].rho;
    }
    CHECK(strictly);
}

TEST_CASE("unloaded maturation follows the Weibull curve")
{
    MaterialParams p;
    const auto recs = unloaded_maturation(p, 28.0, 0.01);
    REQUIRE(recs.back().time == Approx(28.0));
    const double scale = p.growth.a1 * p.growth.c_cell;
    CHECK(recs.back().rho / scale == Approx(weibull_alpha(28.0, p.growth)).epsilon(2e-3));
    for (const auto& r : recs) {
        CHECK(r.S == SymTensor3{});
        if (std::abs(r.time - 14.21) < 0.005)
            CHECK(r.rho / scale == Approx(0.632).epsilon(2e-3));
    }

    p.growth.a1 = 0.0;
    for (const auto& r : unloaded_maturation(p, 5.0, 0.5))
        CHECK(r.rho == 0.0);
}

TEST_CASE("program validation")
{
    LoadProgram p;
    CHECK_THROWS_AS(p.validate(), ParameterDomainError);
    p.steps = {{1.0, {1.1, std::nullopt, std::nullopt}}, {1.0, {1.2, std::nullopt, std::nullopt}}};
    CHECK_THROWS_AS(p.validate(), ParameterDomainError);
    p.steps = {{1.0, {std::nullopt, std::nullopt, std::nullopt}}};
    CHECK_THROWS_AS(p.validate(), ParameterDomainError);
    p.steps = {{1.0, {-0.1, std::nullopt, std::nullopt}}};
    CHECK_THROWS_AS(p.validate(), ParameterDomainError);
    CHECK_THROWS_AS(solve_mixed_point(p, MaterialParams{}, {}), ParameterDomainError);
}
