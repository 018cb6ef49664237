#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include "biohybrid/calibration.hpp"
#include "biohybrid/errors.hpp"
#include "biohybrid/solver.hpp"

using namespace biohybrid;
using doctest::Approx;

namespace {

DataSeries assay_points()
{
    DataSeries d;
    d.x_label = "t";
    d.y_label = "relative density";
    d.x = {0, 7, 14, 21, 28};
    d.y = {0, 0.28486, 0.606, 0.8357, 1.0};
    return d;
}

DataSeries synthetic_weibull(double tau, double h)
{
    GrowthParams g;
    g.tau = tau;
    g.h = h;
    DataSeries d;
    for (int k = 0; k <= 10; ++k) {
        d.x.push_back(3.0 * k);
        d.y.push_back(weibull_alpha(3.0 * k, g));
    }
    return d;
}

MaterialParams collagen_only()
{
    MaterialParams p;
    p.textile.K1_1 = p.textile.K1_2 = p.textile.K2_1 = p.textile.K2_2 = 0.0;
    p.textile.Kcoup1 = p.textile.Kcoup2 = p.textile.KcoupAni = 0.0;
    return p;
}

std::vector<double> strains(double max, int n)
{
    std::vector<double> v;
    for (int k = 1; k <= n; ++k)
        v.push_back(max * k / n);
    return v;
}

FitSeries synthetic_series(const MaterialParams& truth, ForwardModel m, double rel, double ratio = 1.0)
{
    FitSeries s;
    s.model = m;
    s.relative_density = rel;
    s.ratio_y = ratio;
    s.data.x = strains(m == ForwardModel::uniaxial ? 0.25 : 0.1, 10);
    s.data.y = forward_stress(truth, s);
    return s;
}

} // namespace

TEST_CASE("simplex finds the minimum of a shifted quadratic")
{
    for (int n : {1, 2, 4}) {
        const auto r = nelder_mead([](const Eigen::VectorXd& x) { return (x.array() - 3.0).square().sum(); },
                                   Eigen::VectorXd::Zero(n));
        CHECK(r.converged);
        for (int i = 0; i < n; ++i)
            CHECK(r.x(i) == Approx(3.0).epsilon(1e-6));
    }
}

TEST_CASE("simplex solves Rosenbrock")
{
    const auto r = nelder_mead(
        [](const Eigen::VectorXd& x) { return 100 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1 - x(0), 2); },
        Eigen::Vector2d(-1.2, 1.0));
    CHECK(r.x(0) == Approx(1.0).epsilon(1e-4));
    CHECK(r.x(1) == Approx(1.0).epsilon(1e-4));
    // accepted iterations never raise the best value
    for (std::size_t k = 1; k < r.trace.size(); ++k)
        CHECK(r.trace[k] <= r.trace[k - 1]);
}

TEST_CASE("simplex respects bounds and rejects bad starts")
{
    NelderMeadConfig cfg;
    cfg.lower = Eigen::Vector2d(0.5, -10);
    cfg.upper = Eigen::Vector2d(10, 10);
    const auto r =
        nelder_mead([](const Eigen::VectorXd& x) { return x.squaredNorm(); }, Eigen::Vector2d(2.0, 2.0), cfg);
    CHECK(r.x(0) == Approx(0.5).epsilon(1e-7));
    CHECK(std::abs(r.x(1)) < 1e-5);

    CHECK_THROWS_AS(nelder_mead([](const Eigen::VectorXd&) { return NAN; }, Eigen::Vector2d(1, 1)),
                    ParameterDomainError);
    CHECK_THROWS_AS(nelder_mead([](const Eigen::VectorXd& x) { return x.squaredNorm(); }, Eigen::Vector2d(0, 0),
                                cfg),
                    ParameterDomainError);
    // non-finite values away from the start are rejected points
    const auto s = nelder_mead(
        [](const Eigen::VectorXd& x) { return x(0) < 0.0 ? INFINITY : std::pow(x(0) - 1.0, 2); },
        Eigen::VectorXd::Constant(1, 4.0));
    CHECK(s.x(0) == Approx(1.0).epsilon(1e-6));

    NelderMeadConfig tiny;
    tiny.max_evaluations = 10;
    const auto t = nelder_mead([](const Eigen::VectorXd& x) { return x.squaredNorm(); }, Eigen::Vector2d(3, 4),
                               tiny);
    CHECK_FALSE(t.converged);
    CHECK(t.evaluations <= 14);
}

TEST_CASE("Weibull fit of the collagen assay points")
{
    const WeibullFit f = fit_weibull(assay_points());
    CHECK(f.tau == Approx(14.21).epsilon(0.5 / 14.21));
    CHECK(f.h == Approx(1.65).epsilon(0.10 / 1.65));
    CHECK(f.tau >= 13.7);
    CHECK(f.tau <= 14.7);
    CHECK(f.h >= 1.55);
    CHECK(f.h <= 1.75);
}

TEST_CASE("Weibull synthetic round trips")
{
    const WeibullFit a = fit_weibull(synthetic_weibull(10.0, 2.0));
    CHECK(a.tau == Approx(10.0).epsilon(1e-4));
    CHECK(a.h == Approx(2.0).epsilon(1e-4));
    const WeibullFit b = fit_weibull(synthetic_weibull(14.21, 1.65));
    CHECK(b.tau == Approx(14.21).epsilon(1e-4));
    CHECK(b.h == Approx(1.65).epsilon(1e-4));
}

TEST_CASE("Weibull fit: weights, ordering and errors")
{
    const WeibullFit base = fit_weibull(assay_points());

    DataSeries outlier = assay_points();
    outlier.x.push_back(35.0);
    outlier.y.push_back(0.1);
    outlier.weight = {1, 1, 1, 1, 1, 0};
    const WeibullFit w = fit_weibull(outlier);
    CHECK(w.tau == Approx(base.tau).epsilon(1e-6));
    CHECK(w.h == Approx(base.h).epsilon(1e-6));

    DataSeries shuffled;
    shuffled.x = {21, 0, 28, 7, 14};
    shuffled.y = {0.8357, 0, 1.0, 0.28486, 0.606};
    const WeibullFit s = fit_weibull(shuffled);
    CHECK(s.tau == Approx(base.tau).epsilon(1e-6));
    CHECK(s.h == Approx(base.h).epsilon(1e-6));

    DataSeries scaled = assay_points();
    scaled.weight.assign(5, 7.5);
    const WeibullFit sc = fit_weibull(scaled);
    CHECK(sc.tau == Approx(base.tau).epsilon(1e-6));
    CHECK(sc.optimizer.f == Approx(7.5 * base.optimizer.f).epsilon(1e-4));

    DataSeries two;
    two.x = {1, 2};
    two.y = {0.1, 0.2};
    CHECK_THROWS_AS(fit_weibull(two), ParameterDomainError);
    DataSeries above = assay_points();
    above.y[4] = 1.2;
    CHECK_THROWS_AS(fit_weibull(above), ParameterDomainError);
    DataSeries dup = assay_points();
    dup.x[2] = 7;
    CHECK_THROWS_AS(fit_weibull(dup), ParameterDomainError);
}

TEST_CASE("parameter names address the material fields")
{
    MaterialParams p;
    for (const auto& name : parameter_names()) {
        set_parameter(p, name, 0.123);
        CHECK(get_parameter(p, name) == 0.123);
    }
    CHECK(p.collagen.k1 == 0.123);
    CHECK(p.textile.KcoupAni == 0.123);
    CHECK_THROWS_AS(set_parameter(p, "collagen.k3", 1.0), ConfigError);
}

TEST_CASE("collagen stiffness recovered from three density levels")
{
    const MaterialParams truth = collagen_only();
    FitProblem prob;
    prob.base = truth;
    prob.names = {"collagen.k1", "collagen.k2"};
    prob.x0 = Eigen::Vector2d(0.6, 5.0);
    prob.lower = Eigen::Vector2d(1e-3, 0.1);
    prob.upper = Eigen::Vector2d(10.0, 20.0);
    for (double rel : {0.6060, 0.8357, 1.0})
        prob.series.push_back(synthetic_series(truth, ForwardModel::uniaxial, rel));
    const FitResult r = fit_material(prob);
    CHECK(r.x(0) == Approx(0.825).epsilon(0.02));
    CHECK(r.x(1) == Approx(4.0).epsilon(0.02));
    REQUIRE(r.rms.size() == 3);
    for (double rms : r.rms)
        CHECK(rms < 1e-4);

    // zero residual at the start
    prob.x0 = Eigen::Vector2d(0.825, 4.0);
    const FitResult z = fit_material(prob);
    CHECK(z.objective == Approx(0.0).scale(1.0));
    CHECK(z.x(0) == Approx(0.825).epsilon(1e-12));
    CHECK(z.x(1) == Approx(4.0).epsilon(1e-12));
}

TEST_CASE("textile fit uses both biaxial ratios")
{
    MaterialParams truth;
    truth.matrix.mu = 1e-9;
    truth.matrix.lambda = 0.0;
    FitProblem prob;
    prob.base = truth;
    prob.names = {"textile.K1_1", "textile.K2_1"};
    prob.x0 = Eigen::Vector2d(0.03, 0.3);
    prob.lower = Eigen::Vector2d(0.0, 0.0);
    prob.upper = Eigen::Vector2d(5.0, 5.0);
    FitSeries equi = synthetic_series(truth, ForwardModel::biaxial, 0.0, 1.0);
    FitSeries three = synthetic_series(truth, ForwardModel::biaxial, 0.0, 1.0 / 3.0);
    // perturb the data so that the two protocols disagree slightly
    for (double& y : equi.data.y)
        y *= 1.05;
    prob.series = {equi, three};
    const FitResult both = fit_material(prob);
    REQUIRE(both.rms.size() == 2);
    prob.series = {equi};
    const FitResult only = fit_material(prob);
    CHECK((both.x - only.x).norm() > 1e-3 * only.x.norm());

    // uniform weight scaling leaves the argmin alone
    prob.series = {equi, three};
    for (auto& s : prob.series)
        s.data.weight.assign(s.data.x.size(), 4.0);
    const FitResult scaled = fit_material(prob);
    CHECK((scaled.x - both.x).norm() < 1e-6 * both.x.norm());
    CHECK(scaled.objective == Approx(4.0 * both.objective).epsilon(1e-4));
}

TEST_CASE("FEM forward model agrees with the point model on one element")
{
    auto bvp = std::make_shared<Bvp>();
    bvp->mesh = make_strip_mesh(1, 1, 1, 1, 1, 1);
    bvp->dirichlet = {{"x0", 0, 0.0}, {"y0", 1, 0.0}, {"z0", 2, 0.0}, {"x1", 0, 0.2}};
    bvp->solver.tol_force = 1e-12;
    bvp->solver.tol_energy = 1e-40;

    FitSeries point;
    point.model = ForwardModel::uniaxial;
    point.relative_density = 0.8357;
    point.data.x = strains(0.2, 5);
    point.data.y.assign(5, 0.0);
    FitSeries fem = point;
    fem.model = ForwardModel::fem;
    fem.fem.bvp = bvp;
    fem.fem.reaction_set = "x1";
    fem.fem.component = 0;
    fem.fem.area = 1.0;
    fem.fem.x_at_full_load = 0.2;

    const MaterialParams p;
    const auto a = forward_stress(p, point);
    const auto b = forward_stress(p, fem);
    for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(b[k] == Approx(a[k]).epsilon(1e-8));
}

TEST_CASE("fit problem validation")
{
    FitProblem prob;
    CHECK_THROWS_AS(prob.validate(), ConfigError);
    prob.names = {"collagen.k1"};
    prob.x0 = Eigen::VectorXd::Constant(1, 2.0);
    prob.lower = Eigen::VectorXd::Constant(1, 0.0);
    prob.upper = Eigen::VectorXd::Constant(1, 1.0);
    prob.series.push_back(synthetic_series(collagen_only(), ForwardModel::uniaxial, 1.0));
    CHECK_THROWS_AS(prob.validate(), ConfigError);
    prob.upper(0) = 5.0;
    CHECK_NOTHROW(prob.validate());
    prob.names = {"nope"};
    CHECK_THROWS_AS(prob.validate(), ConfigError);
}
