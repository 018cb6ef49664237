#include "biohybrid/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "biohybrid/errors.hpp"
#include "biohybrid/matpoint.hpp"
#include "biohybrid/solver.hpp"

namespace biohybrid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd clip(Eigen::VectorXd x, const NelderMeadConfig& c)
{
    if (c.lower.size() == x.size())
        x = x.cwiseMax(c.lower);
    if (c.upper.size() == x.size())
        x = x.cwiseMin(c.upper);
    return x;
}

} // namespace

NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadConfig& cfg)
{
    const Eigen::Index n = x0.size();
    if (n == 0)
        throw ParameterDomainError("nelder_mead needs at least one parameter");
    if ((cfg.lower.size() != 0 && cfg.lower.size() != n) || (cfg.upper.size() != 0 && cfg.upper.size() != n))
        throw ParameterDomainError("bound vectors must match the parameter count");
    if (clip(x0, cfg) != x0)
        throw ParameterDomainError("initial point lies outside the bounds");

    NelderMeadResult res;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : kInf;
    };

    std::vector<Eigen::VectorXd> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    fs[0] = f(x0);
    ++res.evaluations;
    if (!std::isfinite(fs[0]))
        throw ParameterDomainError("objective is not finite at the initial point");
    for (Eigen::Index i = 0; i < n; ++i) {
        double step = x0(i) != 0.0 ? 0.05 * x0(i) : 0.00025;
        Eigen::VectorXd x = x0;
        x(i) += step;
        if (clip(x, cfg)(i) != x(i)) {
            x(i) = x0(i) - step;
        }
        xs[i + 1] = clip(x, cfg);
        fs[i + 1] = eval(xs[i + 1]);
    }

    std::vector<int> order(n + 1);
    auto sort = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::vector<Eigen::VectorXd> x2;
        std::vector<double> f2;
        for (int k : order) {
            x2.push_back(xs[k]);
            f2.push_back(fs[k]);
        }
        xs = std::move(x2);
        fs = std::move(f2);
    };
    sort();

    while (true) {
        double diameter = 0.0;
        for (Eigen::Index i = 1; i <= n; ++i)
            diameter = std::max(diameter, (xs[i] - xs[0]).lpNorm<Eigen::Infinity>());
        if (diameter < cfg.diameter_tol && fs[n] - fs[0] < cfg.fspread_tol) {
            res.converged = true;
            break;
        }
        if (res.evaluations >= cfg.max_evaluations)
            break;
        ++res.iterations;

        Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i)
            c += xs[i];
        c /= static_cast<double>(n);

        const Eigen::VectorXd xr = clip(c + (c - xs[n]), cfg);
        const double fr = eval(xr);
        bool shrink = false;
        if (fr < fs[0]) {
            const Eigen::VectorXd xe = clip(c + 2.0 * (c - xs[n]), cfg);
            const double fe = eval(xe);
            if (fe < fr) {
                xs[n] = xe;
                fs[n] = fe;
            } else {
                xs[n] = xr;
                fs[n] = fr;
            }
        } else if (fr < fs[n - 1]) {
            xs[n] = xr;
            fs[n] = fr;
        } else if (fr < fs[n]) {
            const Eigen::VectorXd xc = clip(c + 0.5 * (xr - c), cfg);
            const double fc = eval(xc);
            if (fc <= fr) {
                xs[n] = xc;
                fs[n] = fc;
            } else {
                shrink = true;
            }
        } else {
            const Eigen::VectorXd xcc = clip(c + 0.5 * (xs[n] - c), cfg);
            const double fcc = eval(xcc);
            if (fcc < fs[n]) {
                xs[n] = xcc;
                fs[n] = fcc;
            } else {
                shrink = true;
            }
        }
        if (shrink)
            for (Eigen::Index i = 1; i <= n; ++i) {
                xs[i] = clip(xs[0] + 0.5 * (xs[i] - xs[0]), cfg);
                fs[i] = eval(xs[i]);
            }
        sort();
        res.trace.push_back(fs[0]);
    }
    res.x = xs[0];
    res.f = fs[0];
    return res;
}

void DataSeries::validate() const
{
    if (x.size() != y.size())
        throw ParameterDomainError("data series '" + y_label + "' has mismatched lengths");
    if (!weight.empty() && weight.size() != x.size())
        throw ParameterDomainError("data series '" + y_label + "' has a weight count mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw ParameterDomainError("data series '" + y_label + "' has non-finite values");
        if (!(weight_at(i) >= 0.0) || !std::isfinite(weight_at(i)))
            throw ParameterDomainError("data series '" + y_label + "' has a negative weight");
        if (i > 0 && !(x[i] > x[i - 1]))
            throw ParameterDomainError("data series '" + y_label + "' abscissa must be strictly increasing");
    }
}

WeibullFit fit_weibull(const DataSeries& points)
{
    if (points.x.size() < 3)
        throw ParameterDomainError("Weibull fit needs at least three points");
    std::vector<std::size_t> idx(points.x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return points.x[a] < points.x[b]; });
    DataSeries s;
    s.x_label = points.x_label;
    s.y_label = points.y_label;
    for (auto i : idx) {
        s.x.push_back(points.x[i]);
        s.y.push_back(points.y[i]);
        if (!points.weight.empty())
            s.weight.push_back(points.weight[i]);
    }
    s.validate();
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (s.y[i] < 0.0 || s.y[i] > 1.0)
            throw ParameterDomainError("Weibull ordinates must be relative densities in [0, 1]");
        if (s.x[i] < 0.0)
            throw ParameterDomainError("Weibull abscissae must be non-negative times");
    }

    // start from the time where the data cross 1 - 1/e
    const double target = 1.0 - std::exp(-1.0);
    double tau0 = s.x.back() > 0.0 ? 0.5 * s.x.back() : 1.0;
    for (std::size_t i = 1; i < s.x.size(); ++i)
        if (s.y[i - 1] < target && s.y[i] >= target) {
            tau0 = s.x[i - 1] + (target - s.y[i - 1]) / (s.y[i] - s.y[i - 1]) * (s.x[i] - s.x[i - 1]);
            break;
        }
    if (!(tau0 > 0.0))
        tau0 = 1.0;

    auto sse = [&](const Eigen::VectorXd& p) {
        GrowthParams g;
        g.tau = p(0);
        g.h = p(1);
        double v = 0.0;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double r = weibull_alpha(s.x[i], g) - s.y[i];
            v += s.weight_at(i) * r * r;
        }
        return v;
    };

    NelderMeadConfig cfg;
    cfg.lower = Eigen::Vector2d(1e-9, 1.0 + 1e-9);
    cfg.upper = Eigen::Vector2d(1e9, 100.0);
    WeibullFit fit;
    fit.optimizer = nelder_mead(sse, Eigen::Vector2d(tau0, 1.5), cfg);
    // a restart from the optimum removes simplex degeneration
    fit.optimizer = nelder_mead(sse, fit.optimizer.x, cfg);
    fit.tau = fit.optimizer.x(0);
    fit.h = fit.optimizer.x(1);
    GrowthParams g;
    g.tau = fit.tau;
    g.h = fit.h;
    double sum = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i)
        sum += std::pow(weibull_alpha(s.x[i], g) - s.y[i], 2);
    fit.rms = std::sqrt(sum / static_cast<double>(s.x.size()));
    return fit;
}

namespace {

struct NamedParameter
{
    const char* name;
    double* (*ref)(MaterialParams&);
};

#define BIOHYBRID_PARAM(label, member) \
    NamedParameter { label, [](MaterialParams& p) { return &p.member; } }

const std::vector<NamedParameter>& parameter_table()
{
    static const std::vector<NamedParameter> table{
        BIOHYBRID_PARAM("matrix.lambda", matrix.lambda),
        BIOHYBRID_PARAM("matrix.mu", matrix.mu),
        BIOHYBRID_PARAM("collagen.k1", collagen.k1),
        BIOHYBRID_PARAM("collagen.k2", collagen.k2),
        BIOHYBRID_PARAM("collagen.kappa", collagen.kappa),
        BIOHYBRID_PARAM("collagen.rho_f", collagen.rho_f),
        BIOHYBRID_PARAM("textile.K1_1", textile.K1_1),
        BIOHYBRID_PARAM("textile.K1_2", textile.K1_2),
        BIOHYBRID_PARAM("textile.K2_1", textile.K2_1),
        BIOHYBRID_PARAM("textile.K2_2", textile.K2_2),
        BIOHYBRID_PARAM("textile.Kcoup1", textile.Kcoup1),
        BIOHYBRID_PARAM("textile.Kcoup2", textile.Kcoup2),
        BIOHYBRID_PARAM("textile.KcoupAni", textile.KcoupAni),
        BIOHYBRID_PARAM("growth.a1", growth.a1),
        BIOHYBRID_PARAM("growth.a2", growth.a2),
        BIOHYBRID_PARAM("growth.psi_crit", growth.psi_crit),
        BIOHYBRID_PARAM("growth.rho_th", growth.rho_th),
        BIOHYBRID_PARAM("growth.c_cell", growth.c_cell),
        BIOHYBRID_PARAM("growth.tau", growth.tau),
        BIOHYBRID_PARAM("growth.h", growth.h),
    };
    return table;
}

#undef BIOHYBRID_PARAM

double* lookup(MaterialParams& p, const std::string& name)
{
    for (const auto& e : parameter_table())
        if (name == e.name)
            return e.ref(p);
    throw ConfigError("unknown parameter name '" + name + "'");
}

} // namespace

void set_parameter(MaterialParams& p, const std::string& name, double value)
{
    *lookup(p, name) = value;
}

double get_parameter(const MaterialParams& p, const std::string& name)
{
    MaterialParams copy = p;
    return *lookup(copy, name);
}

std::vector<std::string> parameter_names()
{
    std::vector<std::string> out;
    for (const auto& e : parameter_table())
        out.emplace_back(e.name);
    return out;
}

void FitProblem::validate() const
{
    const auto n = static_cast<Eigen::Index>(names.size());
    if (n == 0)
        throw ConfigError("fit problem has no free parameters");
    if (x0.size() != n || lower.size() != n || upper.size() != n)
        throw ConfigError("fit problem vectors must match the parameter names");
    MaterialParams probe = base;
    for (Eigen::Index i = 0; i < n; ++i) {
        set_parameter(probe, names[i], x0(i));
        if (!(lower(i) <= x0(i) && x0(i) <= upper(i)))
            throw ConfigError("initial guess for '" + names[i] + "' lies outside its bounds");
    }
    if (series.empty())
        throw ConfigError("fit problem needs at least one data series");
    for (const auto& s : series) {
        s.data.validate();
        if (s.model == ForwardModel::fem && !s.fem.bvp)
            throw ConfigError("FEM forward model needs a boundary value problem");
    }
}

std::vector<double> forward_stress(const MaterialParams& p, const FitSeries& s)
{
    const GrowthState init{s.relative_density * p.collagen.rho_f, 0.0, 0.0};
    std::vector<double> out;
    out.reserve(s.data.x.size());
    if (s.model == ForwardModel::fem) {
        Bvp bvp = *s.fem.bvp;
        bvp.params = p;
        const auto& nodes = bvp.mesh.node_sets.at(s.fem.reaction_set);
        FemState state = initial_state(bvp);
        for (auto& g : state.gauss)
            for (auto& gp : g)
                gp.state = init;
        for (double x : s.data.x) {
            const NewtonReport rep = newton_solve(bvp, state, 0.0, x / s.fem.x_at_full_load);
            double force = 0.0;
            for (int n : nodes)
                force += rep.reactions(3 * n + s.fem.component);
            out.push_back(force / s.fem.area);
        }
        return out;
    }

    MixedSolveOptions opt;
    opt.evolve_density = false;
    const LoadProgram prog = s.model == ForwardModel::uniaxial
                                 ? LoadProgram::uniaxial(s.data.x, ControlMeasure::engineering_strain)
                                 : LoadProgram::biaxial(s.data.x, s.ratio_y);
    for (const PointRecord& r : solve_mixed_point(prog, p, init, opt))
        out.push_back(r.P[s.stress_axis]);
    return out;
}

double fit_objective(const FitProblem& problem, const Eigen::VectorXd& x)
{
    MaterialParams p = problem.base;
    for (std::size_t i = 0; i < problem.names.size(); ++i)
        set_parameter(p, problem.names[i], x(static_cast<Eigen::Index>(i)));
    try {
        p.validate();
        double sum = 0.0;
        for (const auto& s : problem.series) {
            const std::vector<double> model = forward_stress(p, s);
            for (std::size_t k = 0; k < model.size(); ++k)
                sum += s.data.weight_at(k) * std::pow(model[k] - s.data.y[k], 2);
        }
        return std::isfinite(sum) ? sum : kInf;
    } catch (const Error&) {
        return kInf;
    }
}

FitResult fit_material(const FitProblem& problem)
{
    problem.validate();
    NelderMeadConfig cfg = problem.optimizer;
    cfg.lower = problem.lower;
    cfg.upper = problem.upper;
    FitResult out;
    out.optimizer = nelder_mead([&](const Eigen::VectorXd& x) { return fit_objective(problem, x); }, problem.x0, cfg);
    out.x = out.optimizer.x;
    out.objective = out.optimizer.f;
    out.params = problem.base;
    for (std::size_t i = 0; i < problem.names.size(); ++i)
        set_parameter(out.params, problem.names[i], out.x(static_cast<Eigen::Index>(i)));
    for (const auto& s : problem.series) {
        const std::vector<double> model = forward_stress(out.params, s);
        double sum = 0.0;
        for (std::size_t k = 0; k < model.size(); ++k)
            sum += std::pow(model[k] - s.data.y[k], 2);
        out.rms.push_back(std::sqrt(sum / static_cast<double>(model.size())));
    }
    return out;
}

} // namespace biohybrid
