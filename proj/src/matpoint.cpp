#include "biohybrid/matpoint.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "biohybrid/errors.hpp"

namespace biohybrid {

void LoadProgram::validate() const
{
    if (steps.empty())
        throw ParameterDomainError("load program has no steps");
    if (output_every < 1)
        throw ParameterDomainError("load program output cadence must be >= 1");
    double prev = 0.0;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const LoadStep& s = steps[k];
        if (k > 0 && !(s.time > prev))
            throw ParameterDomainError("load program times must be strictly increasing");
        if (s.time < 0.0)
            throw ParameterDomainError("load program times must be >= 0");
        prev = s.time;
        bool controlled = false;
        for (const auto& a : s.axes) {
            if (!a)
                continue;
            controlled = true;
            const double stretch = measure == ControlMeasure::stretch ? *a : 1.0 + *a;
            if (!(stretch > 0.0))
                throw ParameterDomainError("prescribed stretch must be > 0");
        }
        if (!controlled)
            throw ParameterDomainError("every load step needs at least one controlled axis");
    }
}

LoadProgram LoadProgram::uniaxial(const std::vector<double>& values, ControlMeasure m)
{
    LoadProgram p;
    p.measure = m;
    for (std::size_t k = 0; k < values.size(); ++k)
        p.steps.push_back({static_cast<double>(k + 1), {values[k], std::nullopt, std::nullopt}});
    return p;
}

LoadProgram LoadProgram::biaxial(const std::vector<double>& strains_x, double ratio_y)
{
    LoadProgram p;
    p.measure = ControlMeasure::engineering_strain;
    for (std::size_t k = 0; k < strains_x.size(); ++k)
        p.steps.push_back({static_cast<double>(k + 1), {strains_x[k], ratio_y * strains_x[k], std::nullopt}});
    return p;
}

LoadProgram LoadProgram::held(const std::vector<double>& times, std::array<double, 3> stretch)
{
    LoadProgram p;
    for (double t : times)
        p.steps.push_back({t, {stretch[0], stretch[1], stretch[2]}});
    return p;
}

namespace {

PointRecord make_record(double t, const Tensor3& f, const PointResponse& r)
{
    PointRecord rec;
    rec.time = t;
    rec.F = f;
    rec.S = r.st.S;
    rec.sigma = cauchy_stress(f, r.st.S);
    const Tensor3 p = f * r.st.S;
    rec.P = {p(0, 0), p(1, 1), p(2, 2)};
    rec.rho = r.state.rho;
    rec.psi_m = r.psi_m;
    return rec;
}

} // namespace

std::vector<PointRecord> solve_mixed_point(const LoadProgram& program, const MaterialParams& params,
                                           const GrowthState& init, const MixedSolveOptions& opt)
{
    program.validate();
    params.validate();

    std::vector<PointRecord> out;
    std::array<double, 3> stretch{1.0, 1.0, 1.0};
    GrowthState state = init;
    double t_prev = 0.0;

    for (std::size_t k = 0; k < program.steps.size(); ++k) {
        const LoadStep& step = program.steps[k];
        const double dt = opt.evolve_density ? step.time - t_prev : 0.0;

        std::vector<int> free;
        for (int i = 0; i < 3; ++i) {
            if (step.axes[i])
                stretch[i] = program.measure == ControlMeasure::stretch ? *step.axes[i] : 1.0 + *step.axes[i];
            else
                free.push_back(i);
        }

        auto evaluate = [&](const std::array<double, 3>& l) {
            const Tensor3 f = Tensor3::diag(l[0], l[1], l[2]);
            return total_response(f, params, state, dt, step.time, opt.response);
        };
        // free Cauchy normal stresses, sigma_ii = lambda_i^2 S_ii / J
        auto free_sigma = [&](const std::array<double, 3>& l, const PointResponse& r) {
            const double J = l[0] * l[1] * l[2];
            double m = 0.0;
            for (int i : free)
                m = std::max(m, std::abs(l[i] * l[i] * r.st.S[i] / J));
            return m;
        };

        PointResponse resp = evaluate(stretch);
        double res = free_sigma(stretch, resp);
        int it = 0;
        while (res > opt.stress_tolerance) {
            if (++it > opt.max_iterations) {
                std::ostringstream os;
                os << "mixed control did not converge at t = " << step.time << ": max |sigma_free| = " << res;
                throw SolverError(os.str(), res, opt.max_iterations);
            }
            const int n = static_cast<int>(free.size());
            Eigen::MatrixXd jac(n, n);
            Eigen::VectorXd rhs(n);
            for (int a = 0; a < n; ++a) {
                const int i = free[a];
                rhs(a) = -resp.st.S[i];
                // dS_ii / dlambda_j = CC_iijj lambda_j
                for (int b = 0; b < n; ++b)
                    jac(a, b) = resp.st.CC(i, free[b]) * stretch[free[b]];
            }
            const Eigen::VectorXd d = jac.partialPivLu().solve(rhs);

            // backtrack until the stretches stay positive and the residual drops
            double alpha = 1.0;
            for (int ls = 0;; ++ls) {
                std::array<double, 3> trial = stretch;
                bool ok = true;
                for (int a = 0; a < n; ++a) {
                    trial[free[a]] += alpha * d(a);
                    ok = ok && trial[free[a]] > 0.0;
                }
                if (ok) {
                    const PointResponse tr = evaluate(trial);
                    const double tres = free_sigma(trial, tr);
                    if (tres < res || ls >= 30) {
                        stretch = trial;
                        resp = tr;
                        res = tres;
                        break;
                    }
                }
                if (ls >= 30)
                    throw SolverError("mixed control line search failed", res, it);
                alpha *= 0.5;
            }
        }

        state = resp.state;
        t_prev = step.time;
        const bool last = k + 1 == program.steps.size();
        if (last || (k + 1) % program.output_every == 0)
            out.push_back(make_record(step.time, Tensor3::diag(stretch[0], stretch[1], stretch[2]), resp));
    }
    return out;
}

std::vector<PointRecord> unloaded_maturation(const MaterialParams& params, double t_end, double dt)
{
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw ParameterDomainError("maturation needs t_end > 0 and dt > 0");
    const int n = static_cast<int>(std::ceil(t_end / dt - 1e-9));
    std::vector<double> times;
    times.reserve(n);
    for (int k = 1; k <= n; ++k)
        times.push_back(k == n ? t_end : k * dt);
    return solve_mixed_point(LoadProgram::held(times, {1.0, 1.0, 1.0}), params, GrowthState{});
}

} // namespace biohybrid
