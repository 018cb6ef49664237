#include "biohybrid/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/SparseLU>

#include "biohybrid/errors.hpp"

namespace biohybrid {

void Bvp::validate() const
{
    mesh.validate();
    params.validate();
    for (const auto& d : dirichlet) {
        if (!mesh.node_sets.count(d.node_set))
            throw ConfigError("unknown node set '" + d.node_set + "' in Dirichlet condition");
        if (d.component < 0 || d.component > 2)
            throw ConfigError("Dirichlet component must be 0, 1 or 2");
        if (!std::isfinite(d.value))
            throw ConfigError("Dirichlet value must be finite");
    }
    for (const auto& p : pressures) {
        if (!mesh.face_sets.count(p.face_set))
            throw ConfigError("unknown face set '" + p.face_set + "' in pressure load");
        if (!std::isfinite(p.magnitude))
            throw ConfigError("pressure must be finite");
    }
    const TimeSchedule& s = schedule;
    if (s.ramp_steps < 1)
        throw ConfigError("ramp_steps must be >= 1");
    if (!(s.t_end >= 0.0) || !(s.dt_initial > 0.0) || !(s.dt_max > 0.0) || !(s.dt_min > 0.0) ||
        !(s.dt_growth >= 1.0))
        throw ConfigError("time schedule needs t_end >= 0, positive steps and dt_growth >= 1");
    if (solver.max_iterations < 1 || !(solver.tol_force > 0.0) || !(solver.tol_energy > 0.0))
        throw ConfigError("solver tolerances must be positive");
}

FemState initial_state(const Bvp& bvp)
{
    FemState s;
    s.u = Eigen::VectorXd::Zero(3 * static_cast<Eigen::Index>(bvp.mesh.num_nodes()));
    s.gauss.assign(bvp.mesh.num_elements(), ElementGaussData{});
    return s;
}

Assembly assemble(const Bvp& bvp, const Eigen::VectorXd& u, const std::vector<ElementGaussData>& history,
                  double dt, double t, double load_factor, bool want_tangent)
{
    const Mesh& mesh = bvp.mesh;
    const Eigen::Index ndof = 3 * static_cast<Eigen::Index>(mesh.num_nodes());
    Assembly out;
    out.f_int = Eigen::VectorXd::Zero(ndof);
    out.f_ext = Eigen::VectorXd::Zero(ndof);
    out.gauss.resize(mesh.num_elements());

    std::vector<Eigen::Triplet<double>> trip;
    if (want_tangent)
        trip.reserve(mesh.num_elements() * 576);

    ElementOptions eopt;
    eopt.mean_dilatation = bvp.solver.mean_dilatation;
    eopt.want_tangent = want_tangent;
    eopt.local = bvp.solver.local;

    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto& conn = mesh.hex8[e];
        std::array<Vec3, 8> X, ue;
        for (int a = 0; a < 8; ++a) {
            X[a] = mesh.nodes[conn[a]];
            for (int k = 0; k < 3; ++k)
                ue[a][k] = u(3 * conn[a] + k);
        }
        const ElementOutput eo =
            element_residual_stiffness(X, ue, history[e], bvp.params, dt, t, static_cast<int>(e), eopt);
        for (int a = 0; a < 8; ++a)
            for (int k = 0; k < 3; ++k)
                out.f_int(3 * conn[a] + k) += eo.r(3 * a + k);
        if (want_tangent)
            for (int a = 0; a < 8; ++a)
                for (int k = 0; k < 3; ++k)
                    for (int b = 0; b < 8; ++b)
                        for (int l = 0; l < 3; ++l)
                            trip.emplace_back(3 * conn[a] + k, 3 * conn[b] + l, eo.K(3 * a + k, 3 * b + l));
        out.gauss[e] = eo.gauss;
        out.energy += eo.energy;
    }

    for (const auto& ps : bvp.pressures) {
        const double P = load_factor * ps.magnitude;
        for (const FaceRef& fr : mesh.face_sets.at(ps.face_set)) {
            const auto& conn = mesh.hex8[fr.element];
            std::array<int, 4> nodes;
            std::array<Vec3, 4> x;
            for (int a = 0; a < 4; ++a) {
                nodes[a] = conn[kHexFaces[fr.face][a]];
                for (int k = 0; k < 3; ++k)
                    x[a][k] = mesh.nodes[nodes[a]][k] + u(3 * nodes[a] + k);
            }
            const FaceLoad fl = pressure_load(x, P);
            for (int a = 0; a < 4; ++a)
                for (int k = 0; k < 3; ++k)
                    out.f_ext(3 * nodes[a] + k) += fl.f(3 * a + k);
            if (want_tangent && bvp.solver.load_stiffness)
                for (int a = 0; a < 4; ++a)
                    for (int k = 0; k < 3; ++k)
                        for (int b = 0; b < 4; ++b)
                            for (int l = 0; l < 3; ++l)
                                trip.emplace_back(3 * nodes[a] + k, 3 * nodes[b] + l, -fl.K(3 * a + k, 3 * b + l));
        }
    }

    if (want_tangent) {
        out.K.resize(ndof, ndof);
        out.K.setFromTriplets(trip.begin(), trip.end());
    }
    return out;
}

namespace {

struct DofMap
{
    std::map<int, double> prescribed; // dof -> value at full load
    std::vector<int> free_index;      // dof -> index among free dofs, or -1
    int n_free = 0;
};

DofMap build_dof_map(const Bvp& bvp)
{
    DofMap m;
    for (const auto& d : bvp.dirichlet)
        for (int n : bvp.mesh.node_sets.at(d.node_set)) {
            const int dof = 3 * n + d.component;
            auto [it, inserted] = m.prescribed.emplace(dof, d.value);
            if (!inserted && it->second != d.value)
                throw ConfigError("conflicting Dirichlet values on node " + std::to_string(n));
        }
    m.free_index.assign(3 * bvp.mesh.num_nodes(), -1);
    for (int dof = 0; dof < static_cast<int>(m.free_index.size()); ++dof)
        if (!m.prescribed.count(dof))
            m.free_index[dof] = m.n_free++;
    return m;
}

double free_inf_norm(const Eigen::VectorXd& r, const DofMap& m)
{
    double v = 0.0;
    for (int dof = 0; dof < r.size(); ++dof)
        if (m.free_index[dof] >= 0)
            v = std::max(v, std::abs(r(dof)));
    return v;
}

double free_two_norm(const Eigen::VectorXd& r, const DofMap& m)
{
    double v = 0.0;
    for (int dof = 0; dof < r.size(); ++dof)
        if (m.free_index[dof] >= 0)
            v += r(dof) * r(dof);
    return std::sqrt(v);
}

[[noreturn]] void fail(const std::string& why, const std::vector<double>& trace, double res, int it)
{
    std::ostringstream os;
    os << "Newton solve failed: " << why << "; residual trace:";
    for (double r : trace)
        os << ' ' << r;
    throw SolverError(os.str(), res, it);
}

} // namespace

NewtonReport newton_solve(const Bvp& bvp, FemState& state, double dt, double load_factor)
{
    if (dt < 0.0)
        throw ParameterDomainError("time step must be >= 0");
    const DofMap dm = build_dof_map(bvp);
    const double t = state.t + dt;
    const SolverConfig& cfg = bvp.solver;

    Eigen::VectorXd u = state.u;
    for (const auto& [dof, value] : dm.prescribed)
        u(dof) = load_factor * value;

    NewtonReport rep;
    double e0 = 0.0, e_last = std::numeric_limits<double>::infinity();
    Eigen::VectorXd u_prev = u, du_full = Eigen::VectorXd::Zero(u.size());
    for (int it = 0;; ++it) {
        Assembly A;
        // an update that inverts an element is cut back before giving up
        for (int cut = 0;; ++cut) {
            try {
                A = assemble(bvp, u, state.gauss, dt, t, load_factor);
                break;
            } catch (const Error& ex) {
                if (it == 0 || cut >= 10)
                    fail(ex.what(), rep.trace, std::numeric_limits<double>::infinity(), it);
                u = u_prev + std::ldexp(1.0, -(cut + 1)) * du_full;
            }
        }
        const Eigen::VectorXd R = A.f_int - A.f_ext;
        const double res = free_inf_norm(R, dm);
        rep.trace.push_back(res);
        if (!std::isfinite(res))
            fail("non-finite residual", rep.trace, res, it);
        const bool energy_ok = it > 0 && e0 > 0.0 && e_last <= cfg.tol_energy * e0;
        if (res < cfg.tol_force || energy_ok || dm.n_free == 0) {
            rep.iterations = it;
            rep.residual = res;
            rep.reactions = R;
            state.u = u;
            state.gauss = std::move(A.gauss);
            state.t = t;
            return rep;
        }
        // stalled or diverging: give up early so the caller can cut the step
        if (cfg.early_exit && it >= 6 && !(res < 0.5 * rep.trace[it - 3]))
            fail("residual stalled", rep.trace, res, it);
        if (it >= cfg.max_iterations)
            fail("no convergence within " + std::to_string(cfg.max_iterations) + " iterations", rep.trace, res, it);

        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(A.K.nonZeros());
        for (int col = 0; col < A.K.outerSize(); ++col)
            for (Eigen::SparseMatrix<double>::InnerIterator itk(A.K, col); itk; ++itk) {
                const int fi = dm.free_index[itk.row()], fj = dm.free_index[itk.col()];
                if (fi >= 0 && fj >= 0)
                    trip.emplace_back(fi, fj, itk.value());
            }
        Eigen::SparseMatrix<double> Kff(dm.n_free, dm.n_free);
        Kff.setFromTriplets(trip.begin(), trip.end());
        Eigen::VectorXd rf(dm.n_free);
        for (int dof = 0; dof < R.size(); ++dof)
            if (dm.free_index[dof] >= 0)
                rf(dm.free_index[dof]) = -R(dof);

        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(Kff);
        if (lu.info() != Eigen::Success)
            fail("singular tangent", rep.trace, res, it);
        const Eigen::VectorXd du = lu.solve(rf);
        if (lu.info() != Eigen::Success || !du.allFinite())
            fail("linear solve failed", rep.trace, res, it);

        e_last = std::abs(du.dot(rf));
        if (it == 0)
            e0 = e_last;
        u_prev = u;
        du_full.setZero();
        for (int dof = 0; dof < R.size(); ++dof)
            if (dm.free_index[dof] >= 0)
                du_full(dof) = du(dm.free_index[dof]);

        // backtrack on the free residual norm; keep the best trial
        double alpha = 1.0;
        if (cfg.line_search) {
            const double r0 = rf.norm();
            double best = std::numeric_limits<double>::infinity(), best_alpha = 1.0;
            for (int ls = 0; ls < 6; ++ls, alpha *= 0.5) {
                double rn = std::numeric_limits<double>::infinity();
                try {
                    const Assembly T = assemble(bvp, u + alpha * du_full, state.gauss, dt, t, load_factor, false);
                    rn = free_two_norm(T.f_int - T.f_ext, dm);
                } catch (const Error&) {
                }
                if (std::isfinite(rn) && rn < best) {
                    best = rn;
                    best_alpha = alpha;
                }
                if (rn < r0)
                    break;
            }
            alpha = best_alpha;
            du_full *= alpha;
        }
        u += du_full;
    }
}

std::vector<double> element_mean_rho(const FemState& s)
{
    std::vector<double> out;
    out.reserve(s.gauss.size());
    for (const auto& g : s.gauss) {
        double m = 0.0;
        for (const auto& p : g)
            m += p.state.rho;
        out.push_back(m / 8.0);
    }
    return out;
}

SymTensor3 element_mean_sigma(const ElementGaussData& g)
{
    SymTensor3 m;
    for (const auto& p : g)
        m = m + p.sigma;
    return (1.0 / 8.0) * m;
}

MaturationRow summarize(const FemState& s)
{
    MaturationRow row;
    row.t = s.t;
    for (Eigen::Index n = 0; n < s.u.size() / 3; ++n)
        row.max_deflection = std::max(row.max_deflection, std::abs(s.u(3 * n + 2)));
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    std::size_t count = 0;
    for (const auto& g : s.gauss)
        for (const auto& p : g) {
            lo = std::min(lo, p.state.rho);
            hi = std::max(hi, p.state.rho);
            sum += p.state.rho;
            ++count;
        }
    if (count > 0) {
        row.rho_min = lo;
        row.rho_max = hi;
        row.rho_mean = sum / static_cast<double>(count);
    }
    return row;
}

MaturationResult march_maturation(const Bvp& bvp, const SnapshotCallback& on_snapshot)
{
    bvp.validate();
    const TimeSchedule& sch = bvp.schedule;
    MaturationResult res;
    FemState state = initial_state(bvp);

    const double full_inc = 1.0 / sch.ramp_steps;
    double lf = 0.0, inc = full_inc, last_inc = 0.0;
    Eigen::VectorXd last_du = Eigen::VectorXd::Zero(state.u.size());
    while (lf < 1.0 - 1e-12) {
        const double target = std::min(1.0, lf + inc);
        const Eigen::VectorXd u_n = state.u;
        // secant predictor from the previous load increment
        if (last_inc > 0.0)
            state.u += ((target - lf) / last_inc) * last_du;
        try {
            newton_solve(bvp, state, 0.0, target);
            last_du = state.u - u_n;
            last_inc = target - lf;
            lf = target;
            inc = std::min(2.0 * inc, full_inc);
        } catch (const SolverError& ex) {
            state.u = u_n;
            inc *= 0.5;
            if (inc < 1e-6)
                throw SolverError(std::string("load ramp failed: ") + ex.what(), ex.last_residual(),
                                  ex.iterations());
        }
    }
    res.rows.push_back(summarize(state));
    if (on_snapshot)
        on_snapshot(state);

    std::vector<double> snaps;
    for (double s : sch.snapshot_times)
        if (s > 0.0 && s <= sch.t_end)
            snaps.push_back(s);
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;

    const double eps = 1e-10;
    double dt = sch.dt_initial;
    while (state.t < sch.t_end - eps) {
        double h = std::min(dt, sch.t_end - state.t);
        if (next_snap < snaps.size())
            h = std::min(h, snaps[next_snap] - state.t);
        // Full-size steps never straddle a multiple of dt_max, so they land on
        // a fixed grid instead of leaving a short remnant before t_end or a
        // snapshot.  The collagen stress carries a dt-proportional growth
        // sensitivity term, so a sudden short step would soften the response.
        if (dt >= sch.dt_max) {
            const double grid = (std::floor(state.t / sch.dt_max + 1e-9) + 1.0) * sch.dt_max;
            h = std::min(h, grid - state.t);
        }
        try {
            newton_solve(bvp, state, h, 1.0);
        } catch (const SolverError& ex) {
            dt = 0.5 * h;
            if (dt < sch.dt_min)
                throw SolverError("time step fell below dt_min at t = " + std::to_string(state.t) + ": " +
                                      ex.what(),
                                  ex.last_residual(), ex.iterations());
            continue;
        }
        res.rows.push_back(summarize(state));
        while (next_snap < snaps.size() && state.t >= snaps[next_snap] - eps) {
            if (on_snapshot)
                on_snapshot(state);
            ++next_snap;
        }
        if (h >= dt - eps)
            dt = std::min(dt * sch.dt_growth, sch.dt_max);
    }
    res.final_state = std::move(state);
    return res;
}

Bvp make_strip_bvp(int nx, int ny, int nz, double pressure)
{
    Bvp bvp;
    bvp.mesh = make_strip_mesh(20.0, 6.0, 0.3, nx, ny, nz);
    for (const char* set : {"x0", "x1"})
        for (int c = 0; c < 3; ++c)
            bvp.dirichlet.push_back({set, c, 0.0});
    bvp.pressures.push_back({"bottom", pressure});
    bvp.params.collagen.kappa = 0.15;
    return bvp;
}

} // namespace biohybrid
