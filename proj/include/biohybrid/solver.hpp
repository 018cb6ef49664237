#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "biohybrid/element.hpp"
#include "biohybrid/mesh.hpp"

namespace biohybrid {

struct DirichletSpec
{
    std::string node_set;
    int component = 0;  // 0, 1, 2
    double value = 0.0; // prescribed displacement at full load, mm
    bool operator==(const DirichletSpec&) const = default;
};

struct PressureSpec
{
    std::string face_set;
    double magnitude = 0.0; // MPa, positive pushes against the outward normal
    bool operator==(const PressureSpec&) const = default;
};

struct SolverConfig
{
    double tol_force = 1e-8;   // N, infinity norm of the free residual
    double tol_energy = 1e-10; // relative energy norm |du . R| / |du0 . R0|
    int max_iterations = 25;
    bool load_stiffness = true; // follower pressure contribution to the tangent
    bool line_search = false;   // backtracking on the residual norm
    bool early_exit = true;     // stop when the residual stops shrinking
    bool mean_dilatation = true;
    LocalNewtonControls local;
    bool operator==(const SolverConfig&) const = default;
};

struct TimeSchedule
{
    int ramp_steps = 5;
    double t_end = 28.0;        // days
    double dt_initial = 0.002;  // days
    double dt_max = 0.25;       // days
    double dt_growth = 1.25;    // factor between consecutive steps
    double dt_min = 1e-6;       // floor for step bisection
    std::vector<double> snapshot_times;
    bool operator==(const TimeSchedule&) const = default;
};

struct Bvp
{
    Mesh mesh;
    std::vector<DirichletSpec> dirichlet;
    std::vector<PressureSpec> pressures;
    MaterialParams params;
    TimeSchedule schedule;
    SolverConfig solver;

    // Every referenced set exists, components in range, schedule sane.
    void validate() const;
};

// Displacements (3 per node) plus per-element Gauss point data.
struct FemState
{
    Eigen::VectorXd u;
    std::vector<ElementGaussData> gauss;
    double t = 0.0;
};

FemState initial_state(const Bvp& bvp);

struct Assembly
{
    Eigen::VectorXd f_int;
    Eigen::VectorXd f_ext;
    Eigen::SparseMatrix<double> K; // d(f_int - f_ext)/du, all dofs
    std::vector<ElementGaussData> gauss;
    double energy = 0.0; // stored energy
};

// Global internal/external forces for displacements u, history from `state`.
Assembly assemble(const Bvp& bvp, const Eigen::VectorXd& u, const std::vector<ElementGaussData>& history,
                  double dt, double t, double load_factor, bool want_tangent = true);

struct NewtonReport
{
    int iterations = 0;
    double residual = 0.0;         // final free residual, inf norm
    std::vector<double> trace;     // free residual per iteration
    Eigen::VectorXd reactions;     // f_int - f_ext at every dof (nonzero on constrained ones)
};

// Equilibrium at time t with step dt (0 freezes growth) and the loads scaled
// by load_factor.  On success the state is updated (u, Gauss data, t += dt);
// on failure it is left untouched and SolverError is thrown.
NewtonReport newton_solve(const Bvp& bvp, FemState& state, double dt, double load_factor);

struct MaturationRow
{
    double t = 0.0;
    double max_deflection = 0.0; // max |u_z| over nodes, mm
    double rho_min = 0.0;
    double rho_max = 0.0;
    double rho_mean = 0.0;
};

// Volume-unweighted mean of the Gauss point densities of each element.
std::vector<double> element_mean_rho(const FemState& s);
SymTensor3 element_mean_sigma(const ElementGaussData& g);
MaturationRow summarize(const FemState& s);

struct MaturationResult
{
    std::vector<MaturationRow> rows; // first row: end of the pressure ramp (t = 0)
    FemState final_state;
};

using SnapshotCallback = std::function<void(const FemState&)>;

// Ramp loads in schedule.ramp_steps solves with dt = 0 (halving the load
// increment on failure), then march to t_end with growth active.  Each failed
// time step is retried with half dt until dt_min.  The callback fires after
// the ramp and at each snapshot time.
MaturationResult march_maturation(const Bvp& bvp, const SnapshotCallback& on_snapshot = {});

// 20 x 6 x 0.3 mm strip, all displacement components fixed on both end
// faces, follower pressure on the bottom face, default material with fiber
// dispersion kappa = 0.15 along x.
Bvp make_strip_bvp(int nx, int ny, int nz, double pressure = 0.002);

} // namespace biohybrid
