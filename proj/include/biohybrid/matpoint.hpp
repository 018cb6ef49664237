#pragma once

#include <array>
#include <optional>
#include <vector>

#include "biohybrid/constitutive.hpp"

namespace biohybrid {

// How prescribed axis values are interpreted.
enum class ControlMeasure
{
    stretch,           // lambda = L / L0
    engineering_strain // (L - L0) / L0
};

// One step of a homogeneous loading program.  An axis with a value is
// displacement controlled; an empty axis is free with zero normal stress.
struct LoadStep
{
    double time = 0.0; // days
    std::array<std::optional<double>, 3> axes;
    bool operator==(const LoadStep&) const = default;
};

struct LoadProgram
{
    std::vector<LoadStep> steps;
    ControlMeasure measure = ControlMeasure::stretch;
    int output_every = 1; // record every n-th step (the last step is always recorded)

    // Times strictly increasing, at least one controlled axis per step,
    // positive stretches.
    void validate() const;

    // Uniaxial tension along x with both lateral axes free.
    static LoadProgram uniaxial(const std::vector<double>& values, ControlMeasure m = ControlMeasure::stretch);
    // In-plane biaxial (x, y controlled, z free) with axis-y value = ratio_y *
    // axis-x value in engineering strain.  ratio_y = 1 is equibiaxial.
    static LoadProgram biaxial(const std::vector<double>& strains_x, double ratio_y);
    // Every axis held at a fixed stretch while time runs.
    static LoadProgram held(const std::vector<double>& times, std::array<double, 3> stretch);

    bool operator==(const LoadProgram&) const = default;
};

struct PointRecord
{
    double time = 0.0;
    Tensor3 F;
    SymTensor3 S;
    SymTensor3 sigma;
    std::array<double, 3> P{}; // engineering (first Piola-Kirchhoff) normal stresses F S
    double rho = 0.0;
    double psi_m = 0.0;
};

struct MixedSolveOptions
{
    bool evolve_density = true; // false freezes rho at its initial value
    double stress_tolerance = 1e-10; // MPa, on the free Cauchy components
    int max_iterations = 50;
    ResponseOptions response;
};

// Drives one material point through a program.  Free diagonal stretches are
// solved by Newton such that the matching Cauchy stresses vanish.  The time
// of the initial state is 0; a step at time t uses dt = t - t_previous.
// Throws SolverError when the free stretches cannot be found.
std::vector<PointRecord> solve_mixed_point(const LoadProgram& program, const MaterialParams& params,
                                           const GrowthState& init, const MixedSolveOptions& opt = {});

// Stress-free maturation: F = I from 0 to t_end with uniform steps dt.
std::vector<PointRecord> unloaded_maturation(const MaterialParams& params, double t_end, double dt);

} // namespace biohybrid
