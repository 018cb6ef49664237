#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biohybrid/calibration.hpp"
#include "biohybrid/matpoint.hpp"
#include "biohybrid/solver.hpp"

namespace biohybrid {

enum class RunMode
{
    matpoint,
    grow,
    fit,
    fem
};

struct StripGeometry
{
    double l = 20.0, w = 6.0, t = 0.3; // mm
    int nx = 20, ny = 6, nz = 2;
    bool operator==(const StripGeometry&) const = default;
};

// Either a mesh file or the built-in strip generator.
struct MeshSource
{
    std::string file; // empty: strip
    StripGeometry strip;
    bool operator==(const MeshSource&) const = default;
};

struct MatpointConfig
{
    LoadProgram program;
    bool evolve_density = true;
    double initial_rho = 0.0; // ug/mm^3
    bool operator==(const MatpointConfig&) const = default;
};

struct FemConfig
{
    MeshSource mesh;
    std::vector<DirichletSpec> dirichlet;
    std::vector<PressureSpec> pressures;
    bool write_vtk = true;
    bool operator==(const FemConfig&) const = default;
};

struct FitParameterConfig
{
    std::string name;
    double initial = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool operator==(const FitParameterConfig&) const = default;
};

struct FitFemConfig
{
    MeshSource mesh;
    std::vector<DirichletSpec> dirichlet;
    std::string reaction_set;
    int component = 0;
    double area = 1.0;
    double x_at_full_load = 1.0;
    bool operator==(const FitFemConfig&) const = default;
};

struct FitDataConfig
{
    std::string file;
    ForwardModel model = ForwardModel::uniaxial;
    double ratio_y = 1.0;
    int stress_axis = 0;
    double relative_density = 0.0;
    double weight = 1.0;
    std::optional<FitFemConfig> fem;
    bool operator==(const FitDataConfig&) const = default;
};

enum class FitKind
{
    weibull,
    material
};

struct FitConfig
{
    FitKind kind = FitKind::weibull;
    std::vector<FitDataConfig> data;
    std::vector<FitParameterConfig> parameters;
    bool operator==(const FitConfig&) const = default;
};

struct RunConfig
{
    RunMode mode = RunMode::grow;
    MaterialParams material;
    TimeSchedule schedule;
    double grow_dt = 0.01; // day, step of the unloaded trajectory
    SolverConfig solver;
    std::optional<MatpointConfig> matpoint;
    std::optional<FemConfig> fem;
    std::optional<FitConfig> fit;
    std::uint64_t seed = 20240101;
    bool operator==(const RunConfig&) const = default;
};

// Parses JSON text.  Quantities are either plain numbers in internal units
// (mm, N, MPa, ug, day) or {"value": v, "unit": "..."} objects.  Unknown keys,
// unknown units, missing blocks and out-of-domain values raise ConfigError
// with a JSON-pointer path to the offending key.
RunConfig parse_config(const std::string& text);

// Normalized dump: every field present, quantities in internal units with
// their unit spelled out.  parse_config(dump_config(c)) == c.
std::string dump_config(const RunConfig& c);

// Factor converting `unit` to the internal unit of `dimension`; dimensions
// are "stress", "specific_energy", "density", "length", "time",
// "cell_density", "mass_per_cell", "volume_rate_per_cell", "dimensionless".
// Throws ConfigError for an unsupported unit.
double unit_factor(const std::string& dimension, const std::string& unit);

Mesh build_mesh(const MeshSource& src);
Bvp build_bvp(const RunConfig& c);

} // namespace biohybrid
