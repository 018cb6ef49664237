#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "biohybrid/constitutive.hpp"

namespace biohybrid {

struct Bvp;

struct NelderMeadConfig
{
    double diameter_tol = 1e-8; // max distance of a vertex from the best vertex
    double fspread_tol = 1e-12; // f(worst) - f(best)
    int max_evaluations = 20000;
    // Bounds are optional; an empty vector means unbounded.
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

struct NelderMeadResult
{
    Eigen::VectorXd x;
    double f = 0.0;
    int evaluations = 0;
    int iterations = 0;
    bool converged = false;   // false when the evaluation budget ran out
    std::vector<double> trace; // best value after each iteration
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Downhill simplex with reflection 1, expansion 2, contraction 0.5 and
// shrink 0.5.  Stops once both the diameter and the f-spread are below their
// tolerances, or when the budget is spent.  Trial points are clipped into the
// bounds; non-finite objective values count as +inf.  Throws ParameterDomainError if f(x0) is not finite or
// x0 lies outside the bounds.
NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadConfig& cfg = {});

struct DataSeries
{
    std::string x_label = "x";
    std::string y_label = "y";
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> weight; // empty: all ones

    double weight_at(std::size_t i) const { return weight.empty() ? 1.0 : weight[i]; }
    // Equal lengths, finite values, non-negative weights, x strictly increasing.
    void validate() const;
};

struct WeibullFit
{
    double tau = 0.0;
    double h = 0.0;
    double rms = 0.0;
    NelderMeadResult optimizer;
};

// Weighted least squares fit of 1 - exp(-(t/tau)^h) to relative densities.
// Points are sorted by time first.  Throws ParameterDomainError for fewer
// than three points or ordinates outside [0, 1].
WeibullFit fit_weibull(const DataSeries& points);

enum class ForwardModel
{
    uniaxial, // x: engineering strain along x, lateral axes free
    biaxial,  // x: engineering strain along x, y strain = ratio_y * x, z free
    fem       // x: load measure, y: summed reaction / area from a boundary value problem
};

struct FemForward
{
    std::shared_ptr<const Bvp> bvp;
    std::string reaction_set; // node set whose reactions are summed
    int component = 0;
    double area = 1.0;        // mm^2, converts force to engineering stress
    double x_at_full_load = 1.0; // abscissa value matching the Dirichlet values of the bvp
};

struct FitSeries
{
    DataSeries data;
    ForwardModel model = ForwardModel::uniaxial;
    double ratio_y = 1.0;
    int stress_axis = 0;            // which engineering normal stress is compared
    double relative_density = 0.0;  // collagen density as a fraction of rho_f
    FemForward fem;
};

// Named scalar parameters addressable by fit problems, e.g. "collagen.k1",
// "textile.K2_1", "matrix.mu", "growth.a2".  Throws ConfigError for an
// unknown name.
void set_parameter(MaterialParams& p, const std::string& name, double value);
double get_parameter(const MaterialParams& p, const std::string& name);
std::vector<std::string> parameter_names();

struct FitProblem
{
    std::vector<std::string> names;
    Eigen::VectorXd x0;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    MaterialParams base;
    std::vector<FitSeries> series;
    NelderMeadConfig optimizer;

    // Sizes agree, names known, x0 inside the bounds, at least one series.
    void validate() const;
};

struct FitResult
{
    Eigen::VectorXd x;
    MaterialParams params;
    double objective = 0.0;
    std::vector<double> rms; // per series, unweighted
    NelderMeadResult optimizer;
};

// Model engineering stress at the abscissae of one series.  Throws on
// forward-model failure.
std::vector<double> forward_stress(const MaterialParams& p, const FitSeries& s);

// Summed weighted squared residuals of all series; +inf when any forward
// solve fails.
double fit_objective(const FitProblem& problem, const Eigen::VectorXd& x);

FitResult fit_material(const FitProblem& problem);

} // namespace biohybrid
