#pragma once

namespace biohybrid {

// Collagen deposition kinetics.  Units: ug, mm, day; psi_crit in the internal
// mass-specific energy unit MPa*mm^3/ug (= mJ/ug).
struct GrowthParams
{
    double a1 = 5e-4;       // ug/cell
    double a2 = 5e-7;       // mm^3/cell/day
    double psi_crit = 2e-5; // MPa*mm^3/ug
    double rho_th = 10.0;   // ug/mm^3
    double c_cell = 15e3;   // cells/mm^3
    double tau = 14.21;     // day
    double h = 1.65;        // Weibull shape, must exceed 1

    // a1, a2 >= 0 (zero switches a source off); the rest > 0; h > 1.
    void validate() const;

    bool operator==(const GrowthParams&) const = default;
};

// Per-Gauss-point history.  rho is the referential collagen density; the two
// sensitivities describe how the last backward-Euler update responds to the
// mass-specific energy that drove it (zero when the mechanical branch is off
// or the density was frozen).
struct GrowthState
{
    double rho = 0.0;
    double drho_dpsim = 0.0;
    double d2rho_dpsim2 = 0.0;

    bool operator==(const GrowthState&) const = default;
};

struct LocalNewtonControls
{
    double tolerance = 1e-12; // ug/mm^3, absolute on the residual
    int max_iterations = 50;
    bool operator==(const LocalNewtonControls&) const = default;
};

// Weibull cumulative distribution 1 - exp(-(t/tau)^h).  Throws for t < 0.
double weibull_alpha(double t, const GrowthParams& p);

// Time derivative of weibull_alpha; defined as 0 at t = 0 (h > 1).
double weibull_rate(double t, const GrowthParams& p);

// Biologically driven deposition rate a1 c_cell d(alpha)/dt.
double bio_rate(double t, const GrowthParams& p);

// Saturation factor exp(-rho / rho_th).
double mech_decay(double rho, const GrowthParams& p);

// Mechanically driven rate; zero below psi_crit.
double mech_rate(double rho, double psi_m, const GrowthParams& p);

// One implicit backward-Euler step from state_n to t_np1 = t_n + dt with the
// mass-specific energy psi_m held fixed.  Solves
//   r(rho) = rho - rho_n - dt (bio_rate(t_np1) + mech_rate(rho, psi_m)) = 0
// by safeguarded Newton and returns d(rho)/d(psi_m) and its second derivative
// from the implicit function theorem.  Throws SolverError on failure.
GrowthState update_density(const GrowthState& state_n, double t_np1, double dt, double psi_m,
                           const GrowthParams& p, const LocalNewtonControls& ctl = {});

} // namespace biohybrid
