#include "biohybrid/growth.hpp"

#include <cmath>
#include <sstream>

#include "biohybrid/errors.hpp"

namespace biohybrid {

void GrowthParams::validate() const
{
    auto require = [](bool ok, const char* msg) {
        if (!ok)
            throw ParameterDomainError(msg);
    };
    require(a1 >= 0.0 && std::isfinite(a1), "growth a1 must be >= 0");
    require(a2 >= 0.0 && std::isfinite(a2), "growth a2 must be >= 0");
    require(psi_crit > 0.0 && std::isfinite(psi_crit), "growth psi_crit must be > 0");
    require(rho_th > 0.0 && std::isfinite(rho_th), "growth rho_th must be > 0");
    require(c_cell > 0.0 && std::isfinite(c_cell), "growth c_cell must be > 0");
    require(tau > 0.0 && std::isfinite(tau), "growth tau must be > 0");
    require(h > 1.0 && std::isfinite(h), "growth h must be > 1 (rate is singular at t = 0 otherwise)");
}

double weibull_alpha(double t, const GrowthParams& p)
{
    if (t < 0.0)
        throw ParameterDomainError("Weibull time must be >= 0");
    return -std::expm1(-std::pow(t / p.tau, p.h));
}

double weibull_rate(double t, const GrowthParams& p)
{
    if (t <= 0.0)
        return 0.0;
    const double s = t / p.tau;
    return p.h / p.tau * std::exp(-std::pow(s, p.h)) * std::pow(s, p.h - 1.0);
}

double bio_rate(double t, const GrowthParams& p)
{
    return p.a1 * p.c_cell * weibull_rate(t, p);
}

double mech_decay(double rho, const GrowthParams& p)
{
    return std::exp(-rho / p.rho_th);
}

double mech_rate(double rho, double psi_m, const GrowthParams& p)
{
    if (psi_m < p.psi_crit)
        return 0.0;
    return p.a2 * p.c_cell * mech_decay(rho, p) * rho * (psi_m - p.psi_crit) / p.psi_crit;
}

GrowthState update_density(const GrowthState& state_n, double t_np1, double dt, double psi_m,
                           const GrowthParams& p, const LocalNewtonControls& ctl)
{
    if (!(dt > 0.0))
        throw ParameterDomainError("density update requires dt > 0");
    if (!(state_n.rho >= 0.0) || !std::isfinite(state_n.rho))
        throw StateCorruption("collagen density must be finite and >= 0");

    const double rho_n = state_n.rho;
    const double predictor = rho_n + dt * bio_rate(t_np1, p);
    if (psi_m < p.psi_crit || p.a2 == 0.0)
        return {predictor, 0.0, 0.0};

    const double A = p.a2 * p.c_cell;
    const double drive = (psi_m - p.psi_crit) / p.psi_crit;

    auto residual = [&](double rho) { return rho - predictor - dt * A * mech_decay(rho, p) * rho * drive; };
    auto slope = [&](double rho) {
        return 1.0 - dt * A * mech_decay(rho, p) * (1.0 - rho / p.rho_th) * drive;
    };

    // r(predictor) <= 0 and the mechanical rate is bounded by A rho_th / e,
    // which brackets the root.
    double lo = predictor;
    double hi = predictor + dt * A * drive * p.rho_th / std::exp(1.0) + 1e-300;
    double rho = predictor;
    double r = residual(rho);
    int it = 0;
    while (std::abs(r) > ctl.tolerance) {
        if (++it > ctl.max_iterations) {
            std::ostringstream os;
            os << "collagen density Newton did not converge: |r| = " << std::abs(r) << " after "
               << ctl.max_iterations << " iterations (rho = " << rho << ", psi_m = " << psi_m << ")";
            throw SolverError(os.str(), std::abs(r), ctl.max_iterations);
        }
        if (r < 0.0)
            lo = rho;
        else
            hi = rho;
        const double d = slope(rho);
        double next = rho - r / d;
        if (!(d > 0.0) || !(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (next == rho)
            break;
        rho = next;
        r = residual(rho);
    }

    // Implicit derivatives of r(rho(psi), psi) = 0.
    const double e = mech_decay(rho, p);
    const double x = rho / p.rho_th;
    const double r_rho = slope(rho);
    const double r_psi = -dt * A * e * rho / p.psi_crit;
    const double r_rho_rho = dt * A * e * drive * (2.0 - x) / p.rho_th;
    const double r_rho_psi = -dt * A * e * (1.0 - x) / p.psi_crit;
    const double d1 = -r_psi / r_rho;
    const double d2 = -(r_rho_rho * d1 * d1 + 2.0 * r_rho_psi * d1) / r_rho;
    return {rho, d1, d2};
}

} // namespace biohybrid
