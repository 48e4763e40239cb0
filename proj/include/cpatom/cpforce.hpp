#pragma once

#include "cpatom/greens.hpp"

namespace cpatom {

// z-component of the mirror-induced force; transverse components vanish.
struct ForceBreakdown {
    double z = 0;
    double f_cp1 = 0;            // retarded field, oscillator fluctuations
    double f_cp2 = 0;            // field fluctuations, oscillator response
    double f_thermal_osc = 0;    // (coth(beta_bar Omega/2) - 1) f_cp1
    double f_thermal_field = 0;  // field-temperature change of f_cp2
    double total = 0;
};

double static_polarizability(const AtomParams& p);

double cp_force_retarded(double z, const AtomParams& p);
double cp_force_retarded_gradient(double z, const AtomParams& p);

// Smooth vacuum total -(q^2/(32 pi^2 m Omega z^4)) B(2 Omega z) and its z-derivative.
double cp_force_vacuum(double z, const AtomParams& p);
double cp_force_vacuum_gradient(double z, const AtomParams& p);

// Vacuum total minus the retarded part.
double cp_force_dispersive(double z, const AtomParams& p);

ForceBreakdown cp_force_total(double z, const AtomParams& p);

double cp_force_near_asymptote(double z, const AtomParams& p);
double cp_force_far_asymptote(double z, const AtomParams& p);
// -(3/4) alpha / (beta z^4)
double cp_force_high_temperature(double z, const AtomParams& p, double beta);

double cp_force_thermal_retarded(double z, const AtomParams& p, double beta_bar);

// Total force with field and oscillator both at inverse temperature beta, as a
// Matsubara sum. derivative = 1 returns d/dz of it instead.
double cp_force_equilibrium(double z, const AtomParams& p, double beta, int derivative = 0);

// Field-temperature dispersive force: equilibrium total minus coth(beta Omega/2) f_cp1.
double cp_force_thermal_dispersive(double z, const AtomParams& p, double beta, const ThermalConfig& cfg);

// Same quantity from principal-value quadrature over the lag s.
double cp_force_thermal_dispersive_quadrature(double z, const AtomParams& p, double beta,
                                              const ThermalConfig& cfg);

ForceBreakdown cp_force_thermal(double z, const AtomParams& p, const ThermalConfig& thermal);

// dF_total/dz for the given thermal state.
double cp_force_gradient(double z, const AtomParams& p, const ThermalConfig& thermal);

struct OracleOptions {
    double rel_tol = 1e-11;
};

// Lag integral of the image force evaluated numerically. tau is the elapsed
// time (inf for the long-time limit).
ForceBreakdown cp_force_quadrature_oracle(double z, double tau, const AtomParams& p,
                                          const ThermalConfig& thermal,
                                          const OracleOptions& opt = {});

}  // namespace cpatom
