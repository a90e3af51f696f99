#pragma once

// Constructors for the potential families: TTW and PW, the four standard angular
// families, the classical exotic family (first-order nonlinear ODE and its closed form),
// and the quantum exotic family built from Painleve VI.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "superint/compat.hpp"
#include "superint/integrals.hpp"
#include "superint/potential_spec.hpp"

namespace superint {

/// b r^2 + [alpha / cos^2(k theta) + beta / sin^2(k theta)] / r^2, k = m / n.
PotentialSpec ttw(double b, double alpha, double beta, int m, int n);
/// a / r + [mu / cos^2(k theta / 2) + nu / sin^2(k theta / 2)] / r^2, k = m / n.
PotentialSpec pw(double a, double mu, double nu, int m, int n);
/// TTW with an arbitrary real k (no integrality constraints, no order tag). Used as an
/// incommensurate probe.
PotentialSpec ttw_real_k(double b, double alpha, double beta, double k);

/// One of the standard families with the given numerator constants (names and order as
/// in angular_family_basis). `radial_coefficient` is a (kepler family) or b (oscillator family); ignored for
/// the odd families, whose radial part is zero. Denominator zeros are flagged "poles".
PotentialSpec standard_quantum_T(const PolarLeadingSpec& spec, AngularFamily family,
                                 const std::vector<double>& constants, double hbar,
                                 double radial_coefficient = 1.0);

// Classical exotic family ------------------------------------------------------------

struct ClassicalOdeConstants {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
};

/// 3 t^2 (t^2 + 1) T'^2 + 4 t (c1 t + c2) T' + 2 t T T' - T (T + 4 c2) + c3 / sqrt(t^2 + 1) + c4.
double exotic_classical_residual(double tau, double T, double dT, const ClassicalOdeConstants& c);

/// tau as a function of theta for a reading of the independent variable.
double tau_of_theta(TauKind kind, int N, double theta);
double dtau_dtheta(TauKind kind, int N, double theta);

struct ExoticClassicalOptions {
    int N = 4;
    ClassicalOdeConstants c;
    TauKind tau_kind = TauKind::cos2;
    int branch = +1;  // sign in front of the square root of the discriminant
    double theta_lo = 0.1;
    double theta_hi = 0.6;
    double theta0 = 0.1;  // initial condition T(theta0) = T0
    double T0 = 1.0;
    int samples = 401;
    double rtol = 1e-11;
    double atol = 1e-13;
    double b = 0.0;  // radial oscillator coefficient of the resulting potential
};

struct ExoticClassicalSolution {
    ExoticClassicalOptions options;
    std::vector<double> theta, tau, T, dT_dtau, S, dS, discriminant;  // S = dT/dtheta
    /// Angles where the discriminant came within 1e-10 of zero (relative); a branch switch
    /// would be possible there. Integration stays on the chosen branch.
    std::vector<double> branch_events;
    PotentialSpec spec;

    /// Dense output: T and dT/dtheta at any theta in the solved window (quintic Hermite).
    std::pair<double, double> at_theta(double theta) const;
};

ExoticClassicalSolution exotic_classical_T(const ExoticClassicalOptions& options);

/// z^(1/3) (3 z^2 + 2 sqrt(4 + 3 z^2) + 5)^(1/6) / (sqrt(4 + 3 z^2) + 2)^(2/3), real cube root.
double exotic_closedform_of_z(double z);
/// The closed form at z = tan((N - 2) theta), times `scale`. Throws DomainError near a
/// pole of the tangent.
double exotic_closedform_T(int N, double theta, double scale = 1.0);

/// Least-squares fit of (c1..c4) making the closed form solve the classical ODE with tau
/// read as `reading`. The closed form's z is expressed through tau, and T' = dT/dtau.
struct ClosedFormFit {
    TauKind reading = TauKind::tan;
    ClassicalOdeConstants c;
    double relative_residual = 0.0;
    int samples = 0;
    double tau_lo = 0.0, tau_hi = 0.0;
};

ClosedFormFit fit_closed_form(TauKind reading, int samples = 200);

struct ClosedFormVerdict {
    std::vector<ClosedFormFit> fits;
    std::optional<TauKind> winner;  // smallest residual, if below the threshold
    double threshold = 1e-6;
};

ClosedFormVerdict closed_form_readings(int samples = 200, double threshold = 1e-6);

// Quantum exotic family ----------------------------------------------------------------

using P6Gammas = std::array<double, 4>;

/// (g2 + g4) - (g1 + g3) + sqrt(2 g1) - 3/4. Throws InvalidArgument for g1 < 0.
double composite_gamma(const P6Gammas& g);

/// Right side of Painleve VI, P'' = F(tau, P, P').
double p6_rhs(double tau, double P, double dP, const P6Gammas& g);

/// The residual ingredients of Painleve VI: F and the sum of absolute values of its terms.
std::pair<double, double> p6_rhs_with_scale(double tau, double P, double dP, const P6Gammas& g);

struct P6Grid {
    double lo = 0.05;
    double hi = 0.95;
    int count = 1801;
};

struct P6Options {
    double rtol = 1e-12;
    double atol = 1e-14;
    double blowup = 1e3;        // |P| above this starts a detour
    double approach = 1e-3;     // |P|, |P - 1|, |P - tau| below this starts a detour
    int max_detours = 64;
    double segment_margin = 1e-2;  // grid nodes this close to a detour are flagged as well
    double pole_reach = 30.0;      // flag nodes whose estimated pole distance is below this many grid steps
};

struct P6Segment {
    double lo = 0.0;
    double hi = 0.0;
    std::string reason;  // "pole", "zero", "one", "diagonal"
};

struct P6Solution {
    P6Gammas gammas{};
    double gamma = 0.0;
    double tau0 = 0.5, P0 = 0.0, dP0 = 0.0;
    std::vector<double> tau;   // grid
    std::vector<double> P;     // values on the grid
    std::vector<double> dP;    // first derivatives on the grid
    std::vector<bool> flagged;  // grid point inside or next to a singular segment
    std::vector<P6Segment> segments;
    /// Largest imaginary part left after a complex detour, relative to |P|.
    double detour_imaginary = 0.0;

    /// P and P' at tau by quintic Hermite interpolation on the unflagged grid.
    std::pair<double, double> at(double tau) const;
    nlohmann::json to_json() const;
};

P6Solution p6_solve(const P6Gammas& gammas, double tau0, double P0, double dP0, const P6Grid& grid = {},
                    const P6Options& options = {});

/// Plug-back residual of Painleve VI at grid node i: P'' from a nine-point difference of
/// the stored P' against the right side, relative to the size of its terms. Empty when a
/// stencil node is flagged or off the grid.
std::optional<double> p6_plug_back(const P6Solution& sol, std::size_t i);

/// W(tau) of the quantum exotic family, the symbol z in its last factor read as tau.
double w_of(double tau, double P, double dP, const P6Gammas& g);
double w_of_p6(const P6Solution& sol, double tau);

struct ExoticQuantumOptions {
    TauKind tau_kind = TauKind::cos2;
    double b = 0.0;            // oscillator coefficient (even N only)
    std::optional<double> a;   // Kepler coefficient (even N, flagged "unverified-pairing")
    int table_points = 1024;   // theta samples over the covered window
};

struct ExoticQuantumProfile {
    std::vector<double> theta, tau, T, S;
    PotentialSpec spec;
};

/// T(tau) = hbar^2 (N - 2) [W / sqrt(tau (1 - tau)) + gamma (1 - 2 tau) / (4 sqrt(tau (1 - tau)))]
/// on the theta window whose tau stays inside the solution's pole-free grid; S = dT/dtheta
/// by sixth-order finite differences of the T table.
ExoticQuantumProfile exotic_quantum_profile(int N, const P6Solution& sol, double hbar,
                                            const ExoticQuantumOptions& options = {});
PotentialSpec exotic_quantum_T(int N, const P6Solution& sol, double hbar, const ExoticQuantumOptions& options = {});

// Export / import ----------------------------------------------------------------------

/// Writes `theta,S` rows sampled on `points` uniform angles over [lo, hi].
void write_angular_csv(std::ostream& out, const PotentialSpec& spec, double lo, double hi, int points);
/// Rebuilds a tabulated PotentialSpec from a header and a `theta,S` table. Periodic when the
/// table spans 2 pi and its ends agree, otherwise a sector potential.
PotentialSpec read_potential(const nlohmann::json& header, std::istream& csv);

}  // namespace superint
