#pragma once

// Linear compatibility condition (LCC) of a leading term with a potential, its polar
// form for separable potentials, the radial equations obtained from it, and numerical
// nullspace solvers over leading-term slots and angular numerator constants.

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "superint/field.hpp"
#include "superint/fourier.hpp"
#include "superint/integrals.hpp"
#include "superint/poly2.hpp"
#include "superint/potential_spec.hpp"

namespace superint {

inline constexpr double kDefaultRMin = 1e-6;

/// f_{j,0}(x, y), j = 0..N.
std::vector<Poly2> f_polys(const LeadingTermSpec& spec);

/// An LCC value together with the largest intermediate term it was summed from.
struct LccValue {
    double value = 0.0;
    double scale = 0.0;

    double relative() const noexcept { return scale > 0.0 ? std::abs(value) / scale : std::abs(value); }
};

/// The LCC as a jet of order `extra` (its derivatives up to that order), plus a majorant
/// jet whose coefficients bound the magnitudes of the summed pieces.
struct LccJet {
    Jet2 value;
    Jet2 majorant;
};

/// `v` must be a jet of the potential of order >= N + extra.
LccJet lcc_jet(const std::vector<Poly2>& f, const Jet2& v, int extra);

LccValue lcc_cartesian(const LeadingTermSpec& spec, const FieldExpr& v, Point2 p, const JetConfig& config = {});

/// LCC of V = R(r) + S(theta) / r^2 at polar point (r, theta); R and S take their argument
/// as variable 0. Throws DomainError for r <= r_min.
LccValue lcc_polar(const LeadingTermSpec& spec, const FieldExpr& R, const FieldExpr& S, double r, double theta,
                   double r_min = kDefaultRMin, const JetConfig& config = {});

/// Independent evaluation of the same quantity by applying the polar-coordinate
/// derivative operators symbolically. Slow; used as a cross-check.
double lcc_polar_operator_form(const LeadingTermSpec& spec, const FieldExpr& R, const FieldExpr& S, double r,
                               double theta);

/// Projections of d^2/dr^2 [r^{N+2} LCC] on sin(s theta), cos(s theta), s = 1..N, stored as
/// [sin 1, cos 1, sin 2, cos 2, ...]. `scale` bounds the magnitude of the pieces.
struct RadialResiduals {
    std::vector<double> values;
    double scale = 0.0;

    double max_abs() const;
};

RadialResiduals radial_residuals(const PolarLeadingSpec& spec, const FieldExpr& R, double r,
                                 const FieldExpr& probe_s, int nodes = 0, double r_min = kDefaultRMin);

struct NullspaceOptions {
    double threshold = 1e-8;  // singular values below threshold * max(sigma_max, 1) are null
    double gap = 1e2;         // required separation factor around the threshold
};

struct Nullspace {
    int dimension = 0;
    std::vector<double> spectrum;  // descending
    double cutoff = 0.0;
    double gap = 0.0;
    Eigen::MatrixXd basis;  // columns, orthonormal
};

/// Numerical nullspace by SVD. Throws IndeterminateRank (carrying the spectrum) when the
/// singular values straddle the threshold with less than the required gap.
Nullspace numerical_nullspace(const Eigen::MatrixXd& a, const NullspaceOptions& options = {});

struct BSlot {
    int family = 1;  // 1 for B1, 2 for B2
    int s = 0;
    int k = 0;

    std::string label() const;
};

struct RadialScanOptions {
    int radii = 16;
    double r_lo = 0.5;
    double r_hi = 4.0;
    int nodes = 0;  // quadrature nodes per radius, 0 = 4N + 8
    NullspaceOptions nullspace;
    /// Singlet slots (s = 0) are left out unless requested: the radial equations only see
    /// R(r), and L_z^{N-2k} P^{2k} is the leading term of L_z^{N-2k} (2H)^k, an integral of
    /// every radial potential.
    bool include_singlets = false;
    int jobs = 1;
};

struct RadialResidualSystem {
    int N = 0;
    RadialPart radial;
    std::vector<BSlot> columns;
    std::vector<double> radii;
    Eigen::MatrixXd matrix;        // rows: radius-major, then harmonic s, then (sin, cos)
    std::vector<double> row_scale;  // normalization applied per radius
    double probe_deviation = 0.0;  // max |row difference| between two probe functions
    Nullspace nullspace;
    NullspaceOptions options;

    /// Leading-term spec of nullspace basis vector i.
    PolarLeadingSpec basis_spec(int i) const;
    nlohmann::json to_json() const;
};

RadialResidualSystem assemble_radial_system(int N, const RadialPart& radial, const RadialScanOptions& options = {},
                                            const FieldExpr& probe_s = FieldExpr(0.0));

/// Assembles with two probe functions, checks they agree, and solves for the nullspace.
RadialResidualSystem admissible_b_space(int N, const RadialPart& radial, const RadialScanOptions& options = {});

/// Standard angular families: Kepler and oscillator radial parts for even N (odd and even
/// harmonics respectively), zero radial part for odd N with odd or even harmonics.
enum class AngularFamily { kepler, oscillator, free_odd, free_even };

const char* angular_family_name(AngularFamily f) noexcept;
AngularFamily parse_angular_family(const std::string& name);

/// Angular profile T(theta) = sum_i c_i numerator_i(theta) / denominator(theta) (+ c_add)
/// of one standard family, built from the Y_I slots of a spec.
struct AngularFamilyBasis {
    AngularFamily family = AngularFamily::kepler;
    std::vector<std::string> names;       // numerator constant names
    std::vector<FieldExpr> numerators;    // functions of theta (variable 0)
    FieldExpr denominator;
    bool additive_constant = false;       // free-even family's trailing constant (does not affect S)
    RadialKind radial = RadialKind::zero;

    /// T for given constants (additive constant last when present).
    FieldExpr t_of(const std::vector<double>& constants) const;
    std::size_t size() const { return numerators.size() + (additive_constant ? 1 : 0); }
};

/// Throws InvalidArgument when the spec has no Y_I part, when the family's parity does
/// not match N, or when the denominator vanishes identically.
AngularFamilyBasis angular_family_basis(const PolarLeadingSpec& spec, AngularFamily family);

struct AngularScanOptions {
    std::vector<double> radii = {0.7, 1.1, 1.6, 2.3};
    int thetas = 48;
    double radial_amplitude = 1.0;  // R = amplitude/r (kepler) or amplitude r^2 (oscillator) per unit column
    double pole_margin = 1e-2;      // |denominator| >= margin * max|denominator| at sample angles
    NullspaceOptions nullspace;
    int jobs = 1;
};

struct AngularNullspace {
    AngularFamilyBasis basis;
    std::vector<std::string> columns;  // "radial" (if any), then numerator constants
    Nullspace nullspace;
    /// Null directions whose angular part S is not identically zero.
    int nontrivial_dimension = 0;
    /// Null vectors restricted to directions with S != 0 (orthonormal in column space).
    Eigen::MatrixXd nontrivial_basis;

    /// S(theta) for a column-space vector.
    FieldExpr s_of(const Eigen::VectorXd& coefficients) const;
    nlohmann::json to_json() const;
};

AngularNullspace standard_angular_nullspace(const PolarLeadingSpec& spec, AngularFamily family,
                                            const AngularScanOptions& options = {});

/// Leading terms of order N (A-basis nullspace) compatible with a Cartesian potential,
/// sampled at `points`. Used to discover integrals of known potentials.
Nullspace compatible_leading_terms(int N, const FieldExpr& v, const std::vector<Point2>& points,
                                   const NullspaceOptions& options = {});

}  // namespace superint
