#pragma once

// The separable potential V(r, theta) = R(r) + S(theta) / r^2 as a value type.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "superint/field.hpp"
#include "superint/spline.hpp"

namespace superint {

enum class RadialKind { zero, kepler, oscillator, onofri, custom };

const char* radial_kind_name(RadialKind kind) noexcept;
RadialKind parse_radial_kind(const std::string& name);

struct RadialPart {
    RadialKind kind = RadialKind::zero;
    double a = 0.0;  // kepler a/r, onofri sqrt(a^2 r^2 + d) / r^2
    double b = 0.0;  // oscillator b r^2
    double d = 0.0;
    FieldExpr custom;  // R as a function of variable 0, used when kind == custom

    static RadialPart zero() { return {}; }
    static RadialPart kepler(double a);
    static RadialPart oscillator(double b);
    static RadialPart onofri(double a, double d);
    static RadialPart custom_field(FieldExpr r_of_r);

    /// R(r) with r as variable 0.
    FieldExpr field() const;
};

enum class TauKind { cos2, sin2, tan };

const char* tau_kind_name(TauKind kind) noexcept;
TauKind parse_tau_kind(const std::string& name);

struct PotentialSpec {
    RadialPart radial;
    /// S(theta) with theta as variable 0. For sampled families it wraps `angular_table`.
    FieldExpr angular;
    std::shared_ptr<const CubicSpline> angular_table;
    double hbar = 0.0;
    std::optional<int> n_tag;
    std::string family = "custom";
    nlohmann::json parameters = nlohmann::json::object();
    std::optional<TauKind> tau_kind;
    /// S is only meaningful on a wedge of the plane (no 2 pi periodicity check).
    bool sector = false;
    std::vector<std::string> flags;

    /// V as a function of (r, theta).
    FieldExpr polar_field() const;
    /// V as a function of (x, y), through r = |(x, y)| and theta = atan2(y, x).
    FieldExpr cartesian_field() const;

    bool classical() const noexcept { return hbar == 0.0; }
    bool has_flag(const std::string& flag) const;

    /// Header fields only (family, parameters, hbar, N_tag, tau_kind, radial, flags).
    nlohmann::json header_json() const;
};

/// r(x, y) and theta(x, y) as Cartesian fields.
FieldExpr radius_field();
FieldExpr angle_field();

/// f(r, theta) rewritten as a field of (x, y).
FieldExpr polar_to_cartesian(const FieldExpr& f_polar);
/// g(theta) (variable 0) rewritten as a field of (x, y).
FieldExpr angular_to_cartesian(const FieldExpr& g_theta);

/// Throws InvalidArgument when an angular field differs from itself one period later
/// by more than `tolerance` (relative to its sampled magnitude) at any of `samples` points.
void require_periodic(const FieldExpr& s_theta, int samples = 64, double tolerance = 1e-8);

}  // namespace superint
