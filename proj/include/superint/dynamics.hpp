#pragma once

// Classical trajectories of H = (px^2 + py^2)/2 + V, conserved-quantity drift, orbit
// closure and rotation numbers, and numerical syzygy detection among observables.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "superint/observables.hpp"
#include "superint/potential_spec.hpp"

namespace superint {

namespace detail {
struct PolarForce;
}

struct IntegratorControl {
    double dt = 1e-3;
    int order = 4;                 // 2: kick-drift-kick, 4: its symmetric triple-jump composition
    double r_min = 1e-6;
    double drift_budget = 1e-9;    // relative energy drift that triggers a global step halving
    int max_halvings = 6;
    int sample_every = 1;          // keep every n-th step in the record
    std::uint64_t seed = 0;        // echoed into reports; integration itself is deterministic

    nlohmann::json to_json() const;
};

struct TrajectoryRecord {
    std::string potential_id;
    PhasePoint init;
    std::vector<double> t;
    std::vector<PhasePoint> samples;
    long steps = 0;
    int rejections = 0;            // global halvings before the drift budget was met
    double dt = 0.0;               // step actually used
    double min_r = 0.0;
    double energy_drift = 0.0;
};

/// Force -grad V at (x, y), from first-order jets of R(r) and S(theta).
std::pair<double, double> force(const PotentialSpec& v, double x, double y);

/// One splitting step in place. Throws DomainError when the position falls below r_min.
class SplittingStepper {
public:
    SplittingStepper(const PotentialSpec& v, int order, double r_min = 1e-6);
    void step(PhasePoint& p, double dt);
    double energy(const PhasePoint& p) const;

private:
    void kdk(PhasePoint& p, double h);
    void refresh(const PhasePoint& p);

    std::shared_ptr<const detail::PolarForce> field_;
    int order_;
    double r_min_;
    double fx_ = 0.0, fy_ = 0.0;
    double cx_ = 0.0, cy_ = 0.0;  // position the cached force belongs to
    bool cached_ = false;
};

/// Integrates to t_end with a fixed step, halving it globally while the energy drift exceeds
/// the budget. Throws InvalidArgument for quantum potentials or r(init) <= r_min, DomainError
/// on a close approach and IntegrationError when the budget is still missed after
/// max_halvings.
TrajectoryRecord integrate(const PotentialSpec& v, const PhasePoint& init, double t_end,
                           const IntegratorControl& control = {});

using NamedObservables = std::vector<std::pair<std::string, MomentumPolynomial>>;

/// max over samples of |O(t) - O(0)| / max(|O(0)|, floor).
std::map<std::string, double> drift_report(const TrajectoryRecord& traj, const NamedObservables& observables,
                                           double floor = 1e-12);

struct RationalApproximant {
    long p = 0;
    long q = 1;
    double error = 0.0;
};

/// Best continued-fraction convergent of x with denominator <= q_max.
RationalApproximant rational_approximant(double x, long q_max);

struct OrbitOptions {
    IntegratorControl control;
    double closure_tolerance = 1e-5;
    double rational_tolerance = 1e-6;
    long q_max = 32;
    double max_time = 1e4;
    double escape_factor = 1e2;   // unbounded once r exceeds this multiple of the initial r
    bool keep_trajectory = false;
    NamedObservables extra_observables;
};

struct OrbitReport {
    bool bounded = false;
    bool closed = false;
    bool advisory = false;                 // closure is only a heuristic for this radial kind
    double closure_distance = 0.0;
    int closure_crossing = 0;              // radial period at which the closure distance is reached
    double period_estimate = 0.0;          // mean radial period
    int radial_periods = 0;
    double rotation_number = 0.0;
    std::string angular_mode;              // "rotation" (theta winds) or "libration" (L_z changes sign)
    std::optional<RationalApproximant> rational;
    std::map<std::string, double> drift;
    std::vector<double> crossing_times;
    double closure_tolerance = 0.0, rational_tolerance = 0.0;
    long q_max = 0;
    double dt = 0.0;
    std::optional<TrajectoryRecord> trajectory;

    nlohmann::json to_json() const;
};

/// Radial period from the section p_r = 0 crossed from + to -; rotation number as the
/// angular phase advance per radial period; closure against the first section point.
OrbitReport orbit_report(const PotentialSpec& v, const PhasePoint& init, int max_radial_periods,
                         const OrbitOptions& options = {});

// Syzygies -----------------------------------------------------------------------------

struct DependenceOptions {
    int max_degree = 3;
    double threshold = 1e-8;   // smallest / largest singular value of the normalized matrix
    std::uint64_t seed = 0;    // resampling split
};

struct DependenceResult {
    bool syzygy = false;
    int degree = 0;
    /// Exponent tuples (one entry per observable) and the unit-norm coefficients of the
    /// relation in the raw observable values. Empty for an independence certificate.
    std::vector<std::vector<int>> monomials;
    std::vector<double> coefficients;
    double smallest_singular_value = 0.0;  // normalized, at the reported degree
    std::vector<double> spectrum;

    nlohmann::json to_json(const std::vector<std::string>& names = {}) const;
};

/// All exponent tuples of total degree <= d in m variables, graded then lexicographic.
std::vector<std::vector<int>> monomial_exponents(int m, int d);

/// `values` holds one row per sample and one column per observable. Throws InvalidArgument
/// for non-finite values or fewer than 3x as many samples as monomials, IndeterminateRank
/// when two halves of the samples disagree on the decision.
DependenceResult dependence_detect(const Eigen::MatrixXd& values, const DependenceOptions& options = {});

/// Observable values at each point, one column per observable.
Eigen::MatrixXd sample_observables(const std::vector<MomentumPolynomial>& observables,
                                   const std::vector<PhasePoint>& points, int jobs = 1);

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& traj);

}  // namespace superint
