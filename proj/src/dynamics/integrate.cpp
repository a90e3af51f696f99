#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "superint/dynamics.hpp"
#include "superint/error.hpp"

namespace superint {

namespace detail {

struct PolarForce {
    FieldExpr R, S;
    bool has_radial = false, has_angular = false;

    explicit PolarForce(const PotentialSpec& v)
        : R(v.radial.field()), S(v.angular), has_radial(!R.is_zero()), has_angular(!S.is_zero()) {}

    std::pair<double, double> operator()(double x, double y) const {
        const double r2 = x * x + y * y;
        const double r = std::sqrt(r2);
        const double c = x / r, s = y / r;
        double dv_dr = 0.0, dv_dth = 0.0;
        if (has_radial) dv_dr += R.jet({r, 0.0}, 1).partial(1, 0);
        if (has_angular) {
            const Jet2 j = S.jet({std::atan2(y, x), 0.0}, 1);
            dv_dr -= 2.0 * j.value() / (r2 * r);
            dv_dth = j.partial(1, 0) / r2;
        }
        // grad V = dV/dr e_r + (1/r) dV/dtheta e_theta
        return {-(c * dv_dr - s * dv_dth / r), -(s * dv_dr + c * dv_dth / r)};
    }

    double potential(double x, double y) const {
        const double r2 = x * x + y * y;
        double out = 0.0;
        if (has_radial) out += R.eval(std::sqrt(r2), 0.0);
        if (has_angular) out += S.eval(std::atan2(y, x), 0.0) / r2;
        return out;
    }
};

}  // namespace detail

namespace {

// Triple-jump weights for the fourth-order composition.
const double kW1 = 1.0 / (2.0 - std::cbrt(2.0));
const double kW0 = -std::cbrt(2.0) / (2.0 - std::cbrt(2.0));

}  // namespace

nlohmann::json IntegratorControl::to_json() const {
    return {{"dt", dt},
            {"order", order},
            {"r_min", r_min},
            {"drift_budget", drift_budget},
            {"max_halvings", max_halvings},
            {"sample_every", sample_every},
            {"seed", seed}};
}

std::pair<double, double> force(const PotentialSpec& v, double x, double y) { return detail::PolarForce(v)(x, y); }

SplittingStepper::SplittingStepper(const PotentialSpec& v, int order, double r_min)
    : field_(std::make_shared<const detail::PolarForce>(v)), order_(order), r_min_(r_min) {
    if (order != 2 && order != 4) throw InvalidArgument("splitting order must be 2 or 4");
}

void SplittingStepper::refresh(const PhasePoint& p) {
    if (cached_ && p.x == cx_ && p.y == cy_) return;
    const double r = std::hypot(p.x, p.y);
    if (!(r > r_min_)) throw DomainError("trajectory reached r = " + std::to_string(r) + " below r_min");
    std::tie(fx_, fy_) = (*field_)(p.x, p.y);
    cx_ = p.x;
    cy_ = p.y;
    cached_ = true;
}

void SplittingStepper::kdk(PhasePoint& p, double h) {
    refresh(p);
    p.px += 0.5 * h * fx_;
    p.py += 0.5 * h * fy_;
    p.x += h * p.px;
    p.y += h * p.py;
    refresh(p);
    p.px += 0.5 * h * fx_;
    p.py += 0.5 * h * fy_;
}

void SplittingStepper::step(PhasePoint& p, double dt) {
    if (order_ == 2) {
        kdk(p, dt);
        return;
    }
    kdk(p, kW1 * dt);
    kdk(p, kW0 * dt);
    kdk(p, kW1 * dt);
}

double SplittingStepper::energy(const PhasePoint& p) const {
    return 0.5 * (p.px * p.px + p.py * p.py) + field_->potential(p.x, p.y);
}

TrajectoryRecord integrate(const PotentialSpec& v, const PhasePoint& init, double t_end, const IntegratorControl& control) {
    if (!v.classical()) throw InvalidArgument("trajectories need a classical potential (hbar = 0)");
    if (!(t_end > 0.0)) throw InvalidArgument("t_end must be positive");
    if (!(control.dt > 0.0) || control.sample_every < 1) throw InvalidArgument("need dt > 0 and sample_every >= 1");
    if (!(std::hypot(init.x, init.y) > control.r_min)) throw InvalidArgument("initial point too close to the origin");

    double dt = control.dt;
    for (int attempt = 0;; ++attempt) {
        SplittingStepper stepper(v, control.order, control.r_min);
        TrajectoryRecord rec;
        rec.init = init;
        rec.potential_id = v.family;
        rec.rejections = attempt;
        rec.dt = dt;
        const long n = static_cast<long>(std::ceil(t_end / dt - 1e-9));
        const double h = t_end / static_cast<double>(n);
        rec.dt = h;
        PhasePoint p = init;
        const double e0 = stepper.energy(p);
        const double escale = std::max(std::abs(e0), 1e-12);
        double drift = 0.0;
        double min_r = std::hypot(p.x, p.y);
        rec.t.push_back(0.0);
        rec.samples.push_back(p);
        for (long k = 1; k <= n; ++k) {
            stepper.step(p, h);
            min_r = std::min(min_r, std::hypot(p.x, p.y));
            drift = std::max(drift, std::abs(stepper.energy(p) - e0) / escale);
            if (k % control.sample_every == 0 || k == n) {
                rec.t.push_back(static_cast<double>(k) * h);
                rec.samples.push_back(p);
            }
        }
        rec.steps = n;
        rec.min_r = min_r;
        rec.energy_drift = drift;
        if (drift <= control.drift_budget) return rec;
        if (attempt >= control.max_halvings)
            throw IntegrationError("energy drift " + std::to_string(drift) + " above the budget at the smallest step " +
                                   std::to_string(h));
        dt *= 0.5;
    }
}

std::map<std::string, double> drift_report(const TrajectoryRecord& traj, const NamedObservables& observables, double floor) {
    std::map<std::string, double> out;
    for (const auto& [name, obs] : observables) {
        if (traj.samples.empty()) {
            out[name] = 0.0;
            continue;
        }
        const double o0 = obs.evaluate(traj.samples.front());
        const double scale = std::max(std::abs(o0), floor);
        double worst = 0.0;
        for (const auto& p : traj.samples) worst = std::max(worst, std::abs(obs.evaluate(p) - o0) / scale);
        out[name] = worst;
    }
    return out;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& traj) {
    std::ostringstream buf;
    buf << std::setprecision(17) << "t,x,y,px,py\n";
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& p = traj.samples[i];
        buf << traj.t[i] << ',' << p.x << ',' << p.y << ',' << p.px << ',' << p.py << '\n';
    }
    out << buf.str();
}

}  // namespace superint
