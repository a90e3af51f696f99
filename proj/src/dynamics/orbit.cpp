#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "superint/dynamics.hpp"
#include "superint/error.hpp"

namespace superint {

namespace {

double radial_momentum(const PhasePoint& p) { return (p.x * p.px + p.y * p.py) / std::hypot(p.x, p.y); }
double lz(const PhasePoint& p) { return p.x * p.py - p.y * p.px; }

double wrap(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a > std::numbers::pi) a -= two_pi;
    if (a <= -std::numbers::pi) a += two_pi;
    return a;
}

// Sub-step s in (0, h] where g(step(prev, s)) crosses zero, g(prev) > 0 >= g(step(prev, h)).
// Illinois variant of regula falsi.
template <class G>
std::pair<double, PhasePoint> refine_crossing(SplittingStepper& stepper, const PhasePoint& prev, const PhasePoint& next,
                                              double h, G g) {
    double a = 0.0, b = h;
    double ga = g(prev), gb = g(next);
    PhasePoint best = next;
    double sbest = h;
    int side = 0;
    for (int it = 0; it < 80; ++it) {
        const double s = (ga == gb) ? 0.5 * (a + b) : b - gb * (b - a) / (gb - ga);
        PhasePoint q = prev;
        if (s > 0.0) stepper.step(q, s);
        const double gs = g(q);
        best = q;
        sbest = s;
        if (gs == 0.0 || b - a < 1e-15 * h) break;
        if (gs > 0.0) {
            a = s;
            ga = gs;
            if (side == -1) gb *= 0.5;
            side = -1;
        } else {
            b = s;
            gb = gs;
            if (side == 1) ga *= 0.5;
            side = 1;
        }
        if (std::abs(gs) < 1e-15 * (std::abs(prev.px) + std::abs(prev.py) + std::abs(lz(prev)) + 1e-300)) break;
    }
    return {sbest, best};
}

bool confining(const RadialPart& r) {
    return (r.kind == RadialKind::oscillator && r.b > 0.0) || (r.kind == RadialKind::kepler && r.a < 0.0);
}

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

RationalApproximant rational_approximant(double x, long q_max) {
    if (!std::isfinite(x)) throw InvalidArgument("rational approximant of a non-finite value");
    if (q_max < 1) throw InvalidArgument("q_max must be >= 1");
    // Convergents h_n / k_n of the continued fraction of x.
    long h_prev = 1, h = static_cast<long>(std::floor(x));
    long k_prev = 0, k = 1;
    double rem = x - std::floor(x);
    for (int it = 0; it < 64 && rem > 1e-13; ++it) {
        const double inv = 1.0 / rem;
        const double a_d = std::floor(inv);
        if (a_d > 1e9) break;
        const long a = static_cast<long>(a_d);
        const long k_next = a * k + k_prev;
        if (k_next > q_max) break;
        const long h_next = a * h + h_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        rem = inv - a_d;
    }
    return {h, k, std::abs(x - static_cast<double>(h) / static_cast<double>(k))};
}

OrbitReport orbit_report(const PotentialSpec& v, const PhasePoint& init, int max_radial_periods, const OrbitOptions& options) {
    if (!v.classical()) throw InvalidArgument("orbits need a classical potential (hbar = 0)");
    if (max_radial_periods < 1) throw InvalidArgument("need at least one radial period");
    const auto& control = options.control;
    if (!(control.dt > 0.0)) throw InvalidArgument("dt must be positive");
    const double r0 = std::hypot(init.x, init.y);
    if (!(r0 > control.r_min)) throw InvalidArgument("initial point too close to the origin");

    OrbitReport rep;
    rep.closure_tolerance = options.closure_tolerance;
    rep.rational_tolerance = options.rational_tolerance;
    rep.q_max = options.q_max;
    rep.advisory = !confining(v.radial);
    rep.dt = control.dt;

    NamedObservables observables = {{"H", hamiltonian_of(v)}, {"X", x_of(v)}};
    for (const auto& o : options.extra_observables) observables.push_back(o);
    std::vector<double> o0(observables.size()), drift(observables.size(), 0.0);
    for (std::size_t i = 0; i < observables.size(); ++i) o0[i] = observables[i].second.evaluate(init);

    SplittingStepper stepper(v, control.order, control.r_min);
    const double h = control.dt;
    PhasePoint p = init;
    double t = 0.0;
    double theta_u = std::atan2(p.y, p.x);
    double amp[4] = {std::abs(p.x), std::abs(p.y), std::abs(p.px), std::abs(p.py)};
    std::vector<PhasePoint> crossings;
    std::vector<double> crossing_theta;  // unwrapped angle at each crossing
    std::vector<double> lz_times;         // L_z crossing + to -
    int lz_sign_changes = 0;
    TrajectoryRecord rec;
    if (options.keep_trajectory) {
        rec.init = init;
        rec.potential_id = v.family;
        rec.dt = h;
        rec.t.push_back(0.0);
        rec.samples.push_back(p);
    }
    double min_r = r0;
    long steps = 0;
    rep.bounded = true;

    while (static_cast<int>(crossings.size()) < max_radial_periods + 1 && t < options.max_time) {
        const PhasePoint prev = p;
        const double theta_prev = theta_u;
        stepper.step(p, h);
        t += h;
        ++steps;
        const double r = std::hypot(p.x, p.y);
        min_r = std::min(min_r, r);
        if (r > options.escape_factor * r0) {
            rep.bounded = false;
            break;
        }
        theta_u += wrap(std::atan2(p.y, p.x) - std::atan2(prev.y, prev.x));
        amp[0] = std::max(amp[0], std::abs(p.x));
        amp[1] = std::max(amp[1], std::abs(p.y));
        amp[2] = std::max(amp[2], std::abs(p.px));
        amp[3] = std::max(amp[3], std::abs(p.py));
        if (steps % control.sample_every == 0) {
            for (std::size_t i = 0; i < observables.size(); ++i) {
                const double d = std::abs(observables[i].second.evaluate(p) - o0[i]) / std::max(std::abs(o0[i]), 1e-12);
                drift[i] = std::max(drift[i], d);
            }
            if (options.keep_trajectory) {
                rec.t.push_back(t);
                rec.samples.push_back(p);
            }
        }
        if ((lz(prev) > 0.0) != (lz(p) > 0.0)) ++lz_sign_changes;
        if (lz(prev) > 0.0 && lz(p) <= 0.0) {
            const auto [s, q] = refine_crossing(stepper, prev, p, h, lz);
            lz_times.push_back(t - h + s);
        }
        if (radial_momentum(prev) > 0.0 && radial_momentum(p) <= 0.0) {
            const auto [s, q] = refine_crossing(stepper, prev, p, h, radial_momentum);
            crossings.push_back(q);
            rep.crossing_times.push_back(t - h + s);
            crossing_theta.push_back(theta_prev + wrap(std::atan2(q.y, q.x) - std::atan2(prev.y, prev.x)));
        }
    }
    for (std::size_t i = 0; i < observables.size(); ++i) rep.drift[observables[i].first] = drift[i];
    if (options.keep_trajectory) {
        rec.steps = steps;
        rec.min_r = min_r;
        rec.energy_drift = drift[0];
        rep.trajectory = std::move(rec);
    }
    if (!rep.bounded) {
        rep.closure_distance = std::numeric_limits<double>::infinity();
        rep.radial_periods = std::max(0, static_cast<int>(crossings.size()) - 1);
        return rep;
    }
    if (crossings.empty()) throw IntegrationError("no radial section crossing within the time horizon");

    const int K = static_cast<int>(crossings.size()) - 1;
    rep.radial_periods = K;
    rep.period_estimate = K > 0 ? (rep.crossing_times.back() - rep.crossing_times.front()) / K : 0.0;
    for (double& a : amp) a = std::max(a, 1e-12);

    rep.closure_distance = std::numeric_limits<double>::infinity();
    const PhasePoint& ref = crossings.front();
    for (int k = 1; k <= K; ++k) {
        const PhasePoint& q = crossings[static_cast<std::size_t>(k)];
        const double d = std::sqrt(std::pow((q.x - ref.x) / amp[0], 2) + std::pow((q.y - ref.y) / amp[1], 2) +
                                   std::pow((q.px - ref.px) / amp[2], 2) + std::pow((q.py - ref.py) / amp[3], 2));
        if (d < rep.closure_distance) {
            rep.closure_distance = d;
            rep.closure_crossing = k;
        }
    }
    if (K == 0) return rep;

    // Angular phase in turns: winding angle, or L_z libration count interpolated in time.
    const bool libration = lz_sign_changes >= 2 && lz_times.size() >= 2;
    rep.angular_mode = libration ? "libration" : "rotation";
    auto phase = [&](int k) {
        if (!libration) return crossing_theta[static_cast<std::size_t>(k)] / (2.0 * std::numbers::pi);
        const double tk = rep.crossing_times[static_cast<std::size_t>(k)];
        const auto it = std::upper_bound(lz_times.begin(), lz_times.end(), tk);
        std::size_t j = static_cast<std::size_t>(it - lz_times.begin());
        // Interval [lz_times[j - 1], lz_times[j]] brackets tk; extrapolate at the ends.
        j = std::clamp<std::size_t>(j, 1, lz_times.size() - 1);
        const double a = lz_times[j - 1], b = lz_times[j];
        return static_cast<double>(j - 1) + (tk - a) / (b - a);
    };
    const int k_use = rep.closure_distance < options.closure_tolerance ? rep.closure_crossing : K;
    rep.rotation_number = (phase(k_use) - phase(0)) / k_use;
    const auto approx = rational_approximant(rep.rotation_number, options.q_max);
    if (approx.error < options.rational_tolerance) rep.rational = approx;
    rep.closed = rep.closure_distance < options.closure_tolerance && rep.rational.has_value();
    return rep;
}

nlohmann::json OrbitReport::to_json() const {
    nlohmann::json j = {{"bounded", bounded},
                        {"closed", closed},
                        {"advisory", advisory},
                        {"closure_distance", finite_or_null(closure_distance)},
                        {"closure_crossing", closure_crossing},
                        {"period_estimate", period_estimate},
                        {"radial_periods", radial_periods},
                        {"rotation_number", rotation_number},
                        {"angular_mode", angular_mode},
                        {"drift", drift},
                        {"tolerances", {{"closure", closure_tolerance}, {"rational", rational_tolerance}, {"q_max", q_max}}},
                        {"dt", dt}};
    if (rational)
        j["rational"] = {{"p", rational->p}, {"q", rational->q}, {"error", rational->error}};
    else
        j["rational"] = nullptr;
    return j;
}

}  // namespace superint
