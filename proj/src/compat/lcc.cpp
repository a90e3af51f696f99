#include <algorithm>
#include <cmath>

#include "superint/compat.hpp"
#include "detail.hpp"
#include "superint/error.hpp"

namespace superint {

namespace {

void raise_majorant(Jet2& majorant, const Jet2& bound) {
    auto dst = majorant.coeffs();
    auto src = bound.coeffs();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::max(dst[i], src[i]);
}

Jet2 order_envelope(const Jet2& v) {
    Jet2 out(v.base(), v.order());
    for (int t = 0; t <= v.order(); ++t) {
        double m = 0.0;
        for (int i = 0; i <= t; ++i) m = std::max(m, std::abs(v.coeff(i, t - i)));
        for (int i = 0; i <= t; ++i) out.coeff(i, t - i) = m;
    }
    return out;
}

// Coefficient-wise absolute value. Products of such jets bound every Leibniz term.
Jet2 abs_jet(Jet2 j) {
    for (double& c : j.coeffs()) c = std::abs(c);
    return j;
}

}  // namespace

std::vector<Poly2> f_polys(const LeadingTermSpec& spec) {
    spec.validate(kJetHardLimit);
    const int N = spec.N;
    std::vector<Poly2> f(static_cast<std::size_t>(N + 1));
    for (int j = 0; j <= N; ++j) {
        Poly2& fj = f[static_cast<std::size_t>(j)];
        for (int n = 0; n <= N - j; ++n)
            for (int m = 0; m <= j; ++m) {
                const double a = spec.a(m, n);
                if (a == 0.0 || m + n > N) continue;
                const double sign = ((j - m) % 2 == 0) ? 1.0 : -1.0;
                fj += Poly2::monomial(N - j - n, j - m, sign * binomial(N - m - n, j - m) * a);
            }
    }
    return f;
}

LccJet lcc_jet(const std::vector<Poly2>& f, const Jet2& v, int extra) {
    const int N = static_cast<int>(f.size()) - 1;
    if (N < 1) throw InvalidArgument("LCC needs N >= 1");
    if (v.order() < N + extra) throw OrderOverflow("potential jet too short for the LCC");
    const Jet2 vt = v.truncated(N + extra);
    const Jet2 vx = vt.derivative(1, 0);
    const Jet2 vy = vt.derivative(0, 1);
    const int inner_order = N - 1 + extra;
    // Each derivative of V is bounded by the largest coefficient of its total order, so that
    // a mixed partial that cancels to roundoff inside V does not shrink the scale.
    const Jet2 vmag = order_envelope(vt);
    const Jet2 avx = vmag.derivative(1, 0);
    const Jet2 avy = vmag.derivative(0, 1);
    std::vector<Jet2> fj, afj;
    fj.reserve(f.size());
    for (const auto& p : f) {
        fj.push_back(p.jet(v.base(), inner_order));
        afj.push_back(abs_jet(fj.back()));
    }

    LccJet out{Jet2(v.base(), extra), Jet2(v.base(), extra)};
    for (int j = 0; j < N; ++j) {
        const Jet2 p1 = (fj[static_cast<std::size_t>(j + 1)] * vx * static_cast<double>(j + 1)).derivative(N - 1 - j, j);
        const Jet2 p2 = (fj[static_cast<std::size_t>(j)] * vy * static_cast<double>(N - j)).derivative(N - 1 - j, j);
        if (j % 2 == 0) {
            out.value += p1;
            out.value += p2;
        } else {
            out.value -= p1;
            out.value -= p2;
        }
        const auto jj = static_cast<std::size_t>(j);
        raise_majorant(out.majorant, (afj[jj + 1] * avx * static_cast<double>(j + 1)).derivative(N - 1 - j, j));
        raise_majorant(out.majorant, (afj[jj] * avy * static_cast<double>(N - j)).derivative(N - 1 - j, j));
    }
    return out;
}

LccValue lcc_cartesian(const LeadingTermSpec& spec, const FieldExpr& v, Point2 p, const JetConfig& config) {
    const auto f = f_polys(spec);
    const LccJet l = lcc_jet(f, v.jet(p, spec.N, config), 0);
    return {l.value.value(), l.majorant.value()};
}

namespace {

FieldExpr separable_cartesian(const FieldExpr& R, const FieldExpr& S) {
    const FieldExpr x = FieldExpr::variable(0);
    const FieldExpr y = FieldExpr::variable(1);
    FieldExpr v = compose(R, radius_field());
    if (!S.is_zero()) v = v + angular_to_cartesian(S) / (x * x + y * y);
    return v;
}

}  // namespace

LccValue lcc_polar(const LeadingTermSpec& spec, const FieldExpr& R, const FieldExpr& S, double r, double theta,
                   double r_min, const JetConfig& config) {
    if (!(r > r_min)) throw DomainError("polar LCC needs r > r_min");
    return lcc_cartesian(spec, separable_cartesian(R, S), {r * std::cos(theta), r * std::sin(theta)}, config);
}

double lcc_polar_operator_form(const LeadingTermSpec& spec, const FieldExpr& R, const FieldExpr& S, double r,
                               double theta) {
    const int N = spec.N;
    const auto f = f_polys(spec);
    const FieldExpr rr = FieldExpr::variable(0);
    const FieldExpr th = FieldExpr::variable(1);
    const FieldExpr c = cos(th);
    const FieldExpr s = sin(th);
    const FieldExpr r3 = rr * rr * rr;
    const FieldExpr dR = derivative(R, 1, 0);
    const FieldExpr s_th = compose(S, th);
    const FieldExpr ds_th = compose(derivative(S, 1, 0), th);

    std::vector<FieldExpr> fp;
    for (const auto& p : f) fp.push_back(compose(p.to_field(), rr * c, rr * s));

    auto d_x = [&](const FieldExpr& g) { return c * derivative(g, 1, 0) - s / rr * derivative(g, 0, 1); };
    auto d_y = [&](const FieldExpr& g) { return s * derivative(g, 1, 0) + c / rr * derivative(g, 0, 1); };

    double total = 0.0;
    for (int j = 0; j < N; ++j) {
        const FieldExpr& f0 = fp[static_cast<std::size_t>(j)];
        const FieldExpr& f1 = fp[static_cast<std::size_t>(j + 1)];
        const FieldExpr radial_mix = static_cast<double>(j + 1) * f1 * c + static_cast<double>(N - j) * f0 * s;
        const FieldExpr angular_mix = static_cast<double>(N - j) * f0 * c - static_cast<double>(j + 1) * f1 * s;
        FieldExpr e = radial_mix * dR - 2.0 / r3 * radial_mix * s_th + 1.0 / r3 * angular_mix * ds_th;
        for (int k = 0; k < j; ++k) e = d_y(e);
        for (int k = 0; k < N - 1 - j; ++k) e = d_x(e);
        total += ((j % 2 == 0) ? 1.0 : -1.0) * e.eval(r, theta);
    }
    return total;
}

double RadialResiduals::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

namespace detail {

// d^2/dr^2 [r^{N+2} L] at every quadrature node from precomputed potential jets (order N + 2).
RadialResiduals radial_from_jets(const std::vector<Poly2>& f, double r, const std::vector<double>& thetas,
                                 const std::vector<Jet2>& v_jets) {
    const int N = static_cast<int>(f.size()) - 1;
    const double n2 = N + 2.0;
    std::vector<double> g2(thetas.size());
    double scale = 0.0;
    for (std::size_t m = 0; m < thetas.size(); ++m) {
        const double c = std::cos(thetas[m]);
        const double s = std::sin(thetas[m]);
        const LccJet l = lcc_jet(f, v_jets[m], 2);
        const Jet2& L = l.value;
        const Jet2& M = l.majorant;
        const double lr = c * L.partial(1, 0) + s * L.partial(0, 1);
        const double lrr = c * c * L.partial(2, 0) + 2.0 * c * s * L.partial(1, 1) + s * s * L.partial(0, 2);
        const double mr = std::abs(c) * M.partial(1, 0) + std::abs(s) * M.partial(0, 1);
        const double mrr = c * c * M.partial(2, 0) + 2.0 * std::abs(c * s) * M.partial(1, 1) + s * s * M.partial(0, 2);
        const double rn = std::pow(r, N);
        g2[m] = n2 * (n2 - 1.0) * rn * L.value() + 2.0 * n2 * rn * r * lr + rn * r * r * lrr;
        scale = std::max(scale, n2 * (n2 - 1.0) * rn * M.value() + 2.0 * n2 * rn * r * mr + rn * r * r * mrr);
    }
    RadialResiduals out;
    out.scale = scale;
    for (int harmonic = 1; harmonic <= N; ++harmonic) {
        out.values.push_back(fourier_project_samples(g2, harmonic, Trig::sin));
        out.values.push_back(fourier_project_samples(g2, harmonic, Trig::cos));
    }
    return out;
}

std::vector<Jet2> separable_jets(const FieldExpr& R, const FieldExpr& S, double r, const std::vector<double>& thetas,
                                 int order) {
    const FieldExpr v = separable_cartesian(R, S);
    std::vector<Jet2> jets;
    jets.reserve(thetas.size());
    JetConfig config;
    config.max_order = std::max(config.max_order, order);
    for (double t : thetas) jets.push_back(v.jet({r * std::cos(t), r * std::sin(t)}, order, config));
    return jets;
}

}  // namespace detail

RadialResiduals radial_residuals(const PolarLeadingSpec& spec, const FieldExpr& R, double r, const FieldExpr& probe_s,
                                 int nodes, double r_min) {
    if (!(r > r_min)) throw DomainError("radial residuals need r > r_min");
    const int N = spec.N;
    if (nodes <= 0) nodes = default_quadrature_nodes(N);
    if (nodes < 2 * N + 1) throw InvalidArgument("too few quadrature nodes for the requested harmonics");
    const auto thetas = quadrature_nodes(nodes);
    const auto f = f_polys(b_to_a(spec));
    return detail::radial_from_jets(f, r, thetas, detail::separable_jets(R, probe_s, r, thetas, N + 2));
}

}  // namespace superint
