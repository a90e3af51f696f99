#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail.hpp"
#include "superint/error.hpp"
#include "superint/parallel.hpp"

namespace superint {

const char* angular_family_name(AngularFamily f) noexcept {
    switch (f) {
        case AngularFamily::kepler: return "kepler";
        case AngularFamily::oscillator: return "oscillator";
        case AngularFamily::free_odd: return "free-odd";
        case AngularFamily::free_even: return "free-even";
    }
    return "?";
}

AngularFamily parse_angular_family(const std::string& name) {
    for (auto f : {AngularFamily::kepler, AngularFamily::oscillator, AngularFamily::free_odd, AngularFamily::free_even})
        if (name == angular_family_name(f)) return f;
    throw InvalidArgument("unknown angular family '" + name + "'");
}

FieldExpr AngularFamilyBasis::t_of(const std::vector<double>& constants) const {
    if (constants.size() != size()) throw InvalidArgument("wrong number of numerator constants");
    std::vector<double> w(constants.begin(), constants.begin() + static_cast<std::ptrdiff_t>(numerators.size()));
    FieldExpr t = linear_combination(numerators, w) / denominator;
    if (additive_constant) t = t + constants.back();
    return t;
}

AngularFamilyBasis angular_family_basis(const PolarLeadingSpec& spec, AngularFamily family) {
    spec.validate();
    const int N = spec.N;
    const bool even_family = family == AngularFamily::kepler || family == AngularFamily::oscillator;
    if (even_family != (N % 2 == 0))
        throw InvalidArgument(std::string("family ") + angular_family_name(family) + " does not apply to N = " +
                              std::to_string(N));
    const auto [part_i, part_ii] = split_I_II(spec);
    if (part_i.is_zero()) throw InvalidArgument("standard families need a nonzero Y_I part");

    AngularFamilyBasis out;
    out.family = family;
    const FieldExpr th = FieldExpr::variable(0);
    // Odd harmonics for the kepler and free-odd families, even ones for the other two.
    const bool odd_harmonics = family == AngularFamily::kepler || family == AngularFamily::free_odd;
    // oscillator and free-odd use s (B2 cos - B1 sin); kepler and free-even use B1 cos + B2 sin.
    const bool derivative_pattern = family == AngularFamily::oscillator || family == AngularFamily::free_odd;

    std::vector<FieldExpr> den_terms;
    std::vector<double> den_weights;
    for (const auto& [s, k] : b_slots(N)) {
        if (s == 0 || (s % 2 == 1) != odd_harmonics) continue;
        if (s + 2 * k < N - 1) continue;
        const double b1 = part_i.b1(s, k), b2 = part_i.b2(s, k);
        if (b1 == 0.0 && b2 == 0.0) continue;
        const FieldExpr c = cos(static_cast<double>(s) * th);
        const FieldExpr sn = sin(static_cast<double>(s) * th);
        if (derivative_pattern) {
            den_terms.insert(den_terms.end(), {c, sn});
            den_weights.insert(den_weights.end(), {s * b2, -s * b1});
        } else {
            den_terms.insert(den_terms.end(), {c, sn});
            den_weights.insert(den_weights.end(), {b1, b2});
        }
    }
    out.denominator = linear_combination(den_terms, den_weights);
    if (out.denominator.is_zero())
        throw InvalidArgument(std::string("denominator of ") + angular_family_name(family) +
                              " vanishes identically for this spec");

    int top = N;
    switch (family) {
        case AngularFamily::kepler: top = N - 1; break;
        case AngularFamily::oscillator: top = N; break;
        case AngularFamily::free_odd: top = N; break;
        case AngularFamily::free_even: top = N - 1; break;
    }
    if (family != AngularFamily::free_odd) {
        out.names.push_back("alpha_0");
        out.numerators.push_back(FieldExpr(1.0));
    }
    for (int s = odd_harmonics ? 1 : 2; s <= top; s += 2) {
        out.names.push_back("alpha_" + std::to_string(s));
        out.numerators.push_back(cos(static_cast<double>(s) * th));
        out.names.push_back("beta_" + std::to_string(s));
        out.numerators.push_back(sin(static_cast<double>(s) * th));
    }
    out.additive_constant = family == AngularFamily::free_even;
    if (out.additive_constant) out.names.push_back("alpha_" + std::to_string(N + 1));
    switch (family) {
        case AngularFamily::kepler: out.radial = RadialKind::kepler; break;
        case AngularFamily::oscillator: out.radial = RadialKind::oscillator; break;
        default: out.radial = RadialKind::zero; break;
    }
    return out;
}

FieldExpr AngularNullspace::s_of(const Eigen::VectorXd& coefficients) const {
    const std::size_t offset = columns.size() - basis.size();
    std::vector<double> w;
    for (std::size_t i = 0; i < basis.numerators.size(); ++i)
        w.push_back(coefficients(static_cast<Eigen::Index>(offset + i)));
    return derivative(linear_combination(basis.numerators, w) / basis.denominator, 1, 0);
}

nlohmann::json AngularNullspace::to_json() const {
    nlohmann::json nontrivial = nlohmann::json::array();
    for (Eigen::Index c = 0; c < nontrivial_basis.cols(); ++c) {
        nlohmann::json v = nlohmann::json::array();
        for (Eigen::Index r = 0; r < nontrivial_basis.rows(); ++r) v.push_back(nontrivial_basis(r, c));
        nontrivial.push_back(v);
    }
    return {{"family", angular_family_name(basis.family)},
            {"columns", columns},
            {"nullspace", detail::nullspace_json(nullspace, NullspaceOptions{})},
            {"nontrivial_dimension", nontrivial_dimension},
            {"nontrivial_basis", nontrivial}};
}

AngularNullspace standard_angular_nullspace(const PolarLeadingSpec& spec, AngularFamily family,
                                            const AngularScanOptions& options) {
    AngularNullspace out;
    out.basis = angular_family_basis(spec, family);
    const LeadingTermSpec a_spec = b_to_a(spec);
    const FieldExpr rvar = FieldExpr::variable(0);

    struct Column {
        FieldExpr R;
        FieldExpr S;
    };
    std::vector<Column> cols;
    if (out.basis.radial == RadialKind::kepler) {
        out.columns.push_back("radial");
        cols.push_back({options.radial_amplitude / rvar, FieldExpr(0.0)});
    } else if (out.basis.radial == RadialKind::oscillator) {
        out.columns.push_back("radial");
        cols.push_back({options.radial_amplitude * rvar * rvar, FieldExpr(0.0)});
    }
    for (std::size_t i = 0; i < out.basis.numerators.size(); ++i) {
        out.columns.push_back(out.basis.names[i]);
        cols.push_back({FieldExpr(0.0), derivative(out.basis.numerators[i] / out.basis.denominator, 1, 0)});
    }
    if (out.basis.additive_constant) {
        out.columns.push_back(out.basis.names.back());
        cols.push_back({FieldExpr(0.0), FieldExpr(0.0)});
    }

    // Sample angles away from the poles of T.
    std::vector<double> thetas;
    double den_max = 0.0;
    const int fine = 4 * options.thetas;
    for (int m = 0; m < fine; ++m)
        den_max = std::max(den_max, std::abs(out.basis.denominator.eval(2.0 * std::numbers::pi * m / fine, 0.0)));
    for (int m = 0; m < options.thetas; ++m) {
        const double t = 2.0 * std::numbers::pi * (m + 0.37) / options.thetas;
        if (std::abs(out.basis.denominator.eval(t, 0.0)) >= options.pole_margin * den_max) thetas.push_back(t);
    }
    if (thetas.size() < out.columns.size())
        throw DomainError("denominator vanishes on too much of the sampling grid");

    // S samples away from the poles; a column whose S is zero to roundoff is
    // dropped from the LCC system (its majorant would only measure roundoff).
    std::vector<double> probe;
    for (int q = 0; q < 64; ++q) {
        const double t = 2.0 * std::numbers::pi * (q + 0.21) / 64;
        if (std::abs(out.basis.denominator.eval(t, 0.0)) >= options.pole_margin * den_max) probe.push_back(t);
    }
    Eigen::MatrixXd s_samples = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(probe.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& S = cols[c].S;
        if (S.is_zero()) continue;
        for (std::size_t q = 0; q < probe.size(); ++q)
            s_samples(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(c)) = S.eval(probe[q], 0.0);
    }
    const double s_global = s_samples.size() ? s_samples.cwiseAbs().maxCoeff() : 0.0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (!cols[c].R.is_zero() || cols[c].S.is_zero()) continue;
        if (s_samples.col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff() <= 1e-12 * s_global) {
            cols[c].S = FieldExpr(0.0);
            s_samples.col(static_cast<Eigen::Index>(c)).setZero();
        }
    }

    const std::size_t npts = options.radii.size() * thetas.size();
    const auto ncols = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(npts), ncols);
    Eigen::MatrixXd scales = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(npts), ncols);
    parallel_for(npts, options.jobs, [&](std::size_t p) {
        const double r = options.radii[p / thetas.size()];
        const double t = thetas[p % thetas.size()];
        for (Eigen::Index c = 0; c < ncols; ++c) {
            const auto& col = cols[static_cast<std::size_t>(c)];
            if (col.R.is_zero() && col.S.is_zero()) continue;
            const LccValue v = lcc_polar(a_spec, col.R, col.S, r, t);
            values(static_cast<Eigen::Index>(p), c) = v.value;
            scales(static_cast<Eigen::Index>(p), c) = v.scale;
        }
    });

    // Columns are scaled by their own largest intermediate magnitude (a reparametrization,
    // undone on the basis afterwards); rows then by their largest scaled magnitude.
    // A column whose own scale sits far below the others only carries roundoff,
    // so its scale is floored at a fraction of the largest.
    Eigen::VectorXd col_scale(ncols);
    const double scale_floor = 1e-6 * (scales.size() ? scales.maxCoeff() : 0.0);
    for (Eigen::Index c = 0; c < ncols; ++c) {
        const double m = std::max(scales.col(c).maxCoeff(), scale_floor);
        col_scale(c) = m > 0.0 ? m : 1.0;
    }
    Eigen::MatrixXd m = values * col_scale.cwiseInverse().asDiagonal();
    const Eigen::MatrixXd rel_scales = scales * col_scale.cwiseInverse().asDiagonal();
    for (Eigen::Index p = 0; p < m.rows(); ++p) {
        const double rs = rel_scales.row(p).maxCoeff();
        if (rs > 0.0) m.row(p) /= rs;
    }
    Nullspace ns = numerical_nullspace(m, options.nullspace);
    if (ns.dimension > 0) {
        Eigen::MatrixXd b = col_scale.cwiseInverse().asDiagonal() * ns.basis;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
        ns.basis = qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
    }
    out.nullspace = ns;

    // Directions with S identically zero (T constant) are gauge, not angular solutions.
    if (ns.dimension > 0) {
        const Eigen::MatrixXd image = s_samples * ns.basis;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(image, Eigen::ComputeFullV);
        const Eigen::VectorXd sv = svd.singularValues();
        const double cut = 1e-8 * std::max({sv.size() ? sv(0) : 0.0, s_global, 1e-300});
        int rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > cut) ++rank;
        out.nontrivial_dimension = rank;
        out.nontrivial_basis = ns.basis * svd.matrixV().leftCols(rank);
    } else {
        out.nontrivial_basis = Eigen::MatrixXd::Zero(ncols, 0);
    }
    return out;
}

Nullspace compatible_leading_terms(int N, const FieldExpr& v, const std::vector<Point2>& points,
                                   const NullspaceOptions& options) {
    const auto slots = a_slots(N);
    std::vector<std::vector<Poly2>> fs;
    for (const auto& [mm, nn] : slots) {
        LeadingTermSpec s;
        s.N = N;
        s.set(mm, nn, 1.0);
        fs.push_back(f_polys(s));
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(slots.size()));
    for (std::size_t p = 0; p < points.size(); ++p) {
        const Jet2 vj = v.jet(points[p], N);
        double scale = 0.0;
        for (std::size_t c = 0; c < slots.size(); ++c) {
            const LccJet l = lcc_jet(fs[c], vj, 0);
            m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)) = l.value.value();
            scale = std::max(scale, l.majorant.value());
        }
        if (scale > 0.0) m.row(static_cast<Eigen::Index>(p)) /= scale;
    }
    return numerical_nullspace(m, options);
}

}  // namespace superint
