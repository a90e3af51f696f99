#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "superint/error.hpp"
#include "superint/parallel.hpp"

namespace superint {

std::string BSlot::label() const {
    return "B" + std::to_string(family) + "(" + std::to_string(s) + "," + std::to_string(k) + ")";
}

namespace {

std::vector<BSlot> radial_columns(int N, bool include_singlets) {
    std::vector<BSlot> cols;
    for (const auto& [s, k] : b_slots(N))
        if (s > 0 || include_singlets) cols.push_back({1, s, k});
    for (const auto& [s, k] : b_slots(N))
        if (s > 0) cols.push_back({2, s, k});
    return cols;
}

PolarLeadingSpec unit_spec(int N, const BSlot& slot, double value = 1.0) {
    PolarLeadingSpec spec;
    spec.N = N;
    if (slot.family == 1) spec.set_b1(slot.s, slot.k, value);
    else spec.set_b2(slot.s, slot.k, value);
    return spec;
}

std::vector<double> log_grid(int count, double lo, double hi) {
    if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("bad radius grid");
    std::vector<double> r(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        r[static_cast<std::size_t>(i)] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    return r;
}

}  // namespace

PolarLeadingSpec RadialResidualSystem::basis_spec(int i) const {
    PolarLeadingSpec spec;
    spec.N = N;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const double v = nullspace.basis(static_cast<Eigen::Index>(c), i);
        if (std::abs(v) < 1e-13) continue;
        if (columns[c].family == 1) spec.set_b1(columns[c].s, columns[c].k, v);
        else spec.set_b2(columns[c].s, columns[c].k, v);
    }
    return spec;
}

RadialResidualSystem assemble_radial_system(int N, const RadialPart& radial, const RadialScanOptions& options,
                                            const FieldExpr& probe_s) {
    if (N < 1 || N > kDefaultMaxLeadingOrder) throw InvalidArgument("radial scan needs 1 <= N <= N_max");
    RadialResidualSystem sys;
    sys.N = N;
    sys.radial = radial;
    sys.options = options.nullspace;
    sys.columns = radial_columns(N, options.include_singlets);
    sys.radii = log_grid(options.radii, options.r_lo, options.r_hi);
    const int nodes = options.nodes > 0 ? options.nodes : default_quadrature_nodes(N);
    if (nodes < 2 * N + 1) throw InvalidArgument("too few quadrature nodes for the requested harmonics");
    const auto thetas = quadrature_nodes(nodes);

    std::vector<std::vector<Poly2>> fs;
    for (const auto& col : sys.columns) fs.push_back(f_polys(b_to_a(unit_spec(N, col))));

    const auto rows_per_radius = static_cast<Eigen::Index>(2 * N);
    const auto ncols = static_cast<Eigen::Index>(sys.columns.size());
    sys.matrix = Eigen::MatrixXd::Zero(rows_per_radius * static_cast<Eigen::Index>(sys.radii.size()), ncols);
    sys.row_scale.assign(sys.radii.size(), 1.0);
    const FieldExpr R = radial.field();

    parallel_for(sys.radii.size(), options.jobs, [&](std::size_t ri) {
        const double r = sys.radii[ri];
        const auto jets = detail::separable_jets(R, probe_s, r, thetas, N + 2);
        Eigen::MatrixXd block(rows_per_radius, ncols);
        double scale = 0.0;
        for (Eigen::Index c = 0; c < ncols; ++c) {
            const auto res = detail::radial_from_jets(fs[static_cast<std::size_t>(c)], r, thetas, jets);
            for (Eigen::Index q = 0; q < rows_per_radius; ++q) block(q, c) = res.values[static_cast<std::size_t>(q)];
            scale = std::max(scale, res.scale);
        }
        if (!(scale > 0.0)) scale = 1.0;
        sys.row_scale[ri] = scale;
        sys.matrix.middleRows(static_cast<Eigen::Index>(ri) * rows_per_radius, rows_per_radius) = block / scale;
    });
    return sys;
}

RadialResidualSystem admissible_b_space(int N, const RadialPart& radial, const RadialScanOptions& options) {
    RadialResidualSystem sys = assemble_radial_system(N, radial, options);
    const FieldExpr th = FieldExpr::variable(0);
    const RadialResidualSystem second = assemble_radial_system(N, radial, options, 0.5 + cos(3.0 * th));
    double dev = 0.0;
    const auto per = static_cast<Eigen::Index>(2 * N);
    for (Eigen::Index row = 0; row < sys.matrix.rows(); ++row) {
        const std::size_t ri = static_cast<std::size_t>(row / per);
        const double s1 = sys.row_scale[ri], s2 = second.row_scale[ri];
        const double diff = ((sys.matrix.row(row) * s1) - (second.matrix.row(row) * s2)).cwiseAbs().maxCoeff();
        dev = std::max(dev, diff / std::max(s1, s2));
    }
    sys.probe_deviation = dev;
    sys.nullspace = numerical_nullspace(sys.matrix, options.nullspace);
    return sys;
}

nlohmann::json RadialResidualSystem::to_json() const {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : columns) cols.push_back(c.label());
    nlohmann::json specs = nlohmann::json::array();
    for (int i = 0; i < nullspace.dimension; ++i) specs.push_back(superint::to_json(basis_spec(i)));
    return {{"N", N},
            {"radial",
             {{"kind", radial_kind_name(radial.kind)}, {"a", radial.a}, {"b", radial.b}, {"d", radial.d}}},
            {"columns", cols},
            {"radii", radii},
            {"rows", matrix.rows()},
            {"probe_deviation", probe_deviation},
            {"nullspace", detail::nullspace_json(nullspace, options)},
            {"nullspace_specs", specs}};
}

}  // namespace superint
