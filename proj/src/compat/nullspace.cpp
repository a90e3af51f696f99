#include <algorithm>
#include <cmath>
#include <limits>

#include "detail.hpp"
#include "superint/error.hpp"

namespace superint {

Nullspace numerical_nullspace(const Eigen::MatrixXd& a, const NullspaceOptions& options) {
    Nullspace out;
    const Eigen::Index cols = a.cols();
    if (cols == 0) return out;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    out.spectrum.assign(sv.data(), sv.data() + sv.size());
    const double sigma_max = sv.size() ? sv(0) : 0.0;
    out.cutoff = options.threshold * std::max(sigma_max, 1.0);

    // Columns beyond the row count are null by construction.
    const Eigen::Index implicit = cols - sv.size();
    double lo = implicit > 0 ? 0.0 : -1.0;  // largest singular value below the cutoff
    double hi = -1.0;                       // smallest at or above it
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) >= out.cutoff) {
            ++rank;
            hi = sv(i);
        } else {
            lo = std::max(lo, sv(i));
        }
    }
    const double inf = std::numeric_limits<double>::infinity();
    if (lo < 0.0) out.gap = hi / out.cutoff;
    else if (hi < 0.0) out.gap = lo > 0.0 ? out.cutoff / lo : inf;
    else out.gap = lo > 0.0 ? hi / lo : inf;

    out.dimension = static_cast<int>(cols - rank);
    if (out.gap < options.gap)
        throw IndeterminateRank("rank decision ambiguous: singular-value gap " + std::to_string(out.gap) +
                                    " below required " + std::to_string(options.gap),
                                out.spectrum);
    out.basis = svd.matrixV().rightCols(out.dimension);
    return out;
}

namespace detail {

double json_safe(double v) {
    if (std::isnan(v)) return 0.0;
    return std::clamp(v, -1e300, 1e300);
}

nlohmann::json nullspace_json(const Nullspace& n, const NullspaceOptions& options) {
    nlohmann::json basis = nlohmann::json::array();
    for (Eigen::Index c = 0; c < n.basis.cols(); ++c) {
        nlohmann::json v = nlohmann::json::array();
        for (Eigen::Index r = 0; r < n.basis.rows(); ++r) v.push_back(n.basis(r, c));
        basis.push_back(v);
    }
    return {{"dimension", n.dimension},
            {"spectrum", n.spectrum},
            {"cutoff", n.cutoff},
            {"gap", json_safe(n.gap)},
            {"basis", basis},
            {"tolerances", {{"relative_threshold", options.threshold}, {"required_gap", options.gap}}}};
}

}  // namespace detail
}  // namespace superint
