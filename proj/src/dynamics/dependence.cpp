#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/SVD>

#include "superint/dynamics.hpp"
#include "superint/error.hpp"
#include "superint/parallel.hpp"

namespace superint {

namespace {

void exponents_of_degree(int m, int d, std::vector<int>& cur, int pos, std::vector<std::vector<int>>& out) {
    if (pos == m - 1) {
        cur[static_cast<std::size_t>(pos)] = d;
        out.push_back(cur);
        return;
    }
    for (int e = d; e >= 0; --e) {
        cur[static_cast<std::size_t>(pos)] = e;
        exponents_of_degree(m, d - e, cur, pos + 1, out);
    }
}

struct Spectrum {
    Eigen::VectorXd singular;
    Eigen::VectorXd null_vector;  // in column-normalized coordinates
    Eigen::VectorXd column_norms;
    double ratio = 0.0;
};

Spectrum normalized_spectrum(const Eigen::MatrixXd& z, const std::vector<std::vector<int>>& monomials,
                             const std::vector<Eigen::Index>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto M = static_cast<Eigen::Index>(monomials.size());
    Eigen::MatrixXd a(n, M);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < M; ++j) {
            double v = 1.0;
            const auto& e = monomials[static_cast<std::size_t>(j)];
            for (std::size_t c = 0; c < e.size(); ++c)
                if (e[c] != 0) v *= std::pow(z(rows[static_cast<std::size_t>(i)], static_cast<Eigen::Index>(c)), e[c]);
            a(i, j) = v;
        }
    Spectrum s;
    s.column_norms = a.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < M; ++j) {
        if (s.column_norms(j) == 0.0) s.column_norms(j) = 1.0;
        a.col(j) /= s.column_norms(j);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
    s.singular = svd.singularValues();
    s.null_vector = svd.matrixV().col(M - 1);
    s.ratio = s.singular(0) > 0.0 ? s.singular(M - 1) / s.singular(0) : 0.0;
    return s;
}

}  // namespace

std::vector<std::vector<int>> monomial_exponents(int m, int d) {
    if (m < 1 || d < 0) throw InvalidArgument("monomials need m >= 1 and d >= 0");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(m), 0);
    for (int k = 0; k <= d; ++k) exponents_of_degree(m, k, cur, 0, out);
    return out;
}

DependenceResult dependence_detect(const Eigen::MatrixXd& values, const DependenceOptions& options) {
    const Eigen::Index n = values.rows();
    const Eigen::Index m = values.cols();
    if (m < 1) throw InvalidArgument("need at least one observable");
    if (options.max_degree < 1) throw InvalidArgument("max_degree must be >= 1");
    if (!values.allFinite()) throw InvalidArgument("observable values must be finite");
    const auto top = monomial_exponents(static_cast<int>(m), options.max_degree).size();
    if (static_cast<std::size_t>(n) < 3 * top)
        throw InvalidArgument("need at least " + std::to_string(3 * top) + " samples for degree " +
                              std::to_string(options.max_degree) + ", got " + std::to_string(n));

    // Each observable is scaled to unit RMS so the decision does not depend on units.
    Eigen::VectorXd scale(m);
    for (Eigen::Index c = 0; c < m; ++c) {
        const double rms = values.col(c).norm() / std::sqrt(static_cast<double>(n));
        scale(c) = rms > 0.0 ? rms : 1.0;
    }
    const Eigen::MatrixXd z = values * scale.cwiseInverse().asDiagonal();

    std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), Eigen::Index{0});
    std::vector<Eigen::Index> shuffled = all;
    std::mt19937_64 rng(options.seed);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const std::vector<Eigen::Index> half_a(shuffled.begin(), shuffled.begin() + n / 2);
    const std::vector<Eigen::Index> half_b(shuffled.begin() + n / 2, shuffled.end());

    DependenceResult out;
    for (int d = 1; d <= options.max_degree; ++d) {
        const auto monomials = monomial_exponents(static_cast<int>(m), d);
        const Spectrum full = normalized_spectrum(z, monomials, all);
        const bool dependent = full.ratio < options.threshold;
        for (const auto* half : {&half_a, &half_b}) {
            const bool h = normalized_spectrum(z, monomials, *half).ratio < options.threshold;
            if (h != dependent) {
                std::vector<double> spec(full.singular.data(), full.singular.data() + full.singular.size());
                throw IndeterminateRank("syzygy decision at degree " + std::to_string(d) +
                                            " changes between halves of the samples",
                                        spec);
            }
        }
        out.degree = d;
        out.smallest_singular_value = full.ratio;
        out.spectrum.assign(full.singular.data(), full.singular.data() + full.singular.size());
        if (!dependent) continue;

        // Back to raw observable values: divide by the column norm and the variable scales.
        out.syzygy = true;
        out.monomials = monomials;
        Eigen::VectorXd c(static_cast<Eigen::Index>(monomials.size()));
        for (std::size_t j = 0; j < monomials.size(); ++j) {
            double s = full.column_norms(static_cast<Eigen::Index>(j));
            for (Eigen::Index v = 0; v < m; ++v) s *= std::pow(scale(v), monomials[j][static_cast<std::size_t>(v)]);
            c(static_cast<Eigen::Index>(j)) = full.null_vector(static_cast<Eigen::Index>(j)) / s;
        }
        c /= c.norm();
        Eigen::Index big = 0;
        c.cwiseAbs().maxCoeff(&big);
        if (c(big) < 0.0) c = -c;
        out.coefficients.assign(c.data(), c.data() + c.size());
        return out;
    }
    return out;
}

Eigen::MatrixXd sample_observables(const std::vector<MomentumPolynomial>& observables, const std::vector<PhasePoint>& points,
                                   int jobs) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(observables.size()));
    parallel_for(points.size(), jobs, [&](std::size_t i) {
        for (std::size_t j = 0; j < observables.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = observables[j].evaluate(points[i]);
    });
    return out;
}

nlohmann::json DependenceResult::to_json(const std::vector<std::string>& names) const {
    nlohmann::json j = {{"syzygy", syzygy},
                        {"degree", degree},
                        {"smallest_singular_value", smallest_singular_value},
                        {"spectrum", spectrum}};
    if (!syzygy) return j;
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t k = 0; k < monomials.size(); ++k) {
        if (coefficients[k] == 0.0) continue;
        std::string label;
        for (std::size_t v = 0; v < monomials[k].size(); ++v) {
            const int e = monomials[k][v];
            if (e == 0) continue;
            if (!label.empty()) label += "*";
            label += v < names.size() ? names[v] : "O" + std::to_string(v);
            if (e > 1) label += "^" + std::to_string(e);
        }
        terms.push_back({{"monomial", label.empty() ? "1" : label}, {"exponents", monomials[k]}, {"coefficient", coefficients[k]}});
    }
    j["relation"] = terms;
    return j;
}

}  // namespace superint
