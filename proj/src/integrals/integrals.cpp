#include "superint/integrals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

#include "superint/error.hpp"

namespace superint {

namespace {

// Polynomial in (x, y, px, py), used only to change bases exactly.
using Mono = std::array<int, 4>;
using PhasePoly = std::map<Mono, double>;

void add_to(PhasePoly& p, const Mono& m, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = p.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) p.erase(it);
    }
}

PhasePoly mul(const PhasePoly& a, const PhasePoly& b) {
    PhasePoly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b)
            add_to(out, {ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]}, ca * cb);
    return out;
}

PhasePoly scaled(PhasePoly p, double s) {
    for (auto& [m, c] : p) c *= s;
    return p;
}

PhasePoly sum(PhasePoly a, const PhasePoly& b) {
    for (const auto& [m, c] : b) add_to(a, m, c);
    return a;
}

PhasePoly one() { return {{Mono{0, 0, 0, 0}, 1.0}}; }

PhasePoly power(const PhasePoly& p, int n) {
    PhasePoly out = one();
    for (int i = 0; i < n; ++i) out = mul(out, p);
    return out;
}

PhasePoly lz() { return {{Mono{1, 0, 0, 1}, 1.0}, {Mono{0, 1, 1, 0}, -1.0}}; }
PhasePoly px() { return {{Mono{0, 0, 1, 0}, 1.0}}; }
PhasePoly py() { return {{Mono{0, 0, 0, 1}, 1.0}}; }
PhasePoly p_squared() { return {{Mono{0, 0, 2, 0}, 1.0}, {Mono{0, 0, 0, 2}, 1.0}}; }

// (Re, Im) of (px + i py)^s.
std::pair<PhasePoly, PhasePoly> complex_momentum_power(int s) {
    PhasePoly re = one(), im;
    for (int i = 0; i < s; ++i) {
        PhasePoly next_re = sum(mul(re, px()), scaled(mul(im, py()), -1.0));
        PhasePoly next_im = sum(mul(re, py()), mul(im, px()));
        re = std::move(next_re);
        im = std::move(next_im);
    }
    return {re, im};
}

PhasePoly a_basis_element(int N, int m, int n) {
    return mul(power(lz(), N - m - n), mul(power(px(), m), power(py(), n)));
}

PhasePoly b_basis_element(int N, int s, int k, bool sine) {
    auto [re, im] = complex_momentum_power(s);
    return mul(mul(power(lz(), N - s - 2 * k), power(p_squared(), k)), sine ? im : re);
}

struct Basis {
    int N;
    std::vector<SlotIndex> a_cols;
    std::vector<SlotIndex> b1_cols;
    std::vector<SlotIndex> b2_cols;
    std::vector<Mono> rows;
    Eigen::MatrixXd a_matrix;  // monomials x A-slots
    Eigen::MatrixXd a_to_b;    // (B1 ++ B2) x A
    Eigen::MatrixXd b_to_a;    // A x (B1 ++ B2)
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> a_qr;
};

Eigen::MatrixXd to_matrix(const std::vector<PhasePoly>& cols, const std::map<Mono, int>& row_of) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(row_of.size()),
                                              static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [mono, v] : cols[c]) m(row_of.at(mono), static_cast<Eigen::Index>(c)) = v;
    return m;
}

std::shared_ptr<const Basis> make_basis(int N) {
    auto basis = std::make_shared<Basis>();
    basis->N = N;
    basis->a_cols = a_slots(N);
    for (const auto& sk : b_slots(N)) {
        basis->b1_cols.push_back(sk);
        if (sk.first > 0) basis->b2_cols.push_back(sk);
    }
    std::vector<PhasePoly> a_polys, b_polys;
    for (const auto& [m, n] : basis->a_cols) a_polys.push_back(a_basis_element(N, m, n));
    for (const auto& [s, k] : basis->b1_cols) b_polys.push_back(b_basis_element(N, s, k, false));
    for (const auto& [s, k] : basis->b2_cols) b_polys.push_back(b_basis_element(N, s, k, true));

    std::map<Mono, int> row_of;
    for (const auto* family : {&a_polys, &b_polys})
        for (const auto& p : *family)
            for (const auto& [mono, v] : p) row_of.try_emplace(mono, 0);
    int r = 0;
    for (auto& [mono, idx] : row_of) {
        idx = r++;
        basis->rows.push_back(mono);
    }
    basis->a_matrix = to_matrix(a_polys, row_of);
    const Eigen::MatrixXd mb = to_matrix(b_polys, row_of);
    basis->a_qr.compute(basis->a_matrix);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> b_qr(mb);
    if (basis->a_qr.rank() != basis->a_matrix.cols() || b_qr.rank() != mb.cols())
        throw Error("leading-term basis is rank deficient at N = " + std::to_string(N));
    basis->b_to_a = basis->a_qr.solve(mb);
    basis->a_to_b = b_qr.solve(basis->a_matrix);
    // Both bases span the same space, so the solves must be exact.
    const double res_a = (basis->a_matrix * basis->b_to_a - mb).cwiseAbs().maxCoeff();
    const double res_b = (mb * basis->a_to_b - basis->a_matrix).cwiseAbs().maxCoeff();
    if (res_a > 1e-9 || res_b > 1e-9)
        throw Error("leading-term bases do not span the same space at N = " + std::to_string(N));
    return basis;
}

std::shared_ptr<const Basis> basis_for(int N) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const Basis>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    auto basis = make_basis(N);
    cache.emplace(N, basis);
    return basis;
}

PhasePoly expand(const LeadingTermSpec& spec) {
    PhasePoly out;
    for (const auto& [mn, v] : spec.A)
        if (v != 0.0) out = sum(out, scaled(a_basis_element(spec.N, mn.first, mn.second), v));
    return out;
}

std::map<SlotIndex, Poly2> collect_by_momentum(const PhasePoly& p) {
    std::map<SlotIndex, Poly2> out;
    for (const auto& [m, c] : p) out[{m[2], m[3]}] += Poly2::monomial(m[0], m[1], c);
    return out;
}

MomentumPolynomial to_momentum_polynomial(const std::map<SlotIndex, Poly2>& coeffs) {
    MomentumPolynomial out;
    for (const auto& [ij, poly] : coeffs) out.add_term(ij.first, ij.second, poly.to_field());
    return out;
}

// Roundoff from the basis change is cleared relative to the largest entry.
void drop_noise(std::map<SlotIndex, double>& m, double scale) {
    for (auto it = m.begin(); it != m.end();) {
        if (std::abs(it->second) <= 1e-14 * scale) it = m.erase(it);
        else ++it;
    }
}

double lookup(const std::map<SlotIndex, double>& m, int a, int b) {
    auto it = m.find({a, b});
    return it == m.end() ? 0.0 : it->second;
}

void store(std::map<SlotIndex, double>& m, int a, int b, double v) {
    if (v == 0.0) m.erase({a, b});
    else m[{a, b}] = v;
}

}  // namespace

double LeadingTermSpec::a(int m, int n) const { return lookup(A, m, n); }
void LeadingTermSpec::set(int m, int n, double value) { store(A, m, n, value); }

void LeadingTermSpec::validate(int max_order) const {
    if (N < 1 || N > max_order)
        throw InvalidArgument("leading-term order N = " + std::to_string(N) + " outside [1, " +
                              std::to_string(max_order) + "]");
    for (const auto& [mn, v] : A) {
        if (mn.first < 0 || mn.second < 0 || mn.first + mn.second > N)
            throw InvalidArgument("A slot outside 0 <= m + n <= N");
        if (!std::isfinite(v)) throw InvalidArgument("non-finite A coefficient");
    }
}

double PolarLeadingSpec::b1(int s, int k) const { return lookup(B1, s, k); }
double PolarLeadingSpec::b2(int s, int k) const { return lookup(B2, s, k); }
void PolarLeadingSpec::set_b1(int s, int k, double value) { store(B1, s, k, value); }

void PolarLeadingSpec::set_b2(int s, int k, double value) {
    if (s == 0 && value != 0.0) throw InvalidArgument("B2 has no s = 0 slots");
    store(B2, s, k, value);
}

void PolarLeadingSpec::validate(int max_order) const {
    if (N < 1 || N > max_order)
        throw InvalidArgument("leading-term order N = " + std::to_string(N) + " outside [1, " +
                              std::to_string(max_order) + "]");
    for (const auto* table : {&B1, &B2})
        for (const auto& [sk, v] : *table) {
            if (sk.first < 0 || sk.second < 0 || sk.first + 2 * sk.second > N)
                throw InvalidArgument("B slot outside 0 <= s + 2k <= N");
            if (!std::isfinite(v)) throw InvalidArgument("non-finite B coefficient");
        }
    for (const auto& [sk, v] : B2)
        if (sk.first == 0 && v != 0.0) throw InvalidArgument("B2 has no s = 0 slots");
}

double PolarLeadingSpec::max_abs() const {
    double m = 0.0;
    for (const auto* table : {&B1, &B2})
        for (const auto& [sk, v] : *table) m = std::max(m, std::abs(v));
    return m;
}

bool PolarLeadingSpec::is_zero(double tolerance) const { return max_abs() <= tolerance; }

std::vector<SlotIndex> a_slots(int N) {
    std::vector<SlotIndex> out;
    for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n) out.push_back({m, n});
    return out;
}

std::vector<SlotIndex> b_slots(int N) {
    std::vector<SlotIndex> out;
    for (int s = 0; s <= N; ++s)
        for (int k = 0; s + 2 * k <= N; ++k) out.push_back({s, k});
    return out;
}

std::map<SlotIndex, Poly2> leading_coefficients(const LeadingTermSpec& spec) {
    spec.validate();
    return collect_by_momentum(expand(spec));
}

std::map<SlotIndex, Poly2> leading_coefficients(const PolarLeadingSpec& spec) {
    return leading_coefficients(b_to_a(spec));
}

MomentumPolynomial build_leading_cartesian(const LeadingTermSpec& spec) {
    return to_momentum_polynomial(leading_coefficients(spec));
}

MomentumPolynomial build_leading_polar(const PolarLeadingSpec& spec) {
    return to_momentum_polynomial(leading_coefficients(spec));
}

PolarLeadingSpec a_to_b(const LeadingTermSpec& spec) {
    spec.validate();
    const auto basis = basis_for(spec.N);
    Eigen::VectorXd a(static_cast<Eigen::Index>(basis->a_cols.size()));
    for (std::size_t i = 0; i < basis->a_cols.size(); ++i)
        a(static_cast<Eigen::Index>(i)) = spec.a(basis->a_cols[i].first, basis->a_cols[i].second);
    const Eigen::VectorXd b = basis->a_to_b * a;
    PolarLeadingSpec out;
    out.N = spec.N;
    const std::size_t n1 = basis->b1_cols.size();
    for (std::size_t i = 0; i < n1; ++i)
        out.set_b1(basis->b1_cols[i].first, basis->b1_cols[i].second, b(static_cast<Eigen::Index>(i)));
    for (std::size_t i = 0; i < basis->b2_cols.size(); ++i)
        out.set_b2(basis->b2_cols[i].first, basis->b2_cols[i].second, b(static_cast<Eigen::Index>(n1 + i)));
    const double scale = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
    drop_noise(out.B1, scale);
    drop_noise(out.B2, scale);
    return out;
}

LeadingTermSpec b_to_a(const PolarLeadingSpec& spec) {
    spec.validate();
    const auto basis = basis_for(spec.N);
    const std::size_t n1 = basis->b1_cols.size();
    Eigen::VectorXd b(static_cast<Eigen::Index>(n1 + basis->b2_cols.size()));
    for (std::size_t i = 0; i < n1; ++i)
        b(static_cast<Eigen::Index>(i)) = spec.b1(basis->b1_cols[i].first, basis->b1_cols[i].second);
    for (std::size_t i = 0; i < basis->b2_cols.size(); ++i)
        b(static_cast<Eigen::Index>(n1 + i)) = spec.b2(basis->b2_cols[i].first, basis->b2_cols[i].second);
    const Eigen::VectorXd a = basis->b_to_a * b;
    LeadingTermSpec out;
    out.N = spec.N;
    for (std::size_t i = 0; i < basis->a_cols.size(); ++i)
        out.set(basis->a_cols[i].first, basis->a_cols[i].second, a(static_cast<Eigen::Index>(i)));
    drop_noise(out.A, a.size() ? a.cwiseAbs().maxCoeff() : 0.0);
    return out;
}

LeadingTermSpec rotate(const LeadingTermSpec& spec, double phi) {
    spec.validate();
    const double c = std::cos(phi), s = std::sin(phi);
    // R(-phi): u -> c u + s v, v -> -s u + c v, for positions and momenta alike.
    const std::array<PhasePoly, 4> image = {
        PhasePoly{{Mono{1, 0, 0, 0}, c}, {Mono{0, 1, 0, 0}, s}},
        PhasePoly{{Mono{1, 0, 0, 0}, -s}, {Mono{0, 1, 0, 0}, c}},
        PhasePoly{{Mono{0, 0, 1, 0}, c}, {Mono{0, 0, 0, 1}, s}},
        PhasePoly{{Mono{0, 0, 1, 0}, -s}, {Mono{0, 0, 0, 1}, c}},
    };
    PhasePoly rotated;
    for (const auto& [mono, coeff] : expand(spec)) {
        PhasePoly term = {{Mono{0, 0, 0, 0}, coeff}};
        for (int v = 0; v < 4; ++v) term = mul(term, power(image[static_cast<std::size_t>(v)], mono[static_cast<std::size_t>(v)]));
        rotated = sum(rotated, term);
    }
    const auto basis = basis_for(spec.N);
    std::map<Mono, int> row_of;
    for (std::size_t i = 0; i < basis->rows.size(); ++i) row_of[basis->rows[i]] = static_cast<int>(i);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis->rows.size()));
    for (const auto& [mono, v] : rotated) {
        auto it = row_of.find(mono);
        if (it == row_of.end()) {
            if (std::abs(v) > 1e-12) throw Error("rotated leading term left the basis span");
            continue;
        }
        rhs(it->second) = v;
    }
    const Eigen::VectorXd a = basis->a_qr.solve(rhs);
    LeadingTermSpec out;
    out.N = spec.N;
    for (std::size_t i = 0; i < basis->a_cols.size(); ++i)
        out.set(basis->a_cols[i].first, basis->a_cols[i].second, a(static_cast<Eigen::Index>(i)));
    drop_noise(out.A, a.size() ? a.cwiseAbs().maxCoeff() : 0.0);
    return out;
}

std::pair<PolarLeadingSpec, PolarLeadingSpec> split_I_II(const PolarLeadingSpec& spec) {
    spec.validate();
    PolarLeadingSpec first, second;
    first.N = second.N = spec.N;
    auto route = [&](const std::map<SlotIndex, double>& from, std::map<SlotIndex, double> PolarLeadingSpec::*to) {
        for (const auto& [sk, v] : from) {
            PolarLeadingSpec& target = sk.first + 2 * sk.second >= spec.N - 1 ? first : second;
            (target.*to)[sk] = v;
        }
    };
    route(spec.B1, &PolarLeadingSpec::B1);
    route(spec.B2, &PolarLeadingSpec::B2);
    return {first, second};
}

Classification classify(const PolarLeadingSpec& spec, double tolerance) {
    spec.validate();
    Classification c;
    c.N = spec.N;
    const double cutoff = tolerance * spec.max_abs();
    for (const auto& [s, k] : b_slots(spec.N)) {
        const double v1 = spec.b1(s, k);
        const double v2 = spec.b2(s, k);
        if (std::abs(v1) <= cutoff && std::abs(v2) <= cutoff) continue;
        SlotClass slot;
        slot.s = s;
        slot.k = k;
        slot.b1 = v1;
        slot.b2 = v2;
        slot.weight = s + 2 * k;
        slot.parity = (spec.N - 2 * k) % 2;
        slot.part_I = slot.weight >= spec.N - 1;
        slot.singlet = s == 0;
        c.slots.push_back(slot);
        c.by_weight[slot.weight].push_back({s, k});
        c.by_parity[slot.parity].push_back({s, k});
        (slot.part_I ? c.has_part_I : c.has_part_II) = true;
        c.has_singlets = c.has_singlets || slot.singlet;
    }
    c.exotic = !c.has_part_I && c.has_part_II;
    return c;
}

SingletReduction singlet_reduce(const PolarLeadingSpec& spec) {
    spec.validate();
    if (spec.N % 2 != 0)
        throw InvalidArgument("singlet reduction needs even N; odd-N singlets go to dependence detection");
    SingletReduction out;
    out.reduced = spec;
    for (int k = 0; 2 * k <= spec.N; ++k) {
        const double b = spec.b1(0, k);
        if (b == 0.0) continue;
        out.corrections[{(spec.N - 2 * k) / 2, k}] = std::ldexp(b, k);
        out.reduced.set_b1(0, k, 0.0);
    }
    return out;
}

MomentumPolynomial trivial_leading(int N, const std::map<SlotIndex, double>& corrections) {
    PhasePoly total;
    for (const auto& [ij, a] : corrections) {
        const auto [i, j] = ij;
        if (2 * (i + j) != N) throw InvalidArgument("X^i H^j does not have momentum degree N");
        total = sum(total, scaled(mul(power(lz(), 2 * i), power(p_squared(), j)), a * std::ldexp(1.0, -j)));
    }
    return to_momentum_polynomial(collect_by_momentum(total));
}

namespace {

nlohmann::json triples(const std::map<SlotIndex, double>& m) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [ab, v] : m) arr.push_back({ab.first, ab.second, v});
    return arr;
}

std::map<SlotIndex, double> from_triples(const nlohmann::json& arr) {
    std::map<SlotIndex, double> m;
    if (!arr.is_array()) throw InvalidArgument("expected an array of [i, j, value] triples");
    for (const auto& t : arr) {
        if (!t.is_array() || t.size() != 3) throw InvalidArgument("expected [i, j, value]");
        store(m, t[0].get<int>(), t[1].get<int>(), t[2].get<double>());
    }
    return m;
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> keys) {
    for (const auto& [key, v] : j.items())
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
            throw InvalidArgument("unknown key '" + key + "' in leading-term spec");
}

}  // namespace

nlohmann::json to_json(const LeadingTermSpec& spec) { return {{"N", spec.N}, {"A", triples(spec.A)}}; }

nlohmann::json to_json(const PolarLeadingSpec& spec) {
    return {{"N", spec.N}, {"B1", triples(spec.B1)}, {"B2", triples(spec.B2)}};
}

nlohmann::json to_json(const Classification& c) {
    nlohmann::json slots = nlohmann::json::array();
    for (const auto& s : c.slots)
        slots.push_back({{"s", s.s}, {"k", s.k}, {"B1", s.b1}, {"B2", s.b2}, {"weight", s.weight},
                         {"parity", s.parity}, {"part", s.part_I ? "I" : "II"}, {"singlet", s.singlet}});
    nlohmann::json weights = nlohmann::json::object();
    for (const auto& [w, list] : c.by_weight) {
        nlohmann::json l = nlohmann::json::array();
        for (const auto& [s, k] : list) l.push_back({s, k});
        weights[std::to_string(w)] = l;
    }
    return {{"N", c.N},          {"slots", slots},          {"weights", weights},
            {"exotic", c.exotic}, {"has_part_I", c.has_part_I}, {"has_part_II", c.has_part_II},
            {"has_singlets", c.has_singlets}};
}

LeadingTermSpec leading_spec_from_json(const nlohmann::json& j) {
    try {
        reject_unknown(j, {"N", "A"});
        LeadingTermSpec spec;
        spec.N = j.at("N").get<int>();
        spec.A = from_triples(j.at("A"));
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("bad leading-term spec: ") + e.what());
    }
}

PolarLeadingSpec polar_spec_from_json(const nlohmann::json& j) {
    try {
        reject_unknown(j, {"N", "B1", "B2"});
        PolarLeadingSpec spec;
        spec.N = j.at("N").get<int>();
        spec.B1 = from_triples(j.at("B1"));
        if (j.contains("B2")) spec.B2 = from_triples(j.at("B2"));
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("bad polar leading-term spec: ") + e.what());
    }
}

PolarLeadingSpec any_spec_to_polar(const nlohmann::json& j) {
    if (j.contains("A")) return a_to_b(leading_spec_from_json(j));
    return polar_spec_from_json(j);
}

}  // namespace superint
