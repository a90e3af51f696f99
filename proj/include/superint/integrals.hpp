#pragma once

// The leading (degree-N in momenta) term of a polynomial integral, in the Cartesian
// A-basis  sum A_{N-m-n,m,n} L_z^{N-m-n} px^m py^n  and in the polar B-basis
// sum L_z^{N-s-2k} P^{s+2k} [B1 cos(s Phi) + B2 sin(s Phi)].

#include <map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "superint/observables.hpp"
#include "superint/poly2.hpp"

namespace superint {

inline constexpr int kDefaultMaxLeadingOrder = 8;

using SlotIndex = std::pair<int, int>;

/// A-basis coefficients keyed by (m, n), m + n <= N.
struct LeadingTermSpec {
    int N = 1;
    std::map<SlotIndex, double> A;

    double a(int m, int n) const;
    void set(int m, int n, double value);
    /// Throws InvalidArgument on a bad order or an out-of-range slot.
    void validate(int max_order = kDefaultMaxLeadingOrder) const;

    friend bool operator==(const LeadingTermSpec&, const LeadingTermSpec&) = default;
};

/// B-basis coefficients keyed by (s, k), s + 2k <= N. B2 never has s = 0 entries.
struct PolarLeadingSpec {
    int N = 1;
    std::map<SlotIndex, double> B1;
    std::map<SlotIndex, double> B2;

    double b1(int s, int k) const;
    double b2(int s, int k) const;
    void set_b1(int s, int k, double value);
    void set_b2(int s, int k, double value);
    void validate(int max_order = kDefaultMaxLeadingOrder) const;
    /// True when no coefficient exceeds `tolerance` in magnitude.
    bool is_zero(double tolerance = 0.0) const;
    double max_abs() const;

    friend bool operator==(const PolarLeadingSpec&, const PolarLeadingSpec&) = default;
};

/// All (m, n) with m + n <= N, in lexicographic order.
std::vector<SlotIndex> a_slots(int N);
/// All (s, k) with s + 2k <= N, in lexicographic order (B1 uses all, B2 those with s > 0).
std::vector<SlotIndex> b_slots(int N);

/// Momentum-monomial coefficients (px^i py^j -> exact polynomial in x, y) of the leading term.
std::map<SlotIndex, Poly2> leading_coefficients(const LeadingTermSpec& spec);
std::map<SlotIndex, Poly2> leading_coefficients(const PolarLeadingSpec& spec);

MomentumPolynomial build_leading_cartesian(const LeadingTermSpec& spec);
MomentumPolynomial build_leading_polar(const PolarLeadingSpec& spec);

PolarLeadingSpec a_to_b(const LeadingTermSpec& spec);
LeadingTermSpec b_to_a(const PolarLeadingSpec& spec);

/// Spec of Y'(z) = Y(R(-phi) z), where R rotates positions and momenta together.
LeadingTermSpec rotate(const LeadingTermSpec& spec, double phi);

/// (Y_I, Y_II): slots with N-1 <= s+2k <= N, and with s+2k <= N-2.
std::pair<PolarLeadingSpec, PolarLeadingSpec> split_I_II(const PolarLeadingSpec& spec);

struct SlotClass {
    int s = 0;
    int k = 0;
    double b1 = 0.0;
    double b2 = 0.0;
    int weight = 0;        // beta = s + 2k: the slot scales as sigma^-beta under dilations
    int parity = 0;        // (N - 2k) mod 2
    bool part_I = false;   // belongs to Y_I
    bool singlet = false;  // s == 0
};

struct Classification {
    int N = 0;
    std::vector<SlotClass> slots;                   // populated slots only
    std::map<int, std::vector<SlotIndex>> by_weight;  // beta -> slots
    std::map<int, std::vector<SlotIndex>> by_parity;  // 0 / 1 -> slots
    bool has_part_I = false;
    bool has_part_II = false;
    /// Y_I vanishes identically while Y_II does not.
    bool exotic = false;
    bool has_singlets = false;
};

/// Slots with |B| <= tolerance * max|B| count as empty.
Classification classify(const PolarLeadingSpec& spec, double tolerance = 1e-12);

struct SingletReduction {
    PolarLeadingSpec reduced;
    /// (i, j) -> a_ij with Y - sum a_ij X^i H^j free of singlets at leading order.
    std::map<SlotIndex, double> corrections;
};

/// Even N only; odd N throws InvalidArgument.
SingletReduction singlet_reduce(const PolarLeadingSpec& spec);

/// Leading term of sum a_ij X^i H^j, with X -> L_z^2 and H -> P^2 / 2.
MomentumPolynomial trivial_leading(int N, const std::map<SlotIndex, double>& corrections);

nlohmann::json to_json(const LeadingTermSpec& spec);
nlohmann::json to_json(const PolarLeadingSpec& spec);
nlohmann::json to_json(const Classification& c);
LeadingTermSpec leading_spec_from_json(const nlohmann::json& j);
PolarLeadingSpec polar_spec_from_json(const nlohmann::json& j);
/// Either form: objects carrying "A" are converted through b_to_a's inverse.
PolarLeadingSpec any_spec_to_polar(const nlohmann::json& j);

}  // namespace superint
