#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "superint/error.hpp"
#include "superint/potentials.hpp"

namespace superint {

namespace {

void require_rational(int m, int n) {
    if (m < 1 || n < 1) throw InvalidArgument("k = m/n needs m >= 1 and n >= 1");
    if (std::gcd(m, n) != 1)
        throw InvalidArgument("m = " + std::to_string(m) + " and n = " + std::to_string(n) + " are not coprime");
}

FieldExpr inverse_square_pair(double first, double second, double k) {
    const FieldExpr th = FieldExpr::variable(0);
    const FieldExpr c = cos(k * th);
    const FieldExpr s = sin(k * th);
    FieldExpr out(0.0);
    if (first != 0.0) out = out + first / (c * c);
    if (second != 0.0) out = out + second / (s * s);
    return out;
}

}  // namespace

PotentialSpec ttw(double b, double alpha, double beta, int m, int n) {
    require_rational(m, n);
    const double k = static_cast<double>(m) / n;
    PotentialSpec v;
    v.family = "ttw";
    v.radial = RadialPart::oscillator(b);
    v.angular = inverse_square_pair(alpha, beta, k);
    v.n_tag = 2 * (m + n - 1);
    // cos^2(k theta) has period pi n / m, which divides 2 pi only for n <= 2.
    v.sector = n > 2;
    if (v.sector) v.flags.push_back("sector");
    v.parameters = {{"b", b}, {"alpha", alpha}, {"beta", beta}, {"m", m}, {"n", n}, {"k", k}};
    return v;
}

PotentialSpec pw(double a, double mu, double nu, int m, int n) {
    require_rational(m, n);
    const double k = static_cast<double>(m) / n;
    PotentialSpec v;
    v.family = "pw";
    v.radial = RadialPart::kepler(a);
    v.angular = inverse_square_pair(mu, nu, 0.5 * k);
    // Period 2 pi n / m divides 2 pi only for n = 1.
    v.sector = n > 1;
    if (v.sector) v.flags.push_back("sector");
    v.parameters = {{"a", a}, {"mu", mu}, {"nu", nu}, {"m", m}, {"n", n}, {"k", k}};
    return v;
}

PotentialSpec ttw_real_k(double b, double alpha, double beta, double k) {
    if (!(k > 0.0)) throw InvalidArgument("k must be positive");
    PotentialSpec v;
    v.family = "ttw";
    v.radial = RadialPart::oscillator(b);
    v.angular = inverse_square_pair(alpha, beta, k);
    v.sector = true;
    v.flags.push_back("sector");
    v.flags.push_back("irrational-k");
    v.parameters = {{"b", b}, {"alpha", alpha}, {"beta", beta}, {"k", k}};
    return v;
}

PotentialSpec standard_quantum_T(const PolarLeadingSpec& spec, AngularFamily family,
                                 const std::vector<double>& constants, double hbar, double radial_coefficient) {
    if (hbar < 0.0) throw InvalidArgument("hbar must be >= 0");
    const AngularFamilyBasis basis = angular_family_basis(spec, family);
    const FieldExpr T = basis.t_of(constants);
    PotentialSpec v;
    v.family = std::string("standard-") + angular_family_name(family);
    v.hbar = hbar;
    v.n_tag = spec.N;
    v.angular = derivative(T, 1, 0);
    switch (basis.radial) {
        case RadialKind::kepler: v.radial = RadialPart::kepler(radial_coefficient); break;
        case RadialKind::oscillator: v.radial = RadialPart::oscillator(radial_coefficient); break;
        default: v.radial = RadialPart::zero(); break;
    }
    // Zeros of the denominator on the circle are poles of T'.
    const int fine = 4096;
    double dmax = 0.0;
    std::vector<double> d(fine);
    for (int i = 0; i < fine; ++i) {
        d[static_cast<std::size_t>(i)] = basis.denominator.eval(2.0 * std::numbers::pi * i / fine, 0.0);
        dmax = std::max(dmax, std::abs(d[static_cast<std::size_t>(i)]));
    }
    bool poles = false;
    for (int i = 0; i < fine; ++i) {
        const double a = d[static_cast<std::size_t>(i)];
        const double b = d[static_cast<std::size_t>((i + 1) % fine)];
        if (a * b <= 0.0 || std::abs(a) < 1e-12 * dmax) poles = true;
    }
    if (poles) v.flags.push_back("poles");
    nlohmann::json c = nlohmann::json::object();
    for (std::size_t i = 0; i < constants.size(); ++i) c[basis.names[i]] = constants[i];
    v.parameters = {{"N", spec.N}, {"leading", to_json(spec)}, {"constants", c},
                    {"radial_coefficient", radial_coefficient}};
    return v;
}

void write_angular_csv(std::ostream& out, const PotentialSpec& spec, double lo, double hi, int points) {
    if (points < 2 || !(hi > lo)) throw InvalidArgument("angular table needs points >= 2 and hi > lo");
    std::ostringstream buf;
    buf << std::setprecision(17);
    buf << "theta,S\n";
    for (int i = 0; i < points; ++i) {
        const double t = lo + (hi - lo) * i / (points - 1);
        buf << t << ',' << spec.angular.eval(t, 0.0) << '\n';
    }
    out << buf.str();
}

PotentialSpec read_potential(const nlohmann::json& header, std::istream& csv) {
    static const std::vector<std::string> known = {"family", "parameters", "hbar",   "N_tag",
                                                   "tau_kind", "radial",   "sector", "flags"};
    for (const auto& [key, value] : header.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw InvalidArgument("unknown potential header key '" + key + "'");
    PotentialSpec v;
    v.family = header.at("family").get<std::string>();
    v.parameters = header.value("parameters", nlohmann::json::object());
    v.hbar = header.value("hbar", 0.0);
    if (header.contains("N_tag") && !header["N_tag"].is_null()) v.n_tag = header["N_tag"].get<int>();
    if (header.contains("tau_kind") && !header["tau_kind"].is_null())
        v.tau_kind = parse_tau_kind(header["tau_kind"].get<std::string>());
    const auto& r = header.at("radial");
    const RadialKind kind = parse_radial_kind(r.at("kind").get<std::string>());
    if (kind == RadialKind::custom) throw InvalidArgument("custom radial parts cannot be read back");
    v.radial.kind = kind;
    v.radial.a = r.value("a", 0.0);
    v.radial.b = r.value("b", 0.0);
    v.radial.d = r.value("d", 0.0);
    v.sector = header.value("sector", false);
    v.flags = header.value("flags", std::vector<std::string>{});

    std::string line;
    if (!std::getline(csv, line) || line.rfind("theta,S", 0) != 0) throw InvalidArgument("angular table needs a 'theta,S' header");
    std::vector<double> x, y;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InvalidArgument("malformed angular table row '" + line + "'");
        x.push_back(std::stod(line.substr(0, comma)));
        y.push_back(std::stod(line.substr(comma + 1)));
    }
    if (x.size() < 4) throw InvalidArgument("angular table needs at least 4 rows");
    const bool full_period = std::abs(x.back() - x.front() - 2.0 * std::numbers::pi) < 1e-9 &&
                             std::abs(y.back() - y.front()) < 1e-8;
    std::shared_ptr<const CubicSpline> spline;
    if (full_period && !v.sector)
        spline = std::make_shared<const CubicSpline>(CubicSpline::periodic(std::move(x), std::move(y)));
    else
        spline = std::make_shared<const CubicSpline>(CubicSpline::natural(std::move(x), std::move(y)));
    v.angular_table = spline;
    v.angular = FieldExpr::tabulated(spline, FieldExpr::variable(0));
    return v;
}

}  // namespace superint
