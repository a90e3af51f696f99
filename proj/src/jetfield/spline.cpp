#include "superint/spline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "superint/error.hpp"

namespace superint {
namespace {

// Solves a tridiagonal system in place (Thomas algorithm). sub[0] and sup[n-1] unused.
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                      std::vector<double> sup, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
    return x;
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y, Boundary boundary)
    : x_(std::move(x)), y_(std::move(y)), boundary_(boundary) {
    validate();
}

void CubicSpline::validate() const {
    if (x_.size() != y_.size()) throw InvalidArgument("spline: abscissa/value length mismatch");
    if (x_.size() < 3) throw InvalidArgument("spline: at least three samples required");
    for (std::size_t i = 1; i < x_.size(); ++i)
        if (!(x_[i] > x_[i - 1])) throw InvalidArgument("spline: abscissae must be strictly increasing");
    for (double v : y_)
        if (!std::isfinite(v)) throw InvalidArgument("spline: non-finite sample value");
}

CubicSpline CubicSpline::natural(std::vector<double> x, std::vector<double> y) {
    CubicSpline s(std::move(x), std::move(y), Boundary::natural);
    const std::size_t n = s.x_.size();
    std::vector<double> sub(n, 0.0), diag(n, 1.0), sup(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = s.x_[i] - s.x_[i - 1];
        const double h1 = s.x_[i + 1] - s.x_[i];
        sub[i] = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        sup[i] = h1 / 6.0;
        rhs[i] = (s.y_[i + 1] - s.y_[i]) / h1 - (s.y_[i] - s.y_[i - 1]) / h0;
    }
    s.m_ = solve_tridiagonal(sub, diag, sup, rhs);
    return s;
}

CubicSpline CubicSpline::clamped(std::vector<double> x, std::vector<double> y, double slope_front,
                                 double slope_back) {
    CubicSpline s(std::move(x), std::move(y), Boundary::clamped);
    const std::size_t n = s.x_.size();
    std::vector<double> sub(n, 0.0), diag(n), sup(n, 0.0), rhs(n);
    const double hf = s.x_[1] - s.x_[0];
    diag[0] = hf / 3.0;
    sup[0] = hf / 6.0;
    rhs[0] = (s.y_[1] - s.y_[0]) / hf - slope_front;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = s.x_[i] - s.x_[i - 1];
        const double h1 = s.x_[i + 1] - s.x_[i];
        sub[i] = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        sup[i] = h1 / 6.0;
        rhs[i] = (s.y_[i + 1] - s.y_[i]) / h1 - (s.y_[i] - s.y_[i - 1]) / h0;
    }
    const double hb = s.x_[n - 1] - s.x_[n - 2];
    sub[n - 1] = hb / 6.0;
    diag[n - 1] = hb / 3.0;
    rhs[n - 1] = slope_back - (s.y_[n - 1] - s.y_[n - 2]) / hb;
    s.m_ = solve_tridiagonal(sub, diag, sup, rhs);
    return s;
}

CubicSpline CubicSpline::periodic(std::vector<double> x, std::vector<double> y, double endpoint_tolerance) {
    if (y.size() >= 2 && std::abs(y.back() - y.front()) > endpoint_tolerance)
        throw InvalidArgument("spline: periodic table endpoints differ by more than tolerance");
    if (!y.empty()) y.back() = y.front();
    CubicSpline s(std::move(x), std::move(y), Boundary::periodic);
    // Unknowns m_0..m_{n-1} with m_n = m_0 (cyclic tridiagonal, Sherman-Morrison).
    const std::size_t n = s.x_.size() - 1;
    auto h = [&](std::size_t i) { return s.x_[i + 1] - s.x_[i]; };
    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double h0 = h(i == 0 ? n - 1 : i - 1);
        const double h1 = h(i);
        const double y_prev = i == 0 ? s.y_[n - 1] : s.y_[i - 1];
        sub[i] = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        sup[i] = h1 / 6.0;
        rhs[i] = (s.y_[i + 1] - s.y_[i]) / h1 - (s.y_[i] - y_prev) / h0;
    }
    const double corner_lo = sub[0];       // couples row 0 with m_{n-1}
    const double corner_hi = sup[n - 1];   // couples row n-1 with m_0
    const double gamma = -diag[0];
    std::vector<double> d2 = diag;
    d2[0] -= gamma;
    d2[n - 1] -= corner_hi * corner_lo / gamma;
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = corner_hi;
    std::vector<double> z1 = solve_tridiagonal(sub, d2, sup, rhs);
    std::vector<double> z2 = solve_tridiagonal(sub, d2, sup, u);
    const double vz1 = z1[0] + corner_lo / gamma * z1[n - 1];
    const double vz2 = z2[0] + corner_lo / gamma * z2[n - 1];
    const double factor = vz1 / (1.0 + vz2);
    s.m_.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i) s.m_[i] = z1[i] - factor * z2[i];
    s.m_[n] = s.m_[0];
    return s;
}

bool CubicSpline::contains(double t) const noexcept {
    if (!std::isfinite(t)) return false;
    return boundary_ == Boundary::periodic || (t >= x_.front() && t <= x_.back());
}

double CubicSpline::wrap(double t) const {
    const double period = x_.back() - x_.front();
    double w = std::fmod(t - x_.front(), period);
    if (w < 0.0) w += period;
    return x_.front() + w;
}

std::array<double, 4> CubicSpline::derivatives(double t) const {
    if (!contains(t))
        throw DomainError("spline argument " + std::to_string(t) + " outside [" + std::to_string(x_.front()) +
                          ", " + std::to_string(x_.back()) + "]");
    if (boundary_ == Boundary::periodic) t = wrap(t);
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - x_.begin()) - 1));
    if (i >= x_.size() - 1) i = x_.size() - 2;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    const double m0 = m_[i];
    const double m1 = m_[i + 1];
    const double value = a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
    const double d1 = (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
    const double d2 = a * m0 + b * m1;
    const double d3 = (m1 - m0) / h;
    return {value, d1, d2, d3};
}

CubicSpline CubicSpline::read_csv(std::istream& in, Boundary boundary, double slope_front, double slope_back) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("spline csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("theta,", 0) != 0) throw InvalidArgument("spline csv: expected header 'theta,<column>'");
    std::vector<double> x, y;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b))
            throw InvalidArgument("spline csv: malformed row '" + line + "'");
        try {
            x.push_back(std::stod(a));
            y.push_back(std::stod(b));
        } catch (const std::exception&) {
            throw InvalidArgument("spline csv: non-numeric row '" + line + "'");
        }
    }
    switch (boundary) {
        case Boundary::natural: return natural(std::move(x), std::move(y));
        case Boundary::clamped: return clamped(std::move(x), std::move(y), slope_front, slope_back);
        case Boundary::periodic: return periodic(std::move(x), std::move(y));
    }
    throw InvalidArgument("spline csv: unknown boundary");
}

void CubicSpline::write_csv(std::ostream& out, const std::string& value_column) const {
    out << "theta," << value_column << '\n';
    char buf[64];
    for (std::size_t i = 0; i < x_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,", x_[i]);
        out << buf;
        std::snprintf(buf, sizeof buf, "%.17g", y_[i]);
        out << buf << '\n';
    }
}

}  // namespace superint
