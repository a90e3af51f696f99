#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace superint {

/// Piecewise cubic interpolant through strictly increasing abscissae.
///
/// Boundary handling is either clamped (caller-supplied endpoint first derivatives),
/// natural, or periodic. A periodic spline expects the last sample to repeat the first
/// one period later and wraps arguments into its base interval; the others refuse
/// arguments outside [front, back].
class CubicSpline {
public:
    enum class Boundary { natural, clamped, periodic };

    static CubicSpline natural(std::vector<double> x, std::vector<double> y);
    static CubicSpline clamped(std::vector<double> x, std::vector<double> y, double slope_front,
                               double slope_back);
    /// Throws InvalidArgument if |y.back() - y.front()| exceeds `endpoint_tolerance`.
    static CubicSpline periodic(std::vector<double> x, std::vector<double> y,
                                double endpoint_tolerance = 1e-8);

    /// Two-column CSV with header `theta,value`.
    static CubicSpline read_csv(std::istream& in, Boundary boundary, double slope_front = 0.0,
                                double slope_back = 0.0);
    void write_csv(std::ostream& out, const std::string& value_column = "value") const;

    Boundary boundary() const noexcept { return boundary_; }
    double front() const noexcept { return x_.front(); }
    double back() const noexcept { return x_.back(); }
    bool contains(double t) const noexcept;

    /// Value and first three derivatives at t. Throws DomainError outside the domain.
    std::array<double, 4> derivatives(double t) const;
    double operator()(double t) const { return derivatives(t)[0]; }

    const std::vector<double>& abscissae() const noexcept { return x_; }
    const std::vector<double>& values() const noexcept { return y_; }

private:
    CubicSpline(std::vector<double> x, std::vector<double> y, Boundary boundary);
    void validate() const;
    double wrap(double t) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at the knots
    Boundary boundary_;
};

}  // namespace superint
