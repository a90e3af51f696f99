#pragma once

#include <vector>

#include "superint/compat.hpp"

namespace superint::detail {

RadialResiduals radial_from_jets(const std::vector<Poly2>& f, double r, const std::vector<double>& thetas,
                                 const std::vector<Jet2>& v_jets);

std::vector<Jet2> separable_jets(const FieldExpr& R, const FieldExpr& S, double r, const std::vector<double>& thetas,
                                 int order);

/// JSON cannot hold infinities; very large gaps are reported capped.
double json_safe(double v);

nlohmann::json nullspace_json(const Nullspace& n, const NullspaceOptions& options);

}  // namespace superint::detail
