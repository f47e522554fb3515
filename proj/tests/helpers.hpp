#pragma once

#include "visclab/boundary.hpp"
#include "visclab/geometry.hpp"
#include "visclab/operators.hpp"

#include <utility>
#include <vector>

namespace th {

using namespace visclab;

inline Domain unit_interval() { return Domain(Interval{0.0, 1.0}); }
inline Domain strip() { return Domain(PeriodicStrip{1.0, 1.0}); }

inline ScalarField affine(double value, std::vector<double> slope) {
    return ScalarField(ScalarField::Affine{value, std::move(slope)});
}
inline ScalarField trig(double offset, double amplitude, std::vector<double> freq, double phase = 0.0) {
    return ScalarField(ScalarField::Trig{offset, amplitude, std::move(freq), phase});
}

inline CoefficientSet coeffs(int dim, double sigma, double b, ScalarField c, ScalarField f) {
    Mat s = sigma * Mat::Identity(dim, dim);
    Vec bv = Vec::Constant(dim, b);
    return {MatrixField::constant(s), VectorField::constant(bv), std::move(c), std::move(f)};
}
inline CoefficientSet coeffs(int dim, double sigma, double b, double c, double f) {
    return coeffs(dim, sigma, b, ScalarField::constant(c), ScalarField::constant(f));
}

inline OperatorSpec linear(int dim, CoefficientSet s) { return OperatorSpec::linear(dim, std::move(s)); }

/// theta1 controls only (inf over the list).
inline OperatorSpec bellman(int dim, std::vector<CoefficientSet> sets) {
    ControlledCoefficients cc;
    cc.dim = dim;
    for (auto& s : sets) cc.sets.push_back({std::move(s)});
    return OperatorSpec(OperatorKind::Bellman, std::move(cc));
}

inline BoundarySpec neumann(const Domain& d, ScalarField g) {
    return BoundarySpec(d, BoundarySpec::Neumann{std::move(g)});
}
inline BoundarySpec neumann(const Domain& d, double g = 0.0) { return neumann(d, ScalarField::constant(g)); }

inline BoundarySpec capillary(const Domain& d, double theta) {
    return BoundarySpec(d, BoundarySpec::Capillary{ScalarField::constant(theta)});
}

/// 1D oblique with gamma(x) = g0 + g1 x (gamma.n > 0 needs g0 < 0 < g0 + g1).
inline BoundarySpec oblique1(const Domain& d, double g0, double g1, double g) {
    return BoundarySpec(d, BoundarySpec::Oblique{VectorField({affine(g0, {g1})}), ScalarField::constant(g)});
}

}  // namespace th
