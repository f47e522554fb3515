#pragma once

// Shared small-vector types and the error hierarchy used across visclab.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace visclab {

// Points, gradients and Hessians live in R^N with N <= 2 (N <= 4 for the
// doubled variables of the test function). Fixed max sizes keep them off
// the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 2, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 2, 2>;
using Vec4 = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using Mat4 = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Point outside the set where a quantity is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Caller passed an ill-formed argument (empty sample list, r <= s, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration: schema violations, bad quadrature order, ...
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A structural assumption (HB1 monotonicity, c >= lambda, ...) failed.
class AssumptionError : public Error {
public:
    using Error::Error;
};

/// Assembled scheme is not monotone at some node.
class SchemeError : public Error {
public:
    using Error::Error;
};

/// A calibration sweep ran out of candidates.
class CalibrationError : public Error {
public:
    using Error::Error;
};

inline Vec make_vec(double x) {
    Vec v(1);
    v << x;
    return v;
}

inline Vec make_vec(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

inline Mat make_mat(double x) {
    Mat m(1, 1);
    m << x;
    return m;
}

}  // namespace visclab
