#pragma once

// Coefficient functions of x: symbolic presets plus tabulated grid data with
// multilinear interpolation. Each field remembers its JSON form so that
// configurations serialize back to what was read.

#include "visclab/core.hpp"
#include "visclab/schema.hpp"

#include <variant>
#include <vector>

namespace visclab {

class ScalarField {
public:
    struct Const {
        double value = 0.0;
    };
    struct Affine {
        double value = 0.0;
        std::vector<double> slope;
    };
    /// offset + amplitude * cos(pi * frequency.x + phase)
    struct Trig {
        double offset = 0.0;
        double amplitude = 1.0;
        std::vector<double> frequency;
        double phase = 0.0;
    };
    /// offset + amplitude * |x - center|^exponent
    struct Power {
        double offset = 0.0;
        double amplitude = 1.0;
        std::vector<double> center;
        double exponent = 1.0;
    };
    /// left for x[axis] < at, right otherwise
    struct Step {
        int axis = 0;
        double at = 0.0;
        double left = 0.0;
        double right = 0.0;
    };
    /// Row-major values on a uniform tensor grid spanning [lower, upper].
    struct Tabulated {
        std::vector<double> lower;
        std::vector<double> upper;
        std::vector<int> shape;
        std::vector<double> values;
    };
    using Preset = std::variant<Const, Affine, Trig, Power, Step, Tabulated>;

    ScalarField() = default;
    explicit ScalarField(Preset preset) : preset_(std::move(preset)) {}

    static ScalarField constant(double v) { return ScalarField(Const{v}); }

    [[nodiscard]] double operator()(const Vec& x) const;
    [[nodiscard]] const Preset& preset() const { return preset_; }
    [[nodiscard]] bool is_constant() const { return std::holds_alternative<Const>(preset_); }

    /// Same preset with a constant added everywhere.
    [[nodiscard]] ScalarField shifted(double s) const;

    [[nodiscard]] Json to_json() const;
    static ScalarField from_json(const Json& j, int dim, const std::string& path,
                                 SchemaErrors& errors);

private:
    Preset preset_ = Const{0.0};
};

/// Vector of component fields. In one dimension a bare scalar field is
/// accepted and serialized back in that form.
class VectorField {
public:
    enum class Form { Scalar, ConstArray, Components };

    VectorField() = default;
    explicit VectorField(std::vector<ScalarField> components, Form form = Form::Components)
        : components_(std::move(components)), form_(form) {}

    static VectorField constant(const Vec& v);

    [[nodiscard]] Vec operator()(const Vec& x) const;
    [[nodiscard]] int dim() const { return static_cast<int>(components_.size()); }
    [[nodiscard]] const std::vector<ScalarField>& components() const { return components_; }

    /// Adds s to every component.
    [[nodiscard]] VectorField shifted(double s) const;
    /// Adds v (componentwise constants).
    [[nodiscard]] VectorField shifted(const Vec& v) const;

    [[nodiscard]] Json to_json() const;
    static VectorField from_json(const Json& j, int dim, const std::string& path,
                                 SchemaErrors& errors);

private:
    std::vector<ScalarField> components_;
    Form form_ = Form::Components;
};

/// Square matrix field, row-major components.
class MatrixField {
public:
    using Form = VectorField::Form;

    MatrixField() = default;
    MatrixField(int n, std::vector<ScalarField> entries, Form form = Form::Components)
        : n_(n), entries_(std::move(entries)), form_(form) {}

    static MatrixField constant(const Mat& m);

    [[nodiscard]] Mat operator()(const Vec& x) const;
    [[nodiscard]] int dim() const { return n_; }

    /// Adds s to every entry.
    [[nodiscard]] MatrixField shifted(double s) const;

    [[nodiscard]] Json to_json() const;
    static MatrixField from_json(const Json& j, int dim, const std::string& path,
                                 SchemaErrors& errors);

private:
    int n_ = 0;
    std::vector<ScalarField> entries_;
    Form form_ = Form::Components;
};

}  // namespace visclab
