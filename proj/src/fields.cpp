#include "visclab/fields.hpp"

#include <algorithm>
#include <cmath>

namespace visclab {

namespace {

double dot(const std::vector<double>& a, const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) s += a[static_cast<std::size_t>(i)] * x(i);
    return s;
}

double tabulated_eval(const ScalarField::Tabulated& t, const Vec& x) {
    const int dim = static_cast<int>(t.shape.size());
    // Cell index and local coordinate per axis, clamped to the table.
    std::vector<int> base(static_cast<std::size_t>(dim));
    std::vector<double> frac(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const int n = t.shape[uk];
        if (n == 1) {
            base[uk] = 0;
            frac[uk] = 0.0;
            continue;
        }
        const double s = (x(k) - t.lower[uk]) / (t.upper[uk] - t.lower[uk]) * (n - 1);
        const double sc = std::clamp(s, 0.0, static_cast<double>(n - 1));
        int i = std::min(static_cast<int>(std::floor(sc)), n - 2);
        base[uk] = i;
        frac[uk] = sc - i;
    }
    double acc = 0.0;
    const int corners = 1 << dim;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::size_t flat = 0;
        for (int k = 0; k < dim; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            const int bit = (c >> k) & 1;
            if (t.shape[uk] == 1 && bit) {
                w = 0.0;
                break;
            }
            w *= bit ? frac[uk] : 1.0 - frac[uk];
            flat = flat * static_cast<std::size_t>(t.shape[uk]) +
                   static_cast<std::size_t>(base[uk] + bit);
        }
        if (w != 0.0) acc += w * t.values[flat];
    }
    return acc;
}

Json numbers_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double d : v) a.push_back(d);
    return a;
}

bool check_size(const std::vector<double>& v, int dim, const std::string& path,
                SchemaErrors& errors) {
    if (static_cast<int>(v.size()) != dim) {
        errors.add(path, "expected " + std::to_string(dim) + " entries");
        return false;
    }
    return true;
}

}  // namespace

double ScalarField::operator()(const Vec& x) const {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Const>) {
                return p.value;
            } else if constexpr (std::is_same_v<T, Affine>) {
                return p.value + dot(p.slope, x);
            } else if constexpr (std::is_same_v<T, Trig>) {
                return p.offset + p.amplitude * std::cos(kPi * dot(p.frequency, x) + p.phase);
            } else if constexpr (std::is_same_v<T, Power>) {
                double r2 = 0.0;
                for (int i = 0; i < x.size(); ++i) {
                    const double d = x(i) - p.center[static_cast<std::size_t>(i)];
                    r2 += d * d;
                }
                return p.offset + p.amplitude * std::pow(std::sqrt(r2), p.exponent);
            } else if constexpr (std::is_same_v<T, Step>) {
                return x(p.axis) < p.at ? p.left : p.right;
            } else {
                return tabulated_eval(p, x);
            }
        },
        preset_);
}

ScalarField ScalarField::shifted(double s) const {
    Preset p = preset_;
    std::visit(
        [s](auto& q) {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, Const> || std::is_same_v<T, Affine>) {
                q.value += s;
            } else if constexpr (std::is_same_v<T, Trig> || std::is_same_v<T, Power>) {
                q.offset += s;
            } else if constexpr (std::is_same_v<T, Step>) {
                q.left += s;
                q.right += s;
            } else {
                for (double& v : q.values) v += s;
            }
        },
        p);
    return ScalarField(std::move(p));
}

Json ScalarField::to_json() const {
    return std::visit(
        [](const auto& p) -> Json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Const>) {
                return {{"preset", "const"}, {"value", p.value}};
            } else if constexpr (std::is_same_v<T, Affine>) {
                return {{"preset", "affine"}, {"value", p.value}, {"slope", numbers_json(p.slope)}};
            } else if constexpr (std::is_same_v<T, Trig>) {
                return {{"preset", "trig"},
                        {"offset", p.offset},
                        {"amplitude", p.amplitude},
                        {"frequency", numbers_json(p.frequency)},
                        {"phase", p.phase}};
            } else if constexpr (std::is_same_v<T, Power>) {
                return {{"preset", "power"},
                        {"offset", p.offset},
                        {"amplitude", p.amplitude},
                        {"center", numbers_json(p.center)},
                        {"exponent", p.exponent}};
            } else if constexpr (std::is_same_v<T, Step>) {
                return {{"preset", "step"},
                        {"axis", p.axis},
                        {"at", p.at},
                        {"left", p.left},
                        {"right", p.right}};
            } else {
                Json shape = Json::array();
                for (int n : p.shape) shape.push_back(n);
                return {{"preset", "tabulated"},
                        {"lower", numbers_json(p.lower)},
                        {"upper", numbers_json(p.upper)},
                        {"shape", shape},
                        {"values", numbers_json(p.values)}};
            }
        },
        preset_);
}

ScalarField ScalarField::from_json(const Json& j, int dim, const std::string& path,
                                   SchemaErrors& errors) {
    if (j.is_number()) return constant(j.get<double>());
    ObjectReader r(j, path, errors);
    if (!r.valid()) return {};
    const std::string preset = r.string("preset");
    ScalarField out;
    if (preset == "const") {
        out = constant(r.number("value"));
    } else if (preset == "affine") {
        Affine a;
        a.value = r.number("value");
        a.slope = r.numbers("slope");
        if (check_size(a.slope, dim, r.child("slope"), errors)) out = ScalarField(a);
    } else if (preset == "trig") {
        Trig t;
        t.offset = r.number_or("offset", 0.0);
        t.amplitude = r.number_or("amplitude", 1.0);
        t.frequency = r.numbers("frequency");
        t.phase = r.number_or("phase", 0.0);
        if (check_size(t.frequency, dim, r.child("frequency"), errors)) out = ScalarField(t);
    } else if (preset == "power") {
        Power p;
        p.offset = r.number_or("offset", 0.0);
        p.amplitude = r.number_or("amplitude", 1.0);
        p.center = r.numbers("center");
        p.exponent = r.number("exponent");
        if (!(p.exponent > 0.0)) r.fail("exponent", "must be positive");
        if (check_size(p.center, dim, r.child("center"), errors)) out = ScalarField(p);
    } else if (preset == "step") {
        Step s;
        s.axis = static_cast<int>(r.integer_or("axis", 0));
        s.at = r.number("at");
        s.left = r.number("left");
        s.right = r.number("right");
        if (s.axis < 0 || s.axis >= dim) r.fail("axis", "axis out of range");
        else out = ScalarField(s);
    } else if (preset == "tabulated") {
        Tabulated t;
        t.lower = r.numbers("lower");
        t.upper = r.numbers("upper");
        const Json& shape = r.require("shape");
        if (shape.is_array()) {
            for (const auto& n : shape) {
                if (!n.is_number_integer() || n.get<int>() < 1) {
                    r.fail("shape", "expected positive integers");
                    break;
                }
                t.shape.push_back(n.get<int>());
            }
        } else if (!shape.is_null()) {
            r.fail("shape", "expected an array");
        }
        t.values = r.numbers("values");
        bool ok = check_size(t.lower, dim, r.child("lower"), errors) &&
                  check_size(t.upper, dim, r.child("upper"), errors) &&
                  static_cast<int>(t.shape.size()) == dim;
        if (static_cast<int>(t.shape.size()) != dim) r.fail("shape", "dimension mismatch");
        if (ok) {
            std::size_t count = 1;
            for (int n : t.shape) count *= static_cast<std::size_t>(n);
            if (count != t.values.size()) {
                r.fail("values", "size does not match shape");
                ok = false;
            }
            for (std::size_t k = 0; k < t.lower.size() && ok; ++k) {
                if (!(t.upper[k] > t.lower[k])) {
                    r.fail("upper", "must exceed lower");
                    ok = false;
                }
            }
        }
        if (ok) out = ScalarField(t);
    } else if (!preset.empty()) {
        r.fail("preset", "unknown preset '" + preset + "'");
    }
    r.finish();
    return out;
}

VectorField VectorField::constant(const Vec& v) {
    std::vector<ScalarField> c;
    for (int i = 0; i < v.size(); ++i) c.push_back(ScalarField::constant(v(i)));
    return VectorField(std::move(c), Form::ConstArray);
}

Vec VectorField::operator()(const Vec& x) const {
    Vec v(dim());
    for (int i = 0; i < dim(); ++i) v(i) = components_[static_cast<std::size_t>(i)](x);
    return v;
}

VectorField VectorField::shifted(double s) const {
    std::vector<ScalarField> c;
    for (const auto& f : components_) c.push_back(f.shifted(s));
    return VectorField(std::move(c), form_ == Form::ConstArray ? Form::ConstArray : form_);
}

VectorField VectorField::shifted(const Vec& v) const {
    std::vector<ScalarField> c;
    for (int i = 0; i < dim(); ++i) c.push_back(components_[static_cast<std::size_t>(i)].shifted(v(i)));
    return VectorField(std::move(c), form_);
}

Json VectorField::to_json() const {
    if (form_ == Form::Scalar && components_.size() == 1) return components_[0].to_json();
    bool all_const = std::all_of(components_.begin(), components_.end(),
                                 [](const ScalarField& f) { return f.is_constant(); });
    if (form_ == Form::ConstArray && all_const) {
        Json v = Json::array();
        for (const auto& f : components_) v.push_back(std::get<ScalarField::Const>(f.preset()).value);
        return {{"preset", "const"}, {"value", v}};
    }
    Json c = Json::array();
    for (const auto& f : components_) c.push_back(f.to_json());
    return {{"components", c}};
}

VectorField VectorField::from_json(const Json& j, int dim, const std::string& path,
                                   SchemaErrors& errors) {
    if (j.is_object() && j.contains("components")) {
        ObjectReader r(j, path, errors);
        const Json& c = r.require("components");
        std::vector<ScalarField> comps;
        if (!c.is_array() || static_cast<int>(c.size()) != dim) {
            r.fail("components", "expected " + std::to_string(dim) + " component fields");
        } else {
            for (std::size_t i = 0; i < c.size(); ++i)
                comps.push_back(ScalarField::from_json(c[i], dim, r.child("components") + "/" +
                                                                      std::to_string(i),
                                                       errors));
        }
        r.finish();
        return VectorField(std::move(comps), Form::Components);
    }
    if (j.is_object() && j.contains("value") && j["value"].is_array()) {
        ObjectReader r(j, path, errors);
        if (r.string("preset") != "const") r.fail("preset", "array values require preset 'const'");
        auto v = r.numbers("value");
        r.finish();
        if (!check_size(v, dim, path + "/value", errors)) return VectorField::constant(Vec::Zero(dim));
        Vec vv(dim);
        for (int i = 0; i < dim; ++i) vv(i) = v[static_cast<std::size_t>(i)];
        return VectorField::constant(vv);
    }
    if (dim == 1) {
        return VectorField({ScalarField::from_json(j, dim, path, errors)}, Form::Scalar);
    }
    errors.add(path, "expected {\"components\": [...]} or a const array");
    return VectorField::constant(Vec::Zero(dim));
}

MatrixField MatrixField::constant(const Mat& m) {
    std::vector<ScalarField> e;
    for (int i = 0; i < m.rows(); ++i)
        for (int k = 0; k < m.cols(); ++k) e.push_back(ScalarField::constant(m(i, k)));
    return MatrixField(static_cast<int>(m.rows()), std::move(e), Form::ConstArray);
}

Mat MatrixField::operator()(const Vec& x) const {
    Mat m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) m(i, k) = entries_[static_cast<std::size_t>(i * n_ + k)](x);
    return m;
}

MatrixField MatrixField::shifted(double s) const {
    std::vector<ScalarField> e;
    for (const auto& f : entries_) e.push_back(f.shifted(s));
    return MatrixField(n_, std::move(e), form_);
}

Json MatrixField::to_json() const {
    if (form_ == Form::Scalar && n_ == 1) return entries_[0].to_json();
    bool all_const = std::all_of(entries_.begin(), entries_.end(),
                                 [](const ScalarField& f) { return f.is_constant(); });
    if (form_ == Form::ConstArray && all_const) {
        Json rows = Json::array();
        for (int i = 0; i < n_; ++i) {
            Json row = Json::array();
            for (int k = 0; k < n_; ++k)
                row.push_back(std::get<ScalarField::Const>(entries_[static_cast<std::size_t>(i * n_ + k)].preset()).value);
            rows.push_back(row);
        }
        return {{"preset", "const"}, {"value", rows}};
    }
    Json rows = Json::array();
    for (int i = 0; i < n_; ++i) {
        Json row = Json::array();
        for (int k = 0; k < n_; ++k) row.push_back(entries_[static_cast<std::size_t>(i * n_ + k)].to_json());
        rows.push_back(row);
    }
    return {{"components", rows}};
}

MatrixField MatrixField::from_json(const Json& j, int dim, const std::string& path,
                                   SchemaErrors& errors) {
    auto zero = [dim] { return MatrixField::constant(Mat::Zero(dim, dim)); };
    if (j.is_object() && j.contains("components")) {
        ObjectReader r(j, path, errors);
        const Json& rows = r.require("components");
        std::vector<ScalarField> e;
        bool ok = rows.is_array() && static_cast<int>(rows.size()) == dim;
        for (std::size_t i = 0; ok && i < rows.size(); ++i) {
            if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != dim) {
                ok = false;
                break;
            }
            for (std::size_t k = 0; k < rows[i].size(); ++k)
                e.push_back(ScalarField::from_json(
                    rows[i][k], dim,
                    r.child("components") + "/" + std::to_string(i) + "/" + std::to_string(k), errors));
        }
        if (!ok) r.fail("components", "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " array");
        r.finish();
        return ok ? MatrixField(dim, std::move(e), Form::Components) : zero();
    }
    if (j.is_object() && j.contains("value") && j["value"].is_array()) {
        ObjectReader r(j, path, errors);
        if (r.string("preset") != "const") r.fail("preset", "array values require preset 'const'");
        const Json& rows = r.require("value");
        r.finish();
        Mat m = Mat::Zero(dim, dim);
        bool ok = static_cast<int>(rows.size()) == dim;
        for (int i = 0; ok && i < dim; ++i) {
            auto row = as_numbers(rows[static_cast<std::size_t>(i)], path + "/value/" + std::to_string(i), errors);
            if (static_cast<int>(row.size()) != dim) {
                ok = false;
                break;
            }
            for (int k = 0; k < dim; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
        }
        if (!ok) {
            errors.add(path + "/value", "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " array");
            return zero();
        }
        return MatrixField::constant(m);
    }
    if (dim == 1) return MatrixField(1, {ScalarField::from_json(j, dim, path, errors)}, Form::Scalar);
    errors.add(path, "expected {\"components\": [[...]]} or a const matrix");
    return zero();
}

}  // namespace visclab
