#include "visclab/schema.hpp"

namespace visclab {

namespace {

const Json& null_json() {
    static const Json kNull;
    return kNull;
}

}  // namespace

std::string SchemaErrors::joined() const {
    std::string out;
    for (const auto& e : errors_) {
        if (!out.empty()) out += "; ";
        out += e;
    }
    return out;
}

SchemaError::SchemaError(std::vector<std::string> errors)
    : ConfigError([&] {
          std::string msg = "invalid configuration";
          for (const auto& e : errors) msg += "\n  " + e;
          return msg;
      }()),
      errors_(std::move(errors)) {}

ObjectReader::ObjectReader(const Json& j, std::string path, SchemaErrors& errors)
    : json_(j), path_(std::move(path)), errors_(errors) {
    if (!json_.is_object()) {
        errors_.add(path_.empty() ? "/" : path_, "expected an object");
        valid_ = false;
    }
}

bool ObjectReader::has(const std::string& key) const {
    return valid_ && json_.contains(key);
}

const Json& ObjectReader::require(const std::string& key) {
    if (!valid_) return null_json();
    consumed_.insert(key);
    auto it = json_.find(key);
    if (it == json_.end()) {
        errors_.add(child(key), "missing required key");
        return null_json();
    }
    return *it;
}

const Json* ObjectReader::optional(const std::string& key) {
    if (!valid_) return nullptr;
    consumed_.insert(key);
    auto it = json_.find(key);
    return it == json_.end() ? nullptr : &*it;
}

double ObjectReader::number(const std::string& key) {
    const Json& j = require(key);
    if (j.is_null()) return 0.0;
    return as_number(j, child(key), errors_);
}

double ObjectReader::number_or(const std::string& key, double fallback) {
    const Json* j = optional(key);
    return j ? as_number(*j, child(key), errors_) : fallback;
}

long long ObjectReader::integer(const std::string& key) {
    const Json& j = require(key);
    if (j.is_null()) return 0;
    if (!j.is_number_integer()) {
        errors_.add(child(key), "expected an integer");
        return 0;
    }
    return j.get<long long>();
}

long long ObjectReader::integer_or(const std::string& key, long long fallback) {
    if (!has(key)) {
        consumed_.insert(key);
        return fallback;
    }
    return integer(key);
}

bool ObjectReader::boolean_or(const std::string& key, bool fallback) {
    const Json* j = optional(key);
    if (!j) return fallback;
    if (!j->is_boolean()) {
        errors_.add(child(key), "expected a boolean");
        return fallback;
    }
    return j->get<bool>();
}

std::string ObjectReader::string(const std::string& key) {
    const Json& j = require(key);
    if (j.is_null()) return {};
    if (!j.is_string()) {
        errors_.add(child(key), "expected a string");
        return {};
    }
    return j.get<std::string>();
}

std::string ObjectReader::string_or(const std::string& key, const std::string& fallback) {
    if (!has(key)) {
        consumed_.insert(key);
        return fallback;
    }
    return string(key);
}

std::vector<double> ObjectReader::numbers(const std::string& key) {
    const Json& j = require(key);
    if (j.is_null()) return {};
    return as_numbers(j, child(key), errors_);
}

void ObjectReader::fail(const std::string& key, const std::string& message) {
    errors_.add(key.empty() ? path_ : child(key), message);
}

void ObjectReader::finish() {
    if (!valid_) return;
    for (const auto& [key, value] : json_.items()) {
        if (!consumed_.count(key)) errors_.add(child(key), "unknown key");
    }
}

double as_number(const Json& j, const std::string& path, SchemaErrors& errors) {
    if (!j.is_number()) {
        errors.add(path, "expected a number");
        return 0.0;
    }
    return j.get<double>();
}

std::vector<double> as_numbers(const Json& j, const std::string& path, SchemaErrors& errors) {
    std::vector<double> out;
    if (!j.is_array()) {
        errors.add(path, "expected an array of numbers");
        return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(as_number(j[i], path + "/" + std::to_string(i), errors));
    }
    return out;
}

}  // namespace visclab
