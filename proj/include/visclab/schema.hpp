#pragma once

// Strict JSON object reading with path-tagged error collection. Every
// reader records which keys it consumed; finish() flags the rest as unknown.

#include "visclab/core.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace visclab {

using Json = nlohmann::json;

/// Collects schema problems as "path: message" strings.
class SchemaErrors {
public:
    void add(const std::string& path, const std::string& message) {
        errors_.push_back(path + ": " + message);
    }
    [[nodiscard]] bool empty() const { return errors_.empty(); }
    [[nodiscard]] const std::vector<std::string>& list() const { return errors_; }
    [[nodiscard]] std::string joined() const;

private:
    std::vector<std::string> errors_;
};

/// Thrown once parsing is complete and at least one schema error was found.
class SchemaError : public ConfigError {
public:
    explicit SchemaError(std::vector<std::string> errors);
    [[nodiscard]] const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

class ObjectReader {
public:
    ObjectReader(const Json& j, std::string path, SchemaErrors& errors);

    [[nodiscard]] bool valid() const { return valid_; }
    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] const std::string& path() const { return path_; }
    [[nodiscard]] std::string child(const std::string& key) const { return path_ + "/" + key; }

    /// Returns the member or records "missing" and returns null.
    const Json& require(const std::string& key);
    /// Returns the member if present (marks it consumed), else nullptr.
    const Json* optional(const std::string& key);

    double number(const std::string& key);
    double number_or(const std::string& key, double fallback);
    long long integer(const std::string& key);
    long long integer_or(const std::string& key, long long fallback);
    bool boolean_or(const std::string& key, bool fallback);
    std::string string(const std::string& key);
    std::string string_or(const std::string& key, const std::string& fallback);
    std::vector<double> numbers(const std::string& key);

    void fail(const std::string& key, const std::string& message);

    /// Records every member not consumed so far as an unknown key.
    void finish();

private:
    const Json& json_;
    std::string path_;
    SchemaErrors& errors_;
    std::set<std::string> consumed_;
    bool valid_ = true;
};

double as_number(const Json& j, const std::string& path, SchemaErrors& errors);
std::vector<double> as_numbers(const Json& j, const std::string& path, SchemaErrors& errors);

}  // namespace visclab
