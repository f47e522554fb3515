#pragma once

// One JSON document per run: the problem, solver settings, optional study
// blocks, seed and output directory. Parsing is strict (unknown keys are
// errors) and serialize(parse(doc)) reproduces any fully spelled-out doc.

#include "visclab/experiments.hpp"
#include "visclab/schema.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace visclab {

struct Config {
    Problem problem;
    std::vector<int> cells;
    double mu = 0.0;
    SolveParams solver;
    SchemeOptions scheme;

    std::optional<RateStudy> vv_rate;
    std::optional<ContDepStudy> cont_dep;
    std::optional<LemmaStudy> lemma_check;
    std::optional<ProbeStudy> probe;

    std::uint64_t seed = 1;
    std::string output = "out";

    /// Study blocks with defaults filled from the solver section.
    [[nodiscard]] RateStudy rate_study() const;
    [[nodiscard]] LemmaStudy lemma_study() const;
    [[nodiscard]] ProbeStudy probe_study() const;
};

/// ConfigError on malformed JSON; SchemaError listing every problem with its path.
Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);
Json serialize_config(const Config& config);

}  // namespace visclab
