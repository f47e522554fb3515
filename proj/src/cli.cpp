#include "visclab/cli.hpp"

#include <algorithm>
#include <ostream>

namespace visclab {

const std::vector<std::string> kCommands = {"solve", "vv-rate", "cont-dep", "lemma-check", "holder", "probe"};

Report run_study(const std::string& command, const Config& c) {
    if (command == "solve") return run_solve(c.problem, c.solver, c.cells, c.mu, c.scheme);
    if (command == "holder") return run_holder(c.problem, c.solver, c.cells, c.scheme);
    if (command == "vv-rate") return run_vv_rate(c.problem, c.solver, c.rate_study(), c.scheme);
    if (command == "cont-dep") {
        if (!c.cont_dep) throw ConfigError("cont-dep needs a studies/cont_dep block");
        ContDepStudy s = *c.cont_dep;
        if (s.cells.empty()) s.cells = c.cells;
        return run_cont_dep(c.problem, c.solver, s, c.seed, c.scheme);
    }
    if (command == "lemma-check") return run_lemma_check(c.problem, c.lemma_study(), c.seed);
    if (command == "probe") return run_probe(c.problem, c.probe_study(), c.seed);
    throw ConfigError("unknown command '" + command + "'");
}

int dispatch(const std::string& command, const std::string& config_path, std::optional<std::uint64_t> seed,
             std::optional<std::string> out_dir, std::ostream& out, std::ostream& err) {
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
        err << "unknown command '" << command << "'\n";
        return kConfigError;
    }
    try {
        Config cfg = load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (out_dir) cfg.output = *out_dir;
        const Report rep = run_study(command, cfg);
        rep.write(cfg.output);
        const int code = !rep.converged ? kNonconvergence : rep.pass ? kPass : kCheckFailed;
        out << command << ": " << (code == kPass ? "pass" : code == kCheckFailed ? "FAIL" : "NONCONVERGENT")
            << " (" << (std::filesystem::path(cfg.output) / (rep.study + ".json")).string() << ")\n";
        return code;
    } catch (const NonconvergenceError& e) {
        err << "nonconvergence: " << e.what() << "\n";
        return kNonconvergence;
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return kConfigError;
    } catch (const SchemeError& e) {
        err << "scheme error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        // Failed assumptions and exhausted calibrations are check failures.
        err << e.what() << "\n";
        return kCheckFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
}

}  // namespace visclab
