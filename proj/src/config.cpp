#include "visclab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace visclab {

namespace {

std::vector<int> int_list(ObjectReader& r, const std::string& key, SchemaErrors& errors) {
    std::vector<int> out;
    const Json& j = r.require(key);
    if (j.is_null()) return out;
    if (!j.is_array()) {
        errors.add(r.child(key), "expected an array of positive integers");
        return out;
    }
    for (const auto& e : j) {
        if (!e.is_number_integer() || e.get<long long>() < 1) {
            errors.add(r.child(key), "expected an array of positive integers");
            return {};
        }
        out.push_back(e.get<int>());
    }
    return out;
}

void check_cells(const std::vector<int>& cells, int dim, const std::string& path, SchemaErrors& errors) {
    if (static_cast<int>(cells.size()) != dim) errors.add(path, "expected one cell count per dimension");
    for (int c : cells)
        if (c < 2) errors.add(path, "need at least two cells per axis");
}

void positive(double v, const std::string& path, SchemaErrors& errors) {
    if (!(v > 0.0) || !std::isfinite(v)) errors.add(path, "must be positive");
}

RateStudy rate_from_json(const Json& j, const std::string& path, int dim, SchemaErrors& errors) {
    ObjectReader r(j, path, errors);
    RateStudy s;
    if (!r.valid()) return s;
    s.mu_schedule = r.has("mu_schedule") ? r.numbers("mu_schedule") : RateStudy::default_schedule();
    r.optional("mu_schedule");
    if (r.has("cells")) {
        s.cells = int_list(r, "cells", errors);
        check_cells(s.cells, dim, r.child("cells"), errors);
    }
    r.optional("cells");
    s.reference_factor = static_cast<int>(r.integer_or("reference_factor", 4));
    if (s.reference_factor < 4) r.fail("reference_factor", "reference grid must be at least 4x finer");
    for (std::size_t i = 0; i < s.mu_schedule.size(); ++i) {
        if (!(s.mu_schedule[i] > 0.0)) r.fail("mu_schedule", "entries must be positive");
        if (i && !(s.mu_schedule[i] < s.mu_schedule[i - 1])) r.fail("mu_schedule", "must be strictly decreasing");
    }
    if (s.mu_schedule.size() < 2) r.fail("mu_schedule", "need at least two entries");
    r.finish();
    return s;
}

ContDepStudy cont_from_json(const Json& j, const std::string& path, int dim, SchemaErrors& errors) {
    ObjectReader r(j, path, errors);
    ContDepStudy s;
    if (!r.valid()) return s;
    if (r.has("cells")) {
        s.cells = int_list(r, "cells", errors);
        check_cells(s.cells, dim, r.child("cells"), errors);
    }
    r.optional("cells");
    const Json& fams = r.require("families");
    if (!fams.is_array() || fams.empty()) {
        if (!fams.is_null()) r.fail("families", "expected a nonempty array");
    } else {
        for (std::size_t i = 0; i < fams.size(); ++i) {
            ObjectReader f(fams[i], r.child("families") + "/" + std::to_string(i), errors);
            if (!f.valid()) continue;
            Perturbation p;
            p.name = f.string("name");
            p.target = f.string("target");
            p.which = f.string("which");
            p.magnitudes = f.numbers("magnitudes");
            if (p.target == "operator") {
                if (p.which != "sigma" && p.which != "b" && p.which != "c" && p.which != "f")
                    f.fail("which", "operator perturbations are sigma, b, c or f");
            } else if (p.target == "boundary") {
                if (p.which != "g" && p.which != "gamma" && p.which != "theta")
                    f.fail("which", "boundary perturbations are g, gamma or theta");
            } else if (!p.target.empty()) {
                f.fail("target", "expected 'operator' or 'boundary'");
            }
            if (p.magnitudes.empty()) f.fail("magnitudes", "need at least one magnitude");
            f.finish();
            s.families.push_back(std::move(p));
        }
    }
    if (const Json* c = r.optional("C")) {
        s.C_declared = as_number(*c, r.child("C"), errors);
        positive(*s.C_declared, r.child("C"), errors);
    }
    const long long bs = r.integer_or("boundary_samples", 256);
    if (bs < 1) r.fail("boundary_samples", "must be positive");
    s.boundary_samples = static_cast<std::size_t>(std::max(bs, 1LL));
    s.p_max = r.number_or("p_max", 4.0);
    positive(s.p_max, r.child("p_max"), errors);
    r.finish();
    return s;
}

LemmaStudy lemma_from_json(const Json& j, const std::string& path, const Domain& domain, SchemaErrors& errors) {
    ObjectReader r(j, path, errors);
    LemmaStudy s;
    if (!r.valid()) return s;
    if (const Json* v = r.optional("r0")) {
        s.r0 = as_number(*v, r.child("r0"), errors);
        positive(*s.r0, r.child("r0"), errors);
        if (*s.r0 > domain.inradius()) r.fail("r0", "exceeds the inradius of the domain");
    }
    s.quadrature_order = static_cast<int>(r.integer_or("quadrature_order", 16));
    if (s.quadrature_order < 4) r.fail("quadrature_order", "must be at least 4");
    s.alpha_bar = r.number_or("alpha_bar", 1.0);
    if (!(s.alpha_bar > 0.0 && s.alpha_bar <= 1.0)) r.fail("alpha_bar", "must lie in (0, 1]");
    if (r.has("eps_levels")) s.eps_levels = r.numbers("eps_levels");
    r.optional("eps_levels");
    if (s.eps_levels.size() < 2) r.fail("eps_levels", "need at least two levels");
    for (double e : s.eps_levels)
        if (!(e > 0.0 && e < 1.0)) r.fail("eps_levels", "levels must lie in (0, 1)");
    const long long n = r.integer_or("samples", 10000);
    if (n < 16) r.fail("samples", "need at least 16 samples");
    s.samples = static_cast<std::size_t>(std::max(n, 16LL));
    s.K1 = r.number_or("K1", 1.0);
    positive(s.K1, r.child("K1"), errors);
    if (const Json* g = r.optional("lemguy")) {
        ObjectReader q(*g, r.child("lemguy"), errors);
        if (q.valid()) {
            s.lemguy.x_count = static_cast<int>(q.integer_or("x_count", 25));
            s.lemguy.p_count = static_cast<int>(q.integer_or("p_count", 51));
            s.lemguy.p_max = q.number_or("p_max", 4.0);
            s.lemguy.a_levels = static_cast<int>(q.integer_or("a_levels", 8));
            s.lemguy.a_max = q.number_or("a_max", 0.5);
            if (s.lemguy.x_count < 2 || s.lemguy.p_count < 2 || s.lemguy.a_levels < 1)
                q.fail("", "grid too small");
            positive(s.lemguy.p_max, q.child("p_max"), errors);
            if (!(s.lemguy.a_max > 0.0 && s.lemguy.a_max <= 1.0)) q.fail("a_max", "must lie in (0, 1]");
            q.finish();
        }
    }
    s.partner_which = r.string_or("partner_which", "");
    s.partner_shift = r.number_or("partner_shift", 0.1);
    s.refine_starts = static_cast<int>(r.integer_or("refine_starts", 8));
    if (s.refine_starts < 0) r.fail("refine_starts", "must be nonnegative");
    r.finish();
    return s;
}

ProbeStudy probe_from_json(const Json& j, const std::string& path, SchemaErrors& errors) {
    ObjectReader r(j, path, errors);
    ProbeStudy s;
    if (!r.valid()) return s;
    const long long n = r.integer_or("samples", 256);
    if (n < 1) r.fail("samples", "must be positive");
    s.samples = static_cast<std::size_t>(std::max(n, 1LL));
    s.p_max = r.number_or("p_max", 4.0);
    positive(s.p_max, r.child("p_max"), errors);
    if (const Json* l = r.optional("lambda")) s.lambda = as_number(*l, r.child("lambda"), errors);
    r.finish();
    return s;
}

}  // namespace

RateStudy Config::rate_study() const {
    RateStudy s = vv_rate.value_or(RateStudy{RateStudy::default_schedule(), {}, 4});
    if (s.cells.empty()) s.cells = cells;
    return s;
}

LemmaStudy Config::lemma_study() const { return lemma_check.value_or(LemmaStudy{}); }

ProbeStudy Config::probe_study() const { return probe.value_or(ProbeStudy{}); }

Config parse_config(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    SchemaErrors errors;
    ObjectReader r(doc, "", errors);
    if (!r.valid()) throw SchemaError(errors.list());

    const Domain domain = Domain::from_json(r.require("domain"), "/domain", errors);
    const int dim = domain.dim();
    OperatorSpec op = OperatorSpec::from_json(r.require("operator"), dim, "/operator", errors);
    BoundarySpec bc = BoundarySpec::from_json(r.require("boundary"), domain, "/boundary", errors);
    Config cfg{Problem{domain, std::move(op), std::move(bc)}, {}, 0.0, {}, {}, {}, {}, {}, {}, 1, "out"};

    if (const Json* s = r.optional("solver")) {
        ObjectReader q(*s, "/solver", errors);
        if (q.valid()) {
            cfg.cells = int_list(q, "cells", errors);
            check_cells(cfg.cells, dim, "/solver/cells", errors);
            cfg.solver.tol = q.number_or("tol", cfg.solver.tol);
            cfg.solver.max_policy_iters = static_cast<int>(q.integer_or("max_policy_iters", 200));
            cfg.solver.linear_tol = q.number_or("linear_tol", cfg.solver.linear_tol);
            cfg.solver.damping = q.number_or("damping", cfg.solver.damping);
            cfg.solver.max_picard_iters = static_cast<int>(q.integer_or("max_picard_iters", 400));
            cfg.mu = q.number_or("mu", 0.0);
            const std::string form = q.string_or("boundary_form", "strong");
            if (form == "weak") cfg.scheme.form = BoundaryForm::Weak;
            else if (form != "strong") q.fail("boundary_form", "expected 'strong' or 'weak'");
            cfg.scheme.second_order_boundary = q.boolean_or("second_order_boundary", true);
            positive(cfg.solver.tol, "/solver/tol", errors);
            positive(cfg.solver.linear_tol, "/solver/linear_tol", errors);
            if (!(cfg.solver.damping > 0.0 && cfg.solver.damping <= 1.0)) q.fail("damping", "must lie in (0, 1]");
            if (cfg.solver.max_policy_iters < 1) q.fail("max_policy_iters", "must be positive");
            if (cfg.solver.max_picard_iters < 1) q.fail("max_picard_iters", "must be positive");
            if (!(cfg.mu >= 0.0)) q.fail("mu", "must be nonnegative");
            q.finish();
        }
    } else {
        cfg.cells.assign(static_cast<std::size_t>(dim), 64);
    }

    if (const Json* st = r.optional("studies")) {
        ObjectReader q(*st, "/studies", errors);
        if (q.valid()) {
            if (const Json* v = q.optional("vv_rate")) cfg.vv_rate = rate_from_json(*v, "/studies/vv_rate", dim, errors);
            if (const Json* v = q.optional("cont_dep"))
                cfg.cont_dep = cont_from_json(*v, "/studies/cont_dep", dim, errors);
            if (const Json* v = q.optional("lemma_check"))
                cfg.lemma_check = lemma_from_json(*v, "/studies/lemma_check", domain, errors);
            if (const Json* v = q.optional("probe")) cfg.probe = probe_from_json(*v, "/studies/probe", errors);
            q.finish();
        }
    }
    const long long seed = r.integer_or("seed", 1);
    if (seed < 0) r.fail("seed", "must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(std::max(seed, 0LL));
    cfg.output = r.string_or("output", "out");
    if (cfg.output.empty()) r.fail("output", "must be a nonempty path");
    r.finish();
    if (!errors.empty()) throw SchemaError(errors.list());
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Json serialize_config(const Config& c) {
    Json j;
    j["domain"] = c.problem.domain.to_json();
    j["operator"] = c.problem.op.to_json();
    j["boundary"] = c.problem.boundary.to_json();
    j["solver"] = {{"cells", c.cells},
                   {"tol", c.solver.tol},
                   {"max_policy_iters", c.solver.max_policy_iters},
                   {"linear_tol", c.solver.linear_tol},
                   {"damping", c.solver.damping},
                   {"max_picard_iters", c.solver.max_picard_iters},
                   {"mu", c.mu},
                   {"boundary_form", c.scheme.form == BoundaryForm::Weak ? "weak" : "strong"},
                   {"second_order_boundary", c.scheme.second_order_boundary}};
    Json st = Json::object();
    if (c.vv_rate) {
        Json v = {{"mu_schedule", c.vv_rate->mu_schedule}, {"reference_factor", c.vv_rate->reference_factor}};
        if (!c.vv_rate->cells.empty()) v["cells"] = c.vv_rate->cells;
        st["vv_rate"] = v;
    }
    if (c.cont_dep) {
        Json fams = Json::array();
        for (const auto& f : c.cont_dep->families)
            fams.push_back({{"name", f.name}, {"target", f.target}, {"which", f.which}, {"magnitudes", f.magnitudes}});
        Json v = {{"families", fams}, {"boundary_samples", c.cont_dep->boundary_samples}, {"p_max", c.cont_dep->p_max}};
        if (!c.cont_dep->cells.empty()) v["cells"] = c.cont_dep->cells;
        if (c.cont_dep->C_declared) v["C"] = *c.cont_dep->C_declared;
        st["cont_dep"] = v;
    }
    if (c.lemma_check) {
        const LemmaStudy& l = *c.lemma_check;
        Json v = {{"quadrature_order", l.quadrature_order},
                  {"alpha_bar", l.alpha_bar},
                  {"eps_levels", l.eps_levels},
                  {"samples", l.samples},
                  {"K1", l.K1},
                  {"lemguy",
                   {{"x_count", l.lemguy.x_count},
                    {"p_count", l.lemguy.p_count},
                    {"p_max", l.lemguy.p_max},
                    {"a_levels", l.lemguy.a_levels},
                    {"a_max", l.lemguy.a_max}}},
                  {"partner_which", l.partner_which},
                  {"partner_shift", l.partner_shift},
                  {"refine_starts", l.refine_starts}};
        if (l.r0) v["r0"] = *l.r0;
        st["lemma_check"] = v;
    }
    if (c.probe) {
        Json v = {{"samples", c.probe->samples}, {"p_max", c.probe->p_max}};
        if (c.probe->lambda) v["lambda"] = *c.probe->lambda;
        st["probe"] = v;
    }
    if (!st.empty()) j["studies"] = st;
    j["seed"] = c.seed;
    j["output"] = c.output;
    return j;
}

}  // namespace visclab
