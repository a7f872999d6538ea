#include <fstream>

#include <nlohmann/json.hpp>

#include "stopcert/pts.hpp"

namespace stopcert {

namespace {

constexpr const char* kSchemaVersion = "stopcert-pts/1";

[[noreturn]] void schema_error(const std::string& msg) {
    throw std::runtime_error("pts schema: " + msg);
}

Rational json_rational(const Json& v, const std::string& what) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    schema_error(what + ": rationals must be strings like \"1/2\" or \"0.05\" (or integers)");
}

Distribution json_distribution(const Json& v) {
    if (!v.is_object() || !v.contains("kind")) schema_error("distribution: missing kind");
    std::string kind = v.at("kind").get<std::string>();
    if (kind == "normal")
        return Distribution(NormalDist{json_rational(v.at("mu"), "normal.mu"),
                                       json_rational(v.at("sigma2"), "normal.sigma2")});
    if (kind == "uniform")
        return Distribution(UniformDist{json_rational(v.at("a"), "uniform.a"),
                                        json_rational(v.at("b"), "uniform.b")});
    if (kind == "discrete") {
        DiscreteDist d;
        for (auto& entry : v.at("support"))
            d.support.emplace_back(json_rational(entry.at("value"), "discrete.value"),
                                   json_rational(entry.at("p"), "discrete.p"));
        return Distribution(std::move(d));
    }
    if (kind == "constant")
        return Distribution(ConstantDist{json_rational(v.at("c"), "constant.c")});
    schema_error("unknown distribution kind '" + kind + "'");
}

Json distribution_json(const Distribution& d) {
    Json out;
    if (auto* n = std::get_if<NormalDist>(&d.kind())) {
        out["kind"] = "normal";
        out["mu"] = rational_to_string(n->mu);
        out["sigma2"] = rational_to_string(n->sigma2);
    } else if (auto* u = std::get_if<UniformDist>(&d.kind())) {
        out["kind"] = "uniform";
        out["a"] = rational_to_string(u->a);
        out["b"] = rational_to_string(u->b);
    } else if (auto* ds = std::get_if<DiscreteDist>(&d.kind())) {
        out["kind"] = "discrete";
        out["support"] = Json::array();
        for (auto& [v, p] : ds->support)
            out["support"].push_back({{"value", rational_to_string(v)}, {"p", rational_to_string(p)}});
    } else {
        out["kind"] = "constant";
        out["c"] = rational_to_string(std::get<ConstantDist>(d.kind()).c);
    }
    return out;
}

Guard parse_guard_atoms(const Json& atoms, const Pts& p) {
    Guard g;
    for (auto& atom : atoms) {
        Inequality ineq = parse_inequality(atom.get<std::string>(), p.vars);
        for (auto& [m, c] : ineq.lhs.terms())
            for (auto& [var, exp] : m.factors())
                if (!p.is_program_var(var))
                    schema_error("guard mentions non-program variable " + p.vars.name(var));
        g.atoms.push_back(std::move(ineq));
    }
    return g;
}

std::vector<UpdateBranch> parse_branches(const Json& spec, const Pts& p) {
    std::vector<UpdateBranch> branches;
    Rational total(0);
    for (auto& b : spec) {
        UpdateBranch branch;
        branch.probability = json_rational(b.at("p"), "branch.p");
        if (branch.probability <= 0 || branch.probability > 1)
            schema_error("branch probability must lie in (0, 1]");
        total += branch.probability;
        branch.images.reserve(p.num_program_vars);
        const Json& update = b.contains("update") ? b.at("update") : Json::object();
        for (std::size_t v = 0; v < p.num_program_vars; ++v) {
            const std::string& name = p.vars.name(static_cast<VarId>(v));
            if (update.contains(name)) {
                Polynomial img = parse_polynomial(update.at(name).get<std::string>(), p.vars);
                if (p.step_var && img.degree_in(*p.step_var) > 0)
                    schema_error("update mentions the step symbol '" +
                                 p.vars.name(*p.step_var) + "'");
                branch.images.push_back(std::move(img));
            } else {
                branch.images.push_back(Polynomial::var(static_cast<VarId>(v)));
            }
        }
        for (auto it = update.begin(); it != update.end(); ++it)
            if (!p.vars.find(it.key()) || !p.is_program_var(*p.vars.find(it.key())))
                schema_error("update assigns unknown program variable '" + it.key() + "'");
        branches.push_back(std::move(branch));
    }
    if (total != 1) schema_error("branch probabilities must sum to exactly 1");
    return branches;
}

}  // namespace

Pts load_pts(const Json& doc) {
    if (doc.contains("version") && doc.at("version").get<std::string>() != kSchemaVersion)
        schema_error("unsupported version (expected " + std::string(kSchemaVersion) + ")");

    Pts p;
    for (auto& v : doc.at("vars")) p.vars.add(v.get<std::string>());
    p.num_program_vars = p.vars.size();
    if (p.num_program_vars == 0) schema_error("no program variables");

    if (doc.contains("randoms"))
        for (auto& [name, dist] : doc.at("randoms").items()) {
            if (p.vars.find(name)) schema_error("duplicate variable '" + name + "'");
            p.randoms.emplace_back(p.vars.add(name), json_distribution(dist));
        }

    for (const char* cand : {"k", "step", "_step"}) {
        if (!p.vars.find(cand)) {
            p.step_var = p.vars.add(cand);
            break;
        }
    }
    if (!p.step_var) schema_error("variable names 'k', 'step' and '_step' are all taken");

    for (auto& l : doc.at("locations")) {
        std::string name = l.get<std::string>();
        if (p.location_id(name)) schema_error("duplicate location '" + name + "'");
        p.locations.push_back(name);
    }
    auto require_loc = [&](const std::string& name) -> LocId {
        auto id = p.location_id(name);
        if (!id) schema_error("unknown location '" + name + "'");
        return *id;
    };
    p.initial_location = require_loc(doc.at("init_loc").get<std::string>());
    if (doc.contains("final_loc") && !doc.at("final_loc").is_null())
        p.final_location = require_loc(doc.at("final_loc").get<std::string>());

    const Json& init = doc.at("init");
    for (std::size_t v = 0; v < p.num_program_vars; ++v) {
        const std::string& name = p.vars.name(static_cast<VarId>(v));
        if (!init.contains(name)) schema_error("init missing variable '" + name + "'");
        const Json& val = init.at(name);
        if (val.is_object())
            p.init.emplace_back(json_distribution(val));
        else
            p.init.emplace_back(json_rational(val, "init." + name));
    }

    if (!doc.contains("transitions") || doc.at("transitions").empty())
        schema_error("no transitions");
    for (auto& t : doc.at("transitions")) {
        LocId from = require_loc(t.at("from").get<std::string>());
        LocId to = require_loc(t.at("to").get<std::string>());
        std::vector<UpdateBranch> branches = parse_branches(t.at("branches"), p);
        const Json& guard = t.contains("guard") ? t.at("guard") : Json::array();
        // A top-level {"or": [...]} guard is compiled to DNF: one transition
        // per disjunct with the identical update.
        std::vector<Guard> disjuncts;
        if (guard.is_object() && guard.contains("or"))
            for (auto& disj : guard.at("or")) disjuncts.push_back(parse_guard_atoms(disj, p));
        else
            disjuncts.push_back(parse_guard_atoms(guard, p));
        for (auto& g : disjuncts)
            p.transitions.push_back(Transition{from, std::move(g), branches, to});
    }

    p.trusted = doc.contains("trusted") && doc.at("trusted").get<bool>();

    // Totalize: a final location with no outgoing transition gets the
    // identity self-loop, so the chain is defined past termination.
    if (p.final_location) {
        bool has_out = false;
        for (auto& t : p.transitions)
            if (t.source == *p.final_location) has_out = true;
        if (!has_out) {
            UpdateBranch id_branch;
            id_branch.probability = Rational(1);
            for (std::size_t v = 0; v < p.num_program_vars; ++v)
                id_branch.images.push_back(Polynomial::var(static_cast<VarId>(v)));
            p.transitions.push_back(
                Transition{*p.final_location, Guard{}, {std::move(id_branch)}, *p.final_location});
        }
    }
    return p;
}

Pts load_pts_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Json doc = Json::parse(in, nullptr, true, true);  // allow comments
    return load_pts(doc);
}

Json save_pts(const Pts& p) {
    Json doc;
    doc["version"] = kSchemaVersion;
    doc["vars"] = Json::array();
    for (std::size_t v = 0; v < p.num_program_vars; ++v)
        doc["vars"].push_back(p.vars.name(static_cast<VarId>(v)));
    if (!p.randoms.empty()) {
        doc["randoms"] = Json::object();
        for (auto& [rv, dist] : p.randoms) doc["randoms"][p.vars.name(rv)] = distribution_json(dist);
    }
    doc["locations"] = p.locations;
    doc["init_loc"] = p.location_name(p.initial_location);
    if (p.final_location) doc["final_loc"] = p.location_name(*p.final_location);
    doc["init"] = Json::object();
    for (std::size_t v = 0; v < p.num_program_vars; ++v) {
        const std::string& name = p.vars.name(static_cast<VarId>(v));
        if (auto* point = std::get_if<Rational>(&p.init[v]))
            doc["init"][name] = rational_to_string(*point);
        else
            doc["init"][name] = distribution_json(std::get<Distribution>(p.init[v]));
    }
    doc["transitions"] = Json::array();
    for (auto& t : p.transitions) {
        Json jt;
        jt["from"] = p.location_name(t.source);
        jt["guard"] = Json::array();
        for (auto& atom : t.guard.atoms) jt["guard"].push_back(atom.to_string(p.vars));
        jt["branches"] = Json::array();
        for (auto& b : t.branches) {
            Json jb;
            jb["p"] = rational_to_string(b.probability);
            jb["update"] = Json::object();
            for (std::size_t v = 0; v < p.num_program_vars; ++v)
                jb["update"][p.vars.name(static_cast<VarId>(v))] = b.images[v].to_string(p.vars);
            jt["branches"].push_back(std::move(jb));
        }
        jt["to"] = p.location_name(t.destination);
        doc["transitions"].push_back(std::move(jt));
    }
    doc["trusted"] = p.trusted;
    return doc;
}

}  // namespace stopcert
