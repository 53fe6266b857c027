#pragma once

#include "blowup.hpp"
#include "core.hpp"
#include "fiber.hpp"
#include "germ.hpp"

#include "../../vendor/json.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fibcalc {

using json = nlohmann::ordered_json;

struct GermEntry {
    GermSpec spec;
    std::map<std::string, long> adjust;  // added to derived indices before auditing
};

struct GermFile {
    FibrationParams params;
    std::vector<GermEntry> germs;
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ParseError, where + ": " + what);
}

inline void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) parse_fail(where, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) parse_fail(where, "unknown field \"" + it.key() + "\"");
}

inline int get_int(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) parse_fail(where, "missing field \"" + key + "\"");
    const json& v = j.at(key);
    if (!v.is_number_integer()) parse_fail(where, "\"" + key + "\" must be an integer");
    return v.get<int>();
}

inline int get_int_or(const json& j, const std::string& key, int dflt, const std::string& where) {
    return j.contains(key) ? get_int(j, key, where) : dflt;
}

inline std::string get_string(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) parse_fail(where, "missing field \"" + key + "\"");
    if (!j.at(key).is_string()) parse_fail(where, "\"" + key + "\" must be a string");
    return j.at(key).get<std::string>();
}

inline CurveRef parse_ref(const json& j, const std::string& where) {
    if (j.is_string()) return {j.get<std::string>(), 1};
    if (j.is_array() && j.size() == 2 && j[0].is_string() && j[1].is_number_integer())
        return {j[0].get<std::string>(), j[1].get<int>()};
    parse_fail(where, "curve reference must be \"id\" or [\"id\", mult]");
}

inline ForestNode parse_node(const json& j, const std::string& path) {
    const std::string where = "node " + path;
    only_keys(j, {"id", "m", "on", "children"}, where);
    ForestNode n;
    n.m = get_int(j, "m", where);
    n.id = j.contains("id") ? get_string(j, "id", where) : path;
    if (j.contains("on")) {
        if (!j["on"].is_array()) parse_fail(where, "\"on\" must be an array");
        for (const auto& r : j["on"]) n.on.push_back(parse_ref(r, where));
    }
    if (j.contains("children")) {
        if (!j["children"].is_array()) parse_fail(where, "\"children\" must be an array");
        for (size_t i = 0; i < j["children"].size(); ++i)
            n.children.push_back(parse_node(j["children"][i], path + "." + std::to_string(i)));
    }
    return n;
}

inline FiberDescriptor parse_fiber(const json& j, const std::string& where) {
    only_keys(j, {"kind", "multiplicity", "components", "edges"}, where);
    FiberKind kind;
    int k;
    std::string kname = get_string(j, "kind", where);
    if (!parse_kind(kname, kind, k)) parse_fail(where, "unknown fiber kind \"" + kname + "\"");
    int m = get_int_or(j, "multiplicity", 1, where);
    FiberDescriptor f = standard_fiber(kind, k, m);
    if (j.contains("components")) {
        if (!j["components"].is_array()) parse_fail(where, "\"components\" must be an array");
        f.components.clear();
        for (const auto& c : j["components"]) {
            only_keys(c, {"id", "genus", "self_intersection", "fiber_multiplicity", "singular"}, where + " component");
            FiberComponent fc;
            fc.id = get_string(c, "id", where);
            fc.genus = get_int(c, "genus", where);
            fc.self_intersection = get_int(c, "self_intersection", where);
            fc.multiplicity = get_int_or(c, "fiber_multiplicity", 1, where);
            if (c.contains("singular")) {
                if (!c["singular"].is_boolean()) parse_fail(where, "\"singular\" must be a boolean");
                fc.singular = c["singular"].get<bool>();
            }
            f.components.push_back(fc);
        }
        if (!j.contains("edges")) f.edges.clear();
    }
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) parse_fail(where, "\"edges\" must be an array");
        f.edges.clear();
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() < 3) parse_fail(where, "edge must be [id, id, ..., mult]");
            FiberEdge fe;
            for (size_t i = 0; i + 1 < e.size(); ++i) {
                if (!e[i].is_string()) parse_fail(where, "edge ids must be strings");
                int idx = f.index_of(e[i].get<std::string>());
                if (idx < 0) parse_fail(where, "edge names unknown component " + e[i].get<std::string>());
                fe.comps.push_back(idx);
            }
            if (!e.back().is_number_integer()) parse_fail(where, "edge multiplicity must be an integer");
            fe.mult = e.back().get<int>();
            f.edges.push_back(fe);
        }
    }
    return f;
}

}  // namespace detail

inline GermSpec parse_germ(const json& j, const FibrationParams& params, std::map<std::string, long>* adjust = nullptr) {
    std::string where = "germ";
    if (j.is_object() && j.contains("label") && j["label"].is_string()) where += " \"" + j["label"].get<std::string>() + "\"";
    detail::only_keys(j, {"label", "fiber", "in_R", "forest", "horizontal", "adjust"}, where);
    GermSpec s;
    s.params = params;
    s.label = j.contains("label") ? detail::get_string(j, "label", where) : "";
    if (!j.contains("fiber")) detail::parse_fail(where, "missing field \"fiber\"");
    s.fiber = detail::parse_fiber(j["fiber"], where + " fiber");
    if (j.contains("in_R")) {
        if (!j["in_R"].is_array()) detail::parse_fail(where, "\"in_R\" must be an array");
        for (const auto& id : j["in_R"]) {
            if (!id.is_string()) detail::parse_fail(where, "\"in_R\" entries must be strings");
            s.in_R.push_back(id.get<std::string>());
        }
    }
    if (j.contains("forest")) {
        if (!j["forest"].is_array()) detail::parse_fail(where, "\"forest\" must be an array");
        for (size_t i = 0; i < j["forest"].size(); ++i)
            s.forest.push_back(detail::parse_node(j["forest"][i], std::to_string(i)));
    }
    if (j.contains("horizontal")) {
        const json& h = j["horizontal"];
        detail::only_keys(h, {"branches", "alpha0_plus"}, where + " horizontal");
        if (h.contains("branches")) {
            if (!h["branches"].is_array()) detail::parse_fail(where, "\"branches\" must be an array");
            for (const auto& e : h["branches"]) {
                if (!e.is_number_integer()) detail::parse_fail(where, "branch indices must be integers");
                s.horizontal.branches.push_back(e.get<int>());
            }
        }
        if (h.contains("alpha0_plus")) s.horizontal.alpha0_plus = detail::get_int(h, "alpha0_plus", where);
    }
    if (j.contains("adjust")) {
        if (!adjust) detail::parse_fail(where, "\"adjust\" is only accepted by the audit command");
        if (!j["adjust"].is_object()) detail::parse_fail(where, "\"adjust\" must be an object");
        for (auto it = j["adjust"].begin(); it != j["adjust"].end(); ++it) {
            if (!it.value().is_number_integer()) detail::parse_fail(where, "adjust values must be integers");
            (*adjust)[it.key()] = it.value().get<long>();
        }
    }
    return s;
}

inline GermFile parse_germ_file(const std::string& text, bool allow_adjust = false) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
    detail::only_keys(j, {"params", "germs"}, "file");
    if (!j.contains("params")) detail::parse_fail("file", "missing field \"params\"");
    const json& pj = j["params"];
    detail::only_keys(pj, {"g", "h", "n"}, "params");
    GermFile file;
    file.params = compute_params(detail::get_int(pj, "g", "params"), detail::get_int(pj, "h", "params"),
                                 detail::get_int(pj, "n", "params"));
    if (!j.contains("germs") || !j["germs"].is_array()) detail::parse_fail("file", "\"germs\" must be an array");
    std::set<std::string> labels;
    for (const auto& gj : j["germs"]) {
        GermEntry e;
        e.spec = parse_germ(gj, file.params, allow_adjust ? &e.adjust : nullptr);
        if (!e.spec.label.empty() && !labels.insert(e.spec.label).second)
            detail::parse_fail("file", "duplicate label \"" + e.spec.label + "\"");
        file.germs.push_back(std::move(e));
    }
    return file;
}

inline GermFile read_germ_file(const std::string& path, bool allow_adjust = false) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_germ_file(ss.str(), allow_adjust);
}

namespace detail {

inline json render_node(const ForestNode& n, const std::string& path) {
    json j;
    if (n.id != path) j["id"] = n.id;
    j["m"] = n.m;
    if (!n.on.empty()) {
        json on = json::array();
        for (const auto& r : n.on) {
            if (r.mult == 1) on.push_back(r.curve);
            else on.push_back(json::array({r.curve, r.mult}));
        }
        j["on"] = on;
    }
    if (!n.children.empty()) {
        json ch = json::array();
        for (size_t i = 0; i < n.children.size(); ++i)
            ch.push_back(render_node(n.children[i], path + "." + std::to_string(i)));
        j["children"] = ch;
    }
    return j;
}

}  // namespace detail

// Germs are written in canonical form; fiber data is spelled out only when it differs from the table.
inline json germ_to_json(const GermSpec& g0) {
    GermSpec g = canonical_form(g0);
    json j;
    if (!g.label.empty()) j["label"] = g.label;
    json f;
    f["kind"] = kind_name(g.fiber);
    if (g.fiber.m_p != 1) f["multiplicity"] = g.fiber.m_p;
    FiberDescriptor ref = standard_fiber(g.fiber.kind, g.fiber.k, g.fiber.m_p);
    if (ref.components != g.fiber.components || ref.edges != g.fiber.edges) {
        json comps = json::array();
        for (const auto& c : g.fiber.components) {
            json cj;
            cj["id"] = c.id;
            cj["genus"] = c.genus;
            cj["self_intersection"] = c.self_intersection;
            cj["fiber_multiplicity"] = c.multiplicity;
            cj["singular"] = c.singular;
            comps.push_back(cj);
        }
        f["components"] = comps;
        json edges = json::array();
        for (const auto& e : g.fiber.edges) {
            json ej = json::array();
            for (int c : e.comps) ej.push_back(g.fiber.components[c].id);
            ej.push_back(e.mult);
            edges.push_back(ej);
        }
        f["edges"] = edges;
    }
    j["fiber"] = f;
    if (!g.in_R.empty()) j["in_R"] = g.in_R;
    json forest = json::array();
    for (size_t i = 0; i < g.forest.size(); ++i) forest.push_back(detail::render_node(g.forest[i], std::to_string(i)));
    j["forest"] = forest;
    json h = json::object();
    if (!g.horizontal.branches.empty()) h["branches"] = g.horizontal.branches;
    if (g.horizontal.alpha0_plus) h["alpha0_plus"] = *g.horizontal.alpha0_plus;
    j["horizontal"] = h;
    return j;
}

inline std::string render_germ_file(const FibrationParams& p, const std::vector<GermSpec>& germs) {
    json j;
    j["params"] = {{"g", p.g}, {"h", p.h}, {"n", p.n}};
    json arr = json::array();
    for (const auto& g : germs) arr.push_back(germ_to_json(g));
    j["germs"] = arr;
    return j.dump(2) + "\n";
}

// Single-field perturbation of derived indices, for audit fixtures.
inline void apply_adjust(IndexRecord& I, const std::map<std::string, long>& adjust) {
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        return parts;
    };
    for (const auto& [key, d] : adjust) {
        auto parts = split(key);
        const std::string& f = parts[0];
        auto num = [&](size_t i) {
            if (i >= parts.size()) throw Error(ErrorCode::ParseError, "adjust key " + key + " needs an index");
            return std::stoi(parts[i]);
        };
        static const std::map<std::string, long IndexRecord::*> scalars = {
            {"alpha0_plus", &IndexRecord::alpha0_plus}, {"alpha0_minus", &IndexRecord::alpha0_minus},
            {"alpha0", &IndexRecord::alpha0},           {"epsilon", &IndexRecord::epsilon},
            {"iota", &IndexRecord::iota},               {"kappa", &IndexRecord::kappa},
            {"iota3", &IndexRecord::iota3},             {"kappa3", &IndexRecord::kappa3},
            {"eta", &IndexRecord::eta},                 {"eta_prime", &IndexRecord::eta_prime},
            {"eta_dprime", &IndexRecord::eta_dprime},   {"eta_bar", &IndexRecord::eta_bar},
            {"eta_hat", &IndexRecord::eta_hat},         {"j_prime_0_2_odd", &IndexRecord::j_prime_0_2_odd}};
        static const std::map<std::string, std::map<int, long> IndexRecord::*> by_k = {
            {"alpha_nZ", &IndexRecord::alpha_nZ},         {"alpha_nZ1", &IndexRecord::alpha_nZ1},
            {"alpha_prime", &IndexRecord::alpha_prime},   {"alpha_dprime", &IndexRecord::alpha_dprime},
            {"alpha_tr", &IndexRecord::alpha_tr},         {"alpha_co0", &IndexRecord::alpha_co0},
            {"alpha_co1", &IndexRecord::alpha_co1}};
        if (auto it = scalars.find(f); it != scalars.end()) {
            I.*(it->second) += d;
        } else if (f == "gamma") {
            I.gamma += d;
        } else if (f == "delta_cyc") {
            I.delta_cyc += static_cast<int>(d);
        } else if (auto it2 = by_k.find(f); it2 != by_k.end()) {
            (I.*(it2->second))[num(1)] += d;
        } else if (f == "j_prime" || f == "j_dprime") {
            auto& m = f == "j_prime" ? I.j_prime : I.j_dprime;
            m[{num(1), num(2)}] += d;
        } else {
            throw Error(ErrorCode::ParseError, "unknown adjust field " + key);
        }
    }
}

}  // namespace fibcalc
