#include "fibcalc/bounds.hpp"
#include "fibcalc/diagrams.hpp"
#include "fibcalc/enumerate.hpp"
#include "fibcalc/invariants.hpp"
#include "fibcalc/io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace fibcalc;

namespace {

enum Exit { OK = 0, PARSE = 2, VALIDATION = 3, AUDIT = 4, SCOPE = 5 };

int exit_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument: return PARSE;
    case ErrorCode::InvalidMultiplicity:
    case ErrorCode::UnknownCurve: return VALIDATION;
    case ErrorCode::InconsistentForest: return AUDIT;
    default: return SCOPE;
    }
}

struct Caps {
    int nodes = 3;
    int mult = 0;
};

Caps parse_caps(const std::string& s) {
    Caps c;
    if (s.empty()) return c;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "bad --caps item " + item);
        std::string k = item.substr(0, eq);
        int v;
        try {
            v = std::stoi(item.substr(eq + 1));
        } catch (...) {
            throw Error(ErrorCode::ParseError, "bad --caps value in " + item);
        }
        if (k == "node") c.nodes = v;
        else if (k == "mult") c.mult = v;
        else throw Error(ErrorCode::ParseError, "unknown --caps key " + k);
    }
    return c;
}

std::string label_of(const GermSpec& s, size_t i) {
    return s.label.empty() ? "#" + std::to_string(i) : s.label;
}

std::string row(const LocalInvariants& L, const FibrationParams& p) {
    std::string out = "K2=" + str(L.K2) + " chi=" + str(L.chi) + " e=" + str(L.e);
    if (p.h == 1) out += " Ind=" + str(*L.Ind) + " sigma=" + str(L.sigma);
    if (L.lambda_local) out += " lambda=" + str(*L.lambda_local);
    return out;
}

std::string alpha_vector(const IndexRecord& I) {
    std::string out = "alpha=(";
    for (int k = 1; k <= I.max_k(); ++k) out += (k > 1 ? "," : "") + std::to_string(I.alpha(k));
    return out + ") alpha0=" + std::to_string(I.alpha0) + " epsilon=" + std::to_string(I.epsilon);
}

std::string j_summary(const IndexRecord& I) {
    std::string out = "j=";
    bool any = false;
    for (auto [ba, v] : I.j_prime)
        if (v) {
            out += (any ? "," : "") + std::string("j'") + std::to_string(ba.first) + "," + std::to_string(ba.second) +
                   ":" + std::to_string(v);
            any = true;
        }
    for (auto [ba, v] : I.j_dprime)
        if (v) {
            out += (any ? "," : "") + std::string("j''") + std::to_string(ba.first) + "," +
                   std::to_string(ba.second) + ":" + std::to_string(v);
            any = true;
        }
    return any ? out : out + "0";
}

json local_json(const IndexRecord& I, const LocalInvariants& L) {
    json j;
    json a = json::array();
    for (int k = 1; k <= I.max_k(); ++k) a.push_back(I.alpha(k));
    j["alpha"] = a;
    j["alpha0"] = I.alpha0;
    j["epsilon"] = I.epsilon;
    j["j_total"] = I.j_total();
    j["K2"] = str(L.K2);
    j["chi"] = str(L.chi);
    j["e"] = str(L.e);
    if (L.Ind) j["Ind"] = str(*L.Ind);
    j["sigma"] = str(L.sigma);
    if (L.lambda_local) j["lambda"] = str(*L.lambda_local);
    return j;
}

void print_violations(const std::string& label, const ValidationReport& v) {
    for (const auto& x : v)
        std::cerr << "germ " << label << ": " << x.rule << (x.node.empty() ? "" : " at " + x.node) << ": " << x.detail
                  << "\n";
}

int cmd_validate(const std::string& path, bool as_json) {
    GermFile file = read_germ_file(path);
    int rc = OK;
    json out = json::array();
    for (size_t i = 0; i < file.germs.size(); ++i) {
        const GermSpec& s = file.germs[i].spec;
        ValidationReport v = validate_germ(s);
        if (as_json) {
            json vs = json::array();
            for (const auto& x : v) vs.push_back({{"rule", x.rule}, {"node", x.node}, {"detail", x.detail}});
            out.push_back({{"label", label_of(s, i)}, {"violations", vs}});
        } else {
            std::cout << label_of(s, i) << ": " << (v.empty() ? "valid" : std::to_string(v.size()) + " violation(s)")
                      << "\n";
            for (const auto& x : v)
                std::cout << "  " << x.rule << (x.node.empty() ? "" : " at " + x.node) << ": " << x.detail << "\n";
        }
        if (!v.empty()) rc = VALIDATION;
    }
    if (as_json) std::cout << out.dump(2) << "\n";
    return rc;
}

int cmd_invariants(const std::string& path, bool lenient, bool as_json) {
    GermFile file = read_germ_file(path);
    std::vector<LocalInvariants> locals;
    json out;
    out["germs"] = json::array();
    int rc = OK;
    for (size_t i = 0; i < file.germs.size(); ++i) {
        const GermSpec& s = file.germs[i].spec;
        std::string label = label_of(s, i);
        ValidationReport v = validate_germ(s);
        if (!v.empty()) {
            print_violations(label, v);
            if (!lenient) return VALIDATION;
            rc = VALIDATION;
            if (as_json) out["germs"].push_back({{"label", label}, {"valid", false}});
            else std::cout << label << ": invalid (" << v.front().rule << ")\n";
            continue;
        }
        IndexRecord I;
        try {
            I = derive_indices(s);
        } catch (const Error& e) {
            std::cerr << "germ " << label << ": " << e.what() << "\n";
            if (!lenient) return AUDIT;
            rc = std::max(rc, static_cast<int>(AUDIT));
            continue;
        }
        LocalInvariants L = local_invariants(I, s.fiber, s.params);
        locals.push_back(L);
        if (as_json) {
            json j = local_json(I, L);
            j["label"] = label;
            out["germs"].push_back(j);
        } else {
            std::cout << label << ": " << alpha_vector(I) << " " << j_summary(I) << "\n";
            std::cout << "  " << row(L, file.params) << "\n";
        }
    }
    GlobalInvariants G;
    bool trivial = false;
    try {
        G = aggregate(locals, file.params);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::LocallyTrivial) throw;
        trivial = true;
        G.K2 = G.chi = G.e = G.ind_sum = G.sigma = 0;
        for (const auto& L : locals) {
            G.K2 += L.K2;
            G.e += L.e;
            G.sigma += L.sigma;
            if (L.Ind) G.ind_sum += *L.Ind;
        }
    }
    LocalInvariants row_of_total{G.K2, G.chi, G.e, G.sigma, std::nullopt, std::nullopt};
    if (file.params.h == 1) row_of_total.Ind = G.ind_sum;
    if (!trivial) row_of_total.lambda_local = G.lambda;
    if (as_json) {
        json g;
        g["K2"] = str(G.K2);
        g["chi"] = str(G.chi);
        g["e"] = str(G.e);
        if (file.params.h == 1) g["Ind"] = str(G.ind_sum);
        g["sigma"] = str(G.sigma);
        if (!trivial) g["lambda"] = str(G.lambda);
        out["global"] = g;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "global: " << row(row_of_total, file.params) << "\n";
    }
    return rc;
}

const char* rel_sym(Relation r) {
    switch (r) {
    case Relation::Eq: return "=";
    case Relation::Le: return "<=";
    case Relation::Ge: return ">=";
    }
    return "?";
}

int cmd_audit(const std::string& path, bool as_json) {
    GermFile file = read_germ_file(path, true);
    int rc = OK;
    json out = json::array();
    for (size_t i = 0; i < file.germs.size(); ++i) {
        const GermEntry& ge = file.germs[i];
        const GermSpec& s = ge.spec;
        std::string label = label_of(s, i);
        ValidationReport v = validate_germ(s);
        if (!v.empty()) {
            print_violations(label, v);
            return VALIDATION;
        }
        auto D = detail::derive(s, {});
        IndexRecord I = D.idx;
        apply_adjust(I, ge.adjust);
        LemmaAuditReport rep = audit_lemmas(I, s.fiber, s.params);
        Rational slack = bound_audit(I, s.fiber, s.params);
        if (as_json) {
            json es = json::array();
            for (const auto& e : rep.entries)
                es.push_back({{"name", e.name},
                              {"relation", rel_sym(e.rel)},
                              {"lhs", str(e.lhs)},
                              {"rhs", str(e.rhs)},
                              {"slack", str(e.slack)},
                              {"pass", e.pass}});
            out.push_back({{"label", label}, {"entries", es}, {"bound_slack", str(slack)}});
        } else {
            std::cout << label << ":\n";
            for (const auto& e : rep.entries)
                std::cout << "  " << (e.pass ? "pass" : "FAIL") << " " << e.name << ": " << str(e.lhs) << " "
                          << rel_sym(e.rel) << " " << str(e.rhs) << " slack=" << str(e.slack)
                          << (e.note.empty() ? "" : " (" + e.note + ")") << "\n";
            std::cout << "  bound slack e - mu*chi = " << str(slack) << "\n";
        }
        for (const auto& e : rep.entries)
            if (!e.pass) {
                std::cerr << "germ " << label << ": audit failed: " << e.name << " (slack " << str(e.slack) << ")\n";
                rc = AUDIT;
            }
        if (slack < 0) {
            std::cerr << "germ " << label << ": bound audit failed (slack " << str(slack) << ")\n";
            rc = AUDIT;
        }
    }
    if (as_json) std::cout << out.dump(2) << "\n";
    return rc;
}

int cmd_enumerate_diagrams(int n, int type, long t, int depth, const Caps& caps, std::optional<long> blowups,
                           bool as_json) {
    auto ds = enumerate_diagrams(n, type, t, depth, caps.mult, blowups);
    if (as_json) {
        json out = json::array();
        for (const auto& d : ds) out.push_back({{"n", d.n}, {"type", d.dtype}, {"t", d.t}, {"columns", d.columns}});
        std::cout << out.dump(2) << "\n";
        return OK;
    }
    std::cout << ds.size() << " diagram(s)\n";
    for (const auto& d : ds) std::cout << "\n" << render_diagram(d);
    return OK;
}

int cmd_enumerate_germs(int g, int h, int n, const Caps& caps, const std::string& output) {
    FibrationParams p = compute_params(g, h, n);
    GermCaps gc;
    gc.max_nodes = caps.nodes;
    gc.max_mult = caps.mult;
    auto germs = enumerate_germs(p, gc);
    std::string text = render_germ_file(p, germs);
    std::ostream* summary = &std::cout;
    if (output.empty()) {
        std::cout << text;
        summary = &std::cerr;
    } else {
        std::ofstream f(output);
        if (!f) throw Error(ErrorCode::ParseError, "cannot write " + output);
        f << text;
    }
    *summary << germs.size() << " germ(s)\n";
    bool scoped = true;
    try {
        require_bound_scope(p);
    } catch (const Error&) {
        scoped = false;
    }
    if (!scoped) {
        *summary << "bound audit: out of scope for these parameters\n";
        return OK;
    }
    std::optional<Rational> min_slack;
    long counterexamples = 0;
    for (const auto& s : germs) {
        IndexRecord I = derive_indices(s);
        Rational b = bound_audit(I, s.fiber, p);
        if (!min_slack || b < *min_slack) min_slack = b;
        if (b < 0) {
            ++counterexamples;
            *summary << "counterexample: " << canonical_key(s) << " slack " << str(b) << "\n";
        }
    }
    *summary << "min slack " << (min_slack ? str(*min_slack) : "-") << ", " << counterexamples
             << " counterexample(s)\n";
    return counterexamples ? AUDIT : OK;
}

int cmd_extremal(int g, int h, int n, const std::string& family, int l) {
    ExtremalFamily f;
    if (!parse_family(family, f)) throw Error(ErrorCode::ParseError, "unknown family " + family);
    FibrationParams p = compute_params(g, h, n);
    std::cout << render_germ_file(p, {extremal_germ(p, f, l)});
    return OK;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fibcalc: fiber germs of cyclic covering fibrations"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    bool as_json = false, lenient = false;
    std::string path, caps_s, output, family;
    int g = 0, h = 0, n = 0, type = 1, depth = 2, l = 1;
    long t = 0, blowups = -1;

    auto* inv = app.add_subcommand("invariants", "local and global invariants of a germ file");
    inv->add_option("file", path)->required();
    inv->add_flag("--lenient", lenient, "report invalid germs instead of stopping");
    inv->add_flag("--json", as_json);

    auto* aud = app.add_subcommand("audit", "lemma audit and bound slack per germ");
    aud->add_option("file", path)->required();
    aud->add_flag("--json", as_json);

    auto* val = app.add_subcommand("validate", "validate every germ in a file");
    val->add_option("file", path)->required();
    val->add_flag("--json", as_json);

    auto* ed = app.add_subcommand("enumerate-diagrams", "singularity diagrams of a curve");
    ed->add_option("--n", n)->required();
    ed->add_option("--type", type, "1: curve in R, 0: not in R");
    ed->add_option("--t", t)->required();
    ed->add_option("--depth", depth);
    ed->add_option("--blowups", blowups, "exact number of singular points");
    ed->add_option("--caps", caps_s, "mult=M");
    ed->add_flag("--json", as_json);

    auto* eg = app.add_subcommand("enumerate-germs", "all valid germs within caps");
    eg->add_option("--g", g)->required();
    eg->add_option("--h", h)->required();
    eg->add_option("--n", n)->required();
    eg->add_option("--caps", caps_s, "node=N,mult=M");
    eg->add_option("--output", output, "write the germ file here; the summary goes to stdout");

    auto* ex = app.add_subcommand("extremal", "germ file for an extremal family");
    ex->add_option("--g", g)->required();
    ex->add_option("--h", h)->required();
    ex->add_option("--n", n)->required();
    ex->add_option("--family", family, "H1_I, H1_II_n3, H1_III_n2, H0_TRIPLE_403")->required();
    ex->add_option("--l", l);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : PARSE;
    }

    try {
        if (*inv) return cmd_invariants(path, lenient, as_json);
        if (*aud) return cmd_audit(path, as_json);
        if (*val) return cmd_validate(path, as_json);
        if (*ed)
            return cmd_enumerate_diagrams(n, type, t, depth, parse_caps(caps_s),
                                          blowups >= 0 ? std::optional<long>(blowups) : std::nullopt, as_json);
        if (*eg) return cmd_enumerate_germs(g, h, n, parse_caps(caps_s), output);
        if (*ex) return cmd_extremal(g, h, n, family, l);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_for(e.code());
    }
    return OK;
}
