#pragma once

#include "core.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace fibcalc {

enum class FiberKind { Smooth, I, II, III, IV, IStar, IIStar, IIIStar, IVStar, RuledLine };

struct FiberComponent {
    std::string id;
    int genus = 0;  // arithmetic genus
    int self_intersection = 0;
    int multiplicity = 1;
    bool singular = false;

    bool operator==(const FiberComponent&) const = default;
};

// Components meeting at one point; mult is the pairwise local intersection number.
struct FiberEdge {
    std::vector<int> comps;
    int mult = 1;

    bool operator==(const FiberEdge&) const = default;
};

struct FiberDescriptor {
    FiberKind kind = FiberKind::Smooth;
    int k = 0;  // index of I_k and I*_k
    int m_p = 1;
    std::vector<FiberComponent> components;
    std::vector<FiberEdge> edges;

    bool operator==(const FiberDescriptor&) const = default;

    int index_of(const std::string& id) const {
        for (size_t i = 0; i < components.size(); ++i)
            if (components[i].id == id) return static_cast<int>(i);
        return -1;
    }
    bool irreducible() const { return components.size() == 1; }
    bool has_singular_component() const {
        return std::any_of(components.begin(), components.end(),
                           [](const FiberComponent& c) { return c.singular; });
    }
    // The singular component of I_1 has a node, that of II a cusp.
    bool cuspidal() const { return kind == FiberKind::II; }
};

inline int euler_number(FiberKind kind, int k) {
    switch (kind) {
    case FiberKind::Smooth: return 0;
    case FiberKind::I: return k;
    case FiberKind::II: return 2;
    case FiberKind::III: return 3;
    case FiberKind::IV: return 4;
    case FiberKind::IStar: return k + 6;
    case FiberKind::IIStar: return 10;
    case FiberKind::IIIStar: return 9;
    case FiberKind::IVStar: return 8;
    case FiberKind::RuledLine: return 0;
    }
    return 0;
}

inline std::string kind_name(FiberKind kind, int k) {
    switch (kind) {
    case FiberKind::Smooth: return "Smooth";
    case FiberKind::I: return "I_" + std::to_string(k);
    case FiberKind::II: return "II";
    case FiberKind::III: return "III";
    case FiberKind::IV: return "IV";
    case FiberKind::IStar: return "IStar_" + std::to_string(k);
    case FiberKind::IIStar: return "IIStar";
    case FiberKind::IIIStar: return "IIIStar";
    case FiberKind::IVStar: return "IVStar";
    case FiberKind::RuledLine: return "RuledLine";
    }
    return "?";
}

inline std::string kind_name(const FiberDescriptor& f) { return kind_name(f.kind, f.k); }

inline bool parse_kind(const std::string& s, FiberKind& kind, int& k) {
    static const std::map<std::string, FiberKind> fixed = {
        {"Smooth", FiberKind::Smooth}, {"II", FiberKind::II},         {"III", FiberKind::III},
        {"IV", FiberKind::IV},         {"IIStar", FiberKind::IIStar}, {"IIIStar", FiberKind::IIIStar},
        {"IVStar", FiberKind::IVStar}, {"RuledLine", FiberKind::RuledLine}};
    k = 0;
    if (auto it = fixed.find(s); it != fixed.end()) {
        kind = it->second;
        return true;
    }
    auto parse_index = [&](const std::string& prefix, FiberKind kd, int min_k) {
        if (s.rfind(prefix, 0) != 0 || s.size() == prefix.size()) return false;
        std::string rest = s.substr(prefix.size());
        if (!std::all_of(rest.begin(), rest.end(), ::isdigit) || rest.size() > 3) return false;
        k = std::stoi(rest);
        kind = kd;
        return k >= min_k;
    };
    return parse_index("IStar_", FiberKind::IStar, 0) || parse_index("I_", FiberKind::I, 1);
}

// Dual graph of the reduced fiber, components named C0, C1, ...
inline FiberDescriptor standard_fiber(FiberKind kind, int k = 0, int m_p = 1) {
    FiberDescriptor f;
    f.kind = kind;
    f.k = k;
    f.m_p = m_p;
    auto add = [&](int genus, int self, int mult, bool singular = false) {
        f.components.push_back(
            {"C" + std::to_string(f.components.size()), genus, self, mult, singular});
    };
    auto edge = [&](int a, int b, int mult = 1) { f.edges.push_back({{a, b}, mult}); };
    switch (kind) {
    case FiberKind::Smooth: add(1, 0, 1); break;
    case FiberKind::RuledLine: add(0, 0, 1); break;
    case FiberKind::I:
        if (k == 1) {
            add(1, 0, 1, true);
        } else {
            for (int i = 0; i < k; ++i) add(0, -2, 1);
            for (int i = 0; i < k; ++i) edge(i, (i + 1) % k);
        }
        break;
    case FiberKind::II: add(1, 0, 1, true); break;
    case FiberKind::III:
        add(0, -2, 1);
        add(0, -2, 1);
        edge(0, 1, 2);
        break;
    case FiberKind::IV:
        for (int i = 0; i < 3; ++i) add(0, -2, 1);
        f.edges.push_back({{0, 1, 2}, 1});
        break;
    case FiberKind::IStar:
        for (int i = 0; i < 4; ++i) add(0, -2, 1);
        for (int i = 0; i <= k; ++i) add(0, -2, 2);
        edge(0, 4);
        edge(1, 4);
        edge(2, 4 + k);
        edge(3, 4 + k);
        for (int i = 0; i < k; ++i) edge(4 + i, 5 + i);
        break;
    case FiberKind::IVStar: {
        const int mult[] = {3, 2, 1, 2, 1, 2, 1};
        for (int m : mult) add(0, -2, m);
        edge(0, 1); edge(1, 2); edge(0, 3); edge(3, 4); edge(0, 5); edge(5, 6);
        break;
    }
    case FiberKind::IIIStar: {
        const int mult[] = {1, 2, 3, 4, 3, 2, 1, 2};
        for (int m : mult) add(0, -2, m);
        for (int i = 0; i < 6; ++i) edge(i, i + 1);
        edge(3, 7);
        break;
    }
    case FiberKind::IIStar: {
        const int mult[] = {1, 2, 3, 4, 5, 6, 4, 2, 3};
        for (int m : mult) add(0, -2, m);
        for (int i = 0; i < 7; ++i) edge(i, i + 1);
        edge(5, 8);
        break;
    }
    }
    return f;
}

// Intersection number of two distinct components (sum over meeting points).
inline int component_intersection(const FiberDescriptor& f, int a, int b) {
    if (a == b) return f.components[a].self_intersection;
    int total = 0;
    for (const auto& e : f.edges) {
        bool ha = std::find(e.comps.begin(), e.comps.end(), a) != e.comps.end();
        bool hb = std::find(e.comps.begin(), e.comps.end(), b) != e.comps.end();
        if (ha && hb) total += e.mult;
    }
    return total;
}

// Problems with a fiber descriptor, empty when it matches the elliptic/ruled tables.
inline std::vector<std::string> check_fiber(const FiberDescriptor& f, int h) {
    std::vector<std::string> out;
    if (h == 0) {
        if (f.kind != FiberKind::RuledLine) out.push_back("fibers over a rational base are RuledLine");
    } else if (f.kind == FiberKind::RuledLine) {
        out.push_back("RuledLine fibers only occur for h = 0");
    }
    if (f.m_p < 1) out.push_back("fiber multiplicity must be >= 1");
    if (f.m_p > 1 && f.kind != FiberKind::Smooth && f.kind != FiberKind::I)
        out.push_back("multiple fibers only occur for kinds Smooth and I_k");
    if (f.kind == FiberKind::I && f.k < 1) out.push_back("I_k needs k >= 1");
    if (f.components.empty()) {
        out.push_back("fiber has no components");
        return out;
    }
    FiberDescriptor ref = standard_fiber(f.kind, f.k, f.m_p);
    if (ref.components.size() != f.components.size()) {
        out.push_back("component count does not match " + kind_name(f));
        return out;
    }
    for (size_t i = 0; i < f.components.size(); ++i) {
        for (size_t j = i + 1; j < f.components.size(); ++j)
            if (f.components[i].id == f.components[j].id)
                out.push_back("duplicate component id " + f.components[i].id);
        if (!f.components[i].id.empty() && f.components[i].id[0] == 'E')
            out.push_back("component ids starting with E are reserved for exceptional curves");
    }
    for (const auto& e : f.edges) {
        if (e.comps.size() < 2 || e.mult < 1) out.push_back("malformed edge");
        for (int c : e.comps)
            if (c < 0 || c >= static_cast<int>(f.components.size())) out.push_back("edge names unknown component");
    }
    if (!out.empty()) return out;
    // Numerically trivial on every component, same genus/singularity profile as the table.
    for (size_t j = 0; j < f.components.size(); ++j) {
        long s = 0;
        for (size_t i = 0; i < f.components.size(); ++i)
            s += static_cast<long>(f.components[i].multiplicity) *
                 component_intersection(f, static_cast<int>(i), static_cast<int>(j));
        if (s != 0) out.push_back("fiber is not numerically trivial on " + f.components[j].id);
    }
    auto profile = [](const FiberDescriptor& d) {
        std::vector<std::tuple<int, int, int, bool>> v;
        for (const auto& c : d.components) v.emplace_back(c.genus, c.self_intersection, c.multiplicity, c.singular);
        std::sort(v.begin(), v.end());
        return v;
    };
    if (profile(f) != profile(ref)) out.push_back("component data does not match " + kind_name(f));
    auto edge_profile = [](const FiberDescriptor& d) {
        std::vector<std::pair<size_t, int>> v;
        for (const auto& e : d.edges) v.emplace_back(e.comps.size(), e.mult);
        std::sort(v.begin(), v.end());
        return v;
    };
    if (edge_profile(f) != edge_profile(ref)) out.push_back("edge data does not match " + kind_name(f));
    return out;
}

inline Rational chi_phi(const FiberDescriptor& f) { return rat(euler_number(f.kind, f.k), 12); }
inline Rational nu(const FiberDescriptor& f) { return rat(1) - rat(1, f.m_p); }

}  // namespace fibcalc
