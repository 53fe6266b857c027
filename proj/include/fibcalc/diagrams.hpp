#pragma once

#include "blowup.hpp"
#include "core.hpp"
#include "germ.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fibcalc {

struct SingularityDiagram {
    int n = 2;
    int dtype = 1;  // 1: the curve lies in R
    long t = 0;
    std::vector<std::vector<int>> columns;  // bottom-up

    long c() const {
        long s = 0;
        for (const auto& col : columns) s += static_cast<long>(col.size());
        return s;
    }
    int height() const {
        size_t h = 0;
        for (const auto& col : columns) h = std::max(h, col.size());
        return static_cast<int>(h);
    }
    // '#' marks: i_max - i_bm per column, 0 for a blank header.
    std::vector<int> headers() const {
        std::vector<int> out;
        int h = height();
        for (const auto& col : columns) out.push_back(h - static_cast<int>(col.size()));
        return out;
    }
    long sum_d() const {
        long s = 0;
        for (const auto& col : columns)
            for (int m : col) s += m / n;
        return s;
    }

    bool operator==(const SingularityDiagram&) const = default;
};

struct DiagramLink {
    int diagram = -1;  // earlier diagram holding the point this curve was created at
    int column = -1;
    int row = -1;

    bool operator==(const DiagramLink&) const = default;
};

struct DiagramSequence {
    std::vector<SingularityDiagram> diagrams;
    std::vector<DiagramLink> parents;  // parents[0] is empty

    bool operator==(const DiagramSequence&) const = default;
};

inline long enumeration_limit() {
    if (const char* s = std::getenv("FIBCALC_MAX_ENUM")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && v > 0) return v;
    }
    return 2000000;
}

// Columns ordered by height, then content, both descending.
inline bool column_before(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a > b;
}

inline void normalize(SingularityDiagram& d) {
    std::stable_sort(d.columns.begin(), d.columns.end(), column_before);
}

inline ValidationReport validate_diagram(const SingularityDiagram& d) {
    ValidationReport out;
    auto report = [&](const std::string& rule, const std::string& detail) { out.push_back({rule, "", detail}); };
    const int n = d.n;
    if (n < 2 || (d.dtype != 0 && d.dtype != 1)) {
        report("Shape", "need n >= 2 and type 0 or 1");
        return out;
    }
    for (size_t i = 0; i + 1 < d.columns.size(); ++i)
        if (d.columns[i].size() < d.columns[i + 1].size())
            report("ColumnOrder", "column heights must be non-increasing");
    bool entries_ok = true;
    for (size_t i = 0; i < d.columns.size(); ++i) {
        const auto& col = d.columns[i];
        if (col.empty()) report("Shape", "empty column");
        for (int m : col)
            if (!classifiable(m, n)) {
                report("InvalidMultiplicity", "entry " + std::to_string(m) + " is not 0 or 1 mod " + std::to_string(n));
                entries_ok = false;
            }
    }
    if (!entries_ok) return out;
    long bottom = 0;
    for (size_t i = 0; i < d.columns.size(); ++i) {
        const auto& col = d.columns[i];
        std::string where = "column " + std::to_string(i + 1);
        for (size_t j = 0; j + 1 < col.size(); ++j) {
            int a = col[j], b = col[j + 1];
            bool a_odd = a % n == 1;
            if (n >= 3) {
                if (b > a) report("Monotonicity", where + ": " + std::to_string(b) + " above " + std::to_string(a));
            } else {
                bool prev_even = j == 0 || col[j - 1] % 2 == 0;
                if (b > a + 1 || (b == a + 1 && !(a_odd && prev_even)))
                    report("Monotonicity", where + ": " + std::to_string(b) + " above " + std::to_string(a));
            }
            if (j >= 1 && col[j - 1] % n == 1 && a % n == 0 && b >= a)
                report("StrictDecrease", where + ": an nZ entry over an nZ+1 entry must drop");
        }
        if (d.dtype == 1 && !col.empty() && col.back() % n != 0)
            report("TopEntry", where + ": top entry " + std::to_string(col.back()) + " is not in nZ");
        if (!col.empty()) bottom += col.front() - d.dtype;
    }
    if (bottom > d.t) report("BottomRowDegree", "bottom row exceeds the intersection with R");
    long lhs = d.t + (d.dtype == 1 ? d.c() : 0);
    if (d.dtype == 1) {
        if (lhs != static_cast<long>(n) * d.sum_d())
            report("BlowupCount", "(t + c)/n = " + str(rat(lhs, n)) + " but the diagram carries " +
                                      std::to_string(d.sum_d()));
    } else if (static_cast<long>(n) * d.sum_d() > d.t) {
        report("BlowupCount", "n * sum d = " + std::to_string(n * d.sum_d()) + " exceeds t = " + std::to_string(d.t));
    }
    return out;
}

namespace detail {

inline void gen_columns(int n, int dtype, int max_depth, int max_mult, long budget, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out) {
    if (!cur.empty()) {
        SingularityDiagram probe{n, dtype, 1L << 40, {cur}};
        bool ok = true;
        for (const auto& v : validate_diagram(probe))
            if (v.rule != "BlowupCount" && v.rule != "BottomRowDegree") ok = false;
        if (ok) out.push_back(cur);
    }
    if (static_cast<int>(cur.size()) >= max_depth) return;
    long used = 0;
    for (int m : cur) used += m / n;
    for (int m = 2; m <= max_mult; ++m) {
        if (!classifiable(m, n) || used + m / n > budget) continue;
        if (!cur.empty()) {
            int a = cur.back();
            if (n >= 3 && m > a) continue;
            if (n == 2 && m > a + 1) continue;
        }
        cur.push_back(m);
        // Prefixes with a non-nZ top are kept only as stems; every emitted column is re-validated.
        gen_columns(n, dtype, max_depth, max_mult, budget, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

inline std::vector<SingularityDiagram> enumerate_diagrams(int n, int dtype, long t, int max_depth, int max_mult = 0,
                                                          std::optional<long> blowups = std::nullopt) {
    if (n < 2 || (dtype != 0 && dtype != 1) || t < 0 || max_depth < 0)
        throw Error(ErrorCode::InvalidArgument, "need n >= 2, type 0 or 1, t >= 0, depth >= 0");
    if (max_mult <= 0) max_mult = static_cast<int>(t) + max_depth;
    const long limit = enumeration_limit();
    // Each column with d-sum s and height h uses n*s - h (type 1) or n*s (type 0) of t.
    long budget = dtype == 1 ? t / (n - 1) : t / n;
    std::vector<std::vector<int>> cols;
    std::vector<int> cur;
    detail::gen_columns(n, dtype, max_depth, max_mult, budget, cur, cols);
    if (static_cast<long>(cols.size()) > limit) throw Error(ErrorCode::CapTooLarge, "too many columns");
    std::sort(cols.begin(), cols.end(), column_before);
    auto cost = [&](const std::vector<int>& col) {
        long s = 0;
        for (int m : col) s += m / n;
        return dtype == 1 ? n * s - static_cast<long>(col.size()) : n * s;
    };
    std::vector<SingularityDiagram> out;
    std::vector<std::vector<int>> chosen;
    std::function<void(size_t, long)> go = [&](size_t from, long used) {
        {
            SingularityDiagram d{n, dtype, t, chosen};
            if ((!blowups || d.c() == *blowups) && validate_diagram(d).empty()) {
                out.push_back(d);
                if (static_cast<long>(out.size()) > limit) throw Error(ErrorCode::CapTooLarge, "too many diagrams");
            }
        }
        for (size_t i = from; i < cols.size(); ++i) {
            long c = cost(cols[i]);
            if (used + c > t) continue;
            if (blowups) {
                long cc = 0;
                for (const auto& col : chosen) cc += static_cast<long>(col.size());
                if (cc + static_cast<long>(cols[i].size()) > *blowups) continue;
            }
            chosen.push_back(cols[i]);
            go(i, used + c);
            chosen.pop_back();
        }
    };
    go(0, 0);
    std::sort(out.begin(), out.end(), [](const SingularityDiagram& a, const SingularityDiagram& b) {
        if (a.c() != b.c()) return a.c() < b.c();
        return a.columns > b.columns;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace detail {

struct Spawn {
    int diagram, column, row;
    int m;
    std::optional<int> next;
};

inline std::vector<Spawn> spawns_of(const SingularityDiagram& d, int index) {
    std::vector<Spawn> out;
    for (size_t i = 0; i < d.columns.size(); ++i) {
        const auto& col = d.columns[i];
        for (size_t j = 0; j < col.size(); ++j) {
            if (col[j] % d.n != 1) continue;
            if (j > 0 && col[j - 1] % d.n != 0) continue;
            std::optional<int> next;
            if (j + 1 < col.size()) next = col[j + 1];
            out.push_back({index, static_cast<int>(i), static_cast<int>(j), col[j], next});
        }
    }
    return out;
}

inline bool bottom_contains(const SingularityDiagram& d, int value) {
    for (const auto& col : d.columns)
        if (!col.empty() && col.front() == value) return true;
    return false;
}

}  // namespace detail

// Sequences of diagrams where every spawning nZ+1 entry is continued by a later diagram.
inline std::vector<DiagramSequence> chain_sequences(const std::vector<SingularityDiagram>& diagrams, int n,
                                                    int max_len, const std::vector<SingularityDiagram>& starts = {}) {
    const long limit = enumeration_limit();
    std::vector<SingularityDiagram> pool;
    for (const auto& d : diagrams)
        if (d.n == n && d.dtype == 1) pool.push_back(d);
    const auto& roots = starts.empty() ? pool : starts;
    std::vector<DiagramSequence> out;
    DiagramSequence cur;
    std::function<void(std::vector<detail::Spawn>)> go = [&](std::vector<detail::Spawn> pending) {
        if (pending.empty()) {
            out.push_back(cur);
            if (static_cast<long>(out.size()) > limit) throw Error(ErrorCode::CapTooLarge, "too many sequences");
            return;
        }
        if (static_cast<int>(cur.diagrams.size()) >= max_len) return;
        detail::Spawn sp = pending.front();
        pending.erase(pending.begin());
        for (const auto& q : pool) {
            if (q.t != sp.m) continue;
            if (sp.next && !detail::bottom_contains(q, *sp.next)) continue;
            int idx = static_cast<int>(cur.diagrams.size());
            cur.diagrams.push_back(q);
            cur.parents.push_back({sp.diagram, sp.column, sp.row});
            auto more = pending;
            for (const auto& s : detail::spawns_of(q, idx)) more.push_back(s);
            go(more);
            cur.diagrams.pop_back();
            cur.parents.pop_back();
        }
    };
    for (const auto& d : roots) {
        if (d.n != n || d.dtype != 1) continue;
        cur.diagrams = {d};
        cur.parents = {DiagramLink{}};
        go(detail::spawns_of(d, 0));
    }
    return out;
}

inline SingularityDiagram diagram_of_curve(const CurveLedger& ledger, const std::string& curve) {
    const LedgerEntry* e = ledger.find(curve);
    if (!e) throw Error(ErrorCode::UnknownCurve, "no curve " + curve + " in the ledger");
    SingularityDiagram d;
    d.n = ledger.params.n;
    d.dtype = e->in_R ? 1 : 0;
    d.t = e->t;
    d.columns = e->columns;
    normalize(d);
    auto v = validate_diagram(d);
    if (!v.empty()) throw Error(ErrorCode::InconsistentForest, "diagram of " + curve + ": " + v.front().detail);
    return d;
}

inline std::string render_diagram(const SingularityDiagram& d) {
    std::ostringstream os;
    os << "type " << d.dtype << " n=" << d.n << " t=" << d.t << " c=" << d.c() << "\n";
    if (d.columns.empty()) {
        os << "(no singular points)\n";
        return os.str();
    }
    size_t w = 1;
    for (const auto& col : d.columns)
        for (int m : col) w = std::max(w, std::to_string(m).size());
    auto hdr = d.headers();
    std::string cell_blank(w + 2, ' ');
    auto pad = [&](const std::string& s) { return std::string(w - s.size(), ' ') + s; };
    std::string line;
    bool any = false;
    for (size_t i = 0; i < d.columns.size(); ++i) {
        std::string h = hdr[i] > 0 ? "#" + std::to_string(hdr[i]) : "";
        if (!h.empty()) any = true;
        line += " " + (h.size() <= w ? pad(h) : h) + " ";
    }
    if (any) {
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << "\n";
    }
    int H = d.height();
    for (int row = H - 1; row >= 0; --row) {
        std::string out;
        for (const auto& col : d.columns)
            out += row < static_cast<int>(col.size()) ? "[" + pad(std::to_string(col[row])) + "]" : cell_blank;
        while (!out.empty() && out.back() == ' ') out.pop_back();
        os << out << "\n";
    }
    return os.str();
}

}  // namespace fibcalc
