#pragma once
// Classification of the manifold sets M^h_s, M^hCob_s and M^h_{s,hCob} of S^1 x L for even n = 2k >= 4.
// Verdicts for the first two sets come from the closed-form lists; the K-theory ingredients are
// a separate check channel (verify).  Set 3 has no list, so its triviality comes from A_m.

#include "ktheory.hpp"

#include <atomic>
#include <functional>
#include <thread>

namespace cyclok {

enum class Verdict { trivial, finite, infinite };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::trivial: return "trivial";
        case Verdict::finite: return "finite";
        case Verdict::infinite: return "infinite";
    }
    return "?";
}

// 2 m #{c in (Z/m)^x : c^k = +-1}
inline Int a2k_order(u64 k, u64 m) {
    if (k < 1) throw std::invalid_argument("a2k_order: k must be >= 1");
    if (m < 2) throw std::invalid_argument("a2k_order: m must be >= 2");
    u64 count = 0;
    for (u64 c = 1; c < m; ++c) {
        if (std::gcd(c, m) != 1) continue;
        u64 x = powmod(c, k, m);
        if (x == 1 % m || x == m - 1) ++count;
    }
    return from_u64(2) * from_u64(m) * from_u64(count);
}

inline const std::set<u64>& set1_trivial_list() {
    static const std::set<u64> s{2, 3, 5, 6, 7, 10, 11, 13, 14, 17, 19};
    return s;
}

inline const std::set<u64>& set2_trivial_list() {
    static const std::set<u64> s{2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 29};
    return s;
}

struct SetVerdict {
    Verdict verdict = Verdict::finite;
    std::optional<bool> nontrivial;  // nullopt: finite but undecided
    std::optional<Int> lower, upper;
    std::vector<std::string> witnesses;
    std::string rule;
};

struct ManifoldSetReport {
    long n = 0;
    long k = 0;
    u64 m = 0;
    SetVerdict mhs, mhcob, mhs_hcob;
    Int a2k_order = 0;
    WhStructure ingredients;
    std::string provenance;  // rule-derived, ingredient-verified or inconsistent
};

struct ConsistencyCheck {
    std::string name;
    std::string rule_side;
    std::string ingredient_side;
    std::optional<bool> ok;  // nullopt: ingredients not decisive
};

struct ConsistencyRecord {
    long n = 0;
    u64 m = 0;
    bool consistent = true;
    std::vector<ConsistencyCheck> checks;
    std::vector<AuditFinding> stored_fact_audit;  // literature data vs computation, reported apart
    std::string status() const { return consistent ? "consistent" : "inconsistent"; }
};

inline void require_classify_scope(long n, u64 m) {
    if (n % 2 != 0) throw ScopeError("n = " + std::to_string(n) + " is odd; only even dimensions are covered");
    if (n < 4) throw ScopeError("n = " + std::to_string(n) + " is below 4");
    if (m < 2) throw std::invalid_argument("m must be >= 2");
}

namespace detail {

inline Int ceil_div(const Int& a, const Int& b) { return (a + b - 1) / b; }

// sandwich |G| / |A_2k(m)| <= |set| <= |G| for a finite nontrivial set over the group G
inline void sandwich(SetVerdict& v, const GroupInfo& g, const Int& a2k) {
    if (auto o = g.order()) {
        v.upper = *o;
        v.lower = std::max(Int(2), ceil_div(*o, a2k));
        v.witnesses.push_back("|G| = " + o->get_str() + ", |A_2k(m)| = " + a2k.get_str());
    } else {
        if (g.upper) v.upper = *g.upper;
        if (g.divisor > 1) v.witnesses.push_back(g.divisor.get_str() + " divides |G|");
        if (g.upper) v.witnesses.push_back("|G| <= " + g.upper->get_str());
        v.lower = Int(2);
    }
}

inline SetVerdict list_rule(u64 m, const std::set<u64>& list, const GroupInfo& g, const Int& a2k, const char* name) {
    SetVerdict v;
    if (!is_squarefree(m)) {
        v.verdict = Verdict::infinite;
        v.nontrivial = true;
        v.rule = std::string(name) + ": infinite iff m is not square-free";
        return v;
    }
    if (list.count(m)) {
        v.verdict = Verdict::trivial;
        v.nontrivial = false;
        v.lower = v.upper = Int(1);
        v.rule = std::string(name) + ": m in the triviality list";
        return v;
    }
    v.verdict = Verdict::finite;
    v.nontrivial = true;
    v.rule = std::string(name) + ": square-free and not in the triviality list";
    sandwich(v, g, a2k);
    return v;
}

inline std::string describe(const GroupInfo& g) {
    std::string s = to_string(g.extent);
    if (g.group) s += " " + g.group->str();
    if (g.extent == Extent::bounded || g.extent == Extent::unknown) {
        if (g.divisor > 1) s += ", divisor " + g.divisor.get_str();
        if (g.lower > 1) s += ", >= " + g.lower.get_str();
        if (g.upper) s += ", <= " + g.upper->get_str();
    }
    return s;
}

// does the ingredient group agree with "trivial" (true) / "nontrivial" (false) / infinite?
inline std::optional<bool> agrees(const SetVerdict& v, const GroupInfo& g) {
    if (v.verdict == Verdict::infinite) return g.extent == Extent::infinite;
    if (g.extent == Extent::infinite) return false;
    auto t = g.trivial();
    if (!t) return std::nullopt;
    return *t == (v.verdict == Verdict::trivial);
}

}  // namespace detail

inline ManifoldSetReport classify(long n, u64 m, const Limits& lim = {}) {
    require_classify_scope(n, m);
    ManifoldSetReport r;
    r.n = n;
    r.k = n / 2;
    r.m = m;
    r.a2k_order = a2k_order(static_cast<u64>(r.k), m);
    r.ingredients = wh_structure(n, m, lim);
    const auto& W = r.ingredients;

    r.mhs = detail::list_rule(m, set1_trivial_list(), W.j_group, r.a2k_order, "set 1");
    r.mhcob = detail::list_rule(m, set2_trivial_list(), W.i_group, r.a2k_order, "set 2");

    auto& s3 = r.mhs_hcob;
    const auto& A = W.tate_group;
    s3.rule = "set 3: always finite; trivial iff H^1(C_2; K~_0(ZC_m)) = 0";
    auto t = A.trivial();
    if (t && *t) {
        s3.verdict = Verdict::trivial;
        s3.nontrivial = false;
        s3.lower = s3.upper = Int(1);
    } else {
        s3.verdict = Verdict::finite;
        if (t) {
            s3.nontrivial = true;
            detail::sandwich(s3, A, r.a2k_order);
        } else if (A.upper) {
            s3.upper = *A.upper;
            s3.lower = Int(1);
            s3.witnesses.push_back("|H^1| <= " + A.upper->get_str());
        }
    }
    s3.witnesses.insert(s3.witnesses.end(), A.witnesses.begin(), A.witnesses.end());

    // provenance from the set-1/2 checks
    bool all = true, bad = false;
    for (auto [v, g] : {std::pair{&r.mhs, &W.j_group}, std::pair{&r.mhcob, &W.i_group}}) {
        auto a = detail::agrees(*v, *g);
        if (!a) all = false;
        else if (!*a) bad = true;
    }
    r.provenance = bad ? "inconsistent" : all ? "ingredient-verified" : "rule-derived";
    return r;
}

inline ConsistencyRecord verify(long n, u64 m, const Limits& lim = {}) {
    require_classify_scope(n, m);
    ConsistencyRecord c;
    c.n = n;
    c.m = m;
    auto r = classify(n, m, lim);
    const auto& W = r.ingredients;
    auto add = [&](std::string name, std::string rule, std::string ing, std::optional<bool> ok) {
        if (ok && !*ok) c.consistent = false;
        c.checks.push_back({std::move(name), std::move(rule), std::move(ing), ok});
    };

    bool sf = is_squarefree(m);
    add("square-free test", std::string("set 1 ") + to_string(r.mhs.verdict) + ", set 2 " + to_string(r.mhcob.verdict),
        std::string("square-free ") + (sf ? "true" : "false") + ", NK_1 " + (W.nk1_zero ? "zero" : "nonzero"),
        (r.mhs.verdict == Verdict::infinite) == !sf && (r.mhcob.verdict == Verdict::infinite) == !sf && W.nk1_zero == sf);

    add("set 1 vs J", to_string(r.mhs.verdict), detail::describe(W.j_group), detail::agrees(r.mhs, W.j_group));
    add("set 2 vs I", to_string(r.mhcob.verdict), detail::describe(W.i_group), detail::agrees(r.mhcob, W.i_group));
    add("set 3 finite", to_string(r.mhs_hcob.verdict), detail::describe(W.tate_group),
        r.mhs_hcob.verdict != Verdict::infinite && W.tate_group.is_finite());

    // h^-: odd(h^-_m) > 1 forces {x - bar x} != 0, so neither set 1 nor set 2 can be trivial
    if (sf && totient(m) <= lim.max_hminus_totient) {
        Int h = hminus(m), o = odd_part(h);
        std::optional<bool> ok;
        if (o > 1) ok = r.mhs.verdict != Verdict::trivial && r.mhcob.verdict != Verdict::trivial;
        else if (h == 1) ok = true;  // consistent with, not a proof of, triviality
        add("h^- odd part", std::string("set 1 ") + to_string(r.mhs.verdict) + ", set 2 " + to_string(r.mhcob.verdict),
            "h^- = " + h.get_str() + ", odd part " + o.get_str(), ok);
    }

    // c-bound divides |V~_m|
    if (sf && !is_prime(m) && m <= lim.max_vtilde_m) {
        Int cb = c_bound(m), v = vtilde(m).order();
        add("c-bound", "c_m = " + cb.get_str(), "|V~_m| = " + v.get_str(), v % cb == 0);
        Int db = d_divisibility_bound(m);
        std::optional<bool> ok;
        if (db > 1) ok = r.mhcob.verdict != Verdict::trivial;
        add("D divisibility", std::string("set 2 ") + to_string(r.mhcob.verdict), "prod odd(|V~_d|) = " + db.get_str(), ok);
        // bound odd(h^-) * prod odd(|V~_d|) divides |I| wherever |I| is known
        if (totient(m) <= lim.max_hminus_totient) {
            Int lb = odd_part(hminus(m)) * db;
            std::optional<bool> ok2;
            if (auto o = W.i_group.order()) ok2 = *o % lb == 0;
            else ok2 = W.i_group.divisor % lb == 0;
            add("I lower bound", "odd(h^-) prod odd(|V~_d|) = " + lb.get_str(), detail::describe(W.i_group), ok2);
        }
    }

    // set 1 trivial forces sets 2 and 3 trivial
    add("set 1 trivial => others trivial", to_string(r.mhs.verdict),
        std::string("set 2 ") + to_string(r.mhcob.verdict) + ", set 3 " + to_string(r.mhs_hcob.verdict),
        r.mhs.verdict != Verdict::trivial || (r.mhcob.verdict == Verdict::trivial && r.mhs_hcob.verdict == Verdict::trivial));

    // 2-power product bound on A
    if (m >= 4 && (m & (m - 1)) == 0) {
        auto prev = a_m(m / 2, lim);
        const auto& cur = W.tate_group;
        u64 e = 0;
        for (u64 t2 = m; t2 > 1; t2 >>= 1) ++e;
        Int need = e >= 3 ? ipow(Int(2), static_cast<unsigned long>((u64(1) << (e - 3)) - 1)) : Int(1);
        std::optional<bool> ok;
        if (prev.info.group && cur.group) ok = prev.info.group->order() * cur.group->order() >= need;
        add("A_{2^n} product bound", ">= " + need.get_str(), detail::describe(prev.info) + " ; " + detail::describe(cur), ok);
    }

    c.stored_fact_audit = W.k0.audit;
    return c;
}

struct SweepEntry {
    u64 m = 0;
    std::optional<ManifoldSetReport> report;
    std::string error;
};

inline std::vector<SweepEntry> sweep(long n, u64 m_lo, u64 m_hi, const Limits& lim = {}, unsigned workers = 1) {
    if (n % 2 != 0 || n < 4) require_classify_scope(n, 2);
    std::vector<SweepEntry> out;
    if (m_hi < m_lo) return out;
    out.resize(m_hi - m_lo + 1);
    std::atomic<u64> next{0};
    std::function<void()> work = [&] {
        for (u64 i = next++; i < out.size(); i = next++) {
            out[i].m = m_lo + i;
            try {
                out[i].report = classify(n, m_lo + i, lim);
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> ts;
        for (unsigned w = 0; w < workers; ++w) ts.emplace_back(work);
        for (auto& t : ts) t.join();
    }
    return out;
}

}  // namespace cyclok
