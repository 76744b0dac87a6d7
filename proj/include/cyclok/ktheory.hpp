#pragma once
// Assembly of K~_0(ZC_m) = C(ZC_m) from D(ZC_m) and the C(Z[zeta_d]), and of the pieces of
// Wh(C_inf x C_m) that the manifold-set classifier needs.  Every group here is exact, bounded
// (divisors / lower / upper order bounds with witnesses) or unknown; nothing is guessed.

#include "classnumber.hpp"
#include "cyclotomic_residue.hpp"
#include "involutive.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cyclok {

enum class Extent { exact, bounded, unknown, infinite };

inline const char* to_string(Extent e) {
    switch (e) {
        case Extent::exact: return "exact";
        case Extent::bounded: return "bounded";
        case Extent::unknown: return "unknown";
        case Extent::infinite: return "infinite";
    }
    return "?";
}

// a group that is finite unless extent == infinite
struct GroupInfo {
    Extent extent = Extent::unknown;
    std::optional<FinAbGroup> group;
    Int divisor = 1;  // divides the order
    Int lower = 1;    // order >= lower
    std::optional<Int> upper;
    std::vector<std::string> witnesses;

    static GroupInfo exact(FinAbGroup g, std::string why) {
        GroupInfo r;
        r.extent = Extent::exact;
        r.divisor = r.lower = g.order();
        r.upper = g.order();
        r.group = std::move(g);
        r.witnesses.push_back(std::move(why));
        return r;
    }
    static GroupInfo infinite(std::string why) {
        GroupInfo r;
        r.extent = Extent::infinite;
        r.witnesses.push_back(std::move(why));
        return r;
    }
    bool is_finite() const { return extent != Extent::infinite; }
    std::optional<Int> order() const {
        if (group) return group->order();
        if (upper && *upper == lower) return lower;
        return std::nullopt;
    }
    Int min_order() const { return std::max(divisor, lower); }
    // true / false when settled, nullopt otherwise
    std::optional<bool> trivial() const {
        if (extent == Extent::infinite) return false;
        if (group) return group->is_trivial();
        if (min_order() > 1) return false;
        if (upper && *upper == 1) return true;
        return std::nullopt;
    }
};

// ---------------------------------------------------------------- elementary operations

inline u64 divisor_count(u64 m) { return divisors(m).size(); }

// rank of Wh(C_m)
inline u64 wh_rank(u64 m) {
    if (m < 2) throw std::invalid_argument("wh_rank: m must be >= 2");
    return m / 2 + 1 - divisor_count(m);
}

inline bool nk1_vanishes(u64 m) {
    if (m < 1) throw std::invalid_argument("nk1_vanishes: m must be >= 1");
    return is_squarefree(m);
}

// |V_{2^{n+1}}| = prod_{i=1}^{n-2} 2^{i 2^{n-i-2}}
inline Int km_v_order(u64 n) {
    if (n < 1) throw std::invalid_argument("km_v_order: n must be >= 1");
    if (n > 40) throw ScopeError("km_v_order: n > 40 is out of range");
    u64 e = 0;
    for (u64 i = 1; i + 2 <= n; ++i) e += i << (n - i - 2);
    return ipow(Int(2), static_cast<unsigned long>(e));
}

// number of cyclic summands of V_{2^{n+1}}
inline u64 km_v_rank(u64 n) {
    if (n < 1) throw std::invalid_argument("km_v_rank: n must be >= 1");
    return n < 3 ? 0 : (u64(1) << (n - 2)) - 1;
}

// V_{2^{n+1}} with the negation involution
inline InvModule km_v_module(u64 n) {
    if (n < 1) throw std::invalid_argument("km_v_module: n must be >= 1");
    if (n > 12) throw ScopeError("km_v_module: n > 12 gives more than 1023 cyclic summands; use km_v_order");
    std::vector<Int> orders;
    for (u64 i = 1; i + 2 <= n; ++i)
        for (u64 c = 0; c < (u64(1) << (n - i - 2)); ++c) orders.push_back(ipow(Int(2), static_cast<unsigned long>(i)));
    return InvModule::negation(FinAbGroup::from_cyclic_orders(orders));
}

inline Int xbar_order(const InvModule& M) { return norm_image_set(M, Sign::minus()).group.order(); }

// ---------------------------------------------------------------- stored kernel-group facts

struct DFact {
    std::optional<FinAbGroup> group;
    std::optional<InvModule> module;  // only when the involution is pinned down
    std::string source;
    std::string note;
};

inline std::optional<DFact> stored_d_group(u64 m) {
    auto z2 = FinAbGroup::cyclic(2);
    if (m == 1 || (m >= 2 && is_prime(m)) || m == 6 || m == 10 || m == 14)
        return DFact{FinAbGroup(), InvModule(), "literature", "D = 0"};
    if (m == 15) return DFact{z2, InvModule::trivial_action(z2), "literature", "order 2, so the action is trivial"};
    if (m == 21) return DFact{FinAbGroup::cyclic(4), std::nullopt, "literature", "order and structure only"};
    // Aut(Z/2) = 1, so the module is forced
    if (m == 42) return DFact{z2, InvModule::trivial_action(z2), "literature", "order 2, so the action is trivial"};
    return std::nullopt;
}

// prod_{d | m, d > 1} odd(|V~_d|); divides |{x - bar x : x in D(ZC_m)}|
inline Int d_divisibility_bound(u64 m) {
    require_vtilde_scope(m);
    Int r = 1;
    for (u64 d : divisors(m))
        if (d > 1) r *= odd_part(vtilde(d).order());
    return r;
}

// prod_{d | m, d > 1} |2 V~_d|; also divides |{x - bar x : x in D(ZC_m)}|, and is a multiple of the above
inline Int d_xbar_divisor(u64 m) {
    require_vtilde_scope(m);
    Int r = 1;
    for (u64 d : divisors(m))
        if (d > 1) r *= xbar_order(*vtilde_module(d));
    return r;
}

// prod_{d | m, d > 1} |V~_d|; divides |D(ZC_m)| = prod |V_d|
inline Int d_order_divisor(u64 m) {
    require_vtilde_scope(m);
    Int r = 1;
    for (u64 d : divisors(m))
        if (d > 1) r *= vtilde(d).order();
    return r;
}

struct AuditFinding {
    u64 m = 0;
    std::string fact;
    std::string check;
    bool consistent = true;
    std::string detail;
};

// stored D facts against what V~ forces
inline std::vector<AuditFinding> audit_d_fact(u64 m) {
    std::vector<AuditFinding> out;
    auto f = stored_d_group(m);
    if (!f || !f->group || m < 2 || !is_squarefree(m) || is_prime(m)) return out;
    std::string fact = "D(ZC_" + std::to_string(m) + ") = " + f->group->str();
    Int need = d_order_divisor(m);
    out.push_back({m, fact, "prod |V~_d| divides |D|", f->group->order() % need == 0,
                   "prod |V~_d| = " + need.get_str() + ", stored order " + f->group->order().get_str()});
    if (f->module) {
        Int lb = d_divisibility_bound(m);
        Int x = xbar_order(*f->module);
        out.push_back({m, fact, "prod odd(|V~_d|) divides |{x - bar x}|", x % lb == 0,
                       "bound " + lb.get_str() + ", stored module gives " + x.get_str()});
        // each 2 V~_d is a subquotient of {x - bar x : x in D}
        Int two = d_xbar_divisor(m);
        out.push_back({m, fact, "prod |2 V~_d| divides |{x - bar x}|", x % two == 0,
                       "prod |2 V~_d| = " + two.get_str() + ", stored module gives " + x.get_str()});
    }
    return out;
}

// ---------------------------------------------------------------- K~_0 assembly

struct Limits {
    u64 max_vtilde_m = 220;          // V~_m cost grows quickly past this
    u64 max_hminus_totient = 256;    // phi(d) cap for computing h^-_d
};

struct K0Part {
    std::string label;
    u64 d = 0;  // 0 for the D part
    Extent extent = Extent::unknown;
    std::optional<InvModule> module;
    std::optional<Int> order;
    Int order_divisor = 1;
    Int xbar_divisor = 1;          // divides |{x - bar x}|
    Int minus_eigen_divisor = 1;   // divides |{x : bar x = -x}|
    std::optional<bool> order_odd;
    std::string source = "none";
    std::vector<std::string> notes;

    void set_exact(InvModule M, std::string src) {
        extent = Extent::exact;
        order = M.group().order();
        order_divisor = *order;
        xbar_divisor = xbar_order(M);
        minus_eigen_divisor = eigen_set(M, Sign::minus()).group.order();
        order_odd = (*order % 2) == 1;
        module = std::move(M);
        source = std::move(src);
    }
};

struct K0Description {
    u64 m = 0;
    K0Part d_part;
    std::vector<K0Part> class_parts;
    std::vector<std::string> notes;
    std::vector<AuditFinding> audit;

    bool all_exact() const {
        if (d_part.extent != Extent::exact) return false;
        for (auto& c : class_parts)
            if (c.extent != Extent::exact) return false;
        return true;
    }
    std::optional<Int> total_order() const {
        if (!d_part.order) return std::nullopt;
        Int r = *d_part.order;
        for (auto& c : class_parts) {
            if (!c.order) return std::nullopt;
            r *= *c.order;
        }
        return r;
    }
    // the module itself, when the extension is forced to split (one side trivial)
    std::optional<InvModule> total_module() const {
        if (!all_exact()) return std::nullopt;
        bool classes_trivial = true;
        for (auto& c : class_parts) classes_trivial &= c.module->group().is_trivial();
        if (classes_trivial) return d_part.module;
        if (!d_part.module->group().is_trivial()) return std::nullopt;
        InvModule acc;
        for (auto& c : class_parts) acc = direct_sum(acc, *c.module);
        return acc;
    }
};

inline bool is_prime_power(u64 m, u64* p_out = nullptr) {
    if (m < 2) return false;
    auto f = factor_small(m);
    if (f.size() != 1) return false;
    if (p_out) *p_out = f.begin()->first;
    return true;
}

// parity of h_m = |C(Z[zeta_m])|, when decidable here
inline std::optional<bool> h_is_odd(u64 m, const Limits& lim = {}) {
    u64 n = normalize_cyclotomic_index(m);
    if (n <= 2) return true;
    if (auto g = stored_class_group(n); g && stored_plus_trivial(n).value_or(false)) return g->order() % 2 == 1;
    u64 p = 0;
    if (is_prime_power(n, &p)) {
        if (p == 2) return true;
        if (p <= 509) return hp_is_odd(p);
    }
    // h_m odd iff h_m^- odd
    if (totient(n) <= lim.max_hminus_totient) return hminus(n) % 2 == 1;
    return std::nullopt;
}

inline K0Part class_part(u64 d, const Limits& lim = {}) {
    K0Part c;
    c.d = d;
    c.label = "C(Z[zeta_" + std::to_string(d) + "])";
    u64 n = normalize_cyclotomic_index(d);
    if (n <= 2) {
        c.set_exact(InvModule(), "computed");
        c.notes.push_back("Z has trivial class group");
        return c;
    }
    auto g = stored_class_group(n);
    if (g && stored_plus_trivial(n).value_or(false)) {
        // h^+ = 1 forces C = C^-, so bar x = -x
        c.set_exact(InvModule::negation(*g), "literature");
        c.notes.push_back("stored class group with h^+ = 1; involution is negation");
        return c;
    }
    if (totient(n) <= lim.max_hminus_totient) {
        Int h = hminus(n);
        c.extent = Extent::bounded;
        c.order_divisor = h;
        c.xbar_divisor = odd_part(h);
        c.minus_eigen_divisor = odd_part(h);
        c.order_odd = h % 2 == 1;  // h odd iff h^- odd
        c.source = "computed";
        c.notes.push_back("h^- = " + h.get_str() + " divides the order; odd(h^-) divides |{x - bar x}|");
        return c;
    }
    c.order_odd = h_is_odd(n, lim);
    c.notes.push_back("phi(" + std::to_string(n) + ") above the h^- computation limit");
    return c;
}

inline K0Part d_part(u64 m, const Limits& lim, std::vector<AuditFinding>& audit) {
    K0Part D;
    D.label = "D(ZC_" + std::to_string(m) + ")";
    u64 p = 0;
    bool pp = is_prime_power(m, &p);

    // 2-powers through the Kervaire-Murthy chain 0 -> V_{2^{n+1}} -> D(2^{n+1}) -> D(2^n) -> 0
    if (pp && p == 2) {
        u64 e = 0;
        for (u64 t = m; t > 1; t >>= 1) ++e;
        if (e <= 3) {
            D.set_exact(InvModule(), "derived");
            D.notes.push_back("V_4 = V_8 = 0 and D(ZC_2) = 0");
            return D;
        }
        if (e == 4) {
            D.set_exact(km_v_module(3), "derived");
            D.notes.push_back("D(ZC_8) = 0, so D(ZC_16) = V_16 with negation");
            return D;
        }
        if (e > 41) {
            D.order_odd = false;
            D.notes.push_back("2-power beyond the order formula range");
            return D;
        }
        Int ord = 1;
        for (u64 n = 1; n < e; ++n) ord *= km_v_order(n);
        D.extent = Extent::bounded;
        D.order = ord;
        D.order_divisor = ord;
        D.order_odd = false;
        D.source = "derived";
        D.minus_eigen_divisor = km_v_order(e - 1);
        // V sits inside D with negation, so 2V lies in {x - bar x}
        D.xbar_divisor = km_v_order(e - 1) / ipow(Int(2), static_cast<unsigned long>(km_v_rank(e - 1)));
        D.notes.push_back("order from the Kervaire-Murthy chain; extension structure unknown");
        return D;
    }
    if (pp && !is_prime(m)) {
        D.order_odd = true;
        D.source = "derived";
        D.notes.push_back("odd p-group, so |D| is odd");
        return D;
    }

    auto fact = stored_d_group(m);
    bool fact_ok = true;
    if (fact && is_squarefree(m) && m >= 2 && !is_prime(m) && m <= lim.max_vtilde_m) {
        auto a = audit_d_fact(m);
        for (auto& f : a) fact_ok &= f.consistent;
        audit.insert(audit.end(), a.begin(), a.end());
    }
    if (fact && fact_ok) {
        if (fact->module) {
            D.set_exact(*fact->module, fact->source);
            D.notes.push_back(fact->note);
            return D;
        }
        // order equals prod |V~_d| with one nontrivial V~_d: every V_d -> V~_d is an isomorphism
        if (fact->group && m <= lim.max_vtilde_m && is_squarefree(m)) {
            std::vector<u64> nontrivial;
            for (u64 d : divisors(m))
                if (d > 1 && !vtilde(d).is_trivial()) nontrivial.push_back(d);
            if (d_order_divisor(m) == fact->group->order() && nontrivial.size() == 1 &&
                vtilde(nontrivial[0]) == *fact->group) {
                D.set_exact(*vtilde_module(nontrivial[0]), "derived");
                D.notes.push_back("stored order equals prod |V~_d|; D = V~_" + std::to_string(nontrivial[0]) + " with negation");
                return D;
            }
        }
        D.extent = Extent::bounded;
        D.order = fact->group->order();
        D.order_divisor = *D.order;
        D.order_odd = *D.order % 2 == 1;
        D.source = fact->source;
        D.notes.push_back("stored order, involution unknown");
        return D;
    }
    if (fact && !fact_ok) D.notes.push_back("stored value " + fact->group->str() + " conflicts with V~ divisibility; not used");

    if (is_squarefree(m) && m <= lim.max_vtilde_m) {
        D.extent = Extent::bounded;
        D.order_divisor = d_order_divisor(m);
        D.xbar_divisor = d_xbar_divisor(m);
        if (D.order_divisor % 2 == 0) D.order_odd = false;
        D.source = "computed";
        D.notes.push_back("prod |V~_d| divides |D|; prod |2 V~_d| divides |{x - bar x}|");
        return D;
    }
    D.notes.push_back(is_squarefree(m) ? "m above the V~ computation limit" : "no kernel-group data for non-square-free m");
    return D;
}

inline K0Description k0_description(u64 m, const Limits& lim = {}) {
    if (m < 1) throw std::invalid_argument("k0_description: m must be >= 1");
    K0Description K;
    K.m = m;
    K.d_part = d_part(m, lim, K.audit);
    for (u64 d : divisors(m)) K.class_parts.push_back(class_part(d, lim));
    if (K.all_exact() && !K.total_module()) K.notes.push_back("both D and the class groups are nontrivial; extension not determined");
    return K;
}

// ---------------------------------------------------------------- A_m = H^1(C_2; K~_0(ZC_m))

struct AmResult {
    GroupInfo info;
    std::string branch;  // "iii", "i", "ii", "direct" or "none"
    std::vector<std::string> constraints;
};

inline AmResult a_m(u64 m, const K0Description& K, const Limits& lim = {});

namespace detail {
inline std::optional<u64> two_exponent(u64 m) {
    if (m < 2 || (m & (m - 1)) != 0) return std::nullopt;
    u64 e = 0;
    for (u64 t = m; t > 1; t >>= 1) ++e;
    return e;
}
}  // namespace detail

inline AmResult a_m(u64 m, const K0Description& K, const Limits& lim) {
    AmResult r;
    if (auto T = K.total_module()) {
        r.info = GroupInfo::exact(tate(*T, 1), "H^1 of the assembled K~_0");
        r.branch = "direct";
        return r;
    }
    auto h_odd = h_is_odd(m, lim);
    auto d_odd = K.d_part.order_odd;
    if (h_odd.value_or(false) && d_odd.value_or(false)) {
        r.info = GroupInfo::exact(FinAbGroup(), "h_m and |D| both odd");
        r.branch = "iii";
        return r;
    }
    if (h_odd.value_or(false) && K.d_part.module) {
        r.info = GroupInfo::exact(tate(*K.d_part.module, 1), "h_m odd: A_m = H^1(D)");
        r.branch = "i";
        return r;
    }
    bool classes_exact = true;
    for (auto& c : K.class_parts) classes_exact &= c.module.has_value();
    if (d_odd.value_or(false) && classes_exact) {
        InvModule acc;
        for (auto& c : K.class_parts) acc = direct_sum(acc, *c.module);
        r.info = GroupInfo::exact(tate(acc, 1), "|D| odd: A_m = sum of H^1(C(Z[zeta_d]))");
        r.branch = "ii";
        return r;
    }
    r.branch = "none";
    r.constraints.push_back("6-periodic: H^1(D_2) -> A_m -> sum H^1(C_d,2) -> sum H^0(C_d,2) -> H^0(C(ZC_m)_2) -> H^0(D_2)");
    if (!h_odd) r.constraints.push_back("parity of h_m undetermined");
    if (!d_odd) r.constraints.push_back("parity of |D| undetermined");
    if (auto e = detail::two_exponent(m); e && *e >= 5 && *e <= 41) {
        // h_{2^e} odd so A = H^1(D); elementary abelian of rank at most the summed V ranks
        u64 rank = 0;
        for (u64 n = 1; n < *e; ++n) rank += km_v_rank(n);
        r.info.upper = ipow(Int(2), static_cast<unsigned long>(rank));
        r.info.witnesses.push_back("H^1(D) is elementary abelian and D has at most " + std::to_string(rank) + " cyclic summands");
        // |A_{2^{e-1}}| |A_{2^e}| >= 2^{2^{e-3}-1}
        u64 prev = m / 2;
        AmResult pr = a_m(prev, k0_description(prev, lim), lim);
        Int need = ipow(Int(2), static_cast<unsigned long>((u64(1) << (*e - 3)) - 1));
        if (pr.info.upper) {
            Int lb = (need + *pr.info.upper - 1) / *pr.info.upper;
            if (lb > r.info.lower) r.info.lower = lb;
            r.info.witnesses.push_back("|A_" + std::to_string(prev) + "| * |A_" + std::to_string(m) + "| >= " + need.get_str() +
                                       " with |A_" + std::to_string(prev) + "| <= " + pr.info.upper->get_str());
        }
        r.constraints.push_back("|A_" + std::to_string(prev) + "| * |A_" + std::to_string(m) + "| >= " + need.get_str());
        r.info.extent = Extent::bounded;
    }
    return r;
}

inline AmResult a_m(u64 m, const Limits& lim = {}) {
    if (m < 2) throw std::invalid_argument("a_m: m must be >= 2");
    return a_m(m, k0_description(m, lim), lim);
}

// ---------------------------------------------------------------- Wh(C_inf x C_m) pieces, n even

struct WhStructure {
    u64 m = 0;
    long n = 0;
    u64 free_rank = 0;
    bool nk1_zero = true;
    GroupInfo j_group;      // {y : bar y = -y} (+) NK_1
    GroupInfo i_group;      // {x - bar x} (+) NK_1
    GroupInfo tate_group;   // H^{n+1}(C_2; Wh) = A_m
    std::string tate_branch;
    std::vector<std::string> tate_constraints;
    K0Description k0;
};

inline WhStructure wh_structure(long n, u64 m, const Limits& lim = {}) {
    if (n % 2 != 0) throw std::invalid_argument("wh_structure: n must be even");
    if (n < 0) throw std::invalid_argument("wh_structure: n must be non-negative");
    if (m < 2) throw std::invalid_argument("wh_structure: m must be >= 2");
    WhStructure W;
    W.m = m;
    W.n = n;
    W.free_rank = wh_rank(m);
    W.nk1_zero = nk1_vanishes(m);
    W.k0 = k0_description(m, lim);
    const auto& K = W.k0;

    auto am = a_m(m, K, lim);
    W.tate_group = am.info;
    W.tate_branch = am.branch;
    W.tate_constraints = am.constraints;

    if (!W.nk1_zero) {
        std::string why = "m not square-free: NK_1(ZC_m) is not finitely generated";
        W.j_group = GroupInfo::infinite(why);
        W.i_group = GroupInfo::infinite(why);
        return W;
    }
    if (auto T = K.total_module()) {
        W.j_group = GroupInfo::exact(eigen_set(*T, Sign::minus()).group, "eigen(-1) of the assembled K~_0");
        W.i_group = GroupInfo::exact(norm_image_set(*T, Sign::minus()).group, "{x - bar x} of the assembled K~_0");
        return W;
    }
    Int xb = K.d_part.xbar_divisor;
    for (auto& c : K.class_parts) xb *= c.xbar_divisor;
    auto& I = W.i_group;
    I.extent = Extent::bounded;
    I.divisor = xb;
    I.witnesses.push_back("{x - bar x : D} and the sum over d of {x - bar x : C(Z[zeta_d])} give divisor " + xb.get_str());
    auto& J = W.j_group;
    J.extent = Extent::bounded;
    J.divisor = lcm(xb, K.d_part.minus_eigen_divisor);
    J.witnesses.push_back("{x - bar x} and {y in D : bar y = -y} sit inside; divisor " + J.divisor.get_str());
    if (auto t = K.total_order()) {
        I.upper = *t;
        J.upper = *t;
    }
    if (I.divisor == 1 && !I.upper) I.extent = Extent::unknown;
    if (J.divisor == 1 && !J.upper) J.extent = Extent::unknown;
    return W;
}

}  // namespace cyclok
