#pragma once
// Integer polynomials; cyclotomic polynomials.

#include "arith.hpp"

#include <map>
#include <mutex>
#include <vector>

namespace cyclok {

using ZPoly = std::vector<Int>;  // low degree first

inline void ztrim(ZPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// exact quotient of a by monic b
inline ZPoly zdiv_exact(ZPoly a, const ZPoly& b) {
    ztrim(a);
    if (b.empty() || b.back() != 1) throw std::invalid_argument("zdiv_exact: divisor must be monic");
    if (a.size() < b.size()) {
        if (a.empty()) return {};
        throw ConsistencyError("zdiv_exact: inexact division");
    }
    ZPoly q(a.size() - b.size() + 1);
    for (std::size_t i = q.size(); i-- > 0;) {
        q[i] = a[i + b.size() - 1];
        for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= q[i] * b[j];
    }
    ztrim(a);
    if (!a.empty()) throw ConsistencyError("zdiv_exact: inexact division");
    return q;
}

inline const ZPoly& cyclotomic_poly(u64 n) {
    static std::mutex mu;
    static std::map<u64, ZPoly> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
    }
    if (n == 0) throw std::invalid_argument("cyclotomic_poly: n must be positive");
    ZPoly a(n + 1);
    a[0] = -1;
    a[n] = 1;
    for (u64 d : divisors(n))
        if (d < n) a = zdiv_exact(a, cyclotomic_poly(d));
    std::lock_guard<std::mutex> lk(mu);
    return memo.emplace(n, std::move(a)).first->second;
}

inline std::vector<u64> reduce_mod_p(const ZPoly& a, u64 p) {
    std::vector<u64> r;
    Int P = from_u64(p);
    for (auto& c : a) {
        Int t;
        mpz_mod(t.get_mpz_t(), c.get_mpz_t(), P.get_mpz_t());
        r.push_back(t.get_ui());
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

}  // namespace cyclok
