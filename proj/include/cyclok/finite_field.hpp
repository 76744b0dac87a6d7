#pragma once
// Polynomials over F_p, the fields F_{p^f}, and discrete logarithms in F_{p^f}^x.

#include "arith.hpp"

#include <unordered_map>
#include <vector>

namespace cyclok {

namespace fp {

using Poly = std::vector<u64>;  // low degree first, no trailing zeros

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline long deg(const Poly& a) { return static_cast<long>(a.size()) - 1; }

inline u64 inv_mod(u64 a, u64 p) { return powmod(a, p - 2, p); }

inline Poly sub(Poly a, const Poly& b, u64 p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

inline Poly mul(const Poly& a, const Poly& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return r;
}

// remainder of a by monic-or-not m
inline Poly rem(Poly a, const Poly& m, u64 p) {
    trim(a);
    const long dm = deg(m);
    if (dm < 0) throw std::invalid_argument("fp::rem: division by zero polynomial");
    u64 li = inv_mod(m.back(), p);
    while (deg(a) >= dm) {
        u64 c = a.back() * li % p;
        std::size_t shift = a.size() - m.size();
        for (std::size_t j = 0; j < m.size(); ++j) a[shift + j] = (a[shift + j] + p - c * m[j] % p) % p;
        trim(a);
    }
    return a;
}

inline Poly gcd(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        u64 li = inv_mod(a.back(), p);
        for (auto& c : a) c = c * li % p;
    }
    return a;
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, u64 p) { return rem(mul(a, b, p), m, p); }

inline Poly powmod(Poly b, Int e, const Poly& m, u64 p) {
    Poly r{1};
    r = rem(r, m, p);
    b = rem(b, m, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mulmod(r, b, m, p);
        b = mulmod(b, b, m, p);
        e >>= 1;
    }
    return r;
}

// Rabin's test for monic g of degree f
inline bool is_irreducible(const Poly& g, u64 p) {
    const long f = deg(g);
    if (f < 1) return false;
    if (f == 1) return true;
    Poly x{0, 1};
    auto frob_iter = [&](long k) {  // x^{p^k} mod g
        Poly r = x;
        for (long i = 0; i < k; ++i) r = powmod(r, Int(from_u64(p)), g, p);
        return r;
    };
    if (sub(frob_iter(f), x, p).size() != 0) return false;
    for (u64 r : prime_divisors(static_cast<u64>(f))) {
        Poly h = sub(frob_iter(f / static_cast<long>(r)), x, p);
        if (deg(gcd(g, h, p)) != 0) return false;
    }
    return true;
}

// first monic irreducible of degree f in lexicographic order of (c_0, ..., c_{f-1}) read as base-p digits
inline Poly find_irreducible(u64 p, long f) {
    if (f == 1) return {0, 1};
    Poly g(f + 1, 0);
    g[f] = 1;
    for (;;) {
        // skip multiples of x
        if (g[0] != 0 && is_irreducible(g, p)) return g;
        std::size_t i = 0;
        while (i < static_cast<std::size_t>(f)) {
            if (++g[i] < p) break;
            g[i] = 0;
            ++i;
        }
        if (i == static_cast<std::size_t>(f)) throw ConsistencyError("find_irreducible: search exhausted");
    }
}

}  // namespace fp

// F_{p^f} = F_p[x]/(g); elements are coefficient vectors of length f
class GF {
  public:
    using E = std::vector<u64>;

    GF(u64 p, long f) : p_(p), f_(f), g_(fp::find_irreducible(p, f)) {
        if (!is_prime(p)) throw std::invalid_argument("GF: characteristic must be prime");
        if (p >= (1ull << 20)) throw UnsupportedError("GF: characteristic too large for word arithmetic");
        q_ = ipow(from_u64(p), static_cast<unsigned long>(f));
    }

    u64 p() const { return p_; }
    long degree() const { return f_; }
    const fp::Poly& modulus() const { return g_; }
    const Int& size() const { return q_; }
    Int unit_order() const { return q_ - 1; }

    E zero() const { return E(f_, 0); }
    E one() const {
        E e(f_, 0);
        e[0] = 1;
        return e;
    }
    E scalar(u64 c) const {
        E e(f_, 0);
        e[0] = c % p_;
        return e;
    }
    E from_poly(const fp::Poly& a) const {
        fp::Poly r = fp::rem(a, g_, p_);
        r.resize(f_, 0);
        return r;
    }
    bool is_zero(const E& a) const {
        for (auto c : a)
            if (c) return false;
        return true;
    }
    E add(const E& a, const E& b) const {
        E r(f_);
        for (long i = 0; i < f_; ++i) r[i] = (a[i] + b[i]) % p_;
        return r;
    }
    E sub(const E& a, const E& b) const {
        E r(f_);
        for (long i = 0; i < f_; ++i) r[i] = (a[i] + p_ - b[i]) % p_;
        return r;
    }
    E neg(const E& a) const { return sub(zero(), a); }

    E mul(const E& a, const E& b) const {
        // products stay below p^2 < 2^40, so sums of up to 2^20 terms fit in 64 bits
        std::vector<u64> r(2 * f_ - 1, 0);
        for (long i = 0; i < f_; ++i) {
            if (!a[i]) continue;
            for (long j = 0; j < f_; ++j) r[i + j] += a[i] * b[j];
            if ((i & 1023) == 1023)
                for (auto& c : r) c %= p_;
        }
        for (auto& c : r) c %= p_;
        for (long i = 2 * f_ - 2; i >= f_; --i) {
            u64 c = r[i] % p_;
            if (!c) continue;
            u64 nc = p_ - c;
            for (long j = 0; j < f_; ++j) r[i - f_ + j] = (r[i - f_ + j] + nc * g_[j]) % p_;
        }
        r.resize(f_);
        return r;
    }
    E pow(E b, Int e) const {
        if (e < 0) {
            b = inv(b);
            e = -e;
        }
        E r = one();
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }
    E inv(const E& a) const {
        if (is_zero(a)) throw std::domain_error("GF: zero is not invertible");
        return pow(a, q_ - 2);
    }
    E frobenius(const E& a, long k = 1) const {
        E r = a;
        for (long i = 0; i < k; ++i) r = pow(r, from_u64(p_));
        return r;
    }

    static u64 hash(const E& a) {
        u64 h = 0x9e3779b97f4a7c15ull;
        for (auto c : a) {
            h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        return h;
    }

  private:
    u64 p_;
    long f_;
    fp::Poly g_;
    Int q_;
};

// factorization of p^f - 1 through the cyclotomic split  p^f - 1 = prod_{d | f} Phi_d(p)
inline std::map<Int, int> factor_prime_power_minus_one(u64 p, long f) {
    std::map<Int, int> out;
    Int P = from_u64(p);
    for (u64 d : divisors(static_cast<u64>(f))) {
        // Phi_d(p) = prod_{e | d} (p^e - 1)^{mu(d/e)}
        Int num = 1, den = 1;
        for (u64 e : divisors(d)) {
            u64 k = d / e;
            auto fk = factor_small(k);
            bool sqfree = true;
            for (auto& [r, m] : fk)
                if (m > 1) sqfree = false;
            if (!sqfree) continue;
            Int t = ipow(P, e) - 1;
            if (fk.size() % 2 == 0) num *= t;
            else den *= t;
        }
        for (auto& [r, m] : factor(num / den)) out[r] += m;
    }
    return out;
}

// discrete logarithm in a cyclic group <gen> of order N inside a field
class CyclicDlog {
  public:
    CyclicDlog(const GF* F, GF::E gen, Int N, std::map<Int, int> fac) : F_(F), gen_(std::move(gen)), N_(std::move(N)), fac_(std::move(fac)) {
        for (auto& [r, e] : fac_)
            if (r > Int(1) << 52) throw UnsupportedError("discrete log: prime factor " + r.get_str() + " of the group order is out of range");
    }

    const Int& order() const { return N_; }
    const GF::E& generator() const { return gen_; }

    // x with gen^x == h, 0 <= x < N; h must lie in <gen>
    Int log(const GF::E& h) const {
        if (F_->pow(h, N_) != F_->one()) throw std::domain_error("discrete log: element outside the cyclic group");
        Int x = 0, mod = 1;
        for (auto& [r, e] : fac_) {
            Int re = ipow(r, e), cof = N_ / re;
            GF::E g = F_->pow(gen_, cof), t = F_->pow(h, cof);
            GF::E g1 = F_->pow(g, ipow(r, e - 1));  // order r
            Int xr = 0, rk = 1;
            for (int k = 0; k < e; ++k) {
                GF::E hk = F_->pow(F_->mul(t, F_->pow(g, -xr)), ipow(r, e - 1 - k));
                xr += bsgs(g1, hk, r) * rk;
                rk *= r;
            }
            // CRT
            Int a = xr, inv;
            Int mm = mod;
            mpz_invert(inv.get_mpz_t(), mm.get_mpz_t(), re.get_mpz_t());
            Int k = mod_nonneg_(Int((a - x) * inv), re);
            x += mod * k;
            mod *= re;
        }
        if (F_->pow(gen_, x) != h) throw ConsistencyError("discrete log: verification failed");
        return x;
    }

  private:
    static Int mod_nonneg_(const Int& a, const Int& m) {
        Int r;
        mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
        return r;
    }

    // g has prime order r
    Int bsgs(const GF::E& g, const GF::E& h, const Int& r) const {
        u64 R = to_u64(r);
        if (F_->is_zero(F_->sub(h, F_->one()))) return 0;
        if (R < 64) {
            GF::E c = F_->one();
            for (u64 i = 0; i < R; ++i, c = F_->mul(c, g))
                if (c == h) return from_u64(i);
            throw ConsistencyError("discrete log: exhaustive search failed");
        }
        u64 m = 1;
        while (m * m < R) ++m;
        std::unordered_multimap<u64, u64> table;
        table.reserve(m * 2);
        GF::E c = F_->one();
        for (u64 j = 0; j < m; ++j) {
            table.emplace(GF::hash(c), j);
            c = F_->mul(c, g);
        }
        GF::E step = F_->inv(c);  // g^{-m}
        GF::E y = h;
        for (u64 i = 0; i <= m; ++i) {
            auto range = table.equal_range(GF::hash(y));
            for (auto it = range.first; it != range.second; ++it) {
                u64 cand = (i * m + it->second) % R;
                if (F_->pow(g, from_u64(cand)) == h) return from_u64(cand);
            }
            y = F_->mul(y, step);
        }
        throw ConsistencyError("discrete log: baby-step giant-step failed");
    }

    const GF* F_;
    GF::E gen_;
    Int N_;
    std::map<Int, int> fac_;
};

// smallest element (base-p digit order) generating F^x
inline GF::E primitive_element(const GF& F, const std::map<Int, int>& fac) {
    const Int N = F.unit_order();
    if (N == 1) return F.one();
    GF::E a = F.zero();
    for (;;) {
        std::size_t i = 0;
        while (i < a.size()) {
            if (++a[i] < F.p()) break;
            a[i] = 0;
            ++i;
        }
        if (i == a.size()) throw ConsistencyError("primitive_element: search exhausted");
        bool ok = true;
        for (auto& [r, e] : fac)
            if (F.pow(a, N / r) == F.one()) { ok = false; break; }
        if (ok) return a;
    }
}

}  // namespace cyclok
