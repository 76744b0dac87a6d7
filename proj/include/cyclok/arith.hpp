#pragma once
// Elementary number theory on machine words and mpz.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclok {

using Int = mpz_class;
using Rat = mpq_class;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

// input lies outside what the library can decide
class ScopeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// a computation the supported reductions do not cover
class UnsupportedError : public ScopeError {
  public:
    using ScopeError::ScopeError;
};

// an internal invariant failed; always a bug or a data conflict
class ConsistencyError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

inline std::string to_str(const Int& x) { return x.get_str(); }

inline u64 to_u64(const Int& x) {
    if (x < 0 || mpz_sizeinbase(x.get_mpz_t(), 2) > 64) throw std::overflow_error("value does not fit in 64 bits: " + x.get_str());
    u64 r = 0;
    mpz_export(&r, nullptr, -1, sizeof r, 0, 0, x.get_mpz_t());
    return r;
}

inline Int from_u64(u64 v) {
    Int r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
    return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // deterministic witness set for 64-bit inputs
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { comp = false; break; }
        }
        if (comp) return false;
    }
    return true;
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace detail {

inline Int rho(const Int& n) {
    // Brent's variant, deterministic seeds
    if (n % 2 == 0) return 2;
    for (unsigned long c = 1;; ++c) {
        Int y = 2, x, g = 1, q = 1, ys;
        unsigned long r = 1, m = 128;
        auto f = [&](const Int& v) { Int t = v * v + c; return Int(t % n); };
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = f(y);
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    Int d = x - y;
                    if (d < 0) d = -d;
                    q = q * d % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = f(ys);
                Int d = x - ys;
                if (d < 0) d = -d;
                mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_into(Int n, std::map<Int, int>& out) {
    if (n < 2) return;
    for (unsigned long p = 2; p < 2000; ++p) {
        if (n % p == 0) {
            while (n % p == 0) { n /= p; ++out[Int(p)]; }
        }
        if (Int(p) * p > n) break;
    }
    if (n == 1) return;
    if (is_prime(n)) { ++out[n]; return; }
    Int d = rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace detail

inline std::map<Int, int> factor(const Int& n) {
    if (n < 1) throw std::invalid_argument("factor: non-positive argument");
    std::map<Int, int> out;
    detail::factor_into(n, out);
    return out;
}

inline std::map<u64, int> factor_small(u64 n) {
    std::map<u64, int> out;
    for (u64 p = 2; p * p <= n; ++p)
        while (n % p == 0) { n /= p; ++out[p]; }
    if (n > 1) ++out[n];
    return out;
}

inline std::vector<u64> prime_divisors(u64 n) {
    std::vector<u64> r;
    for (auto& [p, e] : factor_small(n)) r.push_back(p);
    return r;
}

inline std::vector<u64> divisors(u64 n) {
    std::vector<u64> r;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            r.push_back(d);
            if (d * d != n) r.push_back(n / d);
        }
    }
    std::sort(r.begin(), r.end());
    return r;
}

inline u64 totient(u64 n) {
    u64 r = n;
    for (auto& [p, e] : factor_small(n)) r = r / p * (p - 1);
    return r;
}

inline bool is_squarefree(u64 n) {
    for (auto& [p, e] : factor_small(n))
        if (e > 1) return false;
    return true;
}

inline Int odd_part(Int x) {
    if (x < 1) throw std::invalid_argument("odd_part: argument must be positive");
    while (x % 2 == 0) x /= 2;
    return x;
}

inline u64 odd_part(u64 x) {
    if (x == 0) throw std::invalid_argument("odd_part: argument must be positive");
    while ((x & 1) == 0) x >>= 1;
    return x;
}

// multiplicative order of a modulo n (gcd(a,n)=1, n>=1)
inline u64 mult_order(u64 a, u64 n) {
    if (n == 1) return 1;
    if (std::gcd(a % n, n) != 1) throw std::invalid_argument("mult_order: not a unit");
    u64 phi = totient(n), ord = phi;
    for (auto& [p, e] : factor_small(phi)) {
        for (int i = 0; i < e && ord % p == 0 && powmod(a, ord / p, n) == 1; ++i) ord /= p;
    }
    return ord;
}

// order of a in (Z/n)^x / {+-1}
inline u64 mult_order_pm(u64 a, u64 n) {
    if (n <= 2) return 1;
    u64 x = a % n;
    for (u64 j = 1;; ++j) {
        if (x == 1 || x == n - 1) return j;
        x = mulmod(x, a, n);
    }
}

inline Int ipow(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

}  // namespace cyclok
