#pragma once
// Dirichlet characters, B_{1,chi} and exact minus class numbers of Q(zeta_m).

#include "abelian.hpp"
#include "matrix.hpp"
#include "memo.hpp"
#include "zpoly.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>

namespace cyclok {

// (Z/m)^x as a product of cyclic groups with a full log table
class UnitGroupMod {
  public:
    explicit UnitGroupMod(u64 m) : m_(m) {
        if (m < 1) throw std::invalid_argument("characters: modulus must be positive");
        if (m > (1u << 22)) throw ScopeError("characters: modulus " + std::to_string(m) + " too large for table lookup");
        std::vector<std::pair<u64, u64>> local;  // (generator mod q, order) per local cyclic factor, q the prime power
        std::vector<u64> local_mod;
        for (auto [p, e] : factor_small(m)) {
            u64 q = 1;
            for (int i = 0; i < e; ++i) q *= p;
            if (p == 2) {
                if (e >= 2) {
                    local.push_back({q - 1, 2});
                    local_mod.push_back(q);
                }
                if (e >= 3) {
                    local.push_back({5, q / 4});
                    local_mod.push_back(q);
                }
            } else {
                u64 g = 2;
                u64 phi = q / p * (p - 1);
                while (std::gcd(g, p) != 1 || mult_order(g, q) != phi) ++g;
                local.push_back({g, phi});
                local_mod.push_back(q);
            }
        }
        logs_.assign(m, {});
        for (std::size_t j = 0; j < local.size(); ++j) {
            u64 q = local_mod[j];
            // lift the local generator: g mod q, 1 mod m/q
            u64 rest = m / q;
            u64 g = local[j].first;
            u64 lifted = g;
            for (u64 t = 0; t < q; ++t) {
                u64 cand = 1 + t * rest;
                if (cand % q == g % q) {
                    lifted = cand % m;
                    break;
                }
            }
            gens_.push_back(lifted);
            orders_.push_back(local[j].second);
        }
        // enumerate the group by mixed radix over the generators
        std::size_t r = gens_.size();
        std::vector<u64> idx(r, 0);
        u64 total = 1;
        for (u64 o : orders_) total *= o;
        if (total != totient(m)) throw ConsistencyError("characters: generator orders do not multiply to phi(m)");
        for (u64 count = 0; count < total; ++count) {
            u64 a = 1 % m;
            for (std::size_t j = 0; j < r; ++j) a = mulmod(a, powmod(gens_[j], idx[j], m), m);
            if (!logs_[a].empty()) throw ConsistencyError("characters: generators are not independent");
            logs_[a] = idx;
            for (std::size_t j = 0; j < r; ++j) {
                if (++idx[j] < orders_[j]) break;
                idx[j] = 0;
            }
        }
        if (m == 1) logs_[0] = {};
        coprime_.assign(m, 0);
        for (u64 a = 0; a < m; ++a) coprime_[a] = std::gcd(a, m) == 1;
    }

    u64 modulus() const { return m_; }
    const std::vector<u64>& generators() const { return gens_; }
    const std::vector<u64>& orders() const { return orders_; }
    bool is_unit(u64 a) const { return coprime_[a % m_]; }
    const std::vector<u64>& log(u64 a) const { return logs_[a % m_]; }

  private:
    u64 m_;
    std::vector<u64> gens_, orders_;
    std::vector<std::vector<u64>> logs_;
    std::vector<char> coprime_;
};

inline std::shared_ptr<const UnitGroupMod> unit_group_mod(u64 m) {
    static Memo<u64, UnitGroupMod> memo;
    if (m < 1) throw std::invalid_argument("characters: modulus must be positive");
    return memo.get(m, [&] { return UnitGroupMod(m); });
}

class DirichletCharacter {
  public:
    DirichletCharacter(std::shared_ptr<const UnitGroupMod> G, std::vector<u64> exps) : G_(std::move(G)), exps_(std::move(exps)) {
        const auto& ords = G_->orders();
        if (exps_.size() != ords.size()) throw std::invalid_argument("character: exponent vector has wrong length");
        E_ = 1;
        for (u64 o : ords) E_ = std::lcm(E_, o);
        u64 g = E_;
        for (std::size_t j = 0; j < ords.size(); ++j) {
            exps_[j] %= ords[j];
            g = std::gcd(g, exps_[j] * (E_ / ords[j]) % E_);
        }
        order_ = g == 0 ? 1 : E_ / g;
        if (order_ == 0) order_ = 1;
        u64 m = G_->modulus();
        parity_ = m <= 2 ? 1 : (value_index(m - 1) == 0 ? 1 : -1);
        conductor_ = m;
        for (u64 f : divisors(m)) {
            bool ok = true;
            for (u64 a = 1; a < m && ok; a += f)
                if (G_->is_unit(a) && value_index(a) != 0) ok = false;
            if (ok) {
                conductor_ = f;
                break;
            }
        }
    }

    u64 modulus() const { return G_->modulus(); }
    const std::vector<u64>& exponents() const { return exps_; }
    u64 order() const { return order_; }
    u64 conductor() const { return conductor_; }
    int parity() const { return parity_; }
    bool is_odd() const { return parity_ == -1; }
    bool is_principal() const { return order_ == 1; }

    // chi(a) = zeta_order^k; -1 when gcd(a, m) > 1
    long value_index(u64 a) const {
        if (!G_->is_unit(a)) return -1;
        const auto& lg = G_->log(a);
        const auto& ords = G_->orders();
        u64 s = 0;
        for (std::size_t j = 0; j < ords.size(); ++j) s = (s + (exps_[j] * lg[j] % ords[j]) * (E_ / ords[j])) % E_;
        // s is a multiple of E/order
        return static_cast<long>(s / (E_ / order_));
    }

    // the associated primitive character evaluated at a (mod conductor)
    long primitive_value_index(u64 a) const {
        u64 f = conductor_, m = modulus();
        a %= f;
        if (std::gcd(a, f) != 1) return -1;
        for (u64 t = a; t < m + f; t += f)
            if (G_->is_unit(t)) return value_index(t);
        throw ConsistencyError("character: no unit lift");
    }

    DirichletCharacter power(u64 j) const {
        std::vector<u64> e = exps_;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = e[i] * (j % G_->orders()[i]) % G_->orders()[i];
        return DirichletCharacter(G_, e);
    }

    bool operator==(const DirichletCharacter& o) const { return modulus() == o.modulus() && exps_ == o.exps_; }

  private:
    std::shared_ptr<const UnitGroupMod> G_;
    std::vector<u64> exps_;
    u64 E_ = 1, order_ = 1, conductor_ = 1;
    int parity_ = 1;
};

inline std::vector<DirichletCharacter> characters(u64 m) {
    auto G = unit_group_mod(m);
    const auto& ords = G->orders();
    std::vector<DirichletCharacter> out;
    std::vector<u64> idx(ords.size(), 0);
    u64 total = 1;
    for (u64 o : ords) total *= o;
    for (u64 c = 0; c < total; ++c) {
        out.emplace_back(G, idx);
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (++idx[j] < ords[j]) break;
            idx[j] = 0;
        }
    }
    return out;
}

// element of Q(zeta_d) as a polynomial of degree < phi(d)
class CycNumber {
  public:
    CycNumber() : d_(1), c_(1, Rat(0)) {}
    CycNumber(u64 d, std::vector<Rat> coeffs) : d_(d), c_(std::move(coeffs)) {
        if (d < 1) throw std::invalid_argument("CycNumber: d must be positive");
        reduce();
    }
    static CycNumber rational(u64 d, const Rat& r) { return CycNumber(d, {r}); }
    // zeta_d^k
    static CycNumber root(u64 d, u64 k) {
        std::vector<Rat> c(k % d + 1, Rat(0));
        c[k % d] = 1;
        return CycNumber(d, c);
    }

    u64 level() const { return d_; }
    const std::vector<Rat>& coefficients() const { return c_; }

    CycNumber operator+(const CycNumber& o) const {
        check(o);
        std::vector<Rat> c(std::max(c_.size(), o.c_.size()), Rat(0));
        for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
        return CycNumber(d_, c);
    }
    CycNumber operator-(const CycNumber& o) const { return *this + o * CycNumber::rational(d_, Rat(-1)); }
    CycNumber operator*(const CycNumber& o) const {
        check(o);
        std::vector<Rat> c(c_.size() + o.c_.size(), Rat(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
        return CycNumber(d_, c);
    }
    bool operator==(const CycNumber& o) const { return d_ == o.d_ && c_ == o.c_; }
    bool is_zero() const { return c_.size() == 1 && c_[0] == 0; }

    // N_{Q(zeta_d)/Q}, as the determinant of multiplication on the power basis
    Rat norm() const {
        const ZPoly& phi = cyclotomic_poly(d_);
        std::size_t n = phi.size() - 1;
        Int den = 1;
        for (auto& r : c_) den = lcm_(den, r.get_den());
        std::vector<Int> g(n, Int(0));
        for (std::size_t i = 0; i < c_.size(); ++i) g[i] = Int(c_[i] * den);
        IntMatrix M(n, n);
        std::vector<Int> col = g;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) M(i, j) = col[i];
            // col *= x mod phi
            Int top = col[n - 1];
            for (std::size_t i = n - 1; i > 0; --i) col[i] = col[i - 1] - top * phi[i];
            col[0] = -top * phi[0];
        }
        Rat out(determinant(M), ipow(den, static_cast<unsigned long>(n)));
        out.canonicalize();
        return out;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0 && !(i == 0 && s.empty())) continue;
            if (!s.empty()) s += " + ";
            s += "(" + c_[i].get_str() + ")";
            if (i > 0) s += "*z^" + std::to_string(i);
        }
        return s;
    }

  private:
    static Int lcm_(const Int& a, const Int& b) {
        Int r;
        mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return r;
    }
    void check(const CycNumber& o) const {
        if (o.d_ != d_) throw std::invalid_argument("CycNumber: level mismatch");
    }
    void reduce() {
        const ZPoly& phi = cyclotomic_poly(d_);
        std::size_t n = phi.size() - 1;
        for (std::size_t i = c_.size(); i-- > n;) {
            Rat t = c_[i];
            if (t == 0) continue;
            for (std::size_t j = 0; j <= n; ++j) c_[i - n + j] -= t * Rat(phi[j]);
        }
        if (c_.size() > n) c_.resize(n);
        while (c_.size() > 1 && c_.back() == 0) c_.pop_back();
        if (c_.empty()) c_.push_back(Rat(0));
    }

    u64 d_;
    std::vector<Rat> c_;
};

// B_{1,chi} = (1/f) sum_{a=1}^{f} chi(a) a over the conductor f, in Q(zeta_{order})
inline CycNumber b1(const DirichletCharacter& chi) {
    if (chi.is_principal()) throw std::invalid_argument("b1: principal character");
    u64 d = chi.order(), f = chi.conductor();
    std::vector<Rat> acc(d, Rat(0));
    for (u64 a = 1; a <= f; ++a) {
        long k = chi.primitive_value_index(a);
        if (k < 0) continue;
        acc[static_cast<std::size_t>(k)] += Rat(static_cast<long>(a));
    }
    for (auto& x : acc) x /= Rat(from_u64(f));
    return CycNumber(d, acc);
}

// Q(zeta_m) = Q(zeta_{m/2}) for m = 2 mod 4
inline u64 normalize_cyclotomic_index(u64 m) {
    if (m < 1) throw std::invalid_argument("class number: m must be positive");
    return m % 4 == 2 ? m / 2 : m;
}

inline Int compute_hminus(u64 m) {
    u64 n = normalize_cyclotomic_index(m);
    if (n <= 2) return 1;
    auto chars = characters(n);
    auto G = unit_group_mod(n);
    // orbits under chi -> chi^j, j prime to the order
    std::set<std::vector<u64>> done;
    Rat prod = 1;
    for (auto& chi : chars) {
        if (!chi.is_odd() || done.count(chi.exponents())) continue;
        u64 d = chi.order();
        for (u64 j = 1; j <= d; ++j)
            if (std::gcd(j, d) == 1) done.insert(chi.power(j).exponents());
        CycNumber v = b1(chi) * CycNumber::rational(d, Rat(-1, 2));
        prod *= v.norm();
    }
    Int Q = factor_small(n).size() == 1 ? 1 : 2;
    Int w = n % 2 == 1 ? from_u64(2 * n) : from_u64(n);
    Rat h = prod * Rat(Q * w);
    h.canonicalize();
    if (h.get_den() != 1 || h <= 0) throw ConsistencyError("hminus(" + std::to_string(m) + "): non-integral or non-positive value " + h.get_str());
    return h.get_num();
}

inline Int hminus(u64 m) {
    static Memo<u64, Int> memo;
    u64 n = normalize_cyclotomic_index(m);
    return *memo.get(n, [&] { return compute_hminus(n); });
}

// h_p odd for primes p <= 509 unless p is in the exceptional list
inline bool hp_is_odd(u64 p) {
    if (!is_prime(p)) throw std::invalid_argument("hp_is_odd: " + std::to_string(p) + " is not prime");
    if (p > 509) throw ScopeError("hp_is_odd: p = " + std::to_string(p) + " is out of table (p <= 509)");
    static const std::set<u64> even{29, 113, 163, 197, 239, 277, 311, 337, 349, 373, 397, 421, 463, 491};
    return !even.count(p);
}

struct ClassRecord {
    u64 m = 0;
    Int hminus;
    Int hminus_odd_part;
    std::optional<FinAbGroup> known_class_group;
    std::optional<bool> known_plus_trivial;
    std::map<std::string, std::string> sources;  // field -> "computed" or "literature"
};

// m with h_m^- = 1, square-free and not
inline const std::set<u64>& hminus_one_list() {
    static const std::set<u64> s{2, 3, 5, 7, 11, 13, 17, 19, 6, 10, 14, 22, 26, 34, 38, 15, 21, 33, 35, 30, 42, 66, 70,
                                 4, 8, 9, 12, 16, 18, 20, 24, 25, 27, 28, 32, 36, 40, 44, 45, 48, 50, 54, 60, 84, 90};
    return s;
}

// m with odd(h_m^-) = 1 != h_m^-
inline const std::set<u64>& odd_hminus_one_list() {
    static const std::set<u64> s{29, 39, 58, 65, 78, 130, 56, 68, 120};
    return s;
}

inline std::optional<FinAbGroup> stored_class_group(u64 m) {
    auto g = [](std::initializer_list<long> o) {
        std::vector<Int> v;
        for (long x : o) v.emplace_back(x);
        return FinAbGroup::from_cyclic_orders(v);
    };
    u64 n = normalize_cyclotomic_index(m);
    if (n == 1 || hminus_one_list().count(n)) return FinAbGroup();  // h^- = 1 iff h = 1
    if (n == 29) return g({2, 2, 2});
    if (n == 39) return g({2});
    if (n == 65) return g({2, 2, 4, 4});
    return std::nullopt;
}

inline std::optional<bool> stored_plus_trivial(u64 m) {
    u64 n = normalize_cyclotomic_index(m);
    if (n == 1 || hminus_one_list().count(n) || n == 29 || n == 39 || n == 65) return true;
    return std::nullopt;
}

inline ClassRecord class_record(u64 m) {
    ClassRecord r;
    r.m = m;
    r.hminus = hminus(m);
    r.hminus_odd_part = odd_part(r.hminus);
    r.sources["hminus"] = "computed";
    r.sources["hminus_odd_part"] = "computed";
    r.known_class_group = stored_class_group(m);
    if (r.known_class_group) r.sources["known_class_group"] = "literature";
    r.known_plus_trivial = stored_plus_trivial(m);
    if (r.known_plus_trivial) r.sources["known_plus_trivial"] = "literature";
    if (r.known_class_group && r.known_plus_trivial && *r.known_plus_trivial && r.known_class_group->order() != r.hminus)
        throw ConsistencyError("class_record(" + std::to_string(m) + "): stored class group order disagrees with h^-");
    return r;
}

}  // namespace cyclok
