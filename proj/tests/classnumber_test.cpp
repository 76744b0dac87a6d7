#include "cyclok/classnumber.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

using namespace cyclok;

namespace {

using cplx = std::complex<long double>;

// characters of (Z/m)^x as explicit value tables, one prime power at a time
std::vector<std::vector<cplx>> float_characters(long m) {
    std::vector<std::vector<cplx>> chars{std::vector<cplx>(m, cplx(0))};
    for (long a = 0; a < m; ++a)
        if (std::gcd(a, m) == 1) chars[0][a] = 1;
    const long double tau = 2 * std::acos(-1.0L);
    long rest = m;
    for (long p = 2; p <= rest; ++p) {
        if (rest % p != 0) continue;
        long q = 1;
        while (rest % p == 0) {
            rest /= p;
            q *= p;
        }
        // characters of (Z/q)^x by brute force: tabulate the group, find its cyclic decomposition
        std::vector<std::pair<long, long>> gens;  // (generator mod q, order)
        if (p == 2) {
            if (q >= 4) gens.push_back({q - 1, 2});
            if (q >= 8) gens.push_back({5, q / 4});
        } else {
            long phi = q / p * (p - 1);
            for (long g = 2; g < q; ++g) {
                if (g % p == 0) continue;
                long x = 1, o = 0;
                do {
                    x = x * g % q;
                    ++o;
                } while (x != 1);
                if (o == phi) {
                    gens.push_back({g, phi});
                    break;
                }
            }
        }
        // log table mod q
        std::vector<std::vector<long>> lg(q);
        std::vector<long> idx(gens.size(), 0);
        long total = 1;
        for (auto& g : gens) total *= g.second;
        for (long c = 0; c < total; ++c) {
            long x = 1;
            for (std::size_t j = 0; j < gens.size(); ++j)
                for (long t = 0; t < idx[j]; ++t) x = x * gens[j].first % q;
            lg[x] = idx;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                if (++idx[j] < gens[j].second) break;
                idx[j] = 0;
            }
        }
        if (gens.empty()) lg[1 % q] = {};
        std::vector<std::vector<cplx>> next;
        std::vector<long> e(gens.size(), 0);
        for (long c = 0; c < total; ++c) {
            for (auto& old : chars) {
                std::vector<cplx> v = old;
                for (long a = 0; a < m; ++a) {
                    if (v[a] == cplx(0)) continue;
                    long double ang = 0;
                    const auto& l = lg[a % q];
                    for (std::size_t j = 0; j < gens.size(); ++j) ang += tau * (long double)(e[j] * l[j]) / gens[j].second;
                    v[a] *= std::polar(1.0L, ang);
                }
                next.push_back(v);
            }
            for (std::size_t j = 0; j < e.size(); ++j) {
                if (++e[j] < gens[j].second) break;
                e[j] = 0;
            }
        }
        chars = next;
    }
    return chars;
}

// h^- by floating point from primitive characters found through their conductors
long double hminus_float(long m) {
    if (m % 4 == 2) m /= 2;
    if (m <= 2) return 1;
    auto chars = float_characters(m);
    long double prod = 1;
    for (auto& chi : chars) {
        if (std::abs(chi[m - 1] + cplx(1)) > 1e-9L) continue;  // odd ones only
        long f = m;
        for (long d = 1; d <= m; ++d) {
            if (m % d != 0) continue;
            bool ok = true;
            for (long a = 1; a < m && ok; a += d)
                if (std::gcd(a, m) == 1 && std::abs(chi[a] - cplx(1)) > 1e-9L) ok = false;
            if (ok) {
                f = d;
                break;
            }
        }
        cplx b = 0;
        for (long a = 1; a <= f; ++a) {
            if (std::gcd(a, f) != 1) continue;
            long t = a;
            while (std::gcd(t, m) != 1) t += f;
            b += chi[t % m] * (long double)a;
        }
        b /= (long double)f;
        prod *= std::abs(b / 2.0L);
    }
    long double Q = 2;
    long x = m, np = 0;
    for (long p = 2; p <= x; ++p)
        if (x % p == 0) {
            ++np;
            while (x % p == 0) x /= p;
        }
    if (np == 1) Q = 1;
    long double w = m % 2 ? 2 * m : m;
    return Q * w * prod;
}

FinAbGroup G(std::initializer_list<long> o) {
    std::vector<Int> v;
    for (long x : o) v.emplace_back(x);
    return FinAbGroup::from_cyclic_orders(v);
}

}  // namespace

TEST(Characters, Counts) {
    auto c4 = characters(4);
    EXPECT_EQ(c4.size(), 2u);
    EXPECT_EQ(std::count_if(c4.begin(), c4.end(), [](auto& c) { return c.is_odd(); }), 1);
    auto c1 = characters(1);
    ASSERT_EQ(c1.size(), 1u);
    EXPECT_TRUE(c1[0].is_principal());
    auto c5 = characters(5);
    EXPECT_EQ(c5.size(), 4u);
    EXPECT_EQ(std::count_if(c5.begin(), c5.end(), [](auto& c) { return c.is_odd(); }), 2);
}

TEST(Characters, StructuralInvariants) {
    for (u64 m = 1; m <= 90; ++m) {
        auto cs = characters(m);
        ASSERT_EQ(cs.size(), totient(m));
        long odd = std::count_if(cs.begin(), cs.end(), [](auto& c) { return c.is_odd(); });
        if (m > 2) EXPECT_EQ(odd * 2, static_cast<long>(cs.size())) << m;
        for (auto& chi : cs) {
            EXPECT_EQ(m % chi.conductor(), 0u);
            for (u64 a = 0; a < m; ++a) {
                for (u64 b = 0; b < m; ++b) {
                    long x = chi.value_index(a), y = chi.value_index(b), z = chi.value_index(a * b % m);
                    if (x < 0 || y < 0) {
                        EXPECT_EQ(z, -1);
                    } else {
                        EXPECT_EQ(static_cast<u64>(z), (static_cast<u64>(x + y)) % chi.order());
                    }
                }
                // factors through the conductor
                if (chi.value_index(a) >= 0) EXPECT_EQ(chi.value_index(a), chi.primitive_value_index(a));
            }
        }
    }
}

TEST(B1, Examples) {
    for (auto& chi : characters(4))
        if (!chi.is_principal()) EXPECT_EQ(b1(chi), CycNumber::rational(chi.order(), Rat(-1, 2)));
    for (auto& chi : characters(3))
        if (!chi.is_principal()) EXPECT_EQ(b1(chi), CycNumber::rational(chi.order(), Rat(-1, 3)));
    EXPECT_THROW(b1(characters(7)[0]), std::invalid_argument);
    // even characters: sum chi(a) a is symmetric and B_1 vanishes
    for (auto& chi : characters(13))
        if (!chi.is_principal() && !chi.is_odd()) EXPECT_TRUE(b1(chi).is_zero());
}

TEST(CycNumber, NormIsMultiplicative) {
    auto a = CycNumber(12, {Rat(1), Rat(2), Rat(0), Rat(-1)});
    auto b = CycNumber(12, {Rat(3, 2), Rat(0), Rat(1)});
    EXPECT_EQ((a * b).norm(), a.norm() * b.norm());
    EXPECT_EQ(CycNumber::root(7, 3).norm(), 1);
    EXPECT_EQ((CycNumber::rational(5, 1) - CycNumber::root(5, 1)).norm(), 5);  // Phi_5(1)
    EXPECT_EQ(CycNumber::root(5, 5), CycNumber::rational(5, 1));
}

TEST(Hminus, LiteratureValues) {
    for (u64 m : hminus_one_list()) EXPECT_EQ(hminus(m), 1) << m;
    EXPECT_EQ(hminus(29), 8);
    EXPECT_EQ(hminus(39), 2);
    EXPECT_EQ(hminus(65), 64);
    EXPECT_EQ(hminus(58), 8);
    EXPECT_EQ(hminus(23), 3);
    EXPECT_EQ(hminus(1), 1);
}

TEST(Hminus, FloatingCrossCheck) {
    for (u64 m = 1; m <= 110; ++m) {
        if (m % 4 == 2) continue;
        long double f = hminus_float(static_cast<long>(m));
        if (f > 1e13L) continue;
        Int h = hminus(m);
        long double hd = h.get_d();
        EXPECT_LT(std::fabs(hd - f), 1e-6L * std::max(1.0L, hd)) << m << " " << h.get_str() << " vs " << (double)f;
    }
}

TEST(OddPart, Examples) {
    EXPECT_EQ(odd_part(Int(8)), 1);
    EXPECT_EQ(odd_part(Int(565)), 565);
    EXPECT_EQ(odd_part(Int(104)), 13);
    EXPECT_THROW(odd_part(Int(0)), std::invalid_argument);
}

TEST(HpParity, Table) {
    EXPECT_TRUE(hp_is_odd(3));
    EXPECT_FALSE(hp_is_odd(29));
    EXPECT_TRUE(hp_is_odd(509));
    EXPECT_THROW(hp_is_odd(521), ScopeError);
    EXPECT_THROW(hp_is_odd(15), std::invalid_argument);
}

TEST(ClassRecord, StoredFacts) {
    auto r = class_record(65);
    EXPECT_EQ(r.hminus, 64);
    EXPECT_EQ(r.hminus_odd_part, 1);
    ASSERT_TRUE(r.known_class_group);
    EXPECT_EQ(*r.known_class_group, G({2, 2, 4, 4}));
    EXPECT_EQ(r.sources.at("known_class_group"), "literature");
    EXPECT_EQ(*class_record(58).known_class_group, G({2, 2, 2}));
    EXPECT_EQ(*class_record(78).known_class_group, G({2}));
    EXPECT_FALSE(class_record(31).known_class_group);
    EXPECT_FALSE(class_record(31).known_plus_trivial);
}

TEST(Property, HminusDivisibility) {
    for (u64 m = 1; m <= 120; ++m) {
        Int hm = hminus(m);
        for (u64 n : divisors(m)) EXPECT_EQ(hm % hminus(n), 0) << n << " | " << m;
    }
}

TEST(Property, ParityAgreesWithPrimeTable) {
    for (u64 p = 2; p <= 60; ++p) {
        if (!is_prime(p)) continue;
        EXPECT_EQ(hminus(p) % 2 == 1, hp_is_odd(p)) << p;
    }
}

TEST(Property, ClassificationListsUpTo200) {
    std::set<u64> one, odd_one;
    for (u64 m = 2; m <= 200; ++m) {
        Int h = hminus(m);
        if (h == 1) one.insert(m);
        else if (odd_part(h) == 1) odd_one.insert(m);
    }
    EXPECT_EQ(one, hminus_one_list());
    EXPECT_EQ(odd_one, odd_hminus_one_list());
}

TEST(Property, GrowthAlongPrimes) {
    Int best = 0;
    std::vector<Int> maxima;
    for (u64 p = 2; p <= 200; ++p) {
        if (!is_prime(p)) continue;
        best = std::max(best, hminus(p));
        maxima.push_back(best);
    }
    EXPECT_GT(maxima.back(), Int(1000000000) * Int(1000000000));
    EXPECT_EQ(maxima[maxima.size() / 2] < maxima.back(), true);
}
