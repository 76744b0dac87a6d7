#include "cyclok/cyclotomic_residue.hpp"
#include "poly_oracle.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace cyclok;

namespace {

FinAbGroup G(std::initializer_list<long> orders) {
    std::vector<Int> v;
    for (long o : orders) v.emplace_back(o);
    return FinAbGroup::from_cyclic_orders(v);
}

Int oracle_units(long long p, const poly_oracle::P& f, bool& by_enumeration) {
    long long size = 1;
    by_enumeration = true;
    for (std::size_t i = 1; i < f.size(); ++i) {
        size *= p;
        if (size > (1 << 16)) by_enumeration = false;
    }
    if (by_enumeration) return Int(static_cast<long>(poly_oracle::count_units_by_enumeration(f, p)));
    Int u = 1;
    for (int d : poly_oracle::factor_degrees(f, p)) u *= ipow(Int(static_cast<long>(p)), static_cast<unsigned long>(d)) - 1;
    return u;
}

}  // namespace

TEST(ResidueUnits, Examples) {
    auto r73 = residue_units(7, 3);
    EXPECT_EQ(r73->factor_count(), 2u);
    EXPECT_EQ(r73->field_degree(), 1);
    EXPECT_EQ(r73->group(), G({6, 6}));
    auto r211 = residue_units(2, 11);
    EXPECT_EQ(r211->factor_count(), 1u);
    EXPECT_EQ(r211->field_degree(), 10);
    EXPECT_EQ(r211->group(), G({1023}));
    for (u64 p : {2ull, 3ull, 5ull, 13ull}) {
        EXPECT_EQ(residue_units(p, 1)->group(), G({static_cast<long>(p) - 1}));
        if (p != 2) EXPECT_EQ(residue_units(p, 2)->group(), G({static_cast<long>(p) - 1}));
    }
}

TEST(ResidueUnits, Rejections) {
    EXPECT_THROW(residue_units(3, 6), std::invalid_argument);
    EXPECT_THROW(residue_units(4, 5), std::invalid_argument);
    EXPECT_THROW(residue_units(5, 0), std::invalid_argument);
    EXPECT_THROW(lambda_units(7, 14), std::invalid_argument);
}

TEST(ResidueUnits, GeneratorHasLogOneAndFactorsMultiply) {
    for (auto [p, n] : std::vector<std::pair<u64, u64>>{{7, 3}, {2, 11}, {3, 7}, {2, 21}, {29, 15}, {5, 39}}) {
        auto R = residue_units(p, n);
        EXPECT_EQ(R->log(R->generator()), 1);
        // each factor polynomial has degree f
        for (auto& mp : R->factor_polynomials()) EXPECT_EQ(static_cast<long>(mp.size()) - 1, R->field_degree());
    }
}

TEST(LambdaUnits, Examples) {
    auto l73 = lambda_units(7, 3);
    EXPECT_EQ(l73->group(), G({6}));
    EXPECT_EQ(l73->field_degree(), 1);
    EXPECT_EQ(lambda_units(2, 13)->group(), G({63}));
    EXPECT_EQ(lambda_units(2, 13)->field_degree(), 6);
    EXPECT_EQ(lambda_units(3, 7)->group(), G({26}));
    EXPECT_EQ(lambda_units(3, 7)->field_degree(), 3);
}

TEST(UnitQuotient, Examples) {
    EXPECT_EQ(unit_quotient(3, 7)->group(), G({28}));
    EXPECT_EQ(unit_quotient(7, 3)->group(), G({6}));
    EXPECT_EQ(unit_quotient(2, 11)->group(), G({33}));
}

// every unit order in range, against brute force over F_p[x]/Phi_n
TEST(Oracle, UnitCountsMatchBruteForce) {
    int checked = 0, enumerated = 0;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 31ull, 101ull, 251ull}) {
        for (u64 n = 1; n <= 120; ++n) {
            if (std::gcd(p, n) != 1) continue;
            u64 f = n == 1 ? 1 : mult_order(p % n, n);
            if (ipow(from_u64(p), f) > Int(1 << 16)) continue;
            auto phi = poly_oracle::reduce(poly_oracle::cyclotomic(static_cast<long>(n)), static_cast<long long>(p));
            bool enumer = false;
            Int expect = oracle_units(static_cast<long long>(p), phi, enumer);
            auto R = residue_units(p, n);
            ASSERT_EQ(R->order(), expect) << p << " " << n;
            EXPECT_EQ(R->order(), ipow(R->factor_order(), R->factor_count()));
            if (n >= 3) {
                auto psi = poly_oracle::reduce(poly_oracle::lambda_minpoly(static_cast<long>(n)), static_cast<long long>(p));
                bool e2 = false;
                Int lexpect = oracle_units(static_cast<long long>(p), psi, e2);
                auto L = lambda_units(p, n);
                ASSERT_EQ(L->group().order(), lexpect) << p << " " << n;
                EXPECT_EQ(R->order() % L->group().order(), 0);
                EXPECT_EQ(unit_quotient(p, n)->group().order() * L->group().order(), R->order());
            }
            ++checked;
            enumerated += enumer;
        }
    }
    EXPECT_GT(checked, 250);
    EXPECT_GT(enumerated, 40);
}

// conjugation is an involution and the projection of x is the dlog of zeta
TEST(Property, ConjugationAndDlogRoundTrip) {
    for (auto [p, n] : std::vector<std::pair<u64, u64>>{{2, 21}, {3, 35}, {7, 15}, {2, 45}, {11, 13}}) {
        auto R = residue_units(p, n);
        const auto& C = R->conjugation();
        EXPECT_EQ(compose(C, C), AbHom::identity(R->group()));
        // zeta * bar(zeta) = 1
        Elem z = R->dlog({0, 1});
        Elem s = R->group().reduce([&] {
            Elem t = z;
            Elem cz = C(z);
            for (std::size_t i = 0; i < t.size(); ++i) t[i] += cz[i];
            return t;
        }());
        EXPECT_EQ(s, R->group().zero());
        // powers of the generator in every factor
        const auto& F = R->field();
        for (long k = 0; k < 50; ++k) EXPECT_EQ(R->log(F.pow(R->generator(), k)), Int(k) % R->factor_order());
    }
}

TEST(PsiPlus, TwentyOne) {
    auto psi = psi_plus_presentation(21);
    ASSERT_EQ(psi->parts.size(), 2u);
    EXPECT_EQ(psi->parts[0].prime, 3u);
    EXPECT_EQ(psi->parts[0].quotient->group(), G({28}));
    EXPECT_EQ(psi->parts[1].prime, 7u);
    EXPECT_EQ(psi->parts[1].quotient->group(), G({6}));
    EXPECT_EQ(psi->parts[0].quotient->group().element_order(psi->parts[0].zeta_image), 7);
    EXPECT_EQ(psi->parts[1].quotient->group().element_order(psi->parts[1].zeta_image), 3);
    // 1 - zeta_3 generates Z/6: with (a, b) -> log_3(a/b) it is log_3(6/4) = log_3(5) = 5 = -1
    const auto& q7 = *psi->parts[1].quotient;
    EXPECT_EQ(psi->parts[1].one_minus_zeta_image, q7.project({1, 6}));
    EXPECT_EQ(q7.group().element_order(psi->parts[1].one_minus_zeta_image), 6);
    EXPECT_EQ(vtilde(21), G({4}));
}

TEST(Vtilde, Examples) {
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 31ull}) EXPECT_TRUE(vtilde(p).is_trivial());
    EXPECT_EQ(vtilde(30).order() % 10, 0);
    EXPECT_EQ(vtilde(15).order() % 2, 0);
    EXPECT_THROW(vtilde(12), ScopeError);
    EXPECT_THROW(vtilde(1), ScopeError);
}

TEST(CBound, Tables) {
    std::vector<std::pair<u64, long>> two_p{{22, 3}, {26, 5}, {34, 17}, {38, 27}, {58, 565}};
    for (auto [m, c] : two_p) EXPECT_EQ(c_bound(m), c) << m;
    std::vector<std::pair<u64, long>> pq{{15, 2}, {21, 4}, {33, 44}, {35, 90}, {39, 104}};
    for (auto [m, c] : pq) EXPECT_EQ(c_bound(m), c) << m;
}

// direct counting gives 30 here: -1 is not a power of 2 mod 15, so the two cosets of <2> are
// swapped by negation and F_2[zeta_15]^x / F_2[lambda_15]^x has order 225/15
TEST(CBound, ThirtyTable) { EXPECT_EQ(c_bound(30), 10); }

TEST(Property, NegationOnVtildeAndCDivides) {
    for (u64 m : {6ull, 10ull, 14ull, 15ull, 21ull, 22ull, 26ull, 30ull, 33ull, 34ull, 35ull, 38ull, 39ull, 42ull, 51ull, 55ull, 58ull, 65ull, 66ull, 70ull, 77ull, 78ull, 105ull}) {
        auto V = vtilde_module(m);
        EXPECT_EQ(eigen_set(*V, Sign::minus()).group, V->group()) << m;
        EXPECT_EQ(V->group().order() % c_bound(m), 0) << m;
    }
}

TEST(Memo, ConcurrentLookupsAgree) {
    std::vector<std::shared_ptr<const ResidueRingUnits>> got(4);
    std::vector<std::thread> ts;
    for (int i = 0; i < 4; ++i) ts.emplace_back([&, i] { got[i] = residue_units(2, 91); });
    for (auto& t : ts) t.join();
    for (int i = 1; i < 4; ++i) {
        EXPECT_EQ(got[i]->group(), got[0]->group());
        EXPECT_EQ(got[i]->conjugation(), got[0]->conjugation());
    }
}
