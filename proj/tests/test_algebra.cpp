#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "jllab/algebra.hpp"

using namespace jllab;

namespace {

Poly P(const FieldPtr& F, std::vector<Elem> c) { return Poly(F, std::move(c)); }

Poly randomPoly(const FieldPtr& F, int maxDeg, std::mt19937& rng) {
    std::uniform_int_distribution<Elem> coef(0, F->size() - 1);
    std::uniform_int_distribution<int> deg(0, maxDeg);
    std::vector<Elem> c(deg(rng) + 1);
    for (auto& x : c) x = coef(rng);
    return Poly(F, c);
}

int mobius(int n) {
    int r = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        r = -r;
    }
    return n > 1 ? -r : r;
}

long long necklace(long long q, int d) {
    long long s = 0;
    for (int e = 1; e <= d; ++e) {
        if (d % e) continue;
        long long pw = 1;
        for (int i = 0; i < d / e; ++i) pw *= q;
        s += mobius(e) * pw;
    }
    return s / d;
}

// Irreducible iff no monic polynomial of degree 1..d/2 divides it.
bool bruteIrreducible(const Poly& f) {
    const FieldPtr& F = f.field();
    for (int k = 1; 2 * k <= f.degree(); ++k) {
        std::uint64_t count = 1;
        for (int i = 0; i < k; ++i) count *= F->size();
        for (std::uint64_t idx = 0; idx < count; ++idx)
            if (divides(monicFromIndex(F, k, idx), f)) return false;
    }
    return true;
}

}  // namespace

TEST(Field, AxiomsOnRandomSamples) {
    std::mt19937 rng(11);
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 25u, 27u, 256u, 625u}) {
        auto F = Field::make(q);
        std::uniform_int_distribution<Elem> pick(0, q - 1);
        for (int t = 0; t < 300; ++t) {
            Elem a = pick(rng), b = pick(rng), c = pick(rng);
            EXPECT_EQ(F->mul(F->mul(a, b), c), F->mul(a, F->mul(b, c)));
            EXPECT_EQ(F->add(F->add(a, b), c), F->add(a, F->add(b, c)));
            EXPECT_EQ(F->mul(a, F->add(b, c)), F->add(F->mul(a, b), F->mul(a, c)));
            EXPECT_EQ(F->add(a, F->neg(a)), 0u);
            if (a) { EXPECT_EQ(F->mul(a, F->inv(a)), 1u); }
        }
        // Frobenius is additive.
        const auto p = F->characteristic();
        for (int t = 0; t < 50; ++t) {
            Elem a = pick(rng), b = pick(rng);
            EXPECT_EQ(F->pow(F->add(a, b), p), F->add(F->pow(a, p), F->pow(b, p)));
        }
    }
}

TEST(Field, RejectsNonPrimePowers) {
    EXPECT_THROW(Field::make(6), DomainError);
    EXPECT_THROW(Field::make(1), DomainError);
    EXPECT_THROW(Field::make(1u << 17), DomainError);
}

TEST(Field, EmbeddingIsRingHomomorphism) {
    std::mt19937 rng(5);
    for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 64}, {4, 16}, {3, 9}, {5, 625}, {4, 256}}) {
        auto F = Field::make(q), K = Field::make(k);
        Embedding emb(F, K);
        for (Elem a = 0; a < q; ++a)
            for (Elem b = 0; b < q; ++b) {
                EXPECT_EQ(emb(F->mul(a, b)), K->mul(emb(a), emb(b)));
                EXPECT_EQ(emb(F->add(a, b)), K->add(emb(a), emb(b)));
            }
        std::set<Elem> image;
        for (Elem a = 0; a < q; ++a) image.insert(emb(a));
        EXPECT_EQ(image.size(), q);
    }
}

TEST(Poly, DivRemExamples) {
    auto F2 = Field::make(2);
    auto [q1, r1] = polyDivRem(P(F2, {1, 0, 0, 1}), P(F2, {1, 1}));
    EXPECT_EQ(q1, P(F2, {1, 1, 1}));
    EXPECT_TRUE(r1.isZero());
    auto [q2, r2] = polyDivRem(P(F2, {0, 0, 1}), P(F2, {0, 1}));
    EXPECT_EQ(q2, P(F2, {0, 1}));
    EXPECT_TRUE(r2.isZero());
    EXPECT_THROW(polyDivRem(P(F2, {1}), Poly(F2)), DomainError);
    EXPECT_EQ(Poly(F2).degree(), kZeroDegree);
}

TEST(Poly, DivRemRecombinesOverF3) {
    auto F = Field::make(3);
    std::mt19937 rng(3);
    for (int t = 0; t < 500; ++t) {
        Poly a = randomPoly(F, 8, rng), b = randomPoly(F, 4, rng);
        if (b.isZero()) continue;
        auto [q, r] = polyDivRem(a, b);
        EXPECT_EQ(q * b + r, a);
        EXPECT_LT(r.degree(), b.degree());
    }
}

TEST(Poly, XgcdBezout) {
    auto F = Field::make(4);
    std::mt19937 rng(8);
    for (int t = 0; t < 200; ++t) {
        Poly a = randomPoly(F, 6, rng), b = randomPoly(F, 6, rng);
        if (a.isZero() && b.isZero()) continue;
        Xgcd e = xgcd(a, b);
        EXPECT_EQ(e.s * a + e.t * b, e.g);
        EXPECT_TRUE(divides(e.g, a) && divides(e.g, b));
        EXPECT_EQ(e.g, gcd(a, b));
    }
}

TEST(Poly, ParseAndPrintRoundTrip) {
    auto F = Field::make(4);
    for (const char* s : {"T^2+T+1", "T", "1", "3*T^3+2*T+1", "T^4+2"}) {
        Poly f = parsePoly(F, s);
        EXPECT_EQ(f.toString(), s);
        EXPECT_EQ(parsePoly(F, f.toString()), f);
        EXPECT_EQ(polyFromJson(toJson(f)), f);
    }
    auto F2 = Field::make(2);
    EXPECT_EQ(toJson(P(F2, {1, 1, 0, 1})).dump(), R"({"coeffs":[1,1,0,1],"q":2})");
    EXPECT_THROW(parsePoly(F, "T^"), DomainError);
    EXPECT_THROW(parsePoly(F, "7T"), DomainError);
}

TEST(Irreducibles, SmallExamples) {
    auto F2 = Field::make(2);
    auto d2 = irreduciblesOfDegree(F2, 2);
    ASSERT_EQ(d2.size(), 1u);
    EXPECT_EQ(d2[0], P(F2, {1, 1, 1}));
    auto d1 = irreduciblesOfDegree(F2, 1);
    ASSERT_EQ(d1.size(), 2u);
    EXPECT_EQ(d1[0], P(F2, {0, 1}));
    EXPECT_EQ(d1[1], P(F2, {1, 1}));
    EXPECT_EQ(irreduciblesOfDegree(Field::make(3), 2).size(), 3u);
}

TEST(Irreducibles, CountsMatchNecklaceFormulaAndTrialDivision) {
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        auto F = Field::make(q);
        for (int d = 1; d <= (q <= 3 ? 5 : 4); ++d) {
            auto list = irreduciblesOfDegree(F, d);
            EXPECT_EQ(static_cast<long long>(list.size()), necklace(q, d)) << "q=" << q << " d=" << d;
            EXPECT_TRUE(std::is_sorted(list.begin(), list.end()));
            EXPECT_EQ(std::set<Poly>(list.begin(), list.end()).size(), list.size());
            if (d <= 4) {
                std::size_t brute = 0;
                std::uint64_t count = 1;
                for (int i = 0; i < d; ++i) count *= q;
                for (std::uint64_t idx = 0; idx < count; ++idx) brute += bruteIrreducible(monicFromIndex(F, d, idx));
                EXPECT_EQ(brute, list.size());
            }
        }
    }
}

TEST(ProjectiveLine, SmallSizes) {
    auto F2 = Field::make(2), F3 = Field::make(3);
    EXPECT_EQ(enumerateProjectiveLine(ResidueRing(P(F2, {0, 1}) * P(F2, {1, 1, 1}))).size(), 15u);
    EXPECT_EQ(enumerateProjectiveLine(ResidueRing(P(F3, {0, 1}))).size(), 4u);
    EXPECT_EQ(enumerateProjectiveLine(ResidueRing(P(F2, {1, 1, 1}))).size(), 5u);
    EXPECT_THROW(ResidueRing(P(F2, {0, 0, 1})), DomainError);
}

TEST(ProjectiveLine, SizeFormulaForSquareFreeModuli) {
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        auto F = Field::make(q);
        for (int d = 1; d <= 4; ++d) {
            std::uint64_t count = 1;
            for (int i = 0; i < d; ++i) count *= q;
            for (std::uint64_t idx = 0; idx < count; ++idx) {
                Poly n = monicFromIndex(F, d, idx);
                std::vector<Poly> fs;
                try {
                    fs = factorSquareFree(n);
                } catch (const DomainError&) {
                    continue;
                }
                Poly prod = Poly::one(F);
                std::uint64_t expected = 1;
                for (const auto& f : fs) {
                    prod = prod * f;
                    std::uint64_t qv = 1;
                    for (int i = 0; i < f.degree(); ++i) qv *= q;
                    expected *= qv + 1;
                }
                ASSERT_EQ(prod, n);
                EXPECT_EQ(ProjectiveLine(ResidueRing(n)).size(), expected) << n.toString();
            }
        }
    }
}

// Unimodular pairs modulo n, counted by brute force, split into unit orbits
// of equal size; each orbit must map to a single normalized point.
TEST(ProjectiveLine, MatchesBruteForceQuotientOfUnimodularPairs) {
    auto F = Field::make(2);
    for (Poly n : {P(F, {0, 1, 1, 1}), P(F, {1, 1, 0, 1}), P(F, {0, 1}) * P(F, {1, 1})}) {
        ResidueRing R(n);
        ProjectiveLine L(R);
        const int d = n.degree();
        std::vector<Poly> residues;
        for (std::uint64_t idx = 0; idx < (1u << d); ++idx) {
            std::vector<Elem> c;
            for (int i = 0; i < d; ++i) c.push_back((idx >> i) & 1);
            residues.emplace_back(F, c);
        }
        std::size_t units = 0;
        for (const auto& u : residues) units += gcd(u, n).degree() == 0;
        std::map<std::uint32_t, std::size_t> fibre;
        for (const auto& u : residues)
            for (const auto& v : residues)
                if (gcd(gcd(u, v), n).degree() == 0) ++fibre[L.index(L.fromPair(u, v))];
        EXPECT_EQ(fibre.size(), L.size());
        for (auto [idx, cnt] : fibre) EXPECT_EQ(cnt, units);
    }
}

TEST(ResidueRing, CrtRoundTrip) {
    for (std::uint32_t q : {2u, 3u, 4u}) {
        auto F = Field::make(q);
        Poly x = Poly::variable(F);
        Poly y = irreduciblesOfDegree(F, 2)[0];
        Poly z = irreduciblesOfDegree(F, 1)[1];
        ResidueRing R(x * y * z);
        std::mt19937 rng(q);
        for (int t = 0; t < 200; ++t) {
            Poly a = randomPoly(F, 3, rng);
            EXPECT_EQ(R.recombine(R.split(a)), a);
        }
    }
}

TEST(Valuation, Examples) {
    auto F = Field::make(2);
    Poly T = Poly::variable(F);
    Poly t3p1 = T.pow(3) + Poly::one(F);
    EXPECT_EQ(ordAtPlace(RationalFunction(T.pow(12), t3p1), Place::infinity(F)), -9);
    EXPECT_EQ(ordAtPlace(RationalFunction(t3p1), Place::finite(T + Poly::one(F))), 1);
    EXPECT_EQ(ordAtPlace(RationalFunction(Poly::one(F)), Place::finite(T)), 0);
    EXPECT_THROW(ordAtPlace(RationalFunction(Poly(F)), Place::infinity(F)), DomainError);
    EXPECT_THROW(Place::finite(T * T), DomainError);
}

TEST(Valuation, IsDiscreteValuation) {
    std::mt19937 rng(21);
    for (std::uint32_t q : {2u, 3u, 5u}) {
        auto F = Field::make(q);
        std::vector<Place> places{Place::infinity(F), Place::finite(Poly::variable(F)),
                                  Place::finite(irreduciblesOfDegree(F, 2)[0])};
        for (const auto& v : places) {
            int done = 0;
            while (done < 200) {
                Poly a = randomPoly(F, 5, rng), b = randomPoly(F, 5, rng), c = randomPoly(F, 5, rng),
                     d = randomPoly(F, 5, rng);
                if (a.isZero() || b.isZero() || c.isZero() || d.isZero()) continue;
                RationalFunction f(a, b), g(c, d);
                EXPECT_EQ(ordAtPlace(f * g, v), ordAtPlace(f, v) + ordAtPlace(g, v));
                auto s = f + g;
                if (!s.isZero()) {
                    EXPECT_GE(ordAtPlace(s, v), std::min(ordAtPlace(f, v), ordAtPlace(g, v)));
                }
                ++done;
            }
            if (!v.isInfinity()) {
                EXPECT_EQ(ordAtPlace(RationalFunction(v.generator()), v), 1);
            }
        }
    }
}
