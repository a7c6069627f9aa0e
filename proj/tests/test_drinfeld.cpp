#include <gtest/gtest.h>

#include <random>
#include <set>

#include "jllab/drinfeld.hpp"

using namespace jllab;

namespace {

SkewPoly randomSkew(std::mt19937& rng, const FieldPtr& K, std::uint32_t q, int maxDeg) {
    std::uniform_int_distribution<int> deg(0, maxDeg);
    std::uniform_int_distribution<Elem> e(0, K->size() - 1);
    std::vector<Elem> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& x : c) x = e(rng);
    return SkewPoly(K, q, c);
}

Poly randomPoly(std::mt19937& rng, const FieldPtr& F, int maxDeg) {
    std::uniform_int_distribution<int> deg(0, maxDeg);
    std::uniform_int_distribution<Elem> e(0, F->size() - 1);
    std::vector<Elem> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& x : c) x = e(rng);
    return Poly(F, c);
}

struct Ext {
    FieldPtr F, K;
    Embedding emb;
    Ext(std::uint32_t q, std::uint32_t k)
        : F(Field::make(q)), K(Field::make(F->characteristic(), F->degree() * k)), emb(F, K) {}
};

}  // namespace

TEST(Skew, RingAxioms) {
    std::mt19937 rng(11);
    for (auto [q, k] : {std::pair{2u, 4u}, {3u, 4u}, {4u, 2u}, {5u, 2u}}) {
        Ext s(q, k);
        for (int t = 0; t < 200; ++t) {
            auto a = randomSkew(rng, s.K, q, 3), b = randomSkew(rng, s.K, q, 3), c = randomSkew(rng, s.K, q, 3);
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_EQ((a + b) * c, a * c + b * c);
            if (!a.isZero() && !b.isZero()) {
                EXPECT_EQ((a * b).degree(), a.degree() + b.degree());
            }
            // Composition of additive polynomials.
            std::uniform_int_distribution<Elem> e(0, s.K->size() - 1);
            const Elem z = e(rng);
            EXPECT_EQ((a * b)(z), a(b(z)));
        }
    }
}

TEST(Skew, CommutationRule) {
    Ext s(3, 2);
    const SkewPoly tau(s.K, 3, {0, 1});
    for (Elem x = 0; x < s.K->size(); ++x) {
        EXPECT_EQ(tau * SkewPoly::scalar(s.K, 3, x), SkewPoly(s.K, 3, {0, s.K->pow(x, 3)}));
    }
}

TEST(Phi, SquareOfTInCharacteristicT) {
    Ext s(2, 2);
    const FieldPtr& K = s.K;
    for (Elem g = 0; g < 4; ++g) {
        for (Elem d = 1; d < 4; ++d) {
            DrinfeldModule m(s.emb, 0, g, d);
            // (g tau + d tau^2)^2 expanded by hand.
            auto f = [&](Elem x, int k) { return K->pow(x, 1u << k); };
            SkewPoly want(K, 2,
                          {0, 0, K->mul(g, f(g, 1)), K->add(K->mul(g, f(d, 1)), K->mul(d, f(g, 2))), K->mul(d, f(d, 2))});
            const Poly T = Poly::variable(s.F);
            EXPECT_EQ(phiOf(m, T * T), want);
            EXPECT_EQ(phiOf(m, T), m.phiT());
            EXPECT_EQ(phiOf(m, Poly::constant(s.F, 1)), SkewPoly::scalar(K, 2, 1));
        }
    }
}

TEST(Phi, IsARingHomomorphism) {
    std::mt19937 rng(5);
    for (auto [q, k] : {std::pair{2u, 4u}, {3u, 2u}, {4u, 2u}}) {
        Ext s(q, k);
        std::uniform_int_distribution<Elem> e(0, s.K->size() - 1), nz(1, s.K->size() - 1);
        for (int t = 0; t < 40; ++t) {
            DrinfeldModule m(s.emb, e(rng), e(rng), nz(rng));
            const Poly a = randomPoly(rng, s.F, 3), b = randomPoly(rng, s.F, 3);
            const Poly T = Poly::variable(s.F);
            EXPECT_EQ(m.phi(T * a), m.phiT() * m.phi(a));
            EXPECT_EQ(m.phi(a * b), m.phi(a) * m.phi(b));
            EXPECT_EQ(m.phi(a + b), m.phi(a) + m.phi(b));
            if (!a.isZero()) {
                EXPECT_EQ(m.phi(a).degree(), 2 * a.degree());
            }
            EXPECT_EQ(m.phi(a).coeff(0), m.gamma(a));
        }
    }
}

TEST(JInvariant, ExamplesAndRescaling) {
    Ext s(3, 2);
    EXPECT_EQ(DrinfeldModule(s.emb, 0, 0, 5).jInvariant(), 0u);
    EXPECT_EQ(DrinfeldModule(s.emb, 0, 1, 1).jInvariant(), 1u);
    std::mt19937 rng(3);
    std::uniform_int_distribution<Elem> nz(1, s.K->size() - 1);
    const FieldPtr& K = s.K;
    for (int t = 0; t < 100; ++t) {
        const Elem g = nz(rng), d = nz(rng), u = nz(rng);
        DrinfeldModule a(s.emb, 0, g, d);
        DrinfeldModule b(s.emb, 0, K->mul(K->pow(u, 2), g), K->mul(K->pow(u, 8), d));
        EXPECT_EQ(a.jInvariant(), b.jInvariant());
    }
    EXPECT_THROW(DrinfeldModule(s.emb, 0, 1, 0), DomainError);
}

TEST(Supersingular, ExamplesAndInvariance) {
    for (std::uint32_t q : {2u, 3u}) {
        Ext s(q, 2);
        const Place x = Place::finite(Poly::variable(s.F));
        for (Elem g = 0; g < s.K->size(); ++g) {
            DrinfeldModule m(s.emb, 0, g, 1);
            EXPECT_EQ(isSupersingular(m, x), g == 0);
        }
        EXPECT_FALSE(isSupersingular(DrinfeldModule(s.emb, 0, 1, 1), x));
        EXPECT_THROW(isSupersingular(DrinfeldModule(s.emb, 1, 0, 1), x), DomainError);
    }
    // Rescaling at y over F_16.
    Ext s(2, 4);
    const Poly yPoly = irreduciblesOfDegree(s.F, 2)[0];
    const Place y = Place::finite(yPoly);
    const Elem gamma = characteristicRoot(s.emb, yPoly);
    const FieldPtr& K = s.K;
    for (Elem g = 0; g < 16; ++g)
        for (Elem d = 1; d < 16; ++d)
            for (Elem u = 1; u < 16; u += 4) {
                DrinfeldModule a(s.emb, gamma, g, d), b(s.emb, gamma, K->mul(u, g), K->mul(K->pow(u, 3), d));
                EXPECT_EQ(isSupersingular(a, y), isSupersingular(b, y));
            }
}

// Oracle: scan every (g, Delta) and collect the j-invariants of the
// supersingular ones.
TEST(Census, MatchesBruteForceOverAllCoefficients) {
    for (std::uint32_t q : {2u, 3u}) {
        auto F = Field::make(q);
        for (const Poly& gen : {Poly::variable(F), irreduciblesOfDegree(F, 2)[0]}) {
            const Place p = Place::finite(gen);
            const auto c = supersingularCensus(p);
            std::set<Elem> js;
            for (Elem g = 0; g < c.K->size(); ++g)
                for (Elem d = 1; d < c.K->size(); ++d) {
                    DrinfeldModule m(c.embedding, c.gammaT, g, d);
                    if (isSupersingular(m, p)) js.insert(m.jInvariant());
                }
            EXPECT_EQ(std::vector<Elem>(js.begin(), js.end()), c.jValues);
            ASSERT_EQ(c.jValues.size(), 1u) << q << " " << gen.toString();
            EXPECT_EQ(c.jValues[0] == 0, gen.degree() == 1);
            // The class is defined over F_{q^2}.
            EXPECT_EQ(c.K->pow(c.jValues[0], q * q), c.jValues[0]);
        }
    }
}

TEST(Aut, Orders) {
    Ext s3(3, 2);
    EXPECT_EQ(autGroupOrder(DrinfeldModule(s3.emb, 0, 0, 1)), 8u);
    EXPECT_EQ(autGroupOrder(DrinfeldModule(s3.emb, 0, 1, 1)), 2u);
    Ext s2(2, 3);
    EXPECT_EQ(autGroupOrder(DrinfeldModule(s2.emb, 0, 0, 1)), 3u);
    EXPECT_EQ(autGroupOrder(DrinfeldModule(s2.emb, 0, 1, 1)), 1u);
    Ext s4(4, 1);
    EXPECT_EQ(autGroupOrder(DrinfeldModule(s4.emb, 0, 0, 3)), 15u);
}

TEST(Thickness, AtXAndY) {
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        auto F = Field::make(q);
        const Place x = Place::finite(Poly::variable(F)), y = Place::finite(irreduciblesOfDegree(F, 2)[0]);
        auto rx = orbitThicknessData(x, y);
        EXPECT_EQ(rx.t, q - 1);
        EXPECT_EQ(rx.s, 2u);
        EXPECT_EQ(rx.t + rx.s, q + 1);
        std::vector<std::uint64_t> want(q - 1, 1);
        want.push_back(q + 1);
        want.push_back(q + 1);
        EXPECT_EQ(rx.thickness, want);
        auto ry = orbitThicknessData(y, x);
        EXPECT_EQ(ry.points, q + 1);
        EXPECT_EQ(ry.thickness, std::vector<std::uint64_t>(q + 1, 1));
    }
}

// Oracle at q = 2: split phi[y] for phi_T = tau^2 inside F_64, list its
// F_4-lines and let the cube roots of unity act on them.
TEST(Thickness, LineEnumerationAtQ2) {
    auto F = Field::make(2);
    auto K = Field::make(2, 6);
    Embedding emb(F, K);
    DrinfeldModule m(emb, 0, 0, 1);
    const Poly y = irreduciblesOfDegree(F, 2)[0];
    const SkewPoly phiY = m.phi(y);
    EXPECT_EQ(phiY, SkewPoly(K, 2, {1, 0, 1, 0, 1}));
    std::vector<Elem> torsion;
    for (Elem z = 0; z < K->size(); ++z)
        if (phiY(z) == 0) torsion.push_back(z);
    ASSERT_EQ(torsion.size(), 16u);
    const SkewPoly phiT = m.phiT();
    std::set<std::set<Elem>> lines;
    for (Elem z : torsion) {
        if (z == 0) continue;
        const Elem tz = phiT(z);
        lines.insert({0, z, tz, K->add(z, tz)});
    }
    ASSERT_EQ(lines.size(), 5u);
    std::vector<Elem> units;
    for (Elem u = 1; u < K->size(); ++u)
        if (K->pow(u, 3) == 1) units.push_back(u);
    ASSERT_EQ(units.size(), 3u);
    std::multiset<std::size_t> orbitSizes;
    std::set<std::set<Elem>> seen;
    for (const auto& L : lines) {
        if (seen.count(L)) continue;
        std::set<std::set<Elem>> orbit;
        for (Elem u : units) {
            std::set<Elem> img;
            for (Elem z : L) img.insert(K->mul(u, z));
            orbit.insert(img);
        }
        seen.insert(orbit.begin(), orbit.end());
        orbitSizes.insert(orbit.size());
    }
    EXPECT_EQ(orbitSizes, (std::multiset<std::size_t>{1, 1, 3}));
    auto r = orbitThicknessData(Place::finite(Poly::variable(F)), Place::finite(y));
    EXPECT_EQ(r.t, 1u);
    EXPECT_EQ(r.s, 2u);
    EXPECT_EQ(r.pairs, lines.size());
}
