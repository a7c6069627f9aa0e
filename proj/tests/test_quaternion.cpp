#include <gtest/gtest.h>

#include <numeric>

#include "jllab/quaternion.hpp"

using namespace jllab;

namespace {

struct Places {
    FieldPtr F;
    Place x, y, x1;
    explicit Places(std::uint32_t q)
        : F(Field::make(q)),
          x(Place::finite(Poly::variable(F))),
          y(Place::finite(irreduciblesOfDegree(F, 2)[0])),
          x1(Place::finite(irreduciblesOfDegree(F, 1)[1])) {}
};

// Fractions over long long, reduced.
struct Frac {
    long long n, d;
    Frac(long long a, long long b = 1) : n(a), d(b) {
        const long long g = std::gcd(n, d);
        n /= g;
        d /= g;
        if (d < 0) n = -n, d = -d;
    }
    Frac operator+(const Frac& o) const { return Frac(n * o.d + o.n * d, d * o.d); }
    Frac operator-(const Frac& o) const { return Frac(n * o.d - o.n * d, d * o.d); }
    Frac operator*(const Frac& o) const { return Frac(n * o.n, d * o.d); }
    bool operator==(const Frac& o) const { return n == o.n && d == o.d; }
};

Frac asFrac(const Rational& r) {
    return Frac(static_cast<long long>(numerator(r)), static_cast<long long>(denominator(r)));
}

}  // namespace

TEST(Odd, Indicator) {
    Places p(3);
    EXPECT_EQ(oddIndicator(PlaceSet{p.x}), 1);
    EXPECT_EQ(oddIndicator(PlaceSet{p.y}), 0);
    EXPECT_EQ(oddIndicator(PlaceSet{}), 1);
    EXPECT_EQ(oddIndicator(PlaceSet{p.x, p.y}), 0);
}

TEST(Mass, Examples) {
    Places p(2);
    auto a = massAndUnits({p.y}, {}, 2);
    EXPECT_EQ(a.M, 1);
    EXPECT_EQ(a.U, 0);
    EXPECT_EQ(a.h, 1);
    auto b = massAndUnits({p.y}, {p.x}, 2);
    EXPECT_EQ(b.M, 3);
    EXPECT_EQ(b.h, 3);
    auto c = massAndUnits({p.x}, {p.y}, 2);
    EXPECT_EQ(c.M, Rational(5, 3));
    EXPECT_EQ(c.U, 2);
    EXPECT_EQ(c.h, 3);
    EXPECT_THROW(massAndUnits({p.x}, {p.x}, 2), DomainError);
}

// The vertex and edge formulas written out directly in small fractions.
TEST(XRGraph, MatchesDirectFormulas) {
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        Places p(q);
        const long long Q = q, qx = Q, qy = Q * Q;
        const PlaceSet R{p.x, p.y};
        // w = x: R - w = {y}, Odd = 0.
        const Frac vx = Frac(2, Q * Q - 1) * Frac(qy - 1);
        const Frac ex = Frac(qx + 1, Q * Q - 1) * Frac(qy - 1);
        // w = y: R - w = {x}, Odd = 1, 1 - Odd(y) = 1.
        const Frac vy = Frac(2, Q * Q - 1) * Frac(qx - 1) + Frac(2) * Frac(Q, Q + 1);
        const Frac ey = Frac(qy + 1, Q * Q - 1) * Frac(qx - 1) + Frac(2) * Frac(Q, Q + 1);
        const auto dx = xrGraphData(R, p.x, q), dy = xrGraphData(R, p.y, q);
        EXPECT_EQ(Frac(static_cast<long long>(dx.vertices)), vx);
        EXPECT_EQ(Frac(static_cast<long long>(dx.edges)), ex);
        EXPECT_EQ(Frac(static_cast<long long>(dy.vertices)), vy);
        EXPECT_EQ(Frac(static_cast<long long>(dy.edges)), ey);
        EXPECT_EQ(dx.vertices, 2);
        EXPECT_EQ(dx.edges, q + 1);
        EXPECT_EQ(dx.longEdges, 0);
        EXPECT_EQ(dy.vertices, 2);
        EXPECT_EQ(dy.edges, q + 1);
        EXPECT_EQ(dy.longEdges, 2);
        // V = 2 h(R - w) and E = h^w(R - w) from the mass side.
        EXPECT_EQ(Frac(2) * asFrac(massAndUnits({p.y}, {}, q).h), vx);
        EXPECT_EQ(asFrac(massAndUnits({p.x}, {p.y}, q).h), ey);
        EXPECT_GT(massAndUnits({p.x}, {p.y}, q).h, 0);
    }
}

TEST(Genus, ClosedFormAndEuler) {
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        Places p(q);
        EXPECT_EQ(genusXR({p.x, p.y}, q), q);
        EXPECT_EQ(genusXR({p.x, p.x1}, q), 0);
        const auto inf = xrInfinityGraphData({p.x, p.y}, q);
        EXPECT_EQ(inf.vertices, 2);
        EXPECT_EQ(inf.edges, q + 1);
        EXPECT_EQ(inf.betti(), q);
    }
}

TEST(Genus, NonIntegralInputsAreRejected) {
    Places p(3);
    // A single degree-1 place gives a non-integral genus.
    EXPECT_THROW(genusXR({p.x}, 3), DomainError);
}

TEST(Components, JxyGroups) {
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        const BigInt Q = q;
        const auto cg = componentGroupsJxy(q);
        EXPECT_TRUE(cg.atX.isomorphicTo(FinAbGroup::cyclic(Q + 1)));
        EXPECT_TRUE(cg.atY.isomorphicTo(FinAbGroup::cyclic((Q * Q + 1) * (Q + 1))));
        EXPECT_TRUE(cg.atInf.isomorphicTo(FinAbGroup::cyclic(Q + 1)));
        EXPECT_EQ(cg.atY.order(), spanningTreeCount(twoVertexGraph(cg.dataY)));
    }
    const auto c3 = componentGroupsJxy(3);
    EXPECT_EQ(c3.atY.order(), 40);
}

TEST(Report, Shape) {
    auto F = Field::make(2);
    auto j = quaternionReport(Poly::variable(F), irreduciblesOfDegree(F, 2)[0]);
    EXPECT_EQ(j["genus"], 2);
    EXPECT_EQ(j["masses"][2]["M"], "1/3");
    EXPECT_EQ(j["masses"][3]["M"], "5/3");
    EXPECT_EQ(j["componentGroups"]["y"]["factors"][0], 15);
}
