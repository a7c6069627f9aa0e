#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include "jllab/abgroup.hpp"

using namespace jllab;

namespace {

IntMatrix randomMatrix(std::mt19937& rng, std::size_t maxDim, int bound) {
    std::uniform_int_distribution<std::size_t> dim(1, maxDim);
    std::uniform_int_distribution<int> entry(-bound, bound);
    IntMatrix m(dim(rng), dim(rng));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    return m;
}

// gcd of all k x k minors, by cofactor expansion over row/column subsets.
BigInt minorGcd(const IntMatrix& m, std::size_t k) {
    BigInt g = 0;
    std::vector<std::size_t> rows, cols;
    std::function<void(std::size_t)> pickCols;
    std::function<void(std::size_t)> pickRows = [&](std::size_t start) {
        if (rows.size() == k) {
            pickCols(0);
            return;
        }
        for (std::size_t i = start; i < m.rows(); ++i) {
            rows.push_back(i);
            pickRows(i + 1);
            rows.pop_back();
        }
    };
    pickCols = [&](std::size_t start) {
        if (cols.size() == k) {
            IntMatrix sub(k, k);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b) sub(a, b) = m(rows[a], cols[b]);
            g = gcdInt(g, determinant(sub));
            return;
        }
        for (std::size_t j = start; j < m.cols(); ++j) {
            cols.push_back(j);
            pickCols(j + 1);
            cols.pop_back();
        }
    };
    pickRows(0);
    return g;
}

// Enumerate every element of a finite group in canonical coordinates.
std::vector<Coords> allElements(const FinAbGroup& g) {
    std::vector<Coords> out{g.zero()};
    const auto& f = g.invariantFactors();
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::vector<Coords> next;
        for (const auto& e : out)
            for (BigInt k = 0; k < f[i]; ++k) {
                Coords x = e;
                x[i] = k;
                next.push_back(x);
            }
        out = std::move(next);
    }
    return out;
}

BigInt bruteOrder(const FinAbGroup& g, const Coords& x) {
    Coords cur = g.reduce(x);
    BigInt n = 1;
    while (!g.isZero(cur)) {
        cur = g.add(cur, x);
        ++n;
    }
    return n;
}

FinAbGroup cuspidalPresentation(long long q) {
    return groupFromRelations(3, IntMatrix{{q * q + q + 1, q, -q}, {q * q, -q * q, 1}, {q, 1, -q}, {1, -1, -1}});
}

}  // namespace

TEST(Smith, Examples) {
    auto s = smithNormalForm(IntMatrix{{4, 0}, {0, 10}});
    EXPECT_EQ(s.D, (IntMatrix{{2, 0}, {0, 20}}));
    EXPECT_EQ(smithNormalForm(IntMatrix{{2}}).D, (IntMatrix{{2}}));
    auto z = smithNormalForm(IntMatrix(3, 3));
    EXPECT_EQ(z.D, IntMatrix(3, 3));
    EXPECT_EQ(z.U, IntMatrix::identity(3));
    EXPECT_EQ(z.V, IntMatrix::identity(3));
}

TEST(Smith, IdentitiesOnRandomMatrices) {
    std::mt19937 rng(2024);
    for (int t = 0; t < 500; ++t) {
        IntMatrix M = randomMatrix(rng, 8, 20);
        auto s = smithNormalForm(M);
        EXPECT_EQ(s.U * M * s.V, s.D);
        EXPECT_EQ(absInt(determinant(s.U)), 1);
        EXPECT_EQ(absInt(determinant(s.V)), 1);
        EXPECT_EQ(s.V * s.Vinv, IntMatrix::identity(M.cols()));
        for (std::size_t i = 0; i < M.rows(); ++i)
            for (std::size_t j = 0; j < M.cols(); ++j)
                if (i != j) {
                    EXPECT_EQ(s.D(i, j), 0);
                }
        for (std::size_t i = 0; i + 1 < std::min(M.rows(), M.cols()); ++i) {
            if (s.D(i + 1, i + 1) != 0) {
                EXPECT_EQ(s.D(i + 1, i + 1) % s.D(i, i), 0);
            }
            EXPECT_GE(s.D(i, i), 0);
        }
    }
}

// d_1 ... d_k = gcd of k x k minors.
TEST(Smith, MatchesDeterminantalDivisors) {
    std::mt19937 rng(7);
    for (int t = 0; t < 150; ++t) {
        IntMatrix M = randomMatrix(rng, 4, 9);
        auto s = smithNormalForm(M);
        BigInt prod = 1;
        for (std::size_t k = 1; k <= std::min(M.rows(), M.cols()); ++k) {
            prod *= s.diagonal(k - 1);
            EXPECT_EQ(prod, minorGcd(M, k)) << "k=" << k;
        }
    }
}

TEST(Group, FromRelationsExamples) {
    auto c2 = cuspidalPresentation(2);
    EXPECT_EQ(c2.invariantFactors(), (std::vector<BigInt>{15}));
    EXPECT_EQ(c2.order(), 15);
    auto c3 = cuspidalPresentation(3);
    EXPECT_EQ(c3.invariantFactors(), (std::vector<BigInt>{2, 20}));
    EXPECT_TRUE(c3.isomorphicTo(FinAbGroup::fromFactors({4, 10})));
    auto free2 = groupFromRelations(2, IntMatrix(0, 2));
    EXPECT_EQ(free2.freeRank(), 2u);
    EXPECT_THROW(free2.order(), InfiniteOrder);
}

TEST(Group, InvariantUnderRowOperations) {
    std::mt19937 rng(99);
    for (int t = 0; t < 100; ++t) {
        IntMatrix M = randomMatrix(rng, 5, 8);
        auto g = groupFromRelations(M.cols(), M);
        std::vector<std::size_t> perm(M.rows());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        IntMatrix P(M.rows(), M.cols());
        for (std::size_t i = 0; i < M.rows(); ++i)
            for (std::size_t j = 0; j < M.cols(); ++j) P(i, j) = M(perm[i], j);
        if (P.rows() > 1) P.addRow(0, 1, std::uniform_int_distribution<int>(-5, 5)(rng));
        EXPECT_TRUE(groupFromRelations(P.cols(), P).isomorphicTo(g));
    }
}

TEST(Group, CoordinatesRespectRelations) {
    std::mt19937 rng(4);
    for (int t = 0; t < 100; ++t) {
        IntMatrix M = randomMatrix(rng, 5, 6);
        auto g = groupFromRelations(M.cols(), M);
        for (std::size_t r = 0; r < M.rows(); ++r) EXPECT_TRUE(g.isZero(g.fromUser(M.row(r))));
        // toUser is a section of fromUser.
        for (std::size_t k = 0; k < g.canonicalDim(); ++k) {
            Coords e(g.canonicalDim());
            e[k] = 1;
            EXPECT_TRUE(g.equal(g.fromUser(g.toUser(e)), e));
        }
    }
}

TEST(Group, ElementOrderMatchesRepeatedAddition) {
    auto c2 = cuspidalPresentation(2);
    EXPECT_EQ(elementOrder(c2, c2.generator(2)), 5);
    EXPECT_EQ(elementOrder(c2, c2.zero()), 1);
    auto g = FinAbGroup::fromFactors({4, 6, 10});
    for (const auto& x : allElements(g)) EXPECT_EQ(elementOrder(g, x), bruteOrder(g, x));
    auto mixed = FinAbGroup::fromFactors({3}, 1);
    Coords x = mixed.zero();
    x[1] = 2;
    EXPECT_THROW(elementOrder(mixed, x), InfiniteOrder);
}

TEST(Hom, FromImagesExamples) {
    auto c2 = cuspidalPresentation(2);
    auto z15 = FinAbGroup::cyclic(15);
    // c0 = cx + cy; cx -> 5, cy -> 9.
    EXPECT_NO_THROW(homFromImages(c2, z15, {{14}, {5}, {9}}));
    EXPECT_THROW(homFromImages(c2, z15, {{15}, {5}, {10}}), IllDefinedHom);
    auto trivial = FinAbGroup::fromFactors({});
    EXPECT_NO_THROW(homFromImages(c2, trivial, {{}, {}, {}}));
    EXPECT_THROW(homFromImages(FinAbGroup::cyclic(3), FinAbGroup::cyclic(5), {{1}}), IllDefinedHom);
}

TEST(Hom, KernelImageCokernelAgainstEnumeration) {
    std::mt19937 rng(17);
    int built = 0;
    while (built < 60) {
        std::uniform_int_distribution<int> fac(2, 12), cnt(1, 3), img(-30, 30);
        std::vector<BigInt> fs, ft;
        for (int i = cnt(rng); i > 0; --i) fs.push_back(fac(rng));
        for (int i = cnt(rng); i > 0; --i) ft.push_back(fac(rng));
        auto src = FinAbGroup::fromFactors(fs), dst = FinAbGroup::fromFactors(ft);
        // Images that kill the source relations: multiply by d_i / gcd.
        std::vector<Coords> images;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            Coords v(ft.size());
            for (std::size_t j = 0; j < ft.size(); ++j) v[j] = BigInt(img(rng)) * (ft[j] / gcdInt(ft[j], fs[i]));
            images.push_back(v);
        }
        AbHom h(src, dst, images);
        auto kic = kernelImageCokernel(h);
        BigInt kerCount = 0;
        std::vector<Coords> imgSet;
        for (const auto& x : allElements(src)) {
            auto y = h.apply(x);
            if (dst.isZero(y)) ++kerCount;
            if (std::find(imgSet.begin(), imgSet.end(), y) == imgSet.end()) imgSet.push_back(y);
        }
        EXPECT_EQ(kic.kernel.group.order(), kerCount);
        EXPECT_EQ(kic.image.group.order(), BigInt(imgSet.size()));
        EXPECT_EQ(kic.cokernel.order() * BigInt(imgSet.size()), dst.order());
        for (const auto& k : kic.kernel.generators) EXPECT_TRUE(dst.isZero(h.apply(k)));
        ++built;
    }
}

TEST(Subgroup, GeneratedAndMembership) {
    auto g = FinAbGroup::fromFactors({2, 20});
    auto sub = subgroupGeneratedBy(g, {{0, 4}});
    EXPECT_EQ(sub.group.order(), 5);
    EXPECT_TRUE(inSubgroup(g, {{0, 4}}, {0, 8}));
    EXPECT_FALSE(inSubgroup(g, {{0, 4}}, {1, 0}));
    EXPECT_EQ(quotientBy(g, {{0, 4}}).order(), 8);
}

TEST(GcdIdentity, ClosedFormUpToTenThousand) {
    EXPECT_EQ(gcdPair(2), 1);
    EXPECT_EQ(gcdPair(3), 2);
    EXPECT_EQ(gcdPair(1), 2);
    for (int n = 1; n <= 10000; ++n) EXPECT_EQ(gcdPair(n), n % 2 ? 2 : 1);
}

TEST(Group, JsonRoundTrip) {
    auto g = FinAbGroup::fromFactors({2, 20}, 1);
    EXPECT_EQ(toJson(g).dump(), R"({"factors":[2,20],"rank":1})");
    EXPECT_TRUE(groupFromJson(toJson(g)).isomorphicTo(g));
}
