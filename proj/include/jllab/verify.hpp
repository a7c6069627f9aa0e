#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jllab/abgroup.hpp"
#include "jllab/btquotient.hpp"
#include "jllab/cuspidal.hpp"
#include "jllab/drinfeld.hpp"
#include "jllab/dualgraph.hpp"
#include "jllab/isogeny.hpp"
#include "jllab/quaternion.hpp"

namespace jllab {

enum class CheckStatus { Pass, Fail, NotApplicable };

inline std::string statusName(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        default: return "n/a";
    }
}

struct Check {
    int id = 0;
    std::string name;
    CheckStatus status = CheckStatus::NotApplicable;
    std::string detail;
};

struct VerifyOptions {
    bool injectFault = false;  // corrupt one expected order so the run must fail
};

struct VerifyReport {
    std::uint32_t q = 0;
    std::string x, y;
    std::vector<Check> checks;
    std::optional<nlohmann::json> endgame;  // q = 2 only
    std::string selectedKernel;
    bool pass() const {
        return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == CheckStatus::Fail; });
    }
};

namespace detail {

// Collects failed sub-claims for one check.
class Tally {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    Check finish(int id, std::string name) const {
        Check c{id, std::move(name), failures_.empty() ? CheckStatus::Pass : CheckStatus::Fail, ""};
        std::ostringstream os;
        for (std::size_t i = 0; i < failures_.size(); ++i) os << (i ? "; " : "") << failures_[i];
        c.detail = failures_.empty() ? "ok" : os.str();
        return c;
    }

private:
    std::vector<std::string> failures_;
};

template <class F>
Check guarded(int id, const std::string& name, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return Check{id, name, CheckStatus::Fail, std::string("exception: ") + e.what()};
    }
}

inline bool cyclicOfOrder(const FinAbGroup& g, const BigInt& n) { return g.isomorphicTo(FinAbGroup::cyclic(n)); }

}

inline Check checkComponentGroups(const XYLevel& L, const CuspidalData& d, const JxyComponentGroups& jl,
                                  const VerifyOptions& opt) {
    return detail::guarded(1, "component groups", [&] {
        const BigInt q = L.q();
        const BigInt big = (q * q + 1) * (q + 1), small = q + 1;
        const BigInt expectX = opt.injectFault ? 2 * small : small;
        detail::Tally t;
        t.expect(detail::cyclicOfOrder(d.atX.component.group, big), "J0 at x");
        t.expect(detail::cyclicOfOrder(d.atY.component.group, small), "J0 at y");
        t.expect(detail::cyclicOfOrder(d.atInf.component.group, big), "J0 at inf");
        t.expect(detail::cyclicOfOrder(jl.atX, expectX), "Jxy at x");
        t.expect(detail::cyclicOfOrder(jl.atY, big), "Jxy at y");
        t.expect(detail::cyclicOfOrder(jl.atInf, small), "Jxy at inf");
        return t.finish(1, "component groups");
    });
}

inline Check checkCuspidalGroup(const CuspidalData& d) {
    return detail::guarded(2, "cuspidal group", [&] {
        const BigInt q = d.level.q();
        const BigInt full = (q + 1) * (q * q + 1);
        detail::Tally t;
        t.expect(d.C.isomorphicTo(FinAbGroup::fromFactors({q + 1, q * q + 1})), "C structure " + d.C.toString());
        t.expect(elementOrder(d.C, d.c0) == (q % 2 == 0 ? full : full / 2), "order of c0");
        t.expect(allPass(certifyOrders(d)), "order certificate");
        return t.finish(2, "cuspidal group");
    });
}

inline Check checkExactSequences(const CuspidalData& d) {
    return detail::guarded(3, "exact sequences", [&] {
        detail::Tally t;
        for (const auto& v : exactSequences(d))
            t.expect(v.pass, v.place + ": ker " + v.kernel.toString() + ", coker " + v.cokernel.toString());
        const auto c0 = subgroupC0(d);
        t.expect(c0.injectiveAtX && c0.injectiveAtInf && c0.kernelOfPhiY, "C0 injectivity");
        return t.finish(3, "exact sequences");
    });
}

namespace detail {

inline std::optional<std::size_t> vertexContaining(const QuotientGraph& g, int layer, std::uint32_t p) {
    for (std::size_t k = 0; k < g.layers[layer].vertexOrbits.size(); ++k) {
        const auto& m = g.layers[layer].vertexOrbits[k].members;
        if (std::binary_search(m.begin(), m.end(), p)) return g.vertexId(layer, k);
    }
    return std::nullopt;
}

inline const QuotientEdge* edgeContaining(const QuotientGraph& g, int type, std::uint32_t p) {
    for (const auto& o : g.layers[type].edgeOrbits) {
        if (!std::binary_search(o.members.begin(), o.members.end(), p)) continue;
        for (const auto& e : g.edges)
            if (e.type == type && e.representative == o.members.front()) return &e;
    }
    return nullptr;
}

}

inline Check checkQuotientGraph(const XYLevel& L) {
    return detail::guarded(4, "quotient graph", [&] {
        const std::uint64_t q = L.q();
        const ResidueRing ring(L.n());
        const ProjectiveLine line(ring);
        const auto g = buildQuotientGraph(ring, -1, {"x", "y"});
        const auto& fx = ring.factors()[0];
        const auto& fy = ring.factors()[1];
        // Codes per factor: c < q_v is (1:c), q_v is (0:1).
        auto pt = [&](std::uint32_t cx, std::uint32_t cy) { return line.index(ProjPoint{{cx, cy}}); };
        const std::uint32_t qx = fx.size(), qy = fy.size();
        const std::uint32_t inf0 = pt(0, qy), zero0 = pt(qx, qy), oneZero = pt(1, qy);
        const std::uint32_t infX = pt(0, fy.field()->inv(fy.reduce(L.x)));
        detail::Tally t;
        t.expect(g.layerVertices(0).size() == 3 && g.layerVertices(1).size() == 5 && g.layerVertices(2).size() == 4,
                 "layer sizes");
        t.expect(g.cuspVertices().size() == 4, "four cusps");
        t.expect(g.edgeCount(0) == q + 6, "type-0 edge count");
        for (const auto* w : {detail::edgeContaining(g, 0, inf0), detail::edgeContaining(g, 1, zero0)})
            t.expect(w && w->stabilizerOrder == (q - 1) * (q - 1) && w->length == q - 1, "wavy edge");
        const auto C = detail::vertexContaining(g, 0, infX), e = detail::vertexContaining(g, 1, oneZero);
        const auto mult = std::count_if(g.edges.begin(), g.edges.end(), [&](const QuotientEdge& ed) {
            return C && e && ed.lower == *C && ed.upper == *e;
        });
        t.expect(static_cast<std::uint64_t>(mult) == q - 1, "broken-line multiplicity");
        const auto fd = finiteDualGraph(g);
        t.expect(!fd.collapsed && fd.graph.vertexCount() == 6, "finite dual vertices");
        t.expect(fd.graph.edgeCount() == q + 5, "finite dual edges");
        t.expect(bettiNumber(fd.graph) == q && genusFromQuotient(g) == q, "Betti number");
        return t.finish(4, "quotient graph");
    });
}

inline Check checkFamilyClosedForm() {
    return detail::guarded(5, "family closed form", [&] {
        detail::Tally t;
        for (int n = 2; n <= 8; ++n)
            for (int m = 1; m <= 8; ++m) {
                const auto closed = familyGroup(n, m);
                const auto res = criticalGroup(familyGraph(n, m));
                const std::string tag = "(" + std::to_string(n) + "," + std::to_string(m) + ")";
                t.expect(res.group.isCyclic() && res.group.order() == closed.order, "order " + tag);
                const Coords gen = m == 1 ? res.classOfDifference("Z", "Z'")
                                          : res.classOfDifference("E" + std::to_string(m - 1), "Z'");
                t.expect(discreteLog(res.group, gen, res.classOfDifference("Z", "Z'")) == closed.z, "z " + tag);
                for (int i = 1; i < m; ++i) {
                    t.expect(discreteLog(res.group, gen, res.classOfDifference("E" + std::to_string(i), "Z'")) ==
                                 closed.e[i - 1],
                             "e " + tag);
                    t.expect(discreteLog(res.group, gen, res.classOfDifference("G" + std::to_string(i), "Z'")) ==
                                 closed.g[i - 1],
                             "g " + tag);
                }
            }
        std::mt19937 rng(2718);
        for (int k = 0; k < 100; ++k) {
            std::uniform_int_distribution<int> nv(1, 8), len(1, 5), extra(0, 5);
            LengthGraph g;
            const int n = nv(rng);
            for (int i = 0; i < n; ++i) g.addVertex("v" + std::to_string(i));
            for (int i = 1; i < n; ++i) g.addEdge(std::uniform_int_distribution<int>(0, i - 1)(rng), i, len(rng));
            for (int e = extra(rng); n >= 2 && e > 0; --e) {
                std::uniform_int_distribution<int> pick(0, n - 1);
                const int a = pick(rng), b = pick(rng);
                if (a != b) g.addEdge(a, b, len(rng));
            }
            t.expect(criticalGroup(g).group.order() == spanningTreeCount(g), "random graph " + std::to_string(k));
        }
        return t.finish(5, "family closed form");
    });
}

inline Check checkCensus(const XYLevel& L) {
    return detail::guarded(6, "supersingular census", [&] {
        const std::uint64_t q = L.q();
        detail::Tally t;
        const auto cx = supersingularCensus(L.placeX());
        const auto cy = supersingularCensus(L.placeY());
        t.expect(cx.jValues == std::vector<Elem>{0}, "census at x");
        t.expect(cy.jValues.size() == 1 && cy.jValues[0] != 0, "census at y");
        const auto ox = orbitThicknessData(L.placeX(), L.placeY());
        t.expect(ox.t == q - 1 && ox.s == 2, "orbit data at x");
        const auto oy = orbitThicknessData(L.placeY(), L.placeX());
        t.expect(oy.thickness == std::vector<std::uint64_t>(q + 1, 1), "thickness at y");
        return t.finish(6, "supersingular census");
    });
}

inline Check checkGenus(const XYLevel& L) {
    return detail::guarded(7, "genus", [&] {
        const std::uint64_t q = L.q();
        detail::Tally t;
        t.expect(genusXR({L.placeX(), L.placeY()}, L.q()) == q, "g({x,y}) = q");
        const auto lin = irreduciblesOfDegree(L.F, 1);
        const Place other = Place::finite(lin[0] == L.x ? lin[1] : lin[0]);
        t.expect(genusXR({L.placeX(), other}, L.q()) == 0, "two degree-1 places");
        return t.finish(7, "genus");
    });
}

inline Check checkQuaternionGraphs(const XYLevel& L) {
    return detail::guarded(8, "quaternionic graph data", [&] {
        const std::uint64_t q = L.q();
        const PlaceSet R{L.placeX(), L.placeY()};
        const auto dx = xrGraphData(R, L.placeX(), L.q()), dy = xrGraphData(R, L.placeY(), L.q());
        detail::Tally t;
        t.expect(dx.vertices == 2 && dx.edges == q + 1 && dx.longEdges == 0, "w = x");
        t.expect(dy.vertices == 2 && dy.edges == q + 1 && dy.longEdges == 2, "w = y");
        return t.finish(8, "quaternionic graph data");
    });
}

inline Check checkEndgame(const XYLevel& L) {
    if (L.q() != 2) return Check{9, "q=2 endgame", CheckStatus::NotApplicable, "only defined for q = 2"};
    return detail::guarded(9, "q=2 endgame", [&] {
        const auto v = q2Verification(L);
        detail::Tally t;
        for (const auto& c : v.curves) t.expect(c.pass, "curve " + c.name);
        t.expect(v.selectedIsC0, "kernel selection (" + v.selected + ")");
        std::vector<BigInt> triple;
        for (const auto& c : v.tables) triple.push_back(c.quotient);
        t.expect(triple == std::vector<BigInt>{3, 15, 3}, "quotient triple");
        return t.finish(9, "q=2 endgame");
    });
}

inline Check checkProperties(const XYLevel& L) {
    return detail::guarded(10, "property suites", [&] {
        detail::Tally t;
        std::mt19937 rng(1618);
        for (int k = 0; k < 500; ++k) {
            std::uniform_int_distribution<std::size_t> dim(1, 8);
            std::uniform_int_distribution<int> entry(-20, 20);
            IntMatrix M(dim(rng), dim(rng));
            for (std::size_t i = 0; i < M.rows(); ++i)
                for (std::size_t j = 0; j < M.cols(); ++j) M(i, j) = entry(rng);
            const auto s = smithNormalForm(M);
            bool ok = s.U * M * s.V == s.D && absInt(determinant(s.U)) == 1 && absInt(determinant(s.V)) == 1;
            for (std::size_t i = 0; i + 1 < std::min(M.rows(), M.cols()); ++i)
                if (s.D(i + 1, i + 1) != 0 && s.D(i + 1, i + 1) % s.D(i, i) != 0) ok = false;
            t.expect(ok, "SNF matrix " + std::to_string(k));
        }
        if (L.q() <= 5) {
            const ProjectiveLine line{ResidueRing(L.n())};
            for (int i = 0; i <= 3; ++i) {
                const auto lay = layerOrbits(line, i);
                const auto elems = enumerateGroup(actingGroupGenerators(L.F, i));
                for (const auto& o : lay.vertexOrbits) {
                    std::uint64_t stab = 0;
                    for (const auto& g : elems) stab += line.act(g, o.members.front()) == o.members.front();
                    t.expect(stab == o.stabilizerOrder && stab * o.members.size() == elems.size(),
                             "orbit-stabilizer layer " + std::to_string(i));
                }
            }
        }
        for (int n = 1; n <= 10000; ++n) t.expect(gcdPair(n) == (n % 2 ? 2 : 1), "gcd identity " + std::to_string(n));
        return t.finish(10, "property suites");
    });
}

inline VerifyReport runVerify(const XYLevel& L, const VerifyOptions& opt = {}) {
    VerifyReport r;
    r.q = L.q();
    r.x = L.x.toString();
    r.y = L.y.toString();
    const auto d = cuspidalData(L);
    const auto jl = componentGroupsJxy(L.x, L.y);
    r.checks = {checkComponentGroups(L, d, jl, opt),
                checkCuspidalGroup(d),
                checkExactSequences(d),
                checkQuotientGraph(L),
                checkFamilyClosedForm(),
                checkCensus(L),
                checkGenus(L),
                checkQuaternionGraphs(L),
                checkEndgame(L),
                checkProperties(L)};
    if (L.q() == 2) {
        try {
            const auto v = q2Verification(L);
            r.endgame = toJson(v);
            r.selectedKernel = v.selectedIsC0 ? "C0" : v.selected;
        } catch (const std::exception&) {
            // check 9 already records the failure
        }
    }
    return r;
}

inline nlohmann::json toJson(const VerifyReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"id", c.id}, {"name", c.name}, {"status", statusName(c.status)}, {"detail", c.detail}});
    nlohmann::json j{{"q", r.q}, {"x", r.x}, {"y", r.y}, {"checks", checks}, {"pass", r.pass()}};
    if (r.endgame) {
        j["selectedKernel"] = r.selectedKernel;
        j["endgame"] = *r.endgame;
    }
    return j;
}

}
