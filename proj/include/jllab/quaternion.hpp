#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "jllab/abgroup.hpp"
#include "jllab/algebra.hpp"
#include "jllab/dualgraph.hpp"

namespace jllab {

using Rational = boost::multiprecision::cpp_rational;
using PlaceSet = std::vector<Place>;

inline BigInt integral(const Rational& r, const std::string& what) {
    if (denominator(r) != 1) throw DomainError(what + " is not an integer: " + r.str());
    return numerator(r);
}

inline void requireDisjointFinite(const PlaceSet& a, const PlaceSet& b) {
    for (const auto& v : a) {
        require(!v.isInfinity(), "ramification sets hold finite places");
        for (const auto& w : b) require(!(v == w), "place sets must be disjoint");
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) require(!(a[i] == a[j]), "repeated place");
}

// 1 iff every place has odd degree; 1 on the empty set.
inline int oddIndicator(const PlaceSet& s) {
    for (const auto& v : s)
        if (v.degree() % 2 == 0) return 0;
    return 1;
}

inline int oddIndicator(const Place& v) { return oddIndicator(PlaceSet{v}); }

struct MassUnits {
    Rational M, U, h;
};

// R: finite ramified places, S: Eichler level.
inline MassUnits massAndUnits(const PlaceSet& R, const PlaceSet& S, std::uint32_t q) {
    requireDisjointFinite(R, S);
    requireDisjointFinite(S, R);
    require(!R.empty() || !S.empty(), "need at least one place");
    const BigInt Q = q;
    Rational M(1);
    for (const auto& v : R) M *= Rational(v.size() - 1);
    for (const auto& w : S) M *= Rational(w.size() + 1);
    M /= Rational(Q * Q - 1);
    Rational U = Rational(oddIndicator(R));
    const int e = static_cast<int>(R.size() + S.size()) - 1;
    U *= e >= 0 ? Rational(BigInt(1) << e) : Rational(1, 2);
    for (const auto& w : S) U *= Rational(1 - oddIndicator(w));
    return {M, U, M + U * Rational(Q, Q + 1)};
}

struct XRGraphData {
    BigInt vertices, edges, longEdges;
    std::uint32_t longLength = 0;
    std::vector<std::uint64_t> lengths;  // sorted
    BigInt betti() const { return edges - vertices + 1; }
};

inline PlaceSet without(const PlaceSet& R, const Place& w) {
    PlaceSet out;
    for (const auto& v : R)
        if (!(v == w)) out.push_back(v);
    return out;
}

inline void fillLengths(XRGraphData& d) {
    d.lengths.assign(static_cast<std::size_t>(d.edges - d.longEdges), 1);
    d.lengths.insert(d.lengths.end(), static_cast<std::size_t>(d.longEdges), d.longLength);
    std::sort(d.lengths.begin(), d.lengths.end());
}

// Dual graph of the model at a ramified place w: V = 2 h(R-w), E = h^w(R-w),
// edges of length q+1 counted by U^w(R-w).
inline XRGraphData xrGraphData(const PlaceSet& R, const Place& w, std::uint32_t q) {
    const PlaceSet rest = without(R, w);
    require(rest.size() + 1 == R.size(), "w must lie in R");
    const auto plain = massAndUnits(rest, {}, q);
    const auto eichler = massAndUnits(rest, {w}, q);
    XRGraphData d;
    d.vertices = integral(2 * plain.h, "vertex count");
    d.edges = integral(eichler.h, "edge count");
    d.longEdges = integral(eichler.U, "long edge count");
    d.longLength = q + 1;
    require(d.longEdges <= d.edges, "more long edges than edges");
    fillLengths(d);
    return d;
}

inline Rational genusClosedForm(const PlaceSet& R, std::uint32_t q) {
    require(!R.empty(), "R must be nonempty");
    const BigInt Q = q;
    Rational prod(1);
    for (const auto& v : R) prod *= Rational(v.size() - 1);
    return Rational(1) + prod / Rational(Q * Q - 1) -
           Rational(Q, Q + 1) * Rational(BigInt(1) << (R.size() - 1)) * Rational(oddIndicator(R));
}

// Dual graph at infinity: all edges have length 1.
inline XRGraphData xrInfinityGraphData(const PlaceSet& R, std::uint32_t q) {
    const BigInt Q = q;
    const Rational g = genusClosedForm(R, q);
    const Rational tail = Rational(Q, Q - 1) * Rational(BigInt(1) << (R.size() - 1)) * Rational(oddIndicator(R));
    XRGraphData d;
    d.vertices = integral(Rational(2, Q - 1) * (g - 1) + tail, "vertex count at infinity");
    d.edges = integral(Rational(Q + 1, Q - 1) * (g - 1) + tail, "edge count at infinity");
    d.longEdges = 0;
    d.longLength = 1;
    fillLengths(d);
    return d;
}

// Closed form, checked against E - V + 1 at every w in R and at infinity.
inline BigInt genusXR(const PlaceSet& R, std::uint32_t q) {
    const BigInt g = integral(genusClosedForm(R, q), "genus");
    for (const auto& w : R) ensure(xrGraphData(R, w, q).betti() == g, "genus disagrees with the graph at " + w.name());
    ensure(xrInfinityGraphData(R, q).betti() == g, "genus disagrees with the graph at infinity");
    return g;
}

// Only valid when V = 2: every edge joins the two vertices.
inline LengthGraph twoVertexGraph(const XRGraphData& d) {
    require(d.vertices == 2, "graph is determined by its counts only when V = 2");
    LengthGraph g;
    g.addVertex("P");
    g.addVertex("P'");
    for (auto len : d.lengths) g.addEdge(0, 1, len);
    return g;
}

struct JxyComponentGroups {
    XRGraphData dataX, dataY, dataInf;
    FinAbGroup atX, atY, atInf;
};

inline JxyComponentGroups componentGroupsJxy(const Poly& x, const Poly& y) {
    const std::uint32_t q = x.field()->size();
    const Place px = Place::finite(x), py = Place::finite(y);
    const PlaceSet R{px, py};
    JxyComponentGroups r{xrGraphData(R, px, q), xrGraphData(R, py, q), xrInfinityGraphData(R, q), {}, {}, {}};
    r.atX = criticalGroup(twoVertexGraph(r.dataX)).group;
    r.atY = criticalGroup(twoVertexGraph(r.dataY)).group;
    r.atInf = criticalGroup(twoVertexGraph(r.dataInf)).group;
    return r;
}

inline JxyComponentGroups componentGroupsJxy(std::uint32_t q) {
    auto F = Field::make(q);
    return componentGroupsJxy(Poly::variable(F), irreduciblesOfDegree(F, 2)[0]);
}

inline nlohmann::json rationalJson(const Rational& r) {
    if (denominator(r) == 1) return bigToJson(numerator(r));
    return r.str();
}

inline nlohmann::json toJson(const XRGraphData& d) {
    return {{"vertices", bigToJson(d.vertices)},
            {"edges", bigToJson(d.edges)},
            {"longEdges", bigToJson(d.longEdges)},
            {"lengths", d.lengths}};
}

inline nlohmann::json quaternionReport(const Poly& x, const Poly& y) {
    const std::uint32_t q = x.field()->size();
    const Place px = Place::finite(x), py = Place::finite(y);
    const PlaceSet R{px, py};
    nlohmann::json j;
    j["q"] = q;
    j["x"] = x.toString();
    j["y"] = y.toString();
    nlohmann::json masses = nlohmann::json::array();
    for (const auto& [name, rr, ss] : std::vector<std::tuple<std::string, PlaceSet, PlaceSet>>{
             {"D^x", {py}, {}}, {"D^x,S={x}", {py}, {px}}, {"D^y", {px}, {}}, {"D^y,S={y}", {px}, {py}}}) {
        const auto m = massAndUnits(rr, ss, q);
        masses.push_back({{"name", name}, {"M", rationalJson(m.M)}, {"U", rationalJson(m.U)}, {"h", rationalJson(m.h)}});
    }
    j["masses"] = masses;
    const auto cg = componentGroupsJxy(x, y);
    j["graphs"] = {{"x", toJson(cg.dataX)}, {"y", toJson(cg.dataY)}, {"inf", toJson(cg.dataInf)}};
    j["genus"] = bigToJson(genusXR(R, q));
    j["componentGroups"] = {{"x", toJson(cg.atX)}, {"y", toJson(cg.atY)}, {"inf", toJson(cg.atInf)}};
    return j;
}

}
