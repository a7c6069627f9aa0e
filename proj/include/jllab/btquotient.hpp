#pragma once

// The quotient of the Bruhat-Tits tree at infinity by Gamma_0(n), built layer
// by layer from orbits of G_0 = GL_2(F_q) and
// G_i = {(a b; 0 d) : a, d in F_q^*, deg b <= i} on P^1(A/n).

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jllab/algebra.hpp"
#include "jllab/dualgraph.hpp"
#include "jllab/error.hpp"

namespace jllab {

namespace detail {

inline Mat2 diagMat(const FieldPtr& F, Elem a, Elem d) {
    return {Poly::constant(F, a), Poly(F), Poly(F), Poly::constant(F, d)};
}

inline Mat2 unipotent(const FieldPtr& F, Poly b) { return {Poly::one(F), std::move(b), Poly(F), Poly::one(F)}; }

// Diagonal generators plus (1 beta*T^k; 0 1) for beta in an F_p-basis of F_q.
inline std::vector<Mat2> borelLike(const FieldPtr& F, int maxPower) {
    std::vector<Mat2> gens;
    const Elem w = F->generator();
    if (F->size() > 2) {
        gens.push_back(diagMat(F, w, 1));
        gens.push_back(diagMat(F, 1, w));
    }
    Elem beta = 1;
    for (std::uint32_t j = 0; j < F->degree(); ++j, beta *= F->characteristic())
        for (int k = 0; k <= maxPower; ++k) gens.push_back(unipotent(F, Poly::monomial(F, beta, k)));
    return gens;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace detail

// Generators of G_i.
inline std::vector<Mat2> actingGroupGenerators(const FieldPtr& F, int i) {
    require(i >= 0, "layer index must be nonnegative");
    if (i >= 1) return detail::borelLike(F, i);
    auto gens = detail::borelLike(F, 0);
    gens.push_back({Poly(F), Poly::one(F), Poly::one(F), Poly(F)});
    return gens;
}

// Generators of G_i intersected with G_{i+1}: the upper-triangular B for i = 0,
// G_i itself for i >= 1.
inline std::vector<Mat2> edgeGroupGenerators(const FieldPtr& F, int i) {
    require(i >= 0, "layer index must be nonnegative");
    return detail::borelLike(F, i);
}

inline std::uint64_t actingGroupOrder(std::uint64_t q, int i) {
    if (i == 0) return (q * q - 1) * (q * q - q);
    return (q - 1) * (q - 1) * detail::ipow(q, static_cast<unsigned>(i) + 1);
}

inline std::uint64_t edgeGroupOrder(std::uint64_t q, int i) {
    if (i == 0) return q * (q - 1) * (q - 1);
    return actingGroupOrder(q, i);
}

// Closure of a generating set under multiplication; throws past `limit`.
inline std::vector<Mat2> enumerateGroup(const std::vector<Mat2>& gens, std::size_t limit = 200000) {
    require(!gens.empty(), "empty generating set");
    std::set<Mat2> seen{Mat2::identity(gens[0].a.field())};
    std::vector<Mat2> frontier(seen.begin(), seen.end());
    while (!frontier.empty()) {
        std::vector<Mat2> next;
        for (const auto& g : frontier)
            for (const auto& s : gens) {
                Mat2 h = g * s;
                if (seen.insert(h).second) {
                    require(seen.size() <= limit, "group enumeration exceeded limit");
                    next.push_back(std::move(h));
                }
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

struct Orbit {
    std::vector<std::uint32_t> members;  // sorted; members[0] is the representative
    std::uint64_t stabilizerOrder = 0;   // |group| / |orbit|
};

// Orbits of the group generated by `gens` (of abstract order groupOrder),
// sorted by minimal representative.
inline std::vector<Orbit> orbitsUnder(const ProjectiveLine& line, const std::vector<Mat2>& gens,
                                      std::uint64_t groupOrder) {
    std::vector<ProjectiveLine::Action> acts;
    for (const auto& g : gens) acts.push_back(line.reduce(g));
    std::vector<int> orbitOf(line.size(), -1);
    std::vector<Orbit> out;
    for (std::uint32_t start = 0; start < line.size(); ++start) {
        if (orbitOf[start] >= 0) continue;
        const int id = static_cast<int>(out.size());
        Orbit o;
        std::vector<std::uint32_t> stack{start};
        orbitOf[start] = id;
        while (!stack.empty()) {
            const std::uint32_t p = stack.back();
            stack.pop_back();
            o.members.push_back(p);
            for (const auto& a : acts) {
                const std::uint32_t r = line.act(a, p);
                if (orbitOf[r] < 0) {
                    orbitOf[r] = id;
                    stack.push_back(r);
                }
            }
        }
        std::sort(o.members.begin(), o.members.end());
        ensure(groupOrder % o.members.size() == 0, "orbit size does not divide the group order");
        o.stabilizerOrder = groupOrder / o.members.size();
        out.push_back(std::move(o));
    }
    return out;
}

struct LayerOrbits {
    int layer = 0;
    std::uint64_t vertexGroupOrder = 0, edgeGroupOrder = 0;
    std::vector<Orbit> vertexOrbits;  // G_i-orbits: type-i vertices
    std::vector<Orbit> edgeOrbits;    // (G_i n G_{i+1})-orbits: type-i edges
};

inline LayerOrbits layerOrbits(const ProjectiveLine& line, int i) {
    const FieldPtr& F = line.ring().baseField();
    const std::uint64_t q = F->size();
    LayerOrbits L;
    L.layer = i;
    L.vertexGroupOrder = actingGroupOrder(q, i);
    L.edgeGroupOrder = edgeGroupOrder(q, i);
    L.vertexOrbits = orbitsUnder(line, actingGroupGenerators(F, i), L.vertexGroupOrder);
    L.edgeOrbits = orbitsUnder(line, edgeGroupGenerators(F, i), L.edgeGroupOrder);
    std::size_t total = 0;
    for (const auto& o : L.vertexOrbits) total += o.members.size();
    ensure(total == line.size(), "vertex orbits do not partition the projective line");
    return L;
}

struct QuotientVertex {
    int layer = 0;
    std::size_t orbit = 0;
    std::uint32_t representative = 0;
    std::uint64_t orbitSize = 0;
    std::uint64_t stabilizerOrder = 0;
    std::string label;
    std::string cusp;  // non-empty for vertices of the stabilization layer
};

struct QuotientEdge {
    std::size_t lower = 0, upper = 0;  // vertex ids in layers type and type+1
    int type = 0;
    std::uint32_t representative = 0;
    std::uint64_t orbitSize = 0;
    std::uint64_t stabilizerOrder = 0;
    std::uint64_t length = 0;  // stabilizerOrder / (q-1)
};

// Layers 0..stabilizationLayer with their edges; each vertex of the top layer
// carries one infinite half-line towards a cusp.
struct QuotientGraph {
    std::uint32_t q = 0;
    int stabilizationLayer = 0;
    std::vector<std::string> factorNames;
    std::vector<LayerOrbits> layers;  // computed layers, possibly beyond stabilization
    std::vector<QuotientVertex> vertices;
    std::vector<QuotientEdge> edges;

    std::size_t vertexId(int layer, std::size_t orbit) const {
        for (std::size_t v = 0; v < vertices.size(); ++v)
            if (vertices[v].layer == layer && vertices[v].orbit == orbit) return v;
        throw DomainError("no such quotient vertex");
    }

    std::vector<std::size_t> layerVertices(int layer) const {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < vertices.size(); ++v)
            if (vertices[v].layer == layer) out.push_back(v);
        return out;
    }

    std::vector<std::size_t> cuspVertices() const { return layerVertices(stabilizationLayer); }

    std::size_t cuspVertex(const std::string& label) const {
        for (auto v : cuspVertices())
            if (vertices[v].cusp == label) return v;
        throw DomainError("unknown cusp: " + label);
    }

    std::size_t edgeCount(int type) const {
        return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const QuotientEdge& e) { return e.type == type; }));
    }
};

namespace detail {

inline std::vector<int> orbitIndex(const std::vector<Orbit>& orbits, std::size_t n) {
    std::vector<int> idx(n, -1);
    for (std::size_t k = 0; k < orbits.size(); ++k)
        for (auto p : orbits[k].members) idx[p] = static_cast<int>(k);
    return idx;
}

inline bool samePartition(const std::vector<Orbit>& a, const std::vector<Orbit>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].members != b[k].members) return false;
    return true;
}

}  // namespace detail

// factorNames label the prime factors of n (in the ring's sorted order) for
// cusp names; they default to the factor polynomials.
inline QuotientGraph buildQuotientGraph(const ResidueRing& ring, int layerBound = -1,
                                        std::vector<std::string> factorNames = {}) {
    const ProjectiveLine line(ring);
    const FieldPtr& F = ring.baseField();
    const std::uint32_t q = F->size();
    if (layerBound < 0) layerBound = ring.modulus().degree() + 4;
    if (factorNames.empty())
        for (const auto& rf : ring.factors()) factorNames.push_back(rf.modulus().toString());
    require(factorNames.size() == ring.factorCount(), "one name per prime factor is required");

    QuotientGraph g;
    g.q = q;
    g.factorNames = factorNames;
    int istar = -1;
    for (int i = 0; i <= layerBound + 2 && istar < 0; ++i) {
        g.layers.push_back(layerOrbits(line, i));
        const int k = i - 2;
        if (k >= 1 && detail::samePartition(g.layers[k].vertexOrbits, g.layers[k + 1].vertexOrbits) &&
            detail::samePartition(g.layers[k + 1].vertexOrbits, g.layers[k + 2].vertexOrbits) && k <= layerBound)
            istar = k;
    }
    if (istar < 0) throw Error("quotient graph did not stabilize within " + std::to_string(layerBound) + " layers");
    g.stabilizationLayer = istar;

    for (int i = 1; i <= istar; ++i)
        ensure(detail::samePartition(g.layers[i].vertexOrbits, g.layers[i].edgeOrbits),
               "type-" + std::to_string(i) + " edges differ from type-" + std::to_string(i) + " vertices");

    for (int i = 0; i <= istar; ++i) {
        const auto& L = g.layers[i];
        for (std::size_t k = 0; k < L.vertexOrbits.size(); ++k) {
            QuotientVertex v;
            v.layer = i;
            v.orbit = k;
            v.representative = L.vertexOrbits[k].members.front();
            v.orbitSize = L.vertexOrbits[k].members.size();
            v.stabilizerOrder = L.vertexOrbits[k].stabilizerOrder;
            v.label = "X" + std::to_string(i) + ":" + line.label(line.point(v.representative));
            g.vertices.push_back(v);
        }
    }

    // Cusps: on G_i-orbits for i >= 1 the set of factors where the point is
    // (1:0) is invariant; it names the cusp.
    const std::size_t nf = ring.factorCount();
    std::set<std::string> cuspNames;
    for (auto v : g.cuspVertices()) {
        const ProjPoint p = line.point(g.vertices[v].representative);
        std::vector<std::string> parts;
        for (std::size_t f = 0; f < nf; ++f)
            if (p.codes[f] == 0) parts.push_back(factorNames[f]);
        std::string name;
        if (parts.size() == nf)
            name = "[inf]";
        else if (parts.empty())
            name = "[0]";
        else {
            name = "[";
            for (std::size_t k = 0; k < parts.size(); ++k) name += (k ? "*" : "") + parts[k];
            name += "]";
        }
        for (auto m : g.layers[istar].vertexOrbits[g.vertices[v].orbit].members) {
            const ProjPoint pm = line.point(m);
            for (std::size_t f = 0; f < nf; ++f)
                ensure((pm.codes[f] == 0) == (p.codes[f] == 0), "cusp orbit mixes (1:0) and other points");
        }
        g.vertices[v].cusp = name;
        cuspNames.insert(name);
    }
    ensure(cuspNames.size() == (std::size_t(1) << nf) && g.cuspVertices().size() == cuspNames.size(),
           "cusp count differs from 2^(number of prime factors)");

    for (int i = 0; i < istar; ++i) {
        const auto lowIdx = detail::orbitIndex(g.layers[i].vertexOrbits, line.size());
        const auto highIdx = detail::orbitIndex(g.layers[i + 1].vertexOrbits, line.size());
        for (const auto& o : g.layers[i].edgeOrbits) {
            QuotientEdge e;
            e.type = i;
            e.representative = o.members.front();
            e.orbitSize = o.members.size();
            e.stabilizerOrder = o.stabilizerOrder;
            ensure(e.stabilizerOrder % (q - 1) == 0, "edge stabilizer not divisible by q-1");
            e.length = e.stabilizerOrder / (q - 1);
            e.lower = g.vertexId(i, static_cast<std::size_t>(lowIdx[e.representative]));
            e.upper = g.vertexId(i + 1, static_cast<std::size_t>(highIdx[e.representative]));
            for (auto m : o.members)
                ensure(lowIdx[m] == lowIdx[e.representative] && highIdx[m] == highIdx[e.representative],
                       "edge orbit not contained in a single vertex orbit");
            g.edges.push_back(e);
        }
    }
    return g;
}

// Betti number of the truncated quotient graph (layers up to stabilization).
inline std::size_t genusFromQuotient(const QuotientGraph& g) {
    return g.edges.size() + 1 - g.vertices.size();
}

struct FiniteDualGraph {
    bool collapsed = false;                      // every vertex lay on a cusp ray
    LengthGraph graph;
    std::vector<std::size_t> quotientVertex;     // graph vertex -> quotient vertex
    std::map<std::string, std::size_t> cuspReduction;  // cusp -> graph vertex
    std::map<std::string, std::vector<std::size_t>> rays;  // cusp -> peeled quotient vertices
};

// Each cusp's half-line is followed down from its top vertex while the
// vertex has valency 2 (the half-line counts as one edge); the first vertex of
// other valency is where the cusp reduces.
inline FiniteDualGraph finiteDualGraph(const QuotientGraph& g) {
    const std::size_t nv = g.vertices.size();
    std::vector<std::vector<std::size_t>> incident(nv);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        incident[g.edges[k].lower].push_back(k);
        incident[g.edges[k].upper].push_back(k);
    }
    auto valency = [&](std::size_t v) {
        return incident[v].size() + (g.vertices[v].layer == g.stabilizationLayer ? 1 : 0);
    };
    auto other = [&](std::size_t k, std::size_t v) { return g.edges[k].lower == v ? g.edges[k].upper : g.edges[k].lower; };

    FiniteDualGraph out;
    std::vector<bool> onRay(nv, false);
    std::map<std::string, std::size_t> attach;
    constexpr std::size_t kUpward = static_cast<std::size_t>(-1);
    for (auto top : g.cuspVertices()) {
        std::size_t cur = top, via = kUpward;
        std::vector<std::size_t> ray;
        for (;;) {
            if (valency(cur) != 2) break;
            std::size_t next_edge = kUpward;
            for (auto k : incident[cur])
                if (k != via) next_edge = k;
            if (next_edge == kUpward) break;
            const std::size_t next = other(next_edge, cur);
            if (std::find(ray.begin(), ray.end(), next) != ray.end()) break;
            ray.push_back(cur);
            if (g.vertices[next].layer == g.stabilizationLayer && valency(next) == 2) {
                out.collapsed = true;
                break;
            }
            cur = next;
            via = next_edge;
        }
        if (out.collapsed) break;
        for (auto v : ray) onRay[v] = true;
        attach[g.vertices[top].cusp] = cur;
        out.rays[g.vertices[top].cusp] = ray;
    }
    if (out.collapsed) {
        out.rays.clear();
        return out;
    }
    std::vector<std::size_t> local(nv, kUpward);
    for (std::size_t v = 0; v < nv; ++v) {
        if (onRay[v]) continue;
        local[v] = out.graph.addVertex(g.vertices[v].label);
        out.quotientVertex.push_back(v);
    }
    for (const auto& e : g.edges) {
        if (onRay[e.lower] || onRay[e.upper]) continue;
        out.graph.addEdge(local[e.lower], local[e.upper], e.length);
    }
    for (const auto& [cusp, v] : attach) {
        ensure(!onRay[v], "cusp attaches to a peeled vertex");
        out.cuspReduction[cusp] = local[v];
    }
    ensure(out.graph.isConnected(), "finite dual graph is disconnected");
    return out;
}

inline nlohmann::json toJson(const QuotientGraph& g) {
    nlohmann::json verts = nlohmann::json::array(), edges = nlohmann::json::array(), layers = nlohmann::json::array();
    for (const auto& v : g.vertices) {
        nlohmann::json jv = {{"layer", v.layer},
                             {"label", v.label},
                             {"orbitSize", v.orbitSize},
                             {"stabilizer", v.stabilizerOrder}};
        if (!v.cusp.empty()) jv["cusp"] = v.cusp;
        verts.push_back(jv);
    }
    for (const auto& e : g.edges)
        edges.push_back({{"from", e.lower},
                         {"to", e.upper},
                         {"type", e.type},
                         {"orbitSize", e.orbitSize},
                         {"stabilizer", e.stabilizerOrder},
                         {"len", e.length}});
    for (const auto& L : g.layers) {
        nlohmann::json sizes = nlohmann::json::array();
        for (const auto& o : L.vertexOrbits) sizes.push_back(o.members.size());
        layers.push_back({{"layer", L.layer}, {"groupOrder", L.vertexGroupOrder}, {"orbitSizes", sizes}});
    }
    return {{"q", g.q},
            {"stabilizationLayer", g.stabilizationLayer},
            {"vertices", verts},
            {"edges", edges},
            {"layers", layers}};
}

inline std::string toDot(const QuotientGraph& g) {
    std::ostringstream os;
    os << "graph quotient {\n";
    for (int i = 0; i <= g.stabilizationLayer; ++i) {
        os << "  { rank=same;";
        for (auto v : g.layerVertices(i)) os << " v" << v << ";";
        os << " }\n";
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const auto& x = g.vertices[v];
        os << "  v" << v << " [label=\"" << dotEscape(x.cusp.empty() ? x.label : x.cusp) << "\", layer=" << x.layer
           << ", stab=" << x.stabilizerOrder << "];\n";
    }
    for (const auto& e : g.edges)
        os << "  v" << e.lower << " -- v" << e.upper << " [len=" << e.length << ", type=" << e.type
           << ", stab=" << e.stabilizerOrder << "];\n";
    for (auto v : g.cuspVertices())
        os << "  end" << v << " [shape=point, label=\"\"];\n  v" << v << " -- end" << v << " [style=dashed];\n";
    os << "}\n";
    return os.str();
}

}  // namespace jllab
