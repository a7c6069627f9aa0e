#pragma once

// Loop-free multigraphs with integer edge lengths, their subdivision, and
// critical groups of the subdivided graph.

#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jllab/abgroup.hpp"
#include "jllab/error.hpp"

namespace jllab {

struct LengthEdge {
    std::size_t u = 0, v = 0;
    std::uint64_t length = 1;
    // Non-empty: subdivision vertices are named chain+"1", chain+"2", ... from u.
    std::string chain;
};

class LengthGraph {
public:
    std::size_t addVertex(std::string label) {
        require(!indexOf(label).has_value(), "duplicate vertex label: " + label);
        labels_.push_back(std::move(label));
        return labels_.size() - 1;
    }

    std::size_t addEdge(std::size_t u, std::size_t v, std::uint64_t length = 1, std::string chain = {}) {
        require(u < labels_.size() && v < labels_.size(), "edge endpoint out of range");
        require(u != v, "loops are not allowed");
        require(length >= 1, "edge length must be positive");
        edges_.push_back({u, v, length, std::move(chain)});
        return edges_.size() - 1;
    }

    std::size_t vertexCount() const { return labels_.size(); }
    std::size_t edgeCount() const { return edges_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<LengthEdge>& edges() const { return edges_; }

    std::optional<std::size_t> indexOf(const std::string& label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return i;
        return std::nullopt;
    }

    std::size_t degree(std::size_t v) const {
        std::size_t d = 0;
        for (const auto& e : edges_) d += (e.u == v) + (e.v == v);
        return d;
    }

    bool isConnected() const {
        if (labels_.empty()) return true;
        std::vector<std::size_t> parent(labels_.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        std::size_t comps = labels_.size();
        for (const auto& e : edges_) {
            auto a = find(e.u), b = find(e.v);
            if (a != b) {
                parent[a] = b;
                --comps;
            }
        }
        return comps == 1;
    }

private:
    std::vector<std::string> labels_;
    std::vector<LengthEdge> edges_;
};

inline void requireConnected(const LengthGraph& g) {
    if (!g.isConnected()) throw DisconnectedGraph("graph is not connected");
}

// Every edge of length l becomes a path of l unit edges through l-1 new
// vertices; original vertices keep their indices and labels.
inline LengthGraph subdivide(const LengthGraph& g) {
    LengthGraph out;
    for (const auto& l : g.labels()) out.addVertex(l);
    std::size_t anon = 0;
    for (std::size_t k = 0; k < g.edgeCount(); ++k) {
        const auto& e = g.edges()[k];
        std::size_t prev = e.u;
        for (std::uint64_t i = 1; i < e.length; ++i) {
            std::string name = e.chain.empty() ? "_s" + std::to_string(k) + "_" + std::to_string(i)
                                               : e.chain + std::to_string(i);
            if (out.indexOf(name)) name = "_s" + std::to_string(k) + "_" + std::to_string(i) + "_" + std::to_string(anon++);
            const std::size_t cur = out.addVertex(name);
            out.addEdge(prev, cur);
            prev = cur;
        }
        out.addEdge(prev, e.v);
    }
    return out;
}

// Degree minus adjacency, counting edges by multiplicity (lengths ignored).
inline IntMatrix laplacian(const LengthGraph& g) {
    const std::size_t n = g.vertexCount();
    IntMatrix L(n, n);
    for (const auto& e : g.edges()) {
        L(e.u, e.u) += 1;
        L(e.v, e.v) += 1;
        L(e.u, e.v) -= 1;
        L(e.v, e.u) -= 1;
    }
    return L;
}

inline std::size_t bettiNumber(const LengthGraph& g) {
    requireConnected(g);
    return g.edgeCount() + 1 - g.vertexCount();
}

// Matrix-tree theorem on the subdivided graph.
inline BigInt spanningTreeCount(const LengthGraph& g) {
    requireConnected(g);
    const LengthGraph s = subdivide(g);
    const std::size_t n = s.vertexCount();
    if (n <= 1) return 1;
    const IntMatrix L = laplacian(s);
    IntMatrix red(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 1; j < n; ++j) red(i - 1, j - 1) = L(i, j);
    return determinant(red);
}

// Degree-zero divisors on the resolved graph modulo principal divisors.
// User generators of `group` are v_i - v_reference for i != reference.
struct CriticalGroupResult {
    FinAbGroup group;
    LengthGraph resolved;
    std::size_t reference = 0;

    Coords userVector(const Coords& divisor) const {
        require(divisor.size() == resolved.vertexCount(), "divisor has wrong length");
        BigInt deg = 0;
        for (const auto& a : divisor) deg += a;
        require(deg == 0, "divisor does not have degree zero");
        Coords u;
        for (std::size_t i = 0; i < divisor.size(); ++i)
            if (i != reference) u.push_back(divisor[i]);
        return u;
    }

    Coords classOf(const Coords& divisor) const { return group.fromUser(userVector(divisor)); }

    Coords divisorFromLabels(const std::map<std::string, BigInt>& d) const {
        Coords v(resolved.vertexCount());
        for (const auto& [label, a] : d) {
            auto i = resolved.indexOf(label);
            require(i.has_value(), "unknown vertex label: " + label);
            v[*i] += a;
        }
        return v;
    }

    // Class of the difference a - b of two components.
    Coords classOfDifference(const std::string& a, const std::string& b) const {
        return classOf(divisorFromLabels({{a, 1}, {b, -1}}));
    }
};

inline CriticalGroupResult criticalGroup(const LengthGraph& g) {
    requireConnected(g);
    CriticalGroupResult r;
    r.resolved = subdivide(g);
    const std::size_t n = r.resolved.vertexCount();
    if (n == 0) throw DomainError("critical group of the empty graph");
    const IntMatrix L = laplacian(r.resolved);
    IntMatrix rel(n, n - 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 1; j < n; ++j) rel(i, j - 1) = L(i, j);
    r.group = groupFromRelations(n - 1, rel);
    ensure(r.group.isFinite(), "critical group of a connected graph must be finite");
    ensure(r.group.order() == spanningTreeCount(g), "critical group order differs from spanning tree count");
    return r;
}

inline Coords divisorClass(const CriticalGroupResult& res, const std::map<std::string, BigInt>& divisor) {
    return res.classOf(res.divisorFromLabels(divisor));
}

// Two vertices Z' (index 0) and Z; n edges of which the first and last have
// length m and resolve into chains E_1.., G_1.. starting next to Z.
inline LengthGraph familyGraph(int n, int m) {
    require(n >= 2 && m >= 1, "family graph needs n >= 2 and m >= 1");
    LengthGraph g;
    const auto zp = g.addVertex("Z'");
    const auto z = g.addVertex("Z");
    g.addEdge(z, zp, static_cast<std::uint64_t>(m), "E");
    for (int i = 1; i + 1 < n; ++i) g.addEdge(z, zp);
    g.addEdge(z, zp, static_cast<std::uint64_t>(m), "G");
    return g;
}

// Closed form: cyclic of order m(m(n-2)+2). For m >= 2 coordinates are
// multiples of e_{m-1}; e[i-1], g[i-1] hold those of e_i, g_i. For m = 1 the
// group is Z/n generated by z.
struct FamilyGroup {
    BigInt order;
    BigInt z;
    std::vector<BigInt> e, g;
};

inline FamilyGroup familyGroup(int n, int m) {
    require(n >= 2 && m >= 1, "family group needs n >= 2 and m >= 1");
    FamilyGroup f;
    const BigInt N = n, M = m;
    if (m == 1) {
        f.order = N;
        f.z = 1;
        return f;
    }
    f.order = M * (M * (N - 2) + 2);
    f.z = M;
    for (int i = 1; i < m; ++i) {
        const BigInt I = i;
        f.e.push_back(modPos(M - I, f.order));
        f.g.push_back(modPos(I * (N * M + 1) - (2 * I - 1) * M, f.order));
    }
    return f;
}

inline nlohmann::json toJson(const LengthGraph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges()) {
        nlohmann::json row = {e.u, e.v, e.length};
        if (!e.chain.empty()) row.push_back(e.chain);
        edges.push_back(row);
    }
    return {{"vertices", g.labels()}, {"edges", edges}};
}

// Endpoints may be indices or labels.
inline LengthGraph graphFromJson(const nlohmann::json& j) {
    LengthGraph g;
    for (const auto& v : j.at("vertices")) g.addVertex(v.get<std::string>());
    auto endpoint = [&](const nlohmann::json& x) -> std::size_t {
        if (x.is_string()) {
            auto i = g.indexOf(x.get<std::string>());
            require(i.has_value(), "unknown vertex label: " + x.get<std::string>());
            return *i;
        }
        return x.get<std::size_t>();
    };
    for (const auto& e : j.at("edges")) {
        require(e.is_array() && e.size() >= 2, "edge must be [u, v, len?, chain?]");
        const std::uint64_t len = e.size() > 2 ? e[2].get<std::uint64_t>() : 1;
        const std::string chain = e.size() > 3 ? e[3].get<std::string>() : "";
        g.addEdge(endpoint(e[0]), endpoint(e[1]), len, chain);
    }
    return g;
}

inline std::string dotEscape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string toDot(const LengthGraph& g, const std::string& name = "G") {
    std::ostringstream os;
    os << "graph " << name << " {\n";
    for (std::size_t i = 0; i < g.vertexCount(); ++i)
        os << "  v" << i << " [label=\"" << dotEscape(g.label(i)) << "\"];\n";
    for (const auto& e : g.edges()) {
        os << "  v" << e.u << " -- v" << e.v << " [len=" << e.length;
        if (!e.chain.empty()) os << ", chain=\"" << dotEscape(e.chain) << "\"";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

// Reads the subset of DOT that toDot writes: node statements with a label
// and undirected edge statements with optional len and chain attributes.
inline LengthGraph graphFromDot(const std::string& text) {
    static const std::regex node(R"re(^\s*("?)([A-Za-z0-9_]+)\1\s*\[\s*label\s*=\s*"((?:[^"\\]|\\.)*)"\s*\]\s*;?\s*$)re");
    static const std::regex edge(R"re(^\s*"?([A-Za-z0-9_]+)"?\s*--\s*"?([A-Za-z0-9_]+)"?\s*(\[(.*)\])?\s*;?\s*$)re");
    static const std::regex lenAttr(R"re(len\s*=\s*"?([0-9]+)"?)re");
    static const std::regex chainAttr(R"re(chain\s*=\s*"((?:[^"\\]|\\.)*)")re");
    auto unescape = [](const std::string& s) {
        std::string out;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '\\' && i + 1 < s.size()) ++i;
            out += s[i];
        }
        return out;
    };
    LengthGraph g;
    std::map<std::string, std::size_t> ids;
    auto vertex = [&](const std::string& id) {
        auto it = ids.find(id);
        if (it != ids.end()) return it->second;
        const std::size_t v = g.addVertex(id);
        ids[id] = v;
        return v;
    };
    std::istringstream in(text);
    std::string line;
    std::smatch m;
    bool opened = false;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!opened) {
            require(line.find("graph") != std::string::npos && line.find('{') != std::string::npos,
                    "DOT input must start with an undirected graph header");
            opened = true;
            continue;
        }
        if (line.find('}') != std::string::npos && line.find('[') == std::string::npos) break;
        if (std::regex_match(line, m, edge)) {
            const std::size_t u = vertex(m[1]), v = vertex(m[2]);
            std::uint64_t len = 1;
            std::string chain;
            const std::string attrs = m[4];
            std::smatch a;
            if (std::regex_search(attrs, a, lenAttr)) len = std::stoull(a[1]);
            if (std::regex_search(attrs, a, chainAttr)) chain = unescape(a[1]);
            g.addEdge(u, v, len, chain);
        } else if (std::regex_match(line, m, node)) {
            require(!ids.count(m[2]), "node declared after use: " + std::string(m[2]));
            ids[m[2]] = g.addVertex(unescape(m[3]));
        } else {
            throw DomainError("unsupported DOT line: " + line);
        }
    }
    require(opened, "empty DOT input");
    return g;
}

}  // namespace jllab
