#pragma once

// Integer matrices, Smith normal form, finitely generated abelian groups and
// homomorphisms between them.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "jllab/error.hpp"

namespace jllab {

using BigInt = boost::multiprecision::cpp_int;
using Coords = std::vector<BigInt>;

inline BigInt absInt(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

inline BigInt gcdInt(BigInt a, BigInt b) {
    a = absInt(a);
    b = absInt(b);
    while (b != 0) {
        BigInt r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline BigInt lcmInt(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) return 0;
    return absInt(a / gcdInt(a, b) * b);
}

// Least nonnegative residue.
inline BigInt modPos(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}

inline nlohmann::json bigToJson(const BigInt& a) {
    if (a >= std::numeric_limits<std::int64_t>::min() && a <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(a);
    return a.str();
}

inline BigInt bigFromJson(const nlohmann::json& j) {
    if (j.is_string()) return BigInt(j.get<std::string>());
    return BigInt(j.get<std::int64_t>());
}

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        for (const auto& r : init) {
            require(r.size() == cols_, "ragged matrix literal");
            for (long long v : r) a_.emplace_back(v);
        }
    }
    static IntMatrix fromRows(const std::vector<Coords>& rows, std::size_t cols) {
        IntMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            require(rows[i].size() == cols, "row has wrong length");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }
    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Coords row(std::size_t i) const { return Coords(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }
    Coords col(std::size_t j) const {
        Coords c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    // Rows of this followed by rows of other.
    IntMatrix stacked(const IntMatrix& other) const {
        require(rows_ == 0 || other.rows_ == 0 || cols_ == other.cols_, "column mismatch when stacking");
        IntMatrix m(rows_ + other.rows_, rows_ ? cols_ : other.cols_);
        std::copy(a_.begin(), a_.end(), m.a_.begin());
        std::copy(other.a_.begin(), other.a_.end(), m.a_.begin() + a_.size());
        return m;
    }

    void swapRows(std::size_t i, std::size_t k) {
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
    }
    void swapCols(std::size_t j, std::size_t k) {
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, j), (*this)(i, k));
    }
    // row_dst += k * row_src
    void addRow(std::size_t dst, std::size_t src, const BigInt& k) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
    }
    void addCol(std::size_t dst, std::size_t src, const BigInt& k) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
    }
    void negateRow(std::size_t i) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
    }

    friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
        require(x.cols_ == y.rows_, "dimension mismatch in product");
        IntMatrix r(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (x(i, k) == 0) continue;
                for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
            }
        return r;
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BigInt> a_;
};

// Row vector times matrix.
inline Coords rowTimes(const Coords& x, const IntMatrix& m) {
    require(x.size() == m.rows(), "dimension mismatch in vector product");
    Coords r(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) r[j] += x[i] * m(i, j);
    }
    return r;
}

// Fraction-free Gaussian elimination.
inline BigInt determinant(IntMatrix m) {
    require(m.rows() == m.cols(), "determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    BigInt sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swapRows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

struct SmithForm {
    IntMatrix U, D, V, Vinv;  // U*M*V = D, V*Vinv = 1
    std::size_t rank = 0;     // number of nonzero diagonal entries

    BigInt diagonal(std::size_t i) const { return i < D.rows() && i < D.cols() ? D(i, i) : BigInt(0); }
};

// Pivot: smallest nonzero absolute value in the active block, ties by
// row-major position.
inline SmithForm smithNormalForm(const IntMatrix& M) {
    const std::size_t m = M.rows(), n = M.cols();
    SmithForm s{IntMatrix::identity(m), M, IntMatrix::identity(n), IntMatrix::identity(n), 0};
    IntMatrix& A = s.D;
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        for (;;) {
            std::optional<std::pair<std::size_t, std::size_t>> piv;
            BigInt best;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (A(i, j) != 0 && (!piv || absInt(A(i, j)) < best)) {
                        piv = {i, j};
                        best = absInt(A(i, j));
                    }
            if (!piv) return s;
            if (piv->first != t) {
                A.swapRows(t, piv->first);
                s.U.swapRows(t, piv->first);
            }
            if (piv->second != t) {
                A.swapCols(t, piv->second);
                s.V.swapCols(t, piv->second);
                s.Vinv.swapRows(t, piv->second);
            }
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (A(i, t) == 0) continue;
                const BigInt k = A(i, t) / A(t, t);
                A.addRow(i, t, -k);
                s.U.addRow(i, t, -k);
                if (A(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (A(t, j) == 0) continue;
                const BigInt k = A(t, j) / A(t, t);
                A.addCol(j, t, -k);
                s.V.addCol(j, t, -k);
                s.Vinv.addRow(t, j, k);
                if (A(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            std::optional<std::size_t> bad;
            for (std::size_t i = t + 1; i < m && !bad; ++i)
                for (std::size_t j = t + 1; j < n && !bad; ++j)
                    if (A(i, j) % A(t, t) != 0) bad = i;
            if (!bad) break;
            A.addRow(t, *bad, 1);
            s.U.addRow(t, *bad, 1);
        }
        if (A(t, t) < 0) {
            A.negateRow(t);
            s.U.negateRow(t);
        }
        s.rank = t + 1;
    }
    return s;
}

// Basis of the lattice {x : x*M = 0}.
inline std::vector<Coords> leftKernel(const IntMatrix& M) {
    const SmithForm s = smithNormalForm(M);
    std::vector<Coords> out;
    for (std::size_t i = s.rank; i < M.rows(); ++i) out.push_back(s.U.row(i));
    return out;
}

// Z^n / rowspan(relations), remembering how the n user generators sit in the
// invariant-factor basis. Elements are handled in canonical coordinates: one
// entry per invariant factor (reduced), then one per free rank.
class FinAbGroup {
public:
    FinAbGroup() = default;

    static FinAbGroup fromRelations(std::size_t nGens, const IntMatrix& relations) {
        require(relations.rows() == 0 || relations.cols() == nGens, "relations must have one column per generator");
        IntMatrix R = relations.rows() == 0 ? IntMatrix(0, nGens) : relations;
        FinAbGroup g;
        g.nGens_ = nGens;
        g.relations_ = R;
        const SmithForm s = smithNormalForm(R);
        std::vector<std::size_t> torsionCols, freeCols;
        for (std::size_t j = 0; j < nGens; ++j) {
            const BigInt d = s.diagonal(j);
            if (d == 0)
                freeCols.push_back(j);
            else if (d != 1)
                torsionCols.push_back(j);
        }
        for (auto j : torsionCols) g.factors_.push_back(s.diagonal(j));
        g.rank_ = freeCols.size();
        std::vector<std::size_t> keep = torsionCols;
        keep.insert(keep.end(), freeCols.begin(), freeCols.end());
        g.toCanon_ = IntMatrix(nGens, keep.size());
        g.fromCanon_ = IntMatrix(keep.size(), nGens);
        for (std::size_t k = 0; k < keep.size(); ++k) {
            for (std::size_t i = 0; i < nGens; ++i) {
                g.toCanon_(i, k) = s.V(i, keep[k]);
                g.fromCanon_(k, i) = s.Vinv(keep[k], i);
            }
        }
        for (std::size_t i = 1; i < g.factors_.size(); ++i)
            ensure(g.factors_[i] % g.factors_[i - 1] == 0, "invariant factors break the divisibility chain");
        return g;
    }

    // Z/d_1 + ... + Z/d_k + Z^freeRank with the given summands as generators.
    static FinAbGroup fromFactors(const std::vector<BigInt>& factors, std::size_t freeRank = 0) {
        IntMatrix R(factors.size(), factors.size() + freeRank);
        for (std::size_t i = 0; i < factors.size(); ++i) R(i, i) = factors[i];
        return fromRelations(factors.size() + freeRank, R);
    }

    static FinAbGroup cyclic(const BigInt& n) { return fromFactors({n}); }

    const std::vector<BigInt>& invariantFactors() const { return factors_; }
    std::size_t freeRank() const { return rank_; }
    std::size_t generatorCount() const { return nGens_; }
    std::size_t canonicalDim() const { return factors_.size() + rank_; }
    const IntMatrix& relations() const { return relations_; }
    bool isFinite() const { return rank_ == 0; }
    bool isTrivial() const { return factors_.empty() && rank_ == 0; }
    bool isCyclic() const { return factors_.size() + rank_ <= 1; }

    BigInt order() const {
        if (rank_ > 0) throw InfiniteOrder("group has positive free rank");
        BigInt r = 1;
        for (const auto& d : factors_) r *= d;
        return r;
    }

    bool isomorphicTo(const FinAbGroup& o) const { return factors_ == o.factors_ && rank_ == o.rank_; }

    Coords zero() const { return Coords(canonicalDim()); }

    Coords reduce(Coords x) const {
        require(x.size() == canonicalDim(), "element has wrong dimension");
        for (std::size_t i = 0; i < factors_.size(); ++i) x[i] = modPos(x[i], factors_[i]);
        return x;
    }

    // Canonical coordinates of sum_i x_i * (user generator i).
    Coords fromUser(const Coords& x) const {
        require(x.size() == nGens_, "user vector has wrong length");
        return reduce(rowTimes(x, toCanon_));
    }

    Coords generator(std::size_t i) const {
        Coords e(nGens_);
        e.at(i) = 1;
        return fromUser(e);
    }

    // A user-generator vector representing the canonical element x.
    Coords toUser(const Coords& x) const { return rowTimes(x, fromCanon_); }

    Coords add(const Coords& a, const Coords& b) const {
        Coords r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
        return reduce(r);
    }
    Coords scale(const BigInt& k, const Coords& a) const {
        Coords r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = k * a[i];
        return reduce(r);
    }
    Coords neg(const Coords& a) const { return scale(-1, a); }
    bool isZero(const Coords& a) const {
        const Coords r = reduce(a);
        return std::all_of(r.begin(), r.end(), [](const BigInt& v) { return v == 0; });
    }
    bool equal(const Coords& a, const Coords& b) const { return isZero(add(a, neg(b))); }

    // The relation matrix of the canonical presentation (torsion rows only).
    IntMatrix canonicalRelations() const {
        IntMatrix D(factors_.size(), canonicalDim());
        for (std::size_t i = 0; i < factors_.size(); ++i) D(i, i) = factors_[i];
        return D;
    }

    std::string toString() const {
        if (isTrivial()) return "0";
        std::string s;
        for (const auto& d : factors_) s += (s.empty() ? "" : " + ") + std::string("Z/") + d.str();
        for (std::size_t i = 0; i < rank_; ++i) s += (s.empty() ? "" : " + ") + std::string("Z");
        return s;
    }

private:
    std::size_t nGens_ = 0;
    IntMatrix relations_;
    std::vector<BigInt> factors_;
    std::size_t rank_ = 0;
    IntMatrix toCanon_;    // user row vector -> canonical (before reduction)
    IntMatrix fromCanon_;  // canonical generator k as a user vector
};

inline FinAbGroup groupFromRelations(std::size_t nGens, const IntMatrix& relations) {
    return FinAbGroup::fromRelations(nGens, relations);
}

inline BigInt elementOrder(const FinAbGroup& g, const Coords& x) {
    const Coords r = g.reduce(x);
    const auto& f = g.invariantFactors();
    for (std::size_t i = f.size(); i < r.size(); ++i)
        if (r[i] != 0) throw InfiniteOrder("element has a nonzero free coordinate");
    BigInt ord = 1;
    for (std::size_t i = 0; i < f.size(); ++i) ord = lcmInt(ord, f[i] / gcdInt(f[i], r[i]));
    return ord;
}

// Smallest k >= 0 with k*gen == x, by enumeration.
inline std::optional<BigInt> discreteLog(const FinAbGroup& g, const Coords& gen, const Coords& x) {
    const BigInt n = elementOrder(g, gen);
    Coords cur = g.zero();
    for (BigInt k = 0; k < n; ++k) {
        if (g.equal(cur, x)) return k;
        cur = g.add(cur, gen);
    }
    return std::nullopt;
}

struct Subgroup {
    FinAbGroup group;             // user generators correspond to `generators`
    std::vector<Coords> generators;  // in the parent's canonical coordinates
};

inline Subgroup subgroupGeneratedBy(const FinAbGroup& parent, const std::vector<Coords>& elems) {
    const std::size_t c = parent.canonicalDim();
    IntMatrix E = IntMatrix::fromRows(elems, c);
    if (elems.empty()) E = IntMatrix(0, c);
    const IntMatrix S = E.stacked(parent.canonicalRelations());
    IntMatrix rel(0, elems.size());
    std::vector<Coords> rows;
    if (S.rows() > 0 && c > 0) {
        for (const auto& k : leftKernel(S)) rows.emplace_back(k.begin(), k.begin() + elems.size());
    } else {
        for (std::size_t i = 0; i < elems.size(); ++i) {
            Coords e(elems.size());
            e[i] = 1;
            rows.push_back(e);
        }
    }
    if (!rows.empty()) rel = IntMatrix::fromRows(rows, elems.size());
    Subgroup sub{FinAbGroup::fromRelations(elems.size(), rel), {}};
    for (const auto& e : elems) sub.generators.push_back(parent.reduce(e));
    return sub;
}

// parent / <elems>, with user generators = the parent's canonical generators.
inline FinAbGroup quotientBy(const FinAbGroup& parent, const std::vector<Coords>& elems) {
    const std::size_t c = parent.canonicalDim();
    IntMatrix R = parent.canonicalRelations();
    if (!elems.empty()) R = R.stacked(IntMatrix::fromRows(elems, c));
    return FinAbGroup::fromRelations(c, R);
}

inline bool inSubgroup(const FinAbGroup& parent, const std::vector<Coords>& elems, const Coords& x) {
    const FinAbGroup Q = quotientBy(parent, elems);
    return Q.isZero(Q.fromUser(parent.reduce(x)));
}

class AbHom {
public:
    // images[i] is the image of source user generator i, in target user coordinates.
    AbHom(FinAbGroup src, FinAbGroup dst, const std::vector<Coords>& images)
        : src_(std::move(src)), dst_(std::move(dst)) {
        require(images.size() == src_.generatorCount(), "need one image per source generator");
        std::vector<Coords> img;
        for (const auto& v : images) img.push_back(dst_.fromUser(v));
        init(img);
    }

    // images already in target canonical coordinates.
    static AbHom fromCanonicalImages(FinAbGroup src, FinAbGroup dst, const std::vector<Coords>& images) {
        require(images.size() == src.generatorCount(), "need one image per source generator");
        AbHom h;
        h.src_ = std::move(src);
        h.dst_ = std::move(dst);
        std::vector<Coords> img;
        for (const auto& v : images) img.push_back(h.dst_.reduce(v));
        h.init(img);
        return h;
    }

    const FinAbGroup& source() const { return src_; }
    const FinAbGroup& target() const { return dst_; }

    // Row k: image of the k-th canonical source generator.
    const IntMatrix& canonicalMatrix() const { return canon_; }

    Coords apply(const Coords& x) const { return dst_.reduce(rowTimes(src_.reduce(x), canon_)); }
    Coords applyUser(const Coords& x) const { return dst_.reduce(rowTimes(x, userImages_)); }

    nlohmann::json toJson() const {
        nlohmann::json imgs = nlohmann::json::array();
        for (std::size_t i = 0; i < userImages_.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& v : userImages_.row(i)) row.push_back(bigToJson(v));
            imgs.push_back(row);
        }
        return {{"images", imgs}};
    }

private:
    AbHom() = default;

    void init(const std::vector<Coords>& img) {
        const std::size_t dc = dst_.canonicalDim();
        userImages_ = img.empty() ? IntMatrix(0, dc) : IntMatrix::fromRows(img, dc);
        const IntMatrix& R = src_.relations();
        for (std::size_t r = 0; r < R.rows(); ++r) {
            if (!dst_.isZero(rowTimes(R.row(r), userImages_)))
                throw IllDefinedHom("relation " + std::to_string(r) + " has nonzero image");
        }
        canon_ = IntMatrix(src_.canonicalDim(), dc);
        for (std::size_t k = 0; k < src_.canonicalDim(); ++k) {
            Coords e(src_.canonicalDim());
            e[k] = 1;
            const Coords v = dst_.reduce(rowTimes(src_.toUser(e), userImages_));
            for (std::size_t j = 0; j < dc; ++j) canon_(k, j) = v[j];
        }
    }

    FinAbGroup src_, dst_;
    IntMatrix userImages_;  // in target canonical coordinates
    IntMatrix canon_;
};

inline AbHom homFromImages(const FinAbGroup& src, const FinAbGroup& dst, const std::vector<Coords>& images) {
    return AbHom(src, dst, images);
}

struct KernelImageCokernel {
    Subgroup kernel;  // generators in source canonical coordinates
    Subgroup image;   // generators in target canonical coordinates
    FinAbGroup cokernel;
};

inline KernelImageCokernel kernelImageCokernel(const AbHom& h) {
    const FinAbGroup& src = h.source();
    const FinAbGroup& dst = h.target();
    const std::size_t cs = src.canonicalDim();
    std::vector<Coords> imgs;
    for (std::size_t k = 0; k < cs; ++k) imgs.push_back(h.canonicalMatrix().row(k));
    std::vector<Coords> kerGens;
    if (cs > 0) {
        IntMatrix S = h.canonicalMatrix();
        if (dst.canonicalDim() == 0) {
            for (std::size_t k = 0; k < cs; ++k) {
                Coords e(cs);
                e[k] = 1;
                kerGens.push_back(e);
            }
        } else {
            S = S.stacked(dst.canonicalRelations());
            for (const auto& row : leftKernel(S)) kerGens.emplace_back(row.begin(), row.begin() + cs);
        }
    }
    KernelImageCokernel out{subgroupGeneratedBy(src, kerGens), subgroupGeneratedBy(dst, imgs), quotientBy(dst, imgs)};
    if (src.isFinite() && dst.isFinite()) {
        ensure(out.kernel.group.order() * out.image.group.order() == src.order(), "|ker|*|im| != |source|");
        ensure(out.cokernel.order() * out.image.group.order() == dst.order(), "|coker|*|im| != |target|");
    }
    return out;
}

// gcd(n^2+1, n+1), checked against 1 for even n and 2 for odd n.
inline int gcdPair(const BigInt& n) {
    require(n >= 1, "gcdPair needs n >= 1");
    const BigInt g = gcdInt(n * n + 1, n + 1);
    const int closed = (n % 2 == 0) ? 1 : 2;
    ensure(g == closed, "gcd(n^2+1, n+1) disagrees with its closed form at n=" + n.str());
    return closed;
}

inline nlohmann::json toJson(const FinAbGroup& g) {
    nlohmann::json f = nlohmann::json::array();
    for (const auto& d : g.invariantFactors()) f.push_back(bigToJson(d));
    return {{"rank", g.freeRank()}, {"factors", f}};
}

inline FinAbGroup groupFromJson(const nlohmann::json& j) {
    std::vector<BigInt> f;
    for (const auto& d : j.at("factors")) f.push_back(bigFromJson(d));
    return FinAbGroup::fromFactors(f, j.at("rank").get<std::size_t>());
}

}  // namespace jllab
