#pragma once

// Inhomogeneous (bar complex) cochains on a finite group with values in Q/Z.
//
// Differential orientation, fixed throughout the library:
//   (d eta)(a,b)       = eta(a) + eta(b) - eta(ab)
//   (d gamma)(a,b,c)   = gamma(a,b) + gamma(ab,c) - gamma(a,bc) - gamma(b,c)
//   (d alpha)(a,b,c,d) = alpha(b,c,d) - alpha(ab,c,d) + alpha(a,bc,d) - alpha(a,b,cd) + alpha(a,b,c)

#include <array>
#include <cstddef>
#include <istream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dwline/error.hpp"
#include "dwline/group.hpp"
#include "dwline/int_matrix.hpp"
#include "dwline/qz.hpp"

namespace dwline {

inline constexpr std::size_t kMaxCochainDegree = 4;

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr share(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

class Cochain {
public:
    using Args = std::array<Element, kMaxCochainDegree>;

    Cochain(GroupPtr group, std::size_t degree) : group_(std::move(group)), degree_(degree) {
        if (degree_ > kMaxCochainDegree) throw InvalidInput("cochain degree " + std::to_string(degree_) + " exceeds 4");
        std::size_t size = 1;
        for (std::size_t i = 0; i < degree_; ++i) size *= group_->order();
        values_.assign(size, QZ{});
    }

    const FiniteGroup& group() const { return *group_; }
    const GroupPtr& group_ptr() const { return group_; }
    std::size_t degree() const { return degree_; }
    std::size_t size() const { return values_.size(); }

    /// Flat index of (g_1, ..., g_k); g_1 is the most significant digit.
    std::size_t index(std::initializer_list<Element> args) const {
        if (args.size() != degree_) throw InvalidInput("cochain: wrong number of arguments");
        std::size_t idx = 0;
        for (Element x : args) {
            check_element(*group_, x);
            idx = idx * group_->order() + x;
        }
        return idx;
    }

    Args unflatten(std::size_t idx) const {
        Args out{};
        for (std::size_t i = degree_; i-- > 0;) {
            out[i] = idx % group_->order();
            idx /= group_->order();
        }
        return out;
    }

    const QZ& operator()(std::initializer_list<Element> args) const { return values_[index(args)]; }
    void set(std::initializer_list<Element> args, const QZ& v) { values_[index(args)] = v; }

    const QZ& at_flat(std::size_t i) const { return values_[i]; }
    void set_flat(std::size_t i, const QZ& v) { values_[i] = v; }

    // Unchecked accessors for inner loops.
    const QZ& v1(Element a) const { return values_[a]; }
    const QZ& v2(Element a, Element b) const { return values_[a * group_->order() + b]; }
    const QZ& v3(Element a, Element b, Element c) const { return values_[(a * group_->order() + b) * group_->order() + c]; }
    const QZ& v4(Element a, Element b, Element c, Element d) const {
        const std::size_t n = group_->order();
        return values_[((a * n + b) * n + c) * n + d];
    }

    bool is_zero() const {
        for (const auto& v : values_)
            if (!v.is_zero()) return false;
        return true;
    }

    Cochain& operator+=(const Cochain& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    Cochain& operator-=(const Cochain& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
    friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
    Cochain scaled(std::int64_t k) const {
        Cochain out = *this;
        for (auto& v : out.values_) v = v.scaled(k);
        return out;
    }

    friend bool operator==(const Cochain& a, const Cochain& b) {
        return a.degree_ == b.degree_ && *a.group_ == *b.group_ && a.values_ == b.values_;
    }

private:
    void require_same_shape(const Cochain& o) const {
        if (degree_ != o.degree_ || !(*group_ == *o.group_)) throw InvalidInput("cochain: group or degree mismatch");
    }

    GroupPtr group_;
    std::size_t degree_;
    std::vector<QZ> values_;
};

inline Cochain differential(const Cochain& c) {
    const FiniteGroup& g = c.group();
    const std::size_t n = g.order();
    Cochain out(c.group_ptr(), c.degree() + 1);
    switch (c.degree()) {
        case 0:
            // Trivial coefficients: d of a constant is zero.
            break;
        case 1:
            for (Element a = 0; a < n; ++a)
                for (Element b = 0; b < n; ++b) out.set_flat(a * n + b, c.v1(a) + c.v1(b) - c.v1(g.mul(a, b)));
            break;
        case 2:
            for (Element a = 0; a < n; ++a)
                for (Element b = 0; b < n; ++b) {
                    const Element ab = g.mul(a, b);
                    for (Element x = 0; x < n; ++x)
                        out.set_flat((a * n + b) * n + x, c.v2(a, b) + c.v2(ab, x) - c.v2(a, g.mul(b, x)) - c.v2(b, x));
                }
            break;
        case 3:
            for (Element a = 0; a < n; ++a)
                for (Element b = 0; b < n; ++b) {
                    const Element ab = g.mul(a, b);
                    for (Element x = 0; x < n; ++x) {
                        const Element bx = g.mul(b, x);
                        for (Element y = 0; y < n; ++y)
                            out.set_flat(((a * n + b) * n + x) * n + y, c.v3(b, x, y) - c.v3(ab, x, y) + c.v3(a, bx, y) -
                                                                            c.v3(a, b, g.mul(x, y)) + c.v3(a, b, x));
                    }
                }
            break;
        default:
            throw InvalidInput("differential: degree-4 cochains have no differential here");
    }
    return out;
}

struct CochainReport {
    bool closed = false;
    bool normalized = false;
};

/// A cochain is normalized when it vanishes on every tuple containing the identity.
inline bool is_normalized(const Cochain& c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto args = c.unflatten(i);
        bool has_identity = false;
        for (std::size_t k = 0; k < c.degree(); ++k) has_identity |= args[k] == 0;
        if (has_identity && !c.at_flat(i).is_zero()) return false;
    }
    return true;
}

inline CochainReport validate_cochain(const Cochain& c) {
    CochainReport r;
    r.normalized = is_normalized(c);
    r.closed = c.degree() >= kMaxCochainDegree ? true : differential(c).is_zero();
    return r;
}

/// Level-N power of the generating 3-cocycle of Z/n:
/// alpha(j,k,l) = N j / n if k + l >= n (representatives 0..n-1), else 0.
inline Cochain alpha_cyclic(std::size_t n, long long level) {
    if (n == 0) throw InvalidInput("alpha_cyclic: modulus must be positive");
    Cochain a(share(cyclic_group(n)), 3);
    for (Element j = 0; j < n; ++j)
        for (Element k = 0; k < n; ++k)
            for (Element l = 0; l < n; ++l)
                if (k + l >= n) a.set({j, k, l}, QZ(static_cast<std::int64_t>(level % static_cast<long long>(n)) * static_cast<std::int64_t>(j), static_cast<std::int64_t>(n)));
    return a;
}

/// (f* c)(g_1..g_k) = c(f g_1, ..., f g_k).
inline Cochain pullback_cochain(const Cochain& c, const GroupHom& f) {
    if (!(f.target() == c.group())) throw InvalidInput("pullback: homomorphism target is not the cochain's group");
    Cochain out(f.source_ptr(), c.degree());
    const std::size_t n = c.group().order();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto args = out.unflatten(i);
        std::size_t idx = 0;
        for (std::size_t k = 0; k < c.degree(); ++k) idx = idx * n + f(args[k]);
        out.set_flat(i, c.at_flat(idx));
    }
    return out;
}

/// Integer matrix of d from degree k-1 to degree k, as a sparse system row builder.
inline LinearSystem coboundary_system(const Cochain& target) {
    const FiniteGroup& g = target.group();
    const std::size_t n = g.order();
    const std::size_t k = target.degree();
    std::size_t unknowns = 1;
    for (std::size_t i = 0; i + 1 < k; ++i) unknowns *= n;
    LinearSystem sys(unknowns);
    using E = LinearSystem::Entry;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const auto a = target.unflatten(i);
        std::vector<E> row;
        if (k == 1) {
            // d of a 0-cochain vanishes.
        } else if (k == 2) {
            row = {E{a[0], 1}, E{a[1], 1}, E{g.mul(a[0], a[1]), -1}};
        } else if (k == 3) {
            row = {E{a[0] * n + a[1], 1}, E{g.mul(a[0], a[1]) * n + a[2], 1}, E{a[0] * n + g.mul(a[1], a[2]), -1}, E{a[1] * n + a[2], -1}};
        } else if (k == 4) {
            auto idx3 = [n](Element x, Element y, Element z) { return (x * n + y) * n + z; };
            row = {E{idx3(a[1], a[2], a[3]), 1}, E{idx3(g.mul(a[0], a[1]), a[2], a[3]), -1}, E{idx3(a[0], g.mul(a[1], a[2]), a[3]), 1},
                   E{idx3(a[0], a[1], g.mul(a[2], a[3])), -1}, E{idx3(a[0], a[1], a[2]), 1}};
        } else {
            throw InvalidInput("coboundary_solve: unsupported degree");
        }
        sys.add_equation(std::move(row), target.at_flat(i));
    }
    return sys;
}

/// Finds b with d b = c when [c] = 0; std::nullopt when the class is nontrivial.
inline std::optional<Cochain> coboundary_solve(const Cochain& c) {
    if (c.degree() < 2 || c.degree() > 3) throw InvalidInput("coboundary_solve: degree must be 2 or 3");
    if (!validate_cochain(c).closed) throw InvalidInput("coboundary_solve: input cochain is not closed");
    const auto result = coboundary_system(c).solve();
    if (!result.solvable()) return std::nullopt;
    Cochain b(c.group_ptr(), c.degree() - 1);
    for (std::size_t i = 0; i < b.size(); ++i) b.set_flat(i, (*result.solution)[i]);
    if (!(differential(b) == c)) throw InternalError("coboundary_solve: solution failed verification");
    return b;
}

/// Smallest m >= 1 with m [c] = 0, searching m up to bound; nullopt if none.
inline std::optional<std::size_t> class_order(const Cochain& c, std::size_t bound) {
    for (std::size_t m = 1; m <= bound; ++m)
        if (coboundary_solve(c.scaled(static_cast<std::int64_t>(m)))) return m;
    return std::nullopt;
}

// ---- text format ----------------------------------------------------------
// "group <spec> degree k" then lines "i_1 ... i_k p/q"; omitted tuples are 0.

inline std::string format_cochain_text(const Cochain& c, const std::string& group_spec) {
    std::ostringstream os;
    os << "group " << group_spec << " degree " << c.degree() << "\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.at_flat(i).is_zero()) continue;
        const auto args = c.unflatten(i);
        for (std::size_t k = 0; k < c.degree(); ++k) os << args[k] << " ";
        os << c.at_flat(i).numerator() << "/" << c.at_flat(i).denominator() << "\n";
    }
    return os.str();
}

/// Parses a cochain file. The group spec in the header is resolved with group_from_spec.
inline Cochain parse_cochain_text(std::istream& in) {
    std::string word, spec;
    std::size_t degree = 0;
    if (!(in >> word) || word != "group" || !(in >> spec) || !(in >> word) || word != "degree" || !(in >> degree))
        throw InvalidInput("cochain file: expected header 'group <spec> degree k'");
    Cochain c(share(group_from_spec(spec)), degree);
    std::string line;
    std::getline(in, line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty() || tok[0][0] == '#') continue;
        if (tok.size() != degree + 1) throw InvalidInput("cochain file: line " + std::to_string(lineno) + " has the wrong number of fields");
        std::size_t idx = 0;
        for (std::size_t k = 0; k < degree; ++k) {
            std::size_t pos = 0;
            long long v = -1;
            try {
                v = std::stoll(tok[k], &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != tok[k].size() || v < 0 || static_cast<std::size_t>(v) >= c.group().order())
                throw InvalidInput("cochain file: bad element '" + tok[k] + "' on line " + std::to_string(lineno));
            idx = idx * c.group().order() + static_cast<std::size_t>(v);
        }
        c.set_flat(idx, QZ::parse(tok[degree]));
    }
    return c;
}

}  // namespace dwline
