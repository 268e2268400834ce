#pragma once

// Finite groups given by multiplication tables. Elements are the indices
// 0..order-1 and the identity is always index 0.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dwline/error.hpp"

namespace dwline {

using Element = std::size_t;

class FiniteGroup {
public:
    /// Validates the table: Latin square, identity at 0, associativity.
    explicit FiniteGroup(std::vector<std::vector<Element>> table, std::string name = "table")
        : n_(table.size()), name_(std::move(name)) {
        if (n_ == 0) throw InvalidInput("group table is empty");
        table_.reserve(n_ * n_);
        for (const auto& row : table) {
            if (row.size() != n_) throw InvalidInput("group table is not square");
            for (Element v : row) {
                if (v >= n_) throw InvalidInput("group table entry " + std::to_string(v) + " out of range");
                table_.push_back(v);
            }
        }
        for (Element x = 0; x < n_; ++x)
            if (mul(0, x) != x || mul(x, 0) != x) throw InvalidInput("index 0 is not a two-sided identity");
        for (Element x = 0; x < n_; ++x) {
            std::vector<bool> row_seen(n_), col_seen(n_);
            for (Element y = 0; y < n_; ++y) {
                if (row_seen[mul(x, y)] || col_seen[mul(y, x)]) throw InvalidInput("group table is not a Latin square");
                row_seen[mul(x, y)] = col_seen[mul(y, x)] = true;
            }
        }
        for (Element x = 0; x < n_; ++x)
            for (Element y = 0; y < n_; ++y)
                for (Element z = 0; z < n_; ++z)
                    if (mul(mul(x, y), z) != mul(x, mul(y, z)))
                        throw InvalidInput("group table is not associative at (" + std::to_string(x) + "," + std::to_string(y) + "," +
                                           std::to_string(z) + ")");
        inverse_.resize(n_);
        for (Element x = 0; x < n_; ++x)
            for (Element y = 0; y < n_; ++y)
                if (mul(x, y) == 0) inverse_[x] = y;
    }

    std::size_t order() const { return n_; }
    const std::string& name() const { return name_; }

    Element identity() const { return 0; }
    Element mul(Element x, Element y) const { return table_[x * n_ + y]; }
    Element inv(Element x) const { return inverse_[x]; }
    Element conj(Element z, Element x) const { return mul(mul(z, x), inv(z)); }
    bool commute(Element x, Element y) const { return mul(x, y) == mul(y, x); }
    bool contains(Element x) const { return x < n_; }

    /// x^k for any integer k.
    Element pow(Element x, long long k) const {
        if (k < 0) {
            x = inv(x);
            k = -k;
        }
        const long long m = static_cast<long long>(element_order(x));
        k %= m;
        Element out = 0;
        for (long long i = 0; i < k; ++i) out = mul(out, x);
        return out;
    }

    std::size_t element_order(Element x) const {
        std::size_t k = 1;
        for (Element y = x; y != 0; y = mul(y, x)) ++k;
        return k;
    }

    bool is_abelian() const {
        for (Element x = 0; x < n_; ++x)
            for (Element y = x + 1; y < n_; ++y)
                if (!commute(x, y)) return false;
        return true;
    }

    std::vector<std::vector<Element>> table() const {
        std::vector<std::vector<Element>> out(n_, std::vector<Element>(n_));
        for (Element x = 0; x < n_; ++x)
            for (Element y = 0; y < n_; ++y) out[x][y] = mul(x, y);
        return out;
    }

    friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) { return a.table_ == b.table_; }

private:
    std::size_t n_;
    std::string name_;
    std::vector<Element> table_;
    std::vector<Element> inverse_;
};

inline void check_element(const FiniteGroup& g, Element x) {
    if (!g.contains(x)) throw InvalidInput("element " + std::to_string(x) + " is not in " + g.name() + " (order " + std::to_string(g.order()) + ")");
}

// ---- constructors ---------------------------------------------------------

inline FiniteGroup cyclic_group(std::size_t n) {
    if (n == 0) throw InvalidInput("cyclic group of order 0");
    std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y) t[x][y] = (x + y) % n;
    return FiniteGroup(std::move(t), "cyclic:" + std::to_string(n));
}

/// Element (a, b) has index a * |H| + b.
inline FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
    const std::size_t n = g.order() * h.order();
    std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
            t[x][y] = g.mul(x / h.order(), y / h.order()) * h.order() + h.mul(x % h.order(), y % h.order());
    return FiniteGroup(std::move(t), g.name() + "x" + h.name());
}

inline FiniteGroup klein_four() {
    FiniteGroup v = direct_product(cyclic_group(2), cyclic_group(2));
    return FiniteGroup(v.table(), "klein4");
}

using Permutation = std::vector<std::size_t>;

/// The group generated by permutations of {0..degree-1}; composition (p*q)(i) = p(q(i)).
/// Elements are indexed in breadth-first discovery order from the identity.
inline FiniteGroup permutation_group(const std::vector<Permutation>& gens, std::string name = "perm") {
    if (gens.empty()) return FiniteGroup({{0}}, std::move(name));
    const std::size_t degree = gens.front().size();
    Permutation id(degree);
    std::iota(id.begin(), id.end(), 0);
    auto compose = [&](const Permutation& p, const Permutation& q) {
        Permutation r(degree);
        for (std::size_t i = 0; i < degree; ++i) r[i] = p[q[i]];
        return r;
    };
    for (const auto& g : gens) {
        Permutation sorted = g;
        std::sort(sorted.begin(), sorted.end());
        if (g.size() != degree || sorted != id) throw InvalidInput("permutation_group: invalid permutation");
    }
    std::vector<Permutation> elems{id};
    std::map<Permutation, Element> index{{id, 0}};
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& g : gens) {
            Permutation p = compose(elems[i], g);
            if (index.emplace(p, elems.size()).second) elems.push_back(std::move(p));
        }
    const std::size_t n = elems.size();
    std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y) t[x][y] = index.at(compose(elems[x], elems[y]));
    return FiniteGroup(std::move(t), std::move(name));
}

/// S3 as permutations of three points. Indices: 0 = id, 1 = (01), 2 = (012), ...
inline FiniteGroup symmetric3() { return permutation_group({{1, 0, 2}, {1, 2, 0}}, "s3"); }

inline FiniteGroup dihedral_group(std::size_t n) {
    if (n < 3) throw InvalidInput("dihedral_group needs n >= 3");
    Permutation rot(n), ref(n);
    for (std::size_t i = 0; i < n; ++i) {
        rot[i] = (i + 1) % n;
        ref[i] = (n - i) % n;
    }
    return permutation_group({rot, ref}, "dihedral:" + std::to_string(n));
}

inline FiniteGroup alternating4() { return permutation_group({{1, 2, 0, 3}, {1, 0, 3, 2}}, "a4"); }

/// Quaternion group Q8 via its regular permutation representation on eight points.
inline FiniteGroup quaternion8() {
    // Points: 0=1, 1=i, 2=j, 3=k, 4=-1, 5=-i, 6=-j, 7=-k; left multiplication by i and j.
    return permutation_group({{1, 4, 3, 6, 5, 0, 7, 2}, {2, 7, 4, 1, 6, 3, 0, 5}}, "q8");
}

/// Group file: line "order n", then n rows of the multiplication table.
inline FiniteGroup parse_group_text(std::istream& in, std::string name = "file") {
    std::string word;
    std::size_t n = 0;
    if (!(in >> word) || word != "order" || !(in >> n) || n == 0) throw InvalidInput("group file: expected 'order n' header");
    std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            long long v = 0;
            if (!(in >> v)) throw InvalidInput("group file: table truncated at row " + std::to_string(i));
            if (v < 0) throw InvalidInput("group file: negative entry");
            t[i][j] = static_cast<Element>(v);
        }
    if (in >> word) throw InvalidInput("group file: trailing data '" + word + "'");
    return FiniteGroup(std::move(t), std::move(name));
}

inline std::string format_group_text(const FiniteGroup& g) {
    std::ostringstream os;
    os << "order " << g.order() << "\n";
    for (Element x = 0; x < g.order(); ++x) {
        for (Element y = 0; y < g.order(); ++y) os << (y ? " " : "") << g.mul(x, y);
        os << "\n";
    }
    return os.str();
}

/// Group spec strings: "cyclic:n", "klein4", "s3", "file:<path>".
inline FiniteGroup group_from_spec(std::string_view spec) {
    const std::string s(spec);
    if (s == "klein4") return klein_four();
    if (s == "s3") return symmetric3();
    if (s.rfind("cyclic:", 0) == 0) {
        const std::string num = s.substr(7);
        std::size_t pos = 0;
        long long n = 0;
        try {
            n = std::stoll(num, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != num.size() || n <= 0) throw InvalidInput("bad cyclic group spec '" + s + "'");
        return cyclic_group(static_cast<std::size_t>(n));
    }
    if (s.rfind("file:", 0) == 0) {
        std::ifstream in(s.substr(5));
        if (!in) throw InvalidInput("cannot open group file '" + s.substr(5) + "'");
        return parse_group_text(in, s);
    }
    throw InvalidInput("unknown group spec '" + s + "' (expected cyclic:n, klein4, s3, or file:<path>)");
}

// ---- homomorphisms --------------------------------------------------------

class GroupHom {
public:
    GroupHom(std::shared_ptr<const FiniteGroup> source, std::shared_ptr<const FiniteGroup> target, std::vector<Element> images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
        if (images_.size() != source_->order()) throw InvalidInput("homomorphism: wrong number of images");
        for (Element v : images_) check_element(*target_, v);
        for (Element x = 0; x < source_->order(); ++x)
            for (Element y = 0; y < source_->order(); ++y)
                if (images_[source_->mul(x, y)] != target_->mul(images_[x], images_[y]))
                    throw InvalidInput("map is not a homomorphism at (" + std::to_string(x) + "," + std::to_string(y) + ")");
    }

    static GroupHom identity(std::shared_ptr<const FiniteGroup> g) {
        std::vector<Element> img(g->order());
        std::iota(img.begin(), img.end(), 0);
        return GroupHom(g, g, std::move(img));
    }
    static GroupHom trivial(std::shared_ptr<const FiniteGroup> s, std::shared_ptr<const FiniteGroup> t) {
        return GroupHom(s, t, std::vector<Element>(s->order(), 0));
    }

    const FiniteGroup& source() const { return *source_; }
    const FiniteGroup& target() const { return *target_; }
    const std::shared_ptr<const FiniteGroup>& source_ptr() const { return source_; }
    const std::shared_ptr<const FiniteGroup>& target_ptr() const { return target_; }
    Element operator()(Element x) const { return images_.at(x); }
    const std::vector<Element>& images() const { return images_; }

private:
    std::shared_ptr<const FiniteGroup> source_, target_;
    std::vector<Element> images_;
};

// ---- subgroup tools -------------------------------------------------------

/// Sorted elements of the subgroup generated by gens.
inline std::vector<Element> generated_subgroup(const FiniteGroup& g, const std::vector<Element>& gens) {
    for (Element x : gens) check_element(g, x);
    std::vector<bool> in(g.order(), false);
    std::vector<Element> frontier{0};
    in[0] = true;
    while (!frontier.empty()) {
        std::vector<Element> next;
        for (Element x : frontier)
            for (Element s : gens) {
                const Element y = g.mul(x, s);
                if (!in[y]) {
                    in[y] = true;
                    next.push_back(y);
                }
            }
        frontier = std::move(next);
    }
    std::vector<Element> out;
    for (Element x = 0; x < g.order(); ++x)
        if (in[x]) out.push_back(x);
    return out;
}

/// {z : z x = x z for every x in gens}, sorted.
inline std::vector<Element> centralizer(const FiniteGroup& g, const std::vector<Element>& gens) {
    for (Element x : gens) check_element(g, x);
    std::vector<Element> out;
    for (Element z = 0; z < g.order(); ++z)
        if (std::all_of(gens.begin(), gens.end(), [&](Element x) { return g.commute(z, x); })) out.push_back(z);
    return out;
}

inline std::vector<std::size_t> element_orders(const FiniteGroup& g) {
    std::vector<std::size_t> out(g.order());
    for (Element x = 0; x < g.order(); ++x) out[x] = g.element_order(x);
    return out;
}

inline bool commuting(const FiniteGroup& g, Element x, Element y) {
    check_element(g, x);
    check_element(g, y);
    return g.commute(x, y);
}

/// Smallest element index that generates the same subgroup as gens, if it is cyclic.
inline std::optional<Element> cyclic_generator(const FiniteGroup& g, const std::vector<Element>& gens) {
    const auto sub = generated_subgroup(g, gens);
    for (Element k : sub)
        if (g.element_order(k) == sub.size()) return k;
    return std::nullopt;
}

/// Smallest k >= 0 with base^k == x, if x lies in the cyclic subgroup of base.
inline std::optional<long long> discrete_log(const FiniteGroup& g, Element base, Element x) {
    Element y = 0;
    const std::size_t n = g.element_order(base);
    for (std::size_t k = 0; k < n; ++k) {
        if (y == x) return static_cast<long long>(k);
        y = g.mul(y, base);
    }
    return std::nullopt;
}

/// All homomorphisms G -> Z/n, as image vectors (element of Z/n as 0..n-1).
inline std::vector<std::vector<Element>> characters_to_cyclic(const FiniteGroup& g, std::size_t n) {
    // Greedy generating set, then every assignment of images extended by BFS.
    std::vector<Element> gens;
    std::vector<Element> sub{0};
    for (Element x = 0; x < g.order(); ++x)
        if (!std::binary_search(sub.begin(), sub.end(), x)) {
            gens.push_back(x);
            sub = generated_subgroup(g, gens);
        }
    std::vector<std::vector<Element>> out;
    std::vector<Element> imgs(gens.size(), 0);
    for (;;) {
        std::vector<long long> phi(g.order(), -1);
        phi[0] = 0;
        std::vector<Element> frontier{0};
        bool ok = true;
        while (!frontier.empty() && ok) {
            std::vector<Element> next;
            for (Element x : frontier)
                for (std::size_t i = 0; i < gens.size() && ok; ++i) {
                    const Element y = g.mul(x, gens[i]);
                    const long long v = static_cast<long long>((phi[x] + imgs[i]) % n);
                    if (phi[y] < 0) {
                        phi[y] = v;
                        next.push_back(y);
                    } else if (phi[y] != v) {
                        ok = false;
                    }
                }
            frontier = std::move(next);
        }
        if (ok)
            for (Element x = 0; x < g.order() && ok; ++x)
                for (Element y = 0; y < g.order(); ++y)
                    if (phi[g.mul(x, y)] != (phi[x] + phi[y]) % static_cast<long long>(n)) {
                        ok = false;
                        break;
                    }
        if (ok) out.emplace_back(phi.begin(), phi.end());
        std::size_t i = 0;
        while (i < imgs.size() && ++imgs[i] == n) imgs[i++] = 0;
        if (i == imgs.size()) break;
    }
    return out;
}

}  // namespace dwline
