#pragma once

// Moduli of flat G-bundles on surfaces in the holonomy presentation, the
// SL2(Z) action on torus bundles, and the U(1) cocycles of the line bundle
// over them: the conjugation cocycle R(rho, z) and the mapping-class cocycle
// r_diff(rho, A), whose restriction to stabilizers is a character.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "dwline/cochain.hpp"
#include "dwline/error.hpp"
#include "dwline/group.hpp"
#include "dwline/lift.hpp"
#include "dwline/qz.hpp"

namespace dwline {

class SL2Z {
public:
    SL2Z(long long a, long long b, long long c, long long d) : a_(a), b_(b), c_(c), d_(d) {
        if (a * d - b * c != 1)
            throw InvalidInput("matrix [[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," + std::to_string(d) +
                               "]] has determinant " + std::to_string(a * d - b * c) + ", not 1");
    }

    static SL2Z identity() { return {1, 0, 0, 1}; }
    static SL2Z S() { return {0, -1, 1, 0}; }
    static SL2Z T() { return {1, 1, 0, 1}; }

    long long a() const { return a_; }
    long long b() const { return b_; }
    long long c() const { return c_; }
    long long d() const { return d_; }

    /// A e1 = (a, c), A e2 = (b, d).
    Vec2 col1() const { return {a_, c_}; }
    Vec2 col2() const { return {b_, d_}; }
    Vec2 apply(Vec2 v) const { return {a_ * v.x + b_ * v.y, c_ * v.x + d_ * v.y}; }

    SL2Z inverse() const { return {d_, -b_, -c_, a_}; }
    SL2Z pow(long long k) const {
        SL2Z base = k < 0 ? inverse() : *this;
        SL2Z out = identity();
        for (long long i = 0; i < std::llabs(k); ++i) out = out * base;
        return out;
    }
    long long max_abs_entry() const { return std::max({std::llabs(a_), std::llabs(b_), std::llabs(c_), std::llabs(d_)}); }

    friend SL2Z operator*(const SL2Z& x, const SL2Z& y) {
        return {x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_, x.c_ * y.a_ + x.d_ * y.c_, x.c_ * y.b_ + x.d_ * y.d_};
    }
    friend bool operator==(const SL2Z&, const SL2Z&) = default;
    friend auto operator<=>(const SL2Z&, const SL2Z&) = default;

    std::string str() const {
        return "[[" + std::to_string(a_) + "," + std::to_string(b_) + "],[" + std::to_string(c_) + "," + std::to_string(d_) + "]]";
    }

private:
    long long a_, b_, c_, d_;
};

inline long long mod_floor(long long v, long long n) { return ((v % n) + n) % n; }

/// a = 1 and b = 0 mod n.
inline bool in_gamma1(const SL2Z& A, long long n) {
    if (n <= 0) throw InvalidInput("in_gamma1: level must be positive");
    return mod_floor(A.a() - 1, n) == 0 && mod_floor(A.b(), n) == 0;
}

/// A * (g, h) = (g^a h^c, g^b h^d); a right action: (rho . A) . B = rho . (AB).
inline TorusRep sl2z_act(const TorusRep& rep, const SL2Z& A) { return TorusRep(rep.group_ptr(), rep(A.col1()), rep(A.col2())); }

inline bool stabilizes(const SL2Z& A, const TorusRep& rep) { return sl2z_act(rep, A) == rep; }

// ---- surface representations ----------------------------------------------

struct SurfaceRep {
    GroupPtr group;
    std::size_t genus = 1;
    std::vector<Element> images;  // g_1, h_1, ..., g_genus, h_genus

    TorusRep torus() const {
        if (genus != 1) throw InvalidInput("surface representation has genus " + std::to_string(genus) + ", not 1");
        return TorusRep(group, images[0], images[1]);
    }
    friend bool operator==(const SurfaceRep& a, const SurfaceRep& b) { return a.genus == b.genus && a.images == b.images; }
    friend bool operator<(const SurfaceRep& a, const SurfaceRep& b) { return a.images < b.images; }
};

/// prod_i [g_i, h_i] with [x, y] = x y x^-1 y^-1.
inline Element surface_relator(const FiniteGroup& G, const std::vector<Element>& images) {
    Element out = 0;
    for (std::size_t i = 0; i + 1 < images.size(); i += 2) {
        const Element x = images[i], y = images[i + 1];
        out = G.mul(out, G.mul(G.mul(x, y), G.mul(G.inv(x), G.inv(y))));
    }
    return out;
}

inline constexpr std::size_t kMaxEnumeration = 10'000'000;

/// All tuples (g_1, h_1, ..., g_genus, h_genus) with trivial surface relator, in
/// lexicographic index order.
inline std::vector<SurfaceRep> enumerate_bundles(const GroupPtr& G, std::size_t genus) {
    if (genus != 1 && genus != 2) throw InvalidInput("enumerate_bundles supports genus 1 and 2, got " + std::to_string(genus));
    std::size_t total = 1;
    for (std::size_t i = 0; i < 2 * genus; ++i) {
        total *= G->order();
        if (total > kMaxEnumeration) throw InvalidInput("enumeration size |G|^(2g) exceeds 10^7");
    }
    std::vector<SurfaceRep> out;
    std::vector<Element> t(2 * genus, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        for (std::size_t k = t.size(); k-- > 0;) {
            t[k] = r % G->order();
            r /= G->order();
        }
        if (surface_relator(*G, t) == 0) out.push_back(SurfaceRep{G, genus, t});
    }
    return out;
}

struct OrbitStabilizer {
    std::vector<SurfaceRep> orbit;     // sorted
    std::vector<Element> stabilizer;   // sorted
};

inline SurfaceRep conjugate_rep(const SurfaceRep& r, Element z) {
    SurfaceRep out = r;
    for (auto& x : out.images) x = r.group->conj(z, x);
    return out;
}

inline OrbitStabilizer orbit_stabilizer(const SurfaceRep& rep) {
    OrbitStabilizer out;
    std::set<SurfaceRep> orbit;
    for (Element z = 0; z < rep.group->order(); ++z) orbit.insert(conjugate_rep(rep, z));
    out.orbit.assign(orbit.begin(), orbit.end());
    out.stabilizer = centralizer(*rep.group, rep.images);
    return out;
}

/// Orbit representatives (lexicographically least tuple of each orbit), sorted.
inline std::vector<SurfaceRep> orbit_representatives(const GroupPtr& G, std::size_t genus) {
    std::vector<SurfaceRep> reps;
    for (const auto& r : enumerate_bundles(G, genus))
        if (orbit_stabilizer(r).orbit.front() == r) reps.push_back(r);
    return reps;
}

// ---- characters -----------------------------------------------------------

struct LiftOptions {
    std::optional<long long> window;  // default: max(2, 1 + largest coordinate evaluated)
    LiftPath path = LiftPath::Auto;
};

/// gamma(b e1 + d e2, a e1 + c e2) - gamma(a e1 + c e2, b e1 + d e2) for a given lift.
inline QZ r_diff_with_lift(const GammaLift& L, const SL2Z& A) { return L(A.col2(), A.col1()) - L(A.col1(), A.col2()); }

/// Mapping-class cocycle of the normalized lift of rep. Equals the character
/// chi_rep(A) when A stabilizes rep.
inline QZ r_diff(const TorusRep& rep, const CochainPtr& alpha, const SL2Z& A, const LiftOptions& opt = {}) {
    const long long W = opt.window.value_or(default_window(A.max_abs_entry()));
    return r_diff_with_lift(lift_gamma(rep, alpha, W, opt.path), A);
}

/// Closed form of the n-th Dehn twist character on rep (g, 1): sum_{j<n} alpha(g, g^j, g), n = ord(g).
/// The sign is +1 under the library's differential orientation.
inline QZ dehn_character(const FiniteGroup& G, Element g, const Cochain& alpha) {
    check_element(G, g);
    require_cocycle_for(alpha, G);
    QZ out;
    const std::size_t n = G.element_order(g);
    Element gj = 0;
    for (std::size_t j = 0; j < n; ++j) {
        out += alpha.v3(g, gj, g);
        gj = G.mul(gj, g);
    }
    return out;
}

/// N b / n^2 mod 1 for A in Gamma_1(n).
inline QZ klein_character(long long n, long long level, const SL2Z& A) {
    if (n <= 0) throw InvalidInput("klein_character: n must be positive");
    if (!in_gamma1(A, n)) throw InvalidInput("matrix not in Gamma1(" + std::to_string(n) + ")");
    const Integer num = Integer(level) * A.b();
    const Integer den = Integer(n) * n;
    Integer r = num % den;
    if (r < 0) r += den;
    return QZ(static_cast<std::int64_t>(r), static_cast<std::int64_t>(den));
}

/// R(rep, z) = <Psi, conjugate_lift(gamma_rep, z)>: the groupoid 1-cocycle on the
/// action groupoid, with morphism (rep, z): z rep z^-1 -> rep.
inline QZ holonomy_cocycle_R(const TorusRep& rep, const CochainPtr& alpha, Element z, const LiftOptions& opt = {}) {
    const GammaLift L = lift_gamma(rep, alpha, opt.window.value_or(2), opt.path);
    return conjugate_lift(L, z).fundamental_pairing();
}

/// Number of conjugation orbits of torus representations whose stabilizer
/// character z -> R(rep, z) vanishes identically.
inline std::size_t sections_dimension(const GroupPtr& G, const CochainPtr& alpha, const LiftOptions& opt = {}) {
    require_cocycle_for(*alpha, *G);
    std::size_t count = 0;
    for (const auto& r : orbit_representatives(G, 1)) {
        const TorusRep rep = r.torus();
        const GammaLift L = lift_gamma(rep, alpha, opt.window.value_or(2), opt.path, false);
        bool trivial = true;
        for (Element z : centralizer(*G, r.images))
            if (!conjugate_lift(L, z).fundamental_pairing().is_zero()) {
                trivial = false;
                break;
            }
        if (trivial) ++count;
    }
    return count;
}

// ---- SL2(Z) words ---------------------------------------------------------

/// Distinct elements given by words of length <= max_length in S, T, S^-1, T^-1, sorted.
inline std::vector<SL2Z> sl2z_ball(std::size_t max_length) {
    const std::vector<SL2Z> gens{SL2Z::S(), SL2Z::T(), SL2Z::S().inverse(), SL2Z::T().inverse()};
    std::set<SL2Z> seen{SL2Z::identity()};
    std::vector<SL2Z> frontier{SL2Z::identity()};
    for (std::size_t len = 0; len < max_length; ++len) {
        std::vector<SL2Z> next;
        for (const auto& w : frontier)
            for (const auto& s : gens) {
                const SL2Z x = w * s;
                if (seen.insert(x).second) next.push_back(x);
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

}  // namespace dwline
