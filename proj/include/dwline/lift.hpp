#pragma once

// Holonomy data of flat 2-group bundles on the torus. A homomorphism
// rho: Z^2 -> G is a commuting pair (g, h) = (rho(e1), rho(e2)); a lift is a
// normalized 2-cochain gamma on Z^2 with d gamma = rho^* alpha.
//
// Lifts produced by lift_gamma are also normalized against the fundamental
// cycle e1 (x) e2 - e2 (x) e1, i.e. gamma(e1, e2) = gamma(e2, e1).

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dwline/cochain.hpp"
#include "dwline/error.hpp"
#include "dwline/group.hpp"
#include "dwline/int_matrix.hpp"
#include "dwline/qz.hpp"

namespace dwline {

struct Vec2 {
    long long x = 0;
    long long y = 0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend bool operator==(Vec2, Vec2) = default;
    long long norm() const { return std::max(std::llabs(x), std::llabs(y)); }
};

inline constexpr Vec2 kE1{1, 0};
inline constexpr Vec2 kE2{0, 1};

/// x1 y2 - y1 x2.
inline long long det2(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

class TorusRep {
public:
    TorusRep(GroupPtr group, Element g, Element h) : group_(std::move(group)), g_(g), h_(h) {
        check_element(*group_, g_);
        check_element(*group_, h_);
        if (!group_->commute(g_, h_))
            throw InvalidInput("torus representation needs commuting holonomies, got " + std::to_string(g_) + "," + std::to_string(h_));
    }

    const FiniteGroup& group() const { return *group_; }
    const GroupPtr& group_ptr() const { return group_; }
    Element g() const { return g_; }
    Element h() const { return h_; }

    /// rho(x e1 + y e2) = g^x h^y.
    Element operator()(Vec2 v) const { return group_->mul(group_->pow(g_, v.x), group_->pow(h_, v.y)); }

    TorusRep conjugated(Element z) const {
        check_element(*group_, z);
        return TorusRep(group_, group_->conj(z, g_), group_->conj(z, h_));
    }

    friend bool operator==(const TorusRep& a, const TorusRep& b) { return a.g_ == b.g_ && a.h_ == b.h_ && *a.group_ == *b.group_; }

private:
    GroupPtr group_;
    Element g_, h_;
};

enum class LiftPath { Auto, CyclicFormula, Window };

using CochainPtr = std::shared_ptr<const Cochain>;

inline CochainPtr share(Cochain c) { return std::make_shared<const Cochain>(std::move(c)); }

class GammaLift {
public:
    using Evaluator = std::function<QZ(Vec2, Vec2)>;

    enum class Kind { CyclicFormula, Window, Derived };

    GammaLift(TorusRep rep, CochainPtr alpha, long long window, Kind kind, bool bounded, Evaluator eval)
        : rep_(std::move(rep)), alpha_(std::move(alpha)), window_(window), kind_(kind), bounded_(bounded), eval_(std::move(eval)) {}

    const TorusRep& rep() const { return rep_; }
    const Cochain& alpha() const { return *alpha_; }
    const CochainPtr& alpha_ptr() const { return alpha_; }
    long long window() const { return window_; }
    Kind kind() const { return kind_; }
    /// Window-backed lifts can only be evaluated inside [-W, W]^2.
    bool bounded() const { return bounded_; }

    QZ operator()(Vec2 a, Vec2 b) const {
        if (bounded_ && (a.norm() > window_ || b.norm() > window_))
            throw WindowError("lift evaluated outside its window W=" + std::to_string(window_));
        return eval_(a, b);
    }

    /// <Psi, gamma> = gamma(e1, e2) - gamma(e2, e1).
    QZ fundamental_pairing() const { return (*this)(kE1, kE2) - (*this)(kE2, kE1); }

    const Evaluator& evaluator() const { return eval_; }

private:
    TorusRep rep_;
    CochainPtr alpha_;
    long long window_;
    Kind kind_;
    bool bounded_;
    Evaluator eval_;
};

inline void require_cocycle_for(const Cochain& alpha, const FiniteGroup& g) {
    if (alpha.degree() != 3) throw InvalidInput("alpha must be a 3-cochain");
    if (!(alpha.group() == g)) throw InvalidInput("alpha lives on a different group than the representation");
    const auto report = validate_cochain(alpha);
    if (!report.closed) throw InvalidInput("alpha is not closed");
    if (!report.normalized) throw InvalidInput("alpha is not normalized");
}

struct CertificateFailure {
    Vec2 a, b, c;
    QZ lhs, rhs;
};

/// Checks d gamma(a,b,c) = alpha(rho a, rho b, rho c) on every triple with
/// a, b, c, a+b, b+c inside [-radius, radius]^2.
inline std::optional<CertificateFailure> check_lift(const GammaLift& L, long long radius) {
    const TorusRep& rho = L.rep();
    const Cochain& alpha = L.alpha();
    std::vector<Vec2> pts;
    for (long long x = -radius; x <= radius; ++x)
        for (long long y = -radius; y <= radius; ++y) pts.push_back({x, y});
    std::vector<Element> img;
    for (Vec2 p : pts) img.push_back(rho(p));
    const long long side = 2 * radius + 1;
    auto at = [&](Vec2 p) -> std::optional<std::size_t> {
        if (p.norm() > radius) return std::nullopt;
        return static_cast<std::size_t>((p.x + radius) * side + (p.y + radius));
    };
    // Values of gamma on the box, cached.
    std::vector<QZ> table(pts.size() * pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) table[i * pts.size() + j] = L(pts[i], pts[j]);
    auto gam = [&](std::size_t i, std::size_t j) -> const QZ& { return table[i * pts.size() + j]; };
    for (std::size_t ia = 0; ia < pts.size(); ++ia)
        for (std::size_t ib = 0; ib < pts.size(); ++ib) {
            const auto iab = at(pts[ia] + pts[ib]);
            if (!iab) continue;
            for (std::size_t ic = 0; ic < pts.size(); ++ic) {
                const auto ibc = at(pts[ib] + pts[ic]);
                if (!ibc) continue;
                const QZ lhs = gam(ia, ib) + gam(*iab, ic) - gam(ia, *ibc) - gam(ib, ic);
                const QZ& rhs = alpha.v3(img[ia], img[ib], img[ic]);
                if (lhs != rhs) return CertificateFailure{pts[ia], pts[ib], pts[ic], lhs, rhs};
            }
        }
    return std::nullopt;
}

/// Radius used when certifying lifts whose evaluator is valid on all of Z^2.
inline constexpr long long kFormulaCertifyRadius = 3;

inline void certify(const GammaLift& L, long long radius, const char* what) {
    if (auto fail = check_lift(L, radius))
        throw InternalError(std::string(what) + ": d gamma != rho^* alpha at ((" + std::to_string(fail->a.x) + "," + std::to_string(fail->a.y) + "),(" +
                            std::to_string(fail->b.x) + "," + std::to_string(fail->b.y) + "),(" + std::to_string(fail->c.x) + "," +
                            std::to_string(fail->c.y) + ")): " + fail->lhs.str() + " vs " + fail->rhs.str());
}

namespace detail {

/// One-generator lift on Z for the cyclic subgroup of k (order n):
///   F(m, z) = sum_{j=0}^{m-1} alpha(k, k^j, k^z)          (m >= 0)
///   F(m, z) = -sum_{j=1}^{-m} alpha(k, k^{-j}, k^z)       (m <= 0)
/// Stored as prefix sums over one period; F(m + n, z) = F(m, z) + F(n, z).
class CyclicLiftTable {
public:
    CyclicLiftTable(const FiniteGroup& g, const Cochain& alpha, Element k) : n_(static_cast<long long>(g.element_order(k))) {
        powers_.resize(static_cast<std::size_t>(n_));
        for (long long j = 0; j < n_; ++j) powers_[static_cast<std::size_t>(j)] = g.pow(k, j);
        prefix_.assign(static_cast<std::size_t>((n_ + 1) * n_), QZ{});
        for (long long z = 0; z < n_; ++z)
            for (long long r = 0; r < n_; ++r)
                prefix_[idx(r + 1, z)] = prefix_[idx(r, z)] + alpha.v3(k, powers_[static_cast<std::size_t>(r)], powers_[static_cast<std::size_t>(z)]);
    }

    long long period() const { return n_; }

    QZ operator()(long long m, long long z) const {
        const long long zr = mod(z);
        const long long q = floor_div(m);
        const long long r = m - q * n_;
        return prefix_[idx(n_, zr)].scaled(q) + prefix_[idx(r, zr)];
    }

private:
    std::size_t idx(long long r, long long z) const { return static_cast<std::size_t>(r * n_ + z); }
    long long mod(long long v) const { return ((v % n_) + n_) % n_; }
    long long floor_div(long long v) const { return (v - mod(v)) / n_; }

    long long n_;
    std::vector<Element> powers_;
    std::vector<QZ> prefix_;
};

/// 1-D certificate for the formula lift: dF(x,y,w) = alpha(k^x, k^y, k^w) for
/// x in [-n, n), y, w in [0, n). With the quasi-periodicity of F in its first
/// argument and exact periodicity of dF in y and w, this covers all of Z^3.
inline bool certify_cyclic_table(const CyclicLiftTable& F, const FiniteGroup& g, const Cochain& alpha, Element k) {
    const long long n = F.period();
    for (long long x = -n; x < n; ++x)
        for (long long y = 0; y < n; ++y)
            for (long long w = 0; w < n; ++w) {
                const QZ lhs = F(x, y) + F(x + y, w) - F(x, y + w) - F(y, w);
                if (lhs != alpha.v3(g.pow(k, x), g.pow(k, y), g.pow(k, w))) return false;
            }
    for (long long m = -2 * n; m <= 2 * n; ++m)
        for (long long z = 0; z < n; ++z)
            if (F(m + n, z) != F(m, z) + F(n, z)) return false;
    return true;
}

/// Adds lambda * det(a, b), which is closed, so that the result pairs to zero
/// with the fundamental cycle.
inline GammaLift::Evaluator normalize_against_fundamental_cycle(GammaLift::Evaluator raw) {
    const QZ lambda = (raw(kE2, kE1) - raw(kE1, kE2)).halved();
    return [raw = std::move(raw), lambda](Vec2 a, Vec2 b) { return raw(a, b) + lambda.scaled(det2(a, b)); };
}

inline GammaLift lift_cyclic(const TorusRep& rep, const CochainPtr& alpha, long long window) {
    const FiniteGroup& G = rep.group();
    const Element k = *cyclic_generator(G, {rep.g(), rep.h()});
    const long long p = *discrete_log(G, k, rep.g());
    const long long q = *discrete_log(G, k, rep.h());
    auto table = std::make_shared<const CyclicLiftTable>(G, *alpha, k);
    if (!certify_cyclic_table(*table, G, *alpha, k)) throw InternalError("lift_gamma: one-generator formula failed its certificate");
    GammaLift::Evaluator raw = [table, p, q](Vec2 a, Vec2 b) { return (*table)(p * a.x + q * a.y, p * b.x + q * b.y); };
    GammaLift L(rep, alpha, window, GammaLift::Kind::CyclicFormula, false, normalize_against_fundamental_cycle(std::move(raw)));
    certify(L, std::min(window, kFormulaCertifyRadius), "lift_gamma (formula)");
    return L;
}

inline GammaLift lift_window(const TorusRep& rep, const CochainPtr& alpha, long long W) {
    const long long side = 2 * W + 1;
    const std::size_t npts = static_cast<std::size_t>(side * side);
    auto point_index = [&](Vec2 v) { return static_cast<std::size_t>((v.x + W) * side + (v.y + W)); };
    const std::size_t origin = point_index({0, 0});
    std::vector<Vec2> pts(npts);
    std::vector<Element> img(npts);
    for (long long x = -W; x <= W; ++x)
        for (long long y = -W; y <= W; ++y) {
            pts[point_index({x, y})] = {x, y};
            img[point_index({x, y})] = rep({x, y});
        }
    // Unknowns: gamma(u, v) for u, v nonzero; gamma vanishes when an argument is 0.
    auto unknown = [&](std::size_t iu, std::size_t iv) -> std::optional<std::size_t> {
        if (iu == origin || iv == origin) return std::nullopt;
        const std::size_t cu = iu - (iu > origin), cv = iv - (iv > origin);
        return cu * (npts - 1) + cv;
    };
    LinearSystem sys((npts - 1) * (npts - 1));
    const Cochain& a = *alpha;
    for (std::size_t iu = 0; iu < npts; ++iu) {
        if (iu == origin) continue;
        for (std::size_t iv = 0; iv < npts; ++iv) {
            if (iv == origin) continue;
            const Vec2 uv = pts[iu] + pts[iv];
            if (uv.norm() > W) continue;
            const std::size_t iuv = point_index(uv);
            for (std::size_t iw = 0; iw < npts; ++iw) {
                if (iw == origin) continue;
                const Vec2 vw = pts[iv] + pts[iw];
                if (vw.norm() > W) continue;
                const std::size_t ivw = point_index(vw);
                std::vector<LinearSystem::Entry> row;
                if (auto u = unknown(iu, iv)) row.emplace_back(*u, 1);
                if (auto u = unknown(iuv, iw)) row.emplace_back(*u, 1);
                if (auto u = unknown(iu, ivw)) row.emplace_back(*u, -1);
                if (auto u = unknown(iv, iw)) row.emplace_back(*u, -1);
                sys.add_equation(std::move(row), a.v3(img[iu], img[iv], img[iw]));
            }
        }
    }
    const auto result = sys.solve();
    if (!result.solvable()) {
        std::string msg = "lift_gamma: window system infeasible at W=" + std::to_string(W) + "; certificate combines " +
                          std::to_string(result.certificate->weights.size()) + " equations to 0 = " + result.certificate->residual.str();
        throw Error(msg);
    }
    auto table = std::make_shared<std::vector<QZ>>(npts * npts);
    for (std::size_t iu = 0; iu < npts; ++iu)
        for (std::size_t iv = 0; iv < npts; ++iv)
            if (auto u = unknown(iu, iv)) (*table)[iu * npts + iv] = (*result.solution)[*u];
    GammaLift::Evaluator raw = [table = std::shared_ptr<const std::vector<QZ>>(table), W, side, npts](Vec2 u, Vec2 v) {
        const auto iu = static_cast<std::size_t>((u.x + W) * side + (u.y + W));
        const auto iv = static_cast<std::size_t>((v.x + W) * side + (v.y + W));
        return (*table)[iu * npts + iv];
    };
    GammaLift L(rep, alpha, W, GammaLift::Kind::Window, true, normalize_against_fundamental_cycle(std::move(raw)));
    certify(L, W, "lift_gamma (window)");
    return L;
}

}  // namespace detail

/// Largest window the general path will attempt; (2W+1)^4 unknowns.
inline constexpr long long kMaxLiftWindow = 6;

inline long long default_window(long long max_abs_coordinate) { return std::max<long long>(2, 1 + max_abs_coordinate); }

/// A normalized lift of rep with d gamma = rep^* alpha, certified before return.
inline GammaLift lift_gamma(const TorusRep& rep, const CochainPtr& alpha, long long window, LiftPath path = LiftPath::Auto,
                            bool check_alpha = true) {
    if (window < 1) throw InvalidInput("lift window must be at least 1");
    if (check_alpha) require_cocycle_for(*alpha, rep.group());
    const bool cyclic = cyclic_generator(rep.group(), {rep.g(), rep.h()}).has_value();
    if (path == LiftPath::CyclicFormula && !cyclic) throw InvalidInput("formula lift needs a cyclic image <g,h>");
    if (path == LiftPath::CyclicFormula || (path == LiftPath::Auto && cyclic)) return detail::lift_cyclic(rep, alpha, window);
    if (window > kMaxLiftWindow)
        throw WindowError("lift window W=" + std::to_string(window) + " exceeds the limit " + std::to_string(kMaxLiftWindow) + " for non-cyclic images");
    return detail::lift_window(rep, alpha, window);
}

/// (gamma_1 - gamma_2)(e1, e2) - (gamma_1 - gamma_2)(e2, e1); zero iff the lifts are
/// isomorphic over the identity of the underlying G-bundle.
inline QZ sigma_diff(const GammaLift& l1, const GammaLift& l2) {
    if (!(l1.rep() == l2.rep())) throw InvalidInput("sigma_diff: lifts are over different representations");
    if (l1.alpha_ptr() != l2.alpha_ptr() && !(l1.alpha() == l2.alpha())) throw InvalidInput("sigma_diff: lifts use different cocycles");
    return l1.fundamental_pairing() - l2.fundamental_pairing();
}

/// gamma + d eta, for eta: Z^2 -> Q/Z.
inline GammaLift shift_by_exact(const GammaLift& L, std::function<QZ(Vec2)> eta) {
    auto base = L;
    return GammaLift(L.rep(), L.alpha_ptr(), L.window(), GammaLift::Kind::Derived, L.bounded(),
                     [base, eta = std::move(eta)](Vec2 a, Vec2 b) { return base(a, b) + eta(a) + eta(b) - eta(a + b); });
}

/// gamma + lambda * det(a, b).
inline GammaLift shift_by_antisymmetric(const GammaLift& L, const QZ& lambda) {
    auto base = L;
    return GammaLift(L.rep(), L.alpha_ptr(), L.window(), GammaLift::Kind::Derived, L.bounded(),
                     [base, lambda](Vec2 a, Vec2 b) { return base(a, b) + lambda.scaled(det2(a, b)); });
}

/// beta(a, b) = alpha(z, x, y) + alpha(zxz^-1, zyz^-1, z) - alpha(zxz^-1, z, y) with
/// x = rho(a), y = rho(b). Satisfies d beta = (z rho z^-1)^* alpha - rho^* alpha.
inline QZ conjugation_correction(const Cochain& alpha, const FiniteGroup& G, Element z, Element x, Element y) {
    const Element zx = G.conj(z, x), zy = G.conj(z, y);
    return alpha.v3(z, x, y) + alpha.v3(zx, zy, z) - alpha.v3(zx, z, y);
}

/// The lift over z rho z^-1 obtained by transporting L along the constant gauge z.
inline GammaLift conjugate_lift(const GammaLift& L, Element z) {
    check_element(L.rep().group(), z);
    auto base = L;
    const TorusRep rho = L.rep();
    GammaLift out(rho.conjugated(z), L.alpha_ptr(), L.window(), GammaLift::Kind::Derived, L.bounded(), [base, rho, z](Vec2 a, Vec2 b) {
        return base(a, b) + conjugation_correction(base.alpha(), rho.group(), z, rho(a), rho(b));
    });
    certify(out, std::min(L.window(), kFormulaCertifyRadius), "conjugate_lift");
    return out;
}

}  // namespace dwline
