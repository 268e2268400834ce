#pragma once

// U(1)-valued cocycles on finite groupoid presentations and the line bundles
// they describe. Values are additive in Q/Z.
//
// A morphism f: y -> x is stored with src = y, dst = x. Composition is written
// f o g ("g first"), defined when src(f) = dst(g), and a cocycle satisfies
//   R(f) + R(g) = R(f o g),   R(id_x) = 0.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "dwline/error.hpp"
#include "dwline/qz.hpp"

namespace dwline {

struct Morphism {
    std::size_t src = 0;
    std::size_t dst = 0;
    std::string label;
};

class GroupoidPresentation {
public:
    static constexpr std::size_t kUndefined = static_cast<std::size_t>(-1);

    /// partial = true allows composable pairs without a recorded composite
    /// (truncations of infinite quotients); laws are then checked where defined.
    GroupoidPresentation(std::size_t objects, std::vector<Morphism> morphisms, bool partial = false)
        : objects_(objects), morphisms_(std::move(morphisms)), partial_(partial), compose_(morphisms_.size() * morphisms_.size(), kUndefined) {
        for (std::size_t i = 0; i < morphisms_.size(); ++i) {
            const auto& m = morphisms_[i];
            if (m.src >= objects_ || m.dst >= objects_) throw InvalidInput("morphism '" + m.label + "' has an endpoint out of range");
            if (!by_label_.emplace(m.label, i).second) throw InvalidInput("duplicate morphism label '" + m.label + "'");
        }
    }

    std::size_t objects() const { return objects_; }
    std::size_t morphisms() const { return morphisms_.size(); }
    const Morphism& morphism(std::size_t i) const { return morphisms_.at(i); }
    bool partial() const { return partial_; }

    std::size_t index_of(const std::string& label) const {
        auto it = by_label_.find(label);
        if (it == by_label_.end()) throw InvalidInput("unknown morphism label '" + label + "'");
        return it->second;
    }

    /// Records f o g = h.
    void set_composite(std::size_t f, std::size_t g, std::size_t h) {
        if (f >= morphisms() || g >= morphisms() || h >= morphisms()) throw InvalidInput("composition refers to a missing morphism");
        const auto& mf = morphisms_[f];
        const auto& mg = morphisms_[g];
        const auto& mh = morphisms_[h];
        if (mf.src != mg.dst)
            throw InvalidInput("composition " + mf.label + " o " + mg.label + " is not composable (src " + std::to_string(mf.src) + " != dst " +
                               std::to_string(mg.dst) + ")");
        if (mh.src != mg.src || mh.dst != mf.dst)
            throw InvalidInput("composite " + mh.label + " of " + mf.label + " o " + mg.label + " has the wrong endpoints");
        std::size_t& slot = compose_[f * morphisms() + g];
        if (slot != kUndefined && slot != h) throw InvalidInput("composition " + mf.label + " o " + mg.label + " defined twice");
        slot = h;
    }

    std::optional<std::size_t> composite(std::size_t f, std::size_t g) const {
        const std::size_t h = compose_[f * morphisms() + g];
        if (h == kUndefined) return std::nullopt;
        return h;
    }

    /// Identity at x: the idempotent loop e o e = e.
    std::optional<std::size_t> identity(std::size_t x) const {
        for (std::size_t e = 0; e < morphisms(); ++e)
            if (morphisms_[e].src == x && morphisms_[e].dst == x && composite(e, e) == e) return e;
        return std::nullopt;
    }

    /// Checks the groupoid axioms; returns the list of violations (empty when valid).
    std::vector<std::string> structure_violations() const {
        std::vector<std::string> out;
        const std::size_t m = morphisms();
        std::vector<std::optional<std::size_t>> ids(objects_);
        for (std::size_t x = 0; x < objects_; ++x) {
            ids[x] = identity(x);
            if (!ids[x]) out.push_back("object " + std::to_string(x) + " has no identity");
        }
        for (std::size_t f = 0; f < m; ++f)
            for (std::size_t g = 0; g < m; ++g)
                if (!partial_ && morphisms_[f].src == morphisms_[g].dst && !composite(f, g))
                    out.push_back("composition " + morphisms_[f].label + " o " + morphisms_[g].label + " is missing");
        for (std::size_t f = 0; f < m; ++f) {
            const auto& mf = morphisms_[f];
            if (ids[mf.dst] && composite(*ids[mf.dst], f) && composite(*ids[mf.dst], f) != f)
                out.push_back("identity is not neutral on " + mf.label);
            if (ids[mf.src] && composite(f, *ids[mf.src]) && composite(f, *ids[mf.src]) != f)
                out.push_back("identity is not neutral on " + mf.label);
            if (!partial_ && ids[mf.src] && ids[mf.dst]) {
                bool invertible = false;
                for (std::size_t g = 0; g < m && !invertible; ++g)
                    invertible = composite(f, g) == ids[mf.dst] && composite(g, f) == ids[mf.src];
                if (!invertible) out.push_back("morphism " + mf.label + " has no inverse");
            }
        }
        for (std::size_t f = 0; f < m; ++f)
            for (std::size_t g = 0; g < m; ++g) {
                const auto fg = composite(f, g);
                if (!fg) continue;
                for (std::size_t h = 0; h < m; ++h) {
                    const auto gh = composite(g, h);
                    if (!gh) continue;
                    const auto left = composite(*fg, h), right = composite(f, *gh);
                    if (left && right && *left != *right)
                        out.push_back("composition is not associative on " + morphisms_[f].label + "," + morphisms_[g].label + "," + morphisms_[h].label);
                }
            }
        return out;
    }

    /// Connected component index of every object.
    std::vector<std::size_t> components() const {
        std::vector<std::size_t> parent(objects_);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        for (const auto& mor : morphisms_) parent[find(mor.src)] = find(mor.dst);
        std::map<std::size_t, std::size_t> label;
        std::vector<std::size_t> out(objects_);
        for (std::size_t x = 0; x < objects_; ++x) out[x] = label.emplace(find(x), label.size()).first->second;
        return out;
    }

private:
    std::size_t objects_;
    std::vector<Morphism> morphisms_;
    bool partial_;
    std::vector<std::size_t> compose_;
    std::unordered_map<std::string, std::size_t> by_label_;
};

using PresentationPtr = std::shared_ptr<const GroupoidPresentation>;

class GroupoidCocycle {
public:
    GroupoidCocycle(PresentationPtr presentation, std::vector<QZ> values) : presentation_(std::move(presentation)), values_(std::move(values)) {
        if (values_.size() != presentation_->morphisms()) throw DimensionError("groupoid cocycle needs one value per morphism");
    }
    static GroupoidCocycle zero(PresentationPtr p) {
        const std::size_t m = p->morphisms();
        return GroupoidCocycle(std::move(p), std::vector<QZ>(m));
    }

    const GroupoidPresentation& presentation() const { return *presentation_; }
    const PresentationPtr& presentation_ptr() const { return presentation_; }
    const QZ& operator()(std::size_t morphism) const { return values_.at(morphism); }
    const std::vector<QZ>& values() const { return values_; }

    /// R + d tau, (d tau)(f: y -> x) = tau(y) - tau(x).
    GroupoidCocycle plus_coboundary(const std::vector<QZ>& tau) const {
        if (tau.size() != presentation_->objects()) throw DimensionError("tau needs one value per object");
        std::vector<QZ> out = values_;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += tau[presentation_->morphism(i).src] - tau[presentation_->morphism(i).dst];
        return GroupoidCocycle(presentation_, std::move(out));
    }

    friend bool operator==(const GroupoidCocycle& a, const GroupoidCocycle& b) { return a.values_ == b.values_; }

private:
    PresentationPtr presentation_;
    std::vector<QZ> values_;
};

struct GroupoidCocycleReport {
    bool valid = true;
    std::size_t checked_compositions = 0;
    std::vector<std::string> violations;
};

/// Exhaustive check of additivity on every recorded composition and of normalization.
inline GroupoidCocycleReport validate_groupoid_cocycle(const GroupoidCocycle& R) {
    GroupoidCocycleReport rep;
    const auto& P = R.presentation();
    for (std::size_t x = 0; x < P.objects(); ++x) {
        const auto e = P.identity(x);
        if (e && !R(*e).is_zero()) rep.violations.push_back("R(id_" + std::to_string(x) + ") = " + R(*e).str() + " != 0");
    }
    for (std::size_t f = 0; f < P.morphisms(); ++f)
        for (std::size_t g = 0; g < P.morphisms(); ++g) {
            const auto h = P.composite(f, g);
            if (!h) continue;
            ++rep.checked_compositions;
            if (R(f) + R(g) != R(*h))
                rep.violations.push_back("R(" + P.morphism(f).label + ") + R(" + P.morphism(g).label + ") = " + (R(f) + R(g)).str() + " but R(" +
                                         P.morphism(*h).label + ") = " + R(*h).str());
        }
    rep.valid = rep.violations.empty();
    return rep;
}

/// Number of connected components on which R vanishes on every loop, i.e. on
/// which the line bundle admits a nonvanishing section.
inline std::size_t sections_dim_groupoid(const GroupoidCocycle& R) {
    const auto report = validate_groupoid_cocycle(R);
    if (!report.valid) throw InvalidInput("sections_dim_groupoid: invalid cocycle: " + report.violations.front());
    const auto& P = R.presentation();
    const auto comp = P.components();
    const std::size_t ncomp = P.objects() == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<bool> trivial(ncomp, true);
    for (std::size_t f = 0; f < P.morphisms(); ++f)
        if (P.morphism(f).src == P.morphism(f).dst && !R(f).is_zero()) trivial[comp[P.morphism(f).src]] = false;
    return static_cast<std::size_t>(std::count(trivial.begin(), trivial.end(), true));
}

/// R(f: y -> x) = -tau(x) + transport(f) + tau(y), from unit values tau per object
/// and transport values per morphism.
inline GroupoidCocycle cocycle_from_section(PresentationPtr P, const std::vector<QZ>& tau, const std::vector<QZ>& transport) {
    if (tau.size() != P->objects() || transport.size() != P->morphisms()) throw DimensionError("cocycle_from_section: size mismatch");
    for (std::size_t f = 0; f < P->morphisms(); ++f)
        for (std::size_t g = 0; g < P->morphisms(); ++g)
            if (const auto h = P->composite(f, g); h && transport[f] + transport[g] != transport[*h])
                throw InvalidInput("cocycle_from_section: transport is not functorial on " + P->morphism(f).label + " o " + P->morphism(g).label);
    std::vector<QZ> values(P->morphisms());
    for (std::size_t f = 0; f < P->morphisms(); ++f) values[f] = -tau[P->morphism(f).dst] + transport[f] + tau[P->morphism(f).src];
    return GroupoidCocycle(std::move(P), std::move(values));
}

// ---- equivariant assembly --------------------------------------------------

/// A right action of a group Gamma on a groupoid presentation, restricted to a
/// finite set of elements (the whole group, or a truncated word ball).
template <class Elem>
struct GroupoidAction {
    std::vector<Elem> elements;
    std::function<Elem(const Elem&, const Elem&)> multiply;
    std::function<std::size_t(std::size_t object, const Elem&)> act_object;       // x . g
    std::function<std::size_t(std::size_t morphism, const Elem&)> act_morphism;   // f . g
    std::function<std::string(const Elem&)> name;  // labels assembled morphisms; element index when unset
};

template <class Elem>
struct AssembledCocycle {
    GroupoidCocycle cocycle;
    /// For each assembled morphism: (underlying morphism f, index of g in elements).
    std::vector<std::pair<std::size_t, std::size_t>> parts;
};

/// Cocycle on the quotient presentation C // Gamma:
///   (R_Gamma . R)(f: y -> x.g, g) = R_Gamma(x, g) + R(f).
/// The composite of (f1, g1): y -> x and (f2, g2): z -> y is ((f1 . g2) o f2, g1 g2).
/// The result is validated; a failed law raises InvalidInput with the first violation.
template <class Elem>
AssembledCocycle<Elem> equivariant_assemble(const GroupoidCocycle& R, const std::function<QZ(std::size_t, const Elem&)>& r_gamma,
                                            const GroupoidAction<Elem>& action) {
    const auto base_report = validate_groupoid_cocycle(R);
    if (!base_report.valid) throw InvalidInput("equivariant_assemble: R is not a cocycle: " + base_report.violations.front());
    const auto& C = R.presentation();
    std::map<Elem, std::size_t> elem_index;
    for (std::size_t i = 0; i < action.elements.size(); ++i) elem_index.emplace(action.elements[i], i);

    std::vector<Morphism> mors;
    std::vector<std::pair<std::size_t, std::size_t>> parts;
    std::vector<QZ> values;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    for (std::size_t gi = 0; gi < action.elements.size(); ++gi) {
        const Elem& g = action.elements[gi];
        for (std::size_t x = 0; x < C.objects(); ++x) {
            const std::size_t xg = action.act_object(x, g);
            for (std::size_t f = 0; f < C.morphisms(); ++f) {
                if (C.morphism(f).dst != xg) continue;
                index.emplace(std::pair{f, gi}, mors.size());
                mors.push_back(Morphism{C.morphism(f).src, x, C.morphism(f).label + "@" + (action.name ? action.name(g) : std::to_string(gi))});
                parts.emplace_back(f, gi);
                values.push_back(r_gamma(x, g) + R(f));
            }
        }
    }
    bool closed = true;
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> comps;
    for (std::size_t i = 0; i < mors.size(); ++i)
        for (std::size_t j = 0; j < mors.size(); ++j) {
            if (mors[i].src != mors[j].dst) continue;
            const auto [f1, g1] = parts[i];
            const auto [f2, g2] = parts[j];
            const auto prod = elem_index.find(action.multiply(action.elements[g1], action.elements[g2]));
            if (prod == elem_index.end()) {
                closed = false;
                continue;
            }
            const std::size_t moved = action.act_morphism(f1, action.elements[g2]);
            const auto f = C.composite(moved, f2);
            if (!f) throw InvalidInput("equivariant_assemble: action does not respect composition (f . g o f' undefined)");
            const auto it = index.find({*f, prod->second});
            if (it == index.end()) throw InvalidInput("equivariant_assemble: composite lands outside the assembled presentation");
            comps.emplace_back(i, j, it->second);
        }
    auto P = std::make_shared<GroupoidPresentation>(C.objects(), std::move(mors), !closed);
    for (const auto& [i, j, k] : comps) P->set_composite(i, j, k);
    GroupoidCocycle out(P, std::move(values));
    const auto report = validate_groupoid_cocycle(out);
    if (!report.valid) throw InvalidInput("equivariant_assemble: assembled map is not a cocycle: " + report.violations.front());
    return AssembledCocycle<Elem>{std::move(out), std::move(parts)};
}

// ---- text format -----------------------------------------------------------
// "objects n", then "mor src dst label", "comp f g h" (h = f o g), and
// optional "cocycle label p/q" lines (unlisted morphisms carry 0). '#' starts a comment.

struct GroupoidFile {
    PresentationPtr presentation;
    GroupoidCocycle cocycle;
};

inline GroupoidFile parse_groupoid_text(std::istream& in) {
    std::optional<std::size_t> objects;
    std::vector<Morphism> mors;
    std::vector<std::array<std::string, 3>> comps;
    std::vector<std::pair<std::string, QZ>> vals;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) { throw InvalidInput("groupoid file line " + std::to_string(lineno) + ": " + why); };
    auto parse_index = [&](const std::string& s) -> std::size_t {
        std::size_t pos = 0;
        long long v = -1;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size() || v < 0) fail("bad integer '" + s + "'");
        return static_cast<std::size_t>(v);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty() || tok[0][0] == '#') continue;
        if (tok[0] == "objects" && tok.size() == 2) {
            objects = parse_index(tok[1]);
        } else if (tok[0] == "mor" && tok.size() == 4) {
            mors.push_back(Morphism{parse_index(tok[1]), parse_index(tok[2]), tok[3]});
        } else if (tok[0] == "comp" && tok.size() == 4) {
            comps.push_back({tok[1], tok[2], tok[3]});
        } else if (tok[0] == "cocycle" && tok.size() == 3) {
            vals.emplace_back(tok[1], QZ::parse(tok[2]));
        } else {
            fail("unrecognized line '" + line + "'");
        }
    }
    if (!objects) throw InvalidInput("groupoid file: missing 'objects n' line");
    auto P = std::make_shared<GroupoidPresentation>(*objects, std::move(mors));
    for (const auto& c : comps) P->set_composite(P->index_of(c[0]), P->index_of(c[1]), P->index_of(c[2]));
    std::vector<QZ> values(P->morphisms());
    for (const auto& [label, v] : vals) values[P->index_of(label)] = v;
    PresentationPtr shared = P;
    return GroupoidFile{shared, GroupoidCocycle(shared, std::move(values))};
}

inline std::string format_groupoid_text(const GroupoidCocycle& R) {
    const auto& P = R.presentation();
    std::ostringstream os;
    os << "objects " << P.objects() << "\n";
    for (std::size_t f = 0; f < P.morphisms(); ++f) os << "mor " << P.morphism(f).src << " " << P.morphism(f).dst << " " << P.morphism(f).label << "\n";
    for (std::size_t f = 0; f < P.morphisms(); ++f)
        for (std::size_t g = 0; g < P.morphisms(); ++g)
            if (const auto h = P.composite(f, g)) os << "comp " << P.morphism(f).label << " " << P.morphism(g).label << " " << P.morphism(*h).label << "\n";
    for (std::size_t f = 0; f < P.morphisms(); ++f)
        if (!R(f).is_zero()) os << "cocycle " << P.morphism(f).label << " " << R(f).str() << "\n";
    return os.str();
}

}  // namespace dwline
