#pragma once

// The line over genus-1 moduli as a groupoid cocycle: the action groupoid
// Hom(Z^2, G) // G with R(rho, z), made SL2(Z)-equivariant by r_diff.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dwline/groupoid.hpp"
#include "dwline/lift.hpp"
#include "dwline/moduli.hpp"

namespace dwline {

struct TorusLine {
    std::vector<TorusRep> reps;           // object i
    std::vector<GammaLift> lifts;         // normalized lift of reps[i]
    std::vector<std::pair<std::size_t, Element>> morphisms;  // (target object, z)
    GroupoidCocycle cocycle;

    std::size_t object_of(const TorusRep& r) const {
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (reps[i] == r) return i;
        throw InvalidInput("representation is not an object of the torus groupoid");
    }
};

/// Objects: commuting pairs. Morphisms (rho, z): z rho z^-1 -> rho, with
/// (rho, z2) o (z2 rho z2^-1, z1) = (rho, z1 z2). Lifts use the given window.
inline TorusLine torus_line(const GroupPtr& G, const CochainPtr& alpha, long long window = 2) {
    require_cocycle_for(*alpha, *G);
    std::vector<TorusRep> reps;
    std::vector<GammaLift> lifts;
    for (const auto& s : enumerate_bundles(G, 1)) {
        reps.push_back(s.torus());
        lifts.push_back(lift_gamma(reps.back(), alpha, window, LiftPath::Auto, false));
    }
    auto object_of = [&](const TorusRep& r) {
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (reps[i] == r) return i;
        throw InternalError("torus_line: conjugate representation missing");
    };
    const std::size_t n = G->order();
    std::vector<Morphism> mors;
    std::vector<std::pair<std::size_t, Element>> parts;
    std::vector<QZ> values;
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (Element z = 0; z < n; ++z) {
            mors.push_back(Morphism{object_of(reps[i].conjugated(z)), i, "r" + std::to_string(i) + "z" + std::to_string(z)});
            parts.emplace_back(i, z);
            values.push_back(conjugate_lift(lifts[i], z).fundamental_pairing());
        }
    auto P = std::make_shared<GroupoidPresentation>(reps.size(), std::move(mors));
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (Element z2 = 0; z2 < n; ++z2) {
            const std::size_t j = object_of(reps[i].conjugated(z2));
            for (Element z1 = 0; z1 < n; ++z1) P->set_composite(i * n + z2, j * n + z1, i * n + G->mul(z1, z2));
        }
    PresentationPtr shared = P;
    return TorusLine{std::move(reps), std::move(lifts), std::move(parts), GroupoidCocycle(shared, std::move(values))};
}

/// SL2(Z) acting on the right of the torus groupoid, restricted to a finite set of matrices.
inline GroupoidAction<SL2Z> torus_sl2z_action(const TorusLine& line, std::vector<SL2Z> elements) {
    GroupoidAction<SL2Z> act;
    act.elements = std::move(elements);
    act.multiply = [](const SL2Z& a, const SL2Z& b) { return a * b; };
    act.act_object = [&line](std::size_t x, const SL2Z& A) { return line.object_of(sl2z_act(line.reps[x], A)); };
    act.act_morphism = [&line](std::size_t f, const SL2Z& A) {
        const std::size_t n = line.reps.front().group().order();
        const auto [x, z] = line.morphisms[f];
        return line.object_of(sl2z_act(line.reps[x], A)) * n + z;
    };
    act.name = [](const SL2Z& A) { return A.str(); };
    return act;
}

/// R_Gamma(x, A) = r_diff of the stored lift of object x.
inline std::function<QZ(std::size_t, const SL2Z&)> torus_r_gamma(const TorusLine& line) {
    return [&line](std::size_t x, const SL2Z& A) { return r_diff_with_lift(line.lifts[x], A); };
}

}  // namespace dwline
