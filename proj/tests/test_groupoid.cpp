#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dwline/groupoid.hpp"
#include "dwline/torus_line.hpp"

using namespace dwline;

namespace {

/// * // Z/2 with morphisms id, t.
PresentationPtr z2_point() {
    auto P = std::make_shared<GroupoidPresentation>(1, std::vector<Morphism>{{0, 0, "id"}, {0, 0, "t"}});
    P->set_composite(0, 0, 0);
    P->set_composite(0, 1, 1);
    P->set_composite(1, 0, 1);
    P->set_composite(1, 1, 0);
    return P;
}

/// Pair groupoid on k objects times the cyclic group Z/m: morphisms (x -> y, h),
/// composition adds the group labels.
struct RandomGroupoid {
    PresentationPtr P;
    std::size_t k, m;
    std::size_t index(std::size_t x, std::size_t y, std::size_t h) const { return (x * k + y) * m + h; }
};

RandomGroupoid pair_times_cyclic(std::size_t k, std::size_t m) {
    std::vector<Morphism> mors;
    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < k; ++y)
            for (std::size_t h = 0; h < m; ++h) mors.push_back({x, y, std::to_string(x) + ">" + std::to_string(y) + "#" + std::to_string(h)});
    auto P = std::make_shared<GroupoidPresentation>(k, std::move(mors));
    RandomGroupoid G{nullptr, k, m};
    for (std::size_t w = 0; w < k; ++w)
        for (std::size_t x = 0; x < k; ++x)
            for (std::size_t y = 0; y < k; ++y)
                for (std::size_t a = 0; a < m; ++a)
                    for (std::size_t b = 0; b < m; ++b) P->set_composite(G.index(x, y, a), G.index(w, x, b), G.index(w, y, (a + b) % m));
    G.P = P;
    return G;
}

/// Disjoint union of presentations, relabelling the second one.
PresentationPtr disjoint_union(const GroupoidPresentation& A, const GroupoidPresentation& B) {
    std::vector<Morphism> mors;
    for (std::size_t f = 0; f < A.morphisms(); ++f) mors.push_back(A.morphism(f));
    for (std::size_t f = 0; f < B.morphisms(); ++f)
        mors.push_back({B.morphism(f).src + A.objects(), B.morphism(f).dst + A.objects(), "b." + B.morphism(f).label});
    auto P = std::make_shared<GroupoidPresentation>(A.objects() + B.objects(), std::move(mors));
    for (std::size_t f = 0; f < A.morphisms(); ++f)
        for (std::size_t g = 0; g < A.morphisms(); ++g)
            if (auto h = A.composite(f, g)) P->set_composite(f, g, *h);
    const std::size_t off = A.morphisms();
    for (std::size_t f = 0; f < B.morphisms(); ++f)
        for (std::size_t g = 0; g < B.morphisms(); ++g)
            if (auto h = B.composite(f, g)) P->set_composite(f + off, g + off, *h + off);
    return P;
}

}  // namespace

TEST(Presentation, Z2PointIsAGroupoid) {
    const auto P = z2_point();
    EXPECT_TRUE(P->structure_violations().empty());
    EXPECT_EQ(P->identity(0), std::size_t{0});
}

TEST(Presentation, DetectsBrokenStructure) {
    auto P = std::make_shared<GroupoidPresentation>(1, std::vector<Morphism>{{0, 0, "id"}, {0, 0, "t"}});
    P->set_composite(0, 0, 0);
    P->set_composite(0, 1, 1);
    P->set_composite(1, 0, 1);
    EXPECT_FALSE(P->structure_violations().empty());  // t o t missing, t not invertible
    EXPECT_THROW(GroupoidPresentation(1, std::vector<Morphism>{{0, 1, "f"}}), InvalidInput);
    EXPECT_THROW(GroupoidPresentation(1, std::vector<Morphism>{{0, 0, "f"}, {0, 0, "f"}}), InvalidInput);
    auto Q = std::make_shared<GroupoidPresentation>(2, std::vector<Morphism>{{0, 1, "a"}, {0, 0, "e"}});
    EXPECT_THROW(Q->set_composite(0, 0, 0), InvalidInput);
}

TEST(Validate, Examples) {
    const auto P = z2_point();
    EXPECT_TRUE(validate_groupoid_cocycle(GroupoidCocycle(P, {QZ(), QZ(1, 2)})).valid);
    const auto bad = validate_groupoid_cocycle(GroupoidCocycle(P, {QZ(), QZ(1, 3)}));
    EXPECT_FALSE(bad.valid);
    EXPECT_FALSE(bad.violations.empty());
    EXPECT_TRUE(validate_groupoid_cocycle(GroupoidCocycle::zero(P)).valid);
    EXPECT_FALSE(validate_groupoid_cocycle(GroupoidCocycle(P, {QZ(1, 2), QZ(1, 2)})).valid);  // R(id) != 0
}

TEST(SectionsDim, Examples) {
    const auto P = z2_point();
    const GroupoidCocycle half(P, {QZ(), QZ(1, 2)});
    EXPECT_EQ(sections_dim_groupoid(half), 0u);
    EXPECT_EQ(sections_dim_groupoid(GroupoidCocycle::zero(P)), 1u);
    const auto U = disjoint_union(*P, *P);
    EXPECT_TRUE(U->structure_violations().empty());
    EXPECT_EQ(sections_dim_groupoid(GroupoidCocycle(U, {QZ(), QZ(1, 2), QZ(), QZ()})), 1u);
    EXPECT_THROW(sections_dim_groupoid(GroupoidCocycle(P, {QZ(), QZ(1, 3)})), InvalidInput);
}

TEST(CocycleFromSection, Examples) {
    const auto G = pair_times_cyclic(2, 2);
    const std::size_t m = G.P->morphisms();
    EXPECT_EQ(cocycle_from_section(G.P, {QZ(), QZ()}, std::vector<QZ>(m)), GroupoidCocycle::zero(G.P));
    const GroupoidCocycle R = cocycle_from_section(G.P, {QZ(1, 5), QZ(1, 5)}, std::vector<QZ>(m));
    EXPECT_EQ(R, GroupoidCocycle::zero(G.P));
    EXPECT_EQ(sections_dim_groupoid(R), 1u);
    std::vector<QZ> broken(m);
    broken[G.index(0, 1, 1)] = QZ(1, 7);
    EXPECT_THROW(cocycle_from_section(G.P, {QZ(), QZ()}, broken), InvalidInput);
}

TEST(RandomGroupoids, CocycleProperties) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::int64_t> num(0, 11);
    for (int trial = 0; trial < 200; ++trial) {
        // At most 4 objects and 12 morphisms: k^2 m <= 12.
        std::size_t k = 1 + rng() % 3, m;
        do m = 1 + rng() % 4;
        while (k * k * m > 12);
        const auto G = pair_times_cyclic(k, m);
        ASSERT_TRUE(G.P->structure_violations().empty());
        // R = d tau + character of Z/m.
        const QZ chi_gen = QZ(static_cast<std::int64_t>(rng() % m), static_cast<std::int64_t>(m));
        std::vector<QZ> tau(k), transport(G.P->morphisms());
        for (auto& t : tau) t = QZ(num(rng), 12);
        for (std::size_t x = 0; x < k; ++x)
            for (std::size_t y = 0; y < k; ++y)
                for (std::size_t h = 0; h < m; ++h) transport[G.index(x, y, h)] = chi_gen.scaled(static_cast<std::int64_t>(h));
        const GroupoidCocycle R = cocycle_from_section(G.P, tau, transport);
        ASSERT_TRUE(validate_groupoid_cocycle(R).valid);
        // Round trip: the line with transport R and trivial unit values gives back R.
        EXPECT_EQ(cocycle_from_section(G.P, std::vector<QZ>(k), R.values()), R);
        EXPECT_EQ(cocycle_from_section(G.P, tau, transport), GroupoidCocycle(G.P, transport).plus_coboundary(tau));
        // Sections: one component, trivial iff the character is.
        const std::size_t expected = chi_gen.is_zero() ? 1 : 0;
        EXPECT_EQ(sections_dim_groupoid(R), expected);
        // Coboundary invariance.
        std::vector<QZ> sigma(k);
        for (auto& s : sigma) s = QZ(num(rng), 12);
        const GroupoidCocycle R2 = R.plus_coboundary(sigma);
        EXPECT_TRUE(validate_groupoid_cocycle(R2).valid);
        EXPECT_EQ(sections_dim_groupoid(R2), expected);
        // Perturbing a single value breaks the cocycle law.
        std::vector<QZ> broken = R.values();
        broken[rng() % broken.size()] += QZ(1, 13);
        EXPECT_FALSE(validate_groupoid_cocycle(GroupoidCocycle(G.P, broken)).valid);
    }
}

TEST(TextFormat, RoundTripAndErrors) {
    const auto G = pair_times_cyclic(2, 3);
    std::vector<QZ> transport(G.P->morphisms());
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t h = 0; h < 3; ++h) transport[G.index(x, y, h)] = QZ(static_cast<std::int64_t>(h), 3);
    const GroupoidCocycle R = cocycle_from_section(G.P, {QZ(1, 4), QZ()}, transport);
    std::istringstream in(format_groupoid_text(R));
    const GroupoidFile f = parse_groupoid_text(in);
    EXPECT_EQ(f.presentation->objects(), 2u);
    EXPECT_EQ(f.cocycle.values(), R.values());
    EXPECT_TRUE(f.presentation->structure_violations().empty());

    std::istringstream missing("mor 0 0 id\n");
    EXPECT_THROW(parse_groupoid_text(missing), InvalidInput);
    std::istringstream unknown("objects 1\nmor 0 0 id\ncomp id id nope\n");
    EXPECT_THROW(parse_groupoid_text(unknown), InvalidInput);
    std::istringstream junk("objects 1\nwhat is this\n");
    EXPECT_THROW(parse_groupoid_text(junk), InvalidInput);
}

TEST(EquivariantAssemble, CharacterOnTrivialAction) {
    const auto P = std::make_shared<GroupoidPresentation>(1, std::vector<Morphism>{{0, 0, "id"}});
    P->set_composite(0, 0, 0);
    GroupoidAction<int> act;
    act.elements = {0, 1, 2};
    act.multiply = [](int a, int b) { return (a + b) % 3; };
    act.act_object = [](std::size_t x, int) { return x; };
    act.act_morphism = [](std::size_t f, int) { return f; };
    const std::function<QZ(std::size_t, const int&)> chi = [](std::size_t, const int& g) { return QZ(g, 3); };
    const auto out = equivariant_assemble(GroupoidCocycle::zero(P), chi, act);
    EXPECT_TRUE(out.cocycle.presentation().structure_violations().empty());
    ASSERT_EQ(out.cocycle.values().size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(out.cocycle(i), QZ(static_cast<std::int64_t>(out.parts[i].second), 3));

    const std::function<QZ(std::size_t, const int&)> not_a_character = [](std::size_t, const int& g) { return g == 1 ? QZ(1, 3) : QZ(); };
    EXPECT_THROW(equivariant_assemble(GroupoidCocycle::zero(P), not_a_character, act), InvalidInput);
}

TEST(EquivariantAssemble, ZeroRGammaReproducesR) {
    const auto P = z2_point();
    const GroupoidCocycle R(P, {QZ(), QZ(1, 2)});
    GroupoidAction<int> act;
    act.elements = {0, 1};
    act.multiply = [](int a, int b) { return (a + b) % 2; };
    act.act_object = [](std::size_t x, int) { return x; };
    act.act_morphism = [](std::size_t f, int) { return f; };
    const std::function<QZ(std::size_t, const int&)> zero = [](std::size_t, const int&) { return QZ(); };
    const auto out = equivariant_assemble(R, zero, act);
    for (std::size_t i = 0; i < out.parts.size(); ++i) EXPECT_EQ(out.cocycle(i), R(out.parts[i].first));
}

TEST(EquivariantAssemble, TorusLineUnderPowersOfT2) {
    const auto z2 = share(cyclic_group(2));
    const TorusLine line = torus_line(z2, share(alpha_cyclic(2, 1)));
    std::vector<SL2Z> powers;
    for (int k = -2; k <= 2; ++k) powers.push_back(SL2Z::T().pow(2 * k));
    const auto out = equivariant_assemble<SL2Z>(line.cocycle, torus_r_gamma(line), torus_sl2z_action(line, powers));
    EXPECT_TRUE(validate_groupoid_cocycle(out.cocycle).valid);
    EXPECT_GT(validate_groupoid_cocycle(out.cocycle).checked_compositions, 0u);
}

TEST(EquivariantAssemble, TorusLineUnderSL2ZBall) {
    for (long long level : {0, 1}) {
        const auto z2 = share(cyclic_group(2));
        const TorusLine line = torus_line(z2, share(alpha_cyclic(2, level)));
        const auto out = equivariant_assemble<SL2Z>(line.cocycle, torus_r_gamma(line), torus_sl2z_action(line, sl2z_ball(3)));
        EXPECT_TRUE(validate_groupoid_cocycle(out.cocycle).valid);
    }
}
