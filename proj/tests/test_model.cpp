#include "cdbeam/model.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace cdbeam;

TEST(DeriveConstants, PaperBeamHalfHeight005) {
    const auto p = derive_constants(1000.0, 0.3, 1.0, 0.05);
    EXPECT_NEAR(p.I, 8.33333e-5, 1e-10);
    EXPECT_NEAR(p.alpha, 0.1365, 1e-12);
    EXPECT_DOUBLE_EQ(p.EI(), 1000.0 * p.I);
}

TEST(DeriveConstants, PaperBeamHalfHeight01) {
    EXPECT_NEAR(derive_constants(1000.0, 0.3, 1.0, 0.1).I, 6.66667e-4, 1e-9);
}

TEST(DeriveConstants, ZeroPoissonRatio) {
    EXPECT_DOUBLE_EQ(derive_constants(7.0, 0.0, 2.0, 0.2).alpha, 3.0 * 0.2);
}

TEST(DeriveConstants, DoublingHScalesIAndAlpha) {
    for (double h : {0.01, 0.05, 0.3}) {
        const auto a = derive_constants(1000.0, 0.25, 1.0, h);
        const auto b = derive_constants(1000.0, 0.25, 1.0, 2.0 * h);
        EXPECT_NEAR(b.I / a.I, 8.0, 1e-12);
        EXPECT_NEAR(b.alpha / a.alpha, 2.0, 1e-12);
    }
}

TEST(DeriveConstants, RejectsNonPhysicalInput) {
    EXPECT_THROW(derive_constants(0.0, 0.3, 1.0, 0.05), DomainError);
    EXPECT_THROW(derive_constants(1000.0, 0.3, -1.0, 0.05), DomainError);
    EXPECT_THROW(derive_constants(1000.0, 0.3, 1.0, 0.0), DomainError);
    EXPECT_THROW(derive_constants(1000.0, 0.5, 1.0, 0.05), DomainError);
    EXPECT_THROW(derive_constants(1000.0, -0.1, 1.0, 0.05), DomainError);
}

TEST(SupportSpec, FixedDofSets) {
    const int m = 7;
    const auto ss = SupportSpec::simply_supported().fixed_dofs(m);
    EXPECT_EQ(std::set<int>(ss.begin(), ss.end()), (std::set<int>{0, 2 * m}));
    const auto cl = SupportSpec::clamped().fixed_dofs(m);
    EXPECT_EQ(std::set<int>(cl.begin(), cl.end()), (std::set<int>{0, 1, 2 * m, 2 * m + 1}));
    const auto cu = SupportSpec::custom({5, 0, 5}).fixed_dofs(m);
    EXPECT_EQ(cu, (std::vector<int>{0, 5}));
    EXPECT_THROW(SupportSpec::custom({2 * (m + 1)}).fixed_dofs(m), DomainError);
}

TEST(SupportSpec, MirrorSymmetry) {
    EXPECT_TRUE(SupportSpec::simply_supported().mirror_symmetric(10));
    EXPECT_TRUE(SupportSpec::clamped().mirror_symmetric(10));
    // Cantilever: clamped left end only.
    EXPECT_FALSE(SupportSpec::custom({0, 1}).mirror_symmetric(10));
}

TEST(Mesh, UniformSpacing) {
    const auto mesh = Mesh::uniform(1.0, 40);
    ASSERT_EQ(mesh.node_x.size(), 41u);
    for (int e = 0; e < mesh.m; ++e) EXPECT_NEAR(mesh.node_x[e + 1] - mesh.node_x[e], mesh.Le, 1e-15);
    EXPECT_DOUBLE_EQ(mesh.node_x.back(), 1.0);
    EXPECT_THROW(Mesh::uniform(1.0, 1), DomainError);
}

TEST(LoadCase, PointLoadNeedsCenterNode) {
    LoadCase load;
    load.lateral = CenterPointLoad{0.1};
    EXPECT_NO_THROW(validate_load(load, Mesh::uniform(1.0, 40)));
    EXPECT_THROW(validate_load(load, Mesh::uniform(1.0, 41)), DomainError);
    load.lateral = UniformLoad{0.1};
    EXPECT_NO_THROW(validate_load(load, Mesh::uniform(1.0, 41)));
    load.axial_lambda = -1e-3;
    EXPECT_THROW(validate_load(load, Mesh::uniform(1.0, 41)), DomainError);
}

TEST(SolverSettings, DefaultsAndResolution) {
    SolverSettings s;
    EXPECT_DOUBLE_EQ(s.outer_tol, 1e-8);
    EXPECT_EQ(s.outer_max_iter, 100);
    EXPECT_DOUBLE_EQ(s.sdp_tol, 1e-10);
    EXPECT_EQ(s.sdp_max_iter, 200);
    const auto r = s.resolved(999.0);
    EXPECT_DOUBLE_EQ(r.strictness_eps, 1e-8 * 1000.0);
    EXPECT_DOUBLE_EQ(r.classify_tol, 1e-9 * 1000.0);
    s.strictness_eps = 3.0;
    EXPECT_DOUBLE_EQ(s.resolved(999.0).strictness_eps, 3.0);
    s.outer_max_iter = 0;
    EXPECT_THROW(s.validate(), DomainError);
}
