#include <cmath>

#include "doctest.h"
#include "transit/errors.hpp"
#include "transit/scenarios.hpp"

using namespace transit;
using Eigen::Matrix2d;

namespace {

double closed_form_phi(int m)
{
    double c = 1.0 / std::tan(M_PI / m);
    return -std::sqrt(2.0) * m * std::sqrt(c * c - 1);
}

} // namespace

TEST_CASE("torus family against the printed matrices")
{
    TorusSummary s = torus_scenario({-0.1, -0.01, 0.0, 0.01, 0.1});
    CHECK(s.matrix_error < 1e-12);
    CHECK(s.hp_limit_error < 1e-12);
    CHECK(s.commutator_order == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(s.angle_rate == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(s.mass_rate == doctest::Approx(-2.0).epsilon(1e-6));
    REQUIRE(s.report.size() == 5);
    CHECK(s.report[0].kind == "tachyon_mass");
    CHECK(s.report[2].kind == "inf_cone_angle");
    CHECK(s.report[2].value == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(s.report[4].kind == "cone_angle");
    // oracle: trace of the 3x3 commutator built from the printed matrices,
    // angle = 2pi - acos((tr - 1)/2), |mass| = acosh((tr - 1)/2)
    CHECK(s.report[4].value == doctest::Approx(6.08335110394539).epsilon(1e-13));
    CHECK(s.report[3].value == doctest::Approx(6.263185473837531).epsilon(1e-13));
    CHECK(s.report[0].value == doctest::Approx(-0.20016754683590593).epsilon(1e-12));
    CHECK(s.report[1].value == doctest::Approx(-0.020000166675447004).epsilon(1e-10));
    for (const auto& row : s.report) CHECK(row.residual < 1e-12);
    CHECK_THROWS_AS(torus_rep(0.0), ContractError);
}

TEST_CASE("torus rescaled b entries")
{
    for (double t : {0.3, -0.3}) {
        TorusMatrices e = torus_expected(t);
        CHECK(e.b.determinant() == doctest::Approx(1.0));
        CHECK(e.b_rescaled(2, 0) == 1.0);
        CHECK(e.a(0, 0) == 3.0);
    }
}

TEST_CASE("2mm construction, m = 5..12")
{
    for (int m = 5; m <= 12; ++m) {
        TwoMMReport r = build_2mm(m, 1.0);
        CHECK(r.max_residual() < 1e-10);
        CHECK(r.phi == doctest::Approx(closed_form_phi(m)).epsilon(1e-12));
        CHECK(r.l2_between);
        CHECK(r.l4_between);
        CHECK(build_2mm(m, 1.0, 0.1).max_residual() > 1e-4);
    }
}

TEST_CASE("2mm frozen values at m = 5 and m = 6")
{
    TwoMMReport r5 = build_2mm(5, 1.0);
    CHECK(r5.x == doctest::Approx(1.237991838473).epsilon(1e-10));
    CHECK(r5.R == doctest::Approx(0.842482081462).epsilon(1e-10));
    CHECK(r5.phi == doctest::Approx(-6.687403049764).epsilon(1e-11));
    double f5[4] = {3.7851, -3.0969, -9.9788, 0.3441};
    for (int i = 0; i < 4; ++i) CHECK(r5.fibers[i] == doctest::Approx(f5[i]).epsilon(1e-4));
    TwoMMReport r6 = build_2mm(6, 1.0);
    double s3 = std::sqrt(3.0);
    double f6[4] = {3.5 * s3, -2.5 * s3, -14.7224, s3 / 2};
    for (int i = 0; i < 4; ++i) CHECK(r6.fibers[i] == doctest::Approx(f6[i]).epsilon(1e-4));
    CHECK(infinitesimal_cone_angle(r5.rho_hp, {kMu}, twomm_longitude()) == doctest::Approx(r5.phi).epsilon(1e-10));
}

TEST_CASE("2mm theta_dot scales phi linearly")
{
    TwoMMReport a = build_2mm(7, 1.0), b = build_2mm(7, 2.5);
    CHECK(b.phi == doctest::Approx(2.5 * a.phi).epsilon(1e-10));
    CHECK(b.max_residual() < 1e-10);
}

TEST_CASE("2mm m < 5 has no right-angled polygon")
{
    CHECK_THROWS_AS(build_2mm(4, 1.0), RightAngleImpossible);
}

TEST_CASE("2mm regeneration at m = 5")
{
    TwoMMReport r = build_2mm(5, 1.0);
    TwoMMTransition tr = transition_2mm(r, {-1e-3, 0.0, 1e-3});
    CHECK(tr.h1.z1 == 4);
    CHECK(tr.h1.b1 == 3);
    CHECK(tr.h1.h1 == 1);
    REQUIRE(tr.report.size() == 3);
    CHECK(tr.report[0].kind == "tachyon_mass");
    CHECK(tr.report[0].value == doctest::Approx(r.phi * -1e-3).epsilon(1e-9));
    CHECK(tr.report[1].value == doctest::Approx(r.phi));
    CHECK(tr.report[2].kind == "cone_angle");
    CHECK(tr.report[2].value == doctest::Approx(6.276497904130).epsilon(1e-11));
    for (const auto& row : tr.report) CHECK(row.residual < 1e-12);
    CHECK(classification(tr.report[0].tag) == "AdS");
    CHECK(classification(tr.report[1].tag) == "HP");
    CHECK(classification(tr.report[2].tag) == "Hyperbolic");

    auto [hyp, ads] = twomm_compatibility(r);
    CHECK(hyp.passed);
    CHECK(ads.passed);
    CHECK(hyp.order > 1.5);
    CHECK(ads.order > 1.5);
}

TEST_CASE("Borromean branches")
{
    const double l0 = rectangular_length();
    CHECK(l0 == doctest::Approx(2 * std::asinh(1.0)).epsilon(1e-15));
    BorromeanRep t = borromean_rep(2.5, 3.0, Branch::T);
    CHECK(t.x == 0.0);
    CHECK(relation_residual(t.rep) < 1e-12);
    BorromeanRep r = borromean_rep(2.0, 2.2, Branch::R);
    CHECK(r.x == doctest::Approx(0.234959753057).epsilon(1e-10));
    CHECK(relation_residual(r.rep) < 1e-12);
    CHECK(std::abs(borromean_rep(l0, l0, Branch::R).x) < 1e-15);
    CHECK_THROWS_AS(borromean_rep(0.5, 0.5, Branch::T), NoParabolicAngle);
    CHECK_THROWS_AS(branch_from_string("Q"), InputError);
    // the peripheral commutator is parabolic
    GroupElem p = evaluate_word(r.rep, borromean_peripheral());
    BElem tr = trace(p.mat());
    CHECK(std::abs(std::abs(tr.re) - 2) < 1e-12);
}

TEST_CASE("Borromean tangent directions differ only in rho(c)")
{
    BorromeanTangents tg = borromean_tangents();
    REQUIRE(tg.v.values.size() == 3);
    for (int i = 0; i < 2; ++i) CHECK((tg.v.values[i] - tg.u.values[i]).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(tg.v.values[2](0, 1) == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(tg.u.values[2].cwiseAbs().maxCoeff() < 1e-9);
    CHECK(cocycle_defect(borromean_presentation(), tg.v) < 1e-8);
    CHECK(cocycle_defect(borromean_presentation(), tg.u) < 1e-8);
}

TEST_CASE("Borromean flexibility")
{
    FlexReport f0 = borromean_flexibility(0.0, {-1e-3, 0.0, 1e-3});
    REQUIRE(f0.rows.size() == 3);
    CHECK(f0.rows[0].residual < 1e-12);
    CHECK(f0.rows[1].residual < 1e-12);
    CHECK(f0.rows[2].converged);
    CHECK_FALSE(f0.rows[2].obstructed);
    CHECK(f0.rows[2].attempts.size() == 15);

    FlexReport f1 = borromean_flexibility(0.1, {-1e-3, 1e-3});
    CHECK(f1.rows[0].residual < 1e-9);
    CHECK(f1.rows[1].obstructed);
    for (const FlexAttempt& a : f1.rows[1].attempts) CHECK(a.residual > 1e-6);
    CHECK(relation_residual(borromean_ads(0.1, -1e-3)) < 1e-9);
}

TEST_CASE("t_grid")
{
    std::vector<double> g = t_grid(-0.1, 0.1, 5), want{-0.1, -0.05, 0.0, 0.05, 0.1};
    REQUIRE(g.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(g[i] == doctest::Approx(want[i]).epsilon(1e-15));
    CHECK(g[2] == 0.0);
    CHECK(t_grid(1.0, 2.0, 1) == std::vector<double>{1.0});
    CHECK(t_grid(1.0, 2.0, 0).empty());
    CHECK_THROWS_AS(t_grid(1.0, 0.0, 3), InputError);
}
