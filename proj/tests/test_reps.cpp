#include <cmath>

#include "doctest.h"
#include "transit/errors.hpp"
#include "transit/reps.hpp"
#include "transit/suite.hpp"

using namespace transit;
using Eigen::Matrix2d;

namespace {

Matrix2d rotation(double half)
{
    Matrix2d g;
    g << std::cos(half), -std::sin(half), std::sin(half), std::cos(half);
    return g;
}

} // namespace

TEST_CASE("word helpers")
{
    CHECK(free_reduce({1, 2, -2, -1, 3}) == Word{3});
    CHECK(free_reduce({1, -1, 2, -2}).empty());
    CHECK(inverse_word({1, -2, 3}) == Word{-3, 2, -1});
    CHECK(power_word({1, 2}, 2) == Word{1, 2, 1, 2});
    CHECK(power_word({1, 2}, -1) == Word{-2, -1});
    CHECK(commutator_word({1}, {2}) == Word{1, 2, -1, -2});
    CHECK(concat({{1}, {}, {2, 3}}) == Word{1, 2, 3});
}

TEST_CASE("evaluate_word multiplies left to right")
{
    Rng rng(31);
    std::vector<Matrix2d> im{random_sl2(rng), random_sl2(rng)};
    Matrix2d w = evaluate_word_real(im, {1, -2, 1});
    CHECK((w - im[0] * im[1].inverse() * im[0]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cocycle extension obeys z(ab) = z(a) + Ad(a) z(b)")
{
    Rng rng(32);
    Cocycle z{{random_sl2(rng), random_sl2(rng)}, {random_traceless(rng), random_traceless(rng)}};
    Matrix2d lhs = cocycle_extend(z, {1, 2});
    Matrix2d rhs = z.values[0] + Ad(z.base[0], z.values[1]);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    // z(a^-1) = -Ad(a^-1) z(a)
    Matrix2d inv = cocycle_extend(z, {-1});
    CHECK((inv + Ad(z.base[0].inverse(), z.values[0])).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sl2_coords(sl2_from_coords(Eigen::Vector3d(1, 2, 3))).isApprox(Eigen::Vector3d(1, 2, 3)));
}

TEST_CASE("free group of rank 2 at an irreducible point has h1 = 3")
{
    Rng rng(33);
    Presentation f2{{"a", "b"}, {}};
    CohomologyReport r = h1_dimension(f2, {random_sl2(rng), random_sl2(rng)});
    CHECK(r.z1 == 6);
    CHECK(r.b1 == 3);
    CHECK(r.h1 == 3);
}

TEST_CASE("order-m elliptic: Z1 = B1 = 2")
{
    // sum_k Ad(g^k) is m times the projection onto the rotation axis.
    for (int m : {3, 5, 7}) {
        Presentation zm{{"g"}, {power_word({1}, m)}};
        std::vector<double> sv;
        auto z1 = cocycle_space(zm, {rotation(M_PI / m)}, &sv);
        CHECK(z1.size() == 2);
        CHECK(sv[0] == doctest::Approx(double(m)));
        CohomologyReport r = h1_dimension(zm, {rotation(M_PI / m)});
        CHECK(r.b1 == 2);
        CHECK(r.h1 == 0);
    }
}

TEST_CASE("coboundaries are cocycles, seeded")
{
    Rng rng(34);
    Presentation p{{"a", "b"}, {power_word({1, 2}, 3)}};
    for (int k = 0; k < 20; ++k) {
        Matrix2d a = random_sl2(rng, 0.5);
        std::vector<Matrix2d> base{a, a.inverse() * rotation(M_PI / 3)};
        CHECK(cocycle_defect(p, coboundary(base, random_traceless(rng))) < 1e-12);
        for (const Cocycle& b : coboundary_space(p, base)) CHECK(cocycle_defect(p, b) < 1e-12);
    }
}

TEST_CASE("numeric rank refuses an unclear gap")
{
    Eigen::VectorXd sv(3);
    sv << 1.0, 1e-7, 1e-9;
    CHECK_THROWS_AS(numeric_rank(sv, 3), AmbiguousRank);
    sv << 1.0, 0.5, 1e-14;
    CHECK(numeric_rank(sv, 3) == 2);
}

TEST_CASE("HP representation from a cocycle and back")
{
    Rng rng(35);
    Presentation f2{{"a", "b"}, {}};
    Cocycle z{{random_sl2(rng), random_sl2(rng)}, {random_traceless(rng), random_traceless(rng)}};
    Representation hp = hp_from_cocycle(f2, z);
    CHECK(hp.tag.s == 0.0);
    Cocycle back = cocycle_from_hp(hp);
    for (int i = 0; i < 2; ++i) {
        double e = std::min((back.base[i] - z.base[i]).cwiseAbs().maxCoeff(), (back.base[i] + z.base[i]).cwiseAbs().maxCoeff());
        CHECK(e < 1e-12);
        CHECK((back.values[i] - z.values[i]).cwiseAbs().maxCoeff() < 1e-12);
    }
    // a non-cocycle is refused on a presentation with relators
    Presentation zm{{"g"}, {power_word({1}, 3)}};
    Cocycle bad{{rotation(M_PI / 3)}, {sl2_from_coords(Eigen::Vector3d(0, 1, -1))}};
    CHECK_THROWS_AS(hp_from_cocycle(zm, bad), ContractError);
}

TEST_CASE("Newton projection meets trace constraints")
{
    Rng rng(36);
    AlgebraTag t{1.0};
    Presentation f2{{"a", "b"}, {}};
    std::vector<Mat2B> guess{Mat2B(t, random_sl2(rng), 1e-2 * random_traceless(rng)),
                             Mat2B(t, random_sl2(rng), 1e-2 * random_traceless(rng))};
    std::vector<TraceConstraint> c{{{1}, 2 * std::cosh(1.0), 0.3}, {{1, 2}, -3.0, 0.0}};
    NewtonResult r = newton_project(f2, guess, {}, c);
    REQUIRE(r.converged);
    CHECK(r.residual < 1e-12);
    BElem ta = trace(r.images[0]), tab = trace(r.images[0] * r.images[1]);
    double sa = std::abs(ta.re - 2 * std::cosh(1.0)) < 1e-9 ? 1.0 : -1.0;
    CHECK(std::abs(sa * ta.re - 2 * std::cosh(1.0)) < 1e-10);
    CHECK(std::abs(sa * ta.im - 0.3) < 1e-10);
    CHECK(std::abs(std::abs(tab.re) - 3.0) < 1e-10);
}

TEST_CASE("Gauss-Newton on a small square system")
{
    auto F = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd r(2);
        r << x(0) * x(0) + x(1) * x(1) - 2.0, x(0) - x(1);
        return r;
    };
    NewtonOptions opt;
    VectorSolveResult r = gauss_newton(F, Eigen::Vector2d(2.0, 0.5), opt);
    CHECK(r.converged);
    CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rotation angle and tachyon mass of model elements")
{
    const double theta = 0.8, mass = 0.6;
    AlgebraTag h{1.0}, a{-1.0};
    // exp(theta/2 kappa) diag: rotation by theta about a line
    Mat2B r(h, Eigen::Vector2d(std::cos(theta / 2), std::cos(theta / 2)).asDiagonal(),
            Eigen::Vector2d(std::sin(theta / 2), -std::sin(theta / 2)).asDiagonal());
    Projective pr = to_projective(GroupElem(r));
    RotationResult rr = rotation_angle(pr, h);
    CHECK(rr.elliptic);
    CHECK(std::abs(rr.angle) == doctest::Approx(theta));

    Mat2B b(a, Eigen::Vector2d(std::cosh(mass / 2), std::cosh(mass / 2)).asDiagonal(),
            Eigen::Vector2d(std::sinh(mass / 2), -std::sinh(mass / 2)).asDiagonal());
    Projective pb = to_projective(GroupElem(b));
    CHECK(std::abs(tachyon_mass(pb, a, fixed_axis(pb, a))) == doctest::Approx(mass));
}

TEST_CASE("model cone generators")
{
    const double omega = 1.3, d = 0.4, mu = 0.2, t = 1e-3;
    auto [m, l] = model_cone_generators(Geometry::Hyp, omega, d, mu, t);
    RotationResult rr = rotation_angle(m, AlgebraTag{1.0});
    CHECK(std::abs(rr.angle) == doctest::Approx(omega * t).epsilon(1e-9));
    auto [ma, la] = model_cone_generators(Geometry::AdS, omega, d, mu, t);
    CHECK(std::abs(tachyon_mass(ma, AlgebraTag{-1.0}, fixed_axis(ma, AlgebraTag{-1.0}))) ==
          doctest::Approx(omega * t).epsilon(1e-9));
    (void)l;
    (void)la;
}

TEST_CASE("idempotent combine splits into the two real images")
{
    Rng rng(37);
    Matrix2d P = random_sl2(rng), Q = random_sl2(rng);
    AlgebraTag t{-0.5};
    Mat2B c = idempotent_combine(P, Q, t);
    // components along e+ and e-: re +- |s| im
    CHECK((c.re + 0.5 * c.im - P).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((c.re - 0.5 * c.im - Q).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("representation JSON round trip and malformed input")
{
    Rng rng(38);
    Presentation f2{{"a", "b"}, {{1, 2, -1, -2}}};
    Representation r{f2, AlgebraTag{-1.0}, 3, {random_groupelem(AlgebraTag{-1.0}, rng), random_groupelem(AlgebraTag{-1.0}, rng)}};
    Representation back = representation_from_json(to_json(r));
    CHECK(back.tag.s == -1.0);
    CHECK(back.pres.relators == f2.relators);
    for (int i = 0; i < 2; ++i) CHECK(group_distance(back.images[i], r.images[i]) < 1e-14);
    CHECK_THROWS_AS(representation_from_json(nlohmann::json::parse("{\"dim\": 3}")), InputError);
    CHECK_THROWS_AS(representation_from_json(nlohmann::json::parse("[1,2]")), InputError);
}
