#include <cmath>

#include "doctest.h"
#include "transit/halfpipe.hpp"
#include "transit/suite.hpp"

using namespace transit;
using Eigen::Matrix2d;

TEST_CASE("unit skew element rotates by one radian at I")
{
    CHECK(rot(skew_unit(), Matrix2d::Identity()) == doctest::Approx(1.0));
    HPPoint p{Matrix2d::Identity(), 0.25};
    HPPoint q = hp_act({Matrix2d::Identity(), 3.0 * skew_unit()}, p);
    CHECK(q.L == doctest::Approx(3.25));
    CHECK((q.base - Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("symmetric infinitesimal part does not move the fiber over I")
{
    Matrix2d a;
    a << 1.0, 0.5, 0.5, -1.0;
    HPPoint q = hp_act({Matrix2d::Identity(), a}, {Matrix2d::Identity(), 0.0});
    CHECK(std::abs(q.L) < 1e-15);
}

TEST_CASE("HP action is a group action, seeded")
{
    Rng rng(21);
    for (int k = 0; k < 200; ++k) {
        HPIsometry g = random_hp_isometry(rng), h = random_hp_isometry(rng);
        HPPoint p = random_hp_point(rng);
        GroupElem gh = hp_to_groupelem(g) * hp_to_groupelem(h);
        HPPoint a = hp_act(groupelem_to_hp(gh), p);
        HPPoint b = hp_act(g, hp_act(h, p));
        double scale = 1.0 + a.base.cwiseAbs().maxCoeff() + std::abs(a.L);
        CHECK((a.base - b.base).cwiseAbs().maxCoeff() / scale < 1e-10);
        CHECK(std::abs(a.L - b.L) / scale < 1e-10);
    }
}

TEST_CASE("HP point and model point round trip")
{
    Rng rng(22);
    for (int k = 0; k < 50; ++k) {
        HPPoint p = random_hp_point(rng);
        HPPoint q = hp_point_from_model(model_from_hp_point(p));
        CHECK((p.base - q.base).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(p.L - q.L) < 1e-12);
        CHECK(fiber_length_L(model_from_hp_point(p)) == doctest::Approx(p.L));
    }
}

TEST_CASE("isometry round trip and fiber flag")
{
    Rng rng(23);
    for (int k = 0; k < 50; ++k) {
        HPIsometry g = random_hp_isometry(rng);
        HPIsometry h = groupelem_to_hp(hp_to_groupelem(g));
        // equal up to the sign of the finite part
        double e = std::min((h.finite - g.finite).cwiseAbs().maxCoeff(), (h.finite + g.finite).cwiseAbs().maxCoeff());
        CHECK(e < 1e-12);
        CHECK((h.inf - g.inf).cwiseAbs().maxCoeff() < 1e-12);
        int flag = fiber_flag(to_projective(hp_to_groupelem(g)));
        CHECK(flag == (g.finite.determinant() > 0 ? 1 : -1));
    }
}
