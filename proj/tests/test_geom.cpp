#include <cmath>
#include <complex>

#include "doctest.h"
#include "transit/errors.hpp"
#include "transit/geom.hpp"
#include "transit/suite.hpp"

using namespace transit;
using Eigen::Matrix2d;
using Eigen::MatrixXd;

namespace {

using CMat = Eigen::Matrix2cd;

// B_1 as the complex numbers with kappa = i.
CMat as_complex(const Mat2B& m) { return m.re.cast<std::complex<double>>() + std::complex<double>(0, 1) * m.im; }

double proj_diff(const MatrixXd& a, const MatrixXd& b)
{
    return std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff());
}

} // namespace

TEST_CASE("exp_traceless matches the Taylor series over the complex numbers")
{
    Rng rng(11);
    AlgebraTag t{1.0};
    for (int k = 0; k < 20; ++k) {
        Mat2B x(t, random_traceless(rng, 0.8), random_traceless(rng, 0.8));
        CMat X = as_complex(x), term = CMat::Identity(), sum = CMat::Identity();
        for (int n = 1; n < 60; ++n) {
            term = term * X / double(n);
            sum += term;
        }
        CHECK((as_complex(exp_traceless(x)) - sum).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("exp_traceless over the dual numbers is I + X at first order")
{
    AlgebraTag hp{0.0};
    Matrix2d a;
    a << 0.3, 1.0, -2.0, -0.3;
    Mat2B e = exp_traceless(Mat2B(hp, Matrix2d::Zero(), a));
    CHECK((e.re - Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((e.im - a).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("inverse and determinant, seeded")
{
    Rng rng(12);
    for (double s : {1.0, 0.0, -1.0}) {
        AlgebraTag t{s};
        for (int k = 0; k < 100; ++k) {
            GroupElem g = random_groupelem(t, rng);
            Mat2B p = g.mat() * inverse(g.mat());
            CHECK(max_abs(p - Mat2B::identity(t)) < 1e-10);
            BElem d = det(g.mat());
            CHECK(std::abs(std::abs(d.re) - 1) < 1e-10);
            CHECK(std::abs(d.im) < 1e-10);
        }
    }
}

TEST_CASE("GroupElem forgets scalar multiples")
{
    Rng rng(13);
    for (double s : {1.0, 0.5, 0.0, -0.5}) {
        AlgebraTag t{s};
        GroupElem g = random_groupelem(t, rng);
        BElem c = s == 0.0 ? BElem{-2.0, 0.7, t} : (s > 0 ? BElem{0.4, -1.3, t} : BElem{2.0, 0.3, t});
        GroupElem h(c * g.mat());
        CHECK(group_distance(g, h) < 1e-12);
    }
}

TEST_CASE("real diagonal element is a boost in the x1-x2 plane")
{
    const double l = 0.9;
    Matrix2d d = Eigen::Vector2d(std::exp(l / 2), std::exp(-l / 2)).asDiagonal();
    MatrixXd want = MatrixXd::Identity(4, 4);
    want(0, 0) = want(1, 1) = std::cosh(l);
    want(0, 1) = want(1, 0) = std::sinh(l);
    for (double s : {1.0, 0.0, -1.0}) {
        Projective p = to_projective(GroupElem(Mat2B::real(AlgebraTag{s}, d)));
        CHECK(proj_diff(p.m, want) < 1e-14);
    }
}

TEST_CASE("projective image agrees with the Hermitian action, seeded")
{
    Rng rng(14);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double s : {1.0, 0.0, -1.0}) {
        AlgebraTag t{s};
        for (int k = 0; k < 50; ++k) {
            GroupElem g = random_groupelem(t, rng);
            ModelPoint p{t, Eigen::Vector4d(n(rng), n(rng), n(rng), n(rng))};
            Eigen::Vector4d a = act(g, p).x;
            Eigen::VectorXd b = to_projective(g).m * p.x;
            double scale = 1.0 + b.cwiseAbs().maxCoeff();
            CHECK(std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff()) / scale < 1e-10);
        }
    }
}

TEST_CASE("herm and from_herm are inverse")
{
    ModelPoint p{AlgebraTag{-0.5}, Eigen::Vector4d(1.2, -0.3, 0.4, 2.0)};
    CHECK((from_herm(herm(p)).x - p.x).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(herm_inner(p, p) == doctest::Approx(-1.2 * 1.2 + 0.09 + 0.16 - 0.25 * 4.0));
}

TEST_CASE("conjugate_by_rescaling is R M R^-1")
{
    Rng rng(15);
    GroupElem g = random_groupelem(AlgebraTag{1.0}, rng);
    Projective p = to_projective(g);
    for (double s : {0.3, -0.3}) {
        MatrixXd R = rescaling_matrix(s).m;
        CHECK((conjugate_by_rescaling(p, s).m - R * p.m * R.inverse()).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(rescaling_matrix(0.0), InvalidRescale);
}

TEST_CASE("point classes")
{
    AlgebraTag t{1.0};
    CHECK(classify_point({t, Eigen::Vector4d(1, 0, 0, 0)}) == PointClass::Interior);
    CHECK(classify_point({t, Eigen::Vector4d(1, 1, 0, 0)}) == PointClass::Ideal);
    CHECK(classify_point({t, Eigen::Vector4d(0, 1, 0, 0)}) == PointClass::Exterior);
    ModelPoint q = normalize_hyperboloid({t, Eigen::Vector4d(2, 0.5, 0, 0.1)});
    CHECK(herm_inner(q, q) == doctest::Approx(-1.0));
}

TEST_CASE("dimension 2 uses the (x1, x2, x4) block")
{
    Rng rng(16);
    for (double s : {1.0, -1.0, 0.0}) {
        GroupElem g = random_groupelem_2d(AlgebraTag{s}, rng);
        MatrixXd full = to_projective(g, 3).m, small = to_projective(g, 2).m;
        int idx[3] = {0, 1, 3};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(std::abs(std::abs(full(idx[i], idx[j])) - std::abs(small(i, j))) < 1e-12);
    }
}
