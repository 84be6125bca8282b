#include "transit/halfpipe.hpp"

#include <cmath>

#include "transit/errors.hpp"

namespace transit {

namespace {

nlohmann::json mat_json(const Eigen::Matrix2d& m)
{
    return nlohmann::json::array({nlohmann::json::array({m(0, 0), m(0, 1)}), nlohmann::json::array({m(1, 0), m(1, 1)})});
}

void require_spd(const Eigen::Matrix2d& X)
{
    if (std::abs(X(0, 1) - X(1, 0)) > 1e-12 * X.cwiseAbs().maxCoeff() || X(0, 0) <= 0 || X.determinant() <= 0)
        throw InvalidPoint("H^2 point must be symmetric positive definite");
}

} // namespace

Eigen::Matrix2d sqrt_spd(const Eigen::Matrix2d& X)
{
    require_spd(X);
    Eigen::Matrix2d S = 0.5 * (X + X.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

double rot(const Eigen::Matrix2d& a, const Eigen::Matrix2d& X)
{
    Eigen::Matrix2d r = sqrt_spd(X);
    Eigen::Matrix2d K = r.inverse() * (0.5 * (a - X * a.transpose() * X.inverse())) * r;
    double scale = 1.0 + a.cwiseAbs().maxCoeff() * X.norm() * X.inverse().norm();
    if (std::abs(K(0, 0)) + std::abs(K(1, 1)) + std::abs(K(0, 1) + K(1, 0)) > 1e-12 * scale)
        throw ContractError("skew part of the infinitesimal is not antisymmetric after conjugation");
    return K(1, 0) - K(0, 1);
}

HPPoint hp_act(const HPIsometry& g, const HPPoint& p)
{
    const Eigen::Matrix2d& A = g.finite;
    double dA = A.determinant();
    HPPoint q;
    Eigen::Matrix2d X = A * p.base * A.transpose();
    q.base = X / std::sqrt(X.determinant());
    // det A = -1 reverses the fiber direction.
    q.L = (dA > 0 ? 1.0 : -1.0) * (p.L + rot(g.inf, p.base));
    return q;
}

double fiber_length_L(const ModelPoint& x)
{
    Eigen::Vector4d v = x.x;
    if (v(0) < 0) v = -v;
    double q = v(0) * v(0) - v(1) * v(1) - v(2) * v(2);
    if (v(0) <= 0 || q <= 1e-12 * v.head<3>().squaredNorm())
        throw InvalidPoint("fiber coordinate needs an interior point");
    return v(3) / (v(0) * std::sqrt(1.0 - std::pow(v(1) / v(0), 2) - std::pow(v(2) / v(0), 2)));
}

Eigen::Vector3d projection_pi(const ModelPoint& x) { return x.x.head<3>(); }

Eigen::MatrixXd projection_pi_star(const Projective& g)
{
    int n = int(g.m.rows());
    return g.m.topLeftCorner(n - 1, n - 1);
}

int fiber_flag(const Projective& g)
{
    int n = int(g.m.rows());
    return g.m(n - 1, n - 1) >= 0 ? 1 : -1;
}

HPPoint hp_point_from_model(const ModelPoint& x)
{
    Eigen::Vector4d v = x.x;
    if (v(0) < 0) v = -v;
    Eigen::Matrix2d X;
    X << v(0) + v(1), v(2), v(2), v(0) - v(1);
    double d = X.determinant();
    if (d <= 0 || v(0) <= 0) throw InvalidPoint("HP point must project into H^2");
    return {X / std::sqrt(d), v(3) / std::sqrt(d)};
}

ModelPoint model_from_hp_point(const HPPoint& p)
{
    require_spd(p.base);
    Eigen::Matrix2d X = p.base / std::sqrt(p.base.determinant());
    ModelPoint m{AlgebraTag{0.0}, {}};
    m.x << 0.5 * (X(0, 0) + X(1, 1)), 0.5 * (X(0, 0) - X(1, 1)), 0.5 * (X(0, 1) + X(1, 0)), p.L;
    return m;
}

GroupElem hp_to_groupelem(const HPIsometry& g)
{
    if (std::abs(g.inf.trace()) > 1e-12 * (1.0 + g.inf.cwiseAbs().maxCoeff()))
        throw ContractError("infinitesimal part must be traceless");
    return GroupElem(Mat2B(AlgebraTag{0.0}, g.finite, g.finite * g.inf));
}

HPIsometry groupelem_to_hp(const GroupElem& g)
{
    if (g.tag().s != 0.0) throw ContractError("HP isometries live over the dual numbers");
    HPIsometry h;
    h.finite = g.mat().re;
    h.inf = h.finite.inverse() * g.mat().im;
    return h;
}

nlohmann::json to_json(const HPPoint& p) { return {{"base", mat_json(p.base)}, {"L", p.L}}; }

nlohmann::json to_json(const HPIsometry& g) { return {{"finite", mat_json(g.finite)}, {"inf", mat_json(g.inf)}}; }

} // namespace transit
