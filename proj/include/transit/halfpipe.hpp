#pragma once

#include <Eigen/Dense>

#include "json.hpp"
#include "transit/geom.hpp"

namespace transit {

// Point of HP^3 in product coordinates: an H^2 point (symmetric positive
// definite, det 1) and the fiber coordinate L.
struct HPPoint {
    Eigen::Matrix2d base = Eigen::Matrix2d::Identity();
    double L = 0.0;
};

// (A, a) <-> A + A a sigma, with A of det +-1 and a traceless.
struct HPIsometry {
    Eigen::Matrix2d finite = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d inf = Eigen::Matrix2d::Zero();
};

inline const Eigen::Matrix2d& skew_unit()
{
    // [[0,-1/2],[1/2,0]], the infinitesimal rotation of unit angle at I.
    static const Eigen::Matrix2d k = (Eigen::Matrix2d() << 0, -0.5, 0.5, 0).finished();
    return k;
}

Eigen::Matrix2d sqrt_spd(const Eigen::Matrix2d& X);
// Infinitesimal rotation angle of a at the H^2 point X.
double rot(const Eigen::Matrix2d& a, const Eigen::Matrix2d& X);
HPPoint hp_act(const HPIsometry& g, const HPPoint& p);

double fiber_length_L(const ModelPoint& x);
Eigen::Vector3d projection_pi(const ModelPoint& x);
// Upper-left block of a G_HP matrix, acting on the base.
Eigen::MatrixXd projection_pi_star(const Projective& g);
// Sign of the last diagonal entry: +1 if g preserves the fiber direction.
int fiber_flag(const Projective& g);

HPPoint hp_point_from_model(const ModelPoint& x);
ModelPoint model_from_hp_point(const HPPoint& p);

GroupElem hp_to_groupelem(const HPIsometry& g);
HPIsometry groupelem_to_hp(const GroupElem& g);

nlohmann::json to_json(const HPPoint& p);
nlohmann::json to_json(const HPIsometry& g);

} // namespace transit
