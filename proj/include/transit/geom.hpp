#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "transit/algebra.hpp"

namespace transit {

// 2x2 matrix over B_s stored as a real part and a kappa part.
struct Mat2B {
    AlgebraTag tag;
    Eigen::Matrix2d re = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d im = Eigen::Matrix2d::Zero();

    Mat2B() = default;
    Mat2B(AlgebraTag t, const Eigen::Matrix2d& r, const Eigen::Matrix2d& i) : tag(t), re(r), im(i) {}
    static Mat2B identity(AlgebraTag t) { return {t, Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Zero()}; }
    static Mat2B real(AlgebraTag t, const Eigen::Matrix2d& r) { return {t, r, Eigen::Matrix2d::Zero()}; }

    BElem at(int i, int j) const { return {re(i, j), im(i, j), tag}; }
    void set(int i, int j, const BElem& z)
    {
        re(i, j) = z.re;
        im(i, j) = z.im;
    }
};

Mat2B operator*(const Mat2B& a, const Mat2B& b);
Mat2B operator+(const Mat2B& a, const Mat2B& b);
Mat2B operator-(const Mat2B& a, const Mat2B& b);
Mat2B operator*(const BElem& z, const Mat2B& a);
BElem det(const Mat2B& a);
BElem trace(const Mat2B& a);
Mat2B inverse(const Mat2B& a);
// Conjugate transpose; conj sends kappa to -kappa.
Mat2B star(const Mat2B& a);
double max_abs(const Mat2B& a);
// exp of a traceless matrix, via X^2 = -det(X) I.
Mat2B exp_traceless(const Mat2B& x);

// Scalars lambda with lambda^2 = 1: {1,-1} for s >= 0, plus +-kappa/|s| for s < 0.
std::vector<BElem> unit_scalars(AlgebraTag tag);

// Isometry of X_s as a normalized 2x2 matrix over B_s: det = det_sign = +-1
// and a canonical unit multiple.
class GroupElem {
public:
    GroupElem() = default;
    // Normalizes; throws ContractError if |det|^2 is not positive.
    explicit GroupElem(const Mat2B& m);
    static GroupElem identity(AlgebraTag t) { return GroupElem(Mat2B::identity(t)); }

    const Mat2B& mat() const { return m_; }
    AlgebraTag tag() const { return m_.tag; }
    int det_sign() const { return det_sign_; }

    GroupElem operator*(const GroupElem& o) const { return GroupElem(m_ * o.m_); }
    GroupElem inverse() const { return GroupElem(transit::inverse(m_)); }

private:
    Mat2B m_ = Mat2B::identity(AlgebraTag{});
    int det_sign_ = 1;
};

// min over unit scalars of the max-abs entry difference.
double group_distance(const GroupElem& g, const GroupElem& h);

// Point of X_s as a real 4-vector; dimension-2 points have x3 = 0.
struct ModelPoint {
    AlgebraTag tag;
    Eigen::Vector4d x = Eigen::Vector4d::Zero();
};

// Projective isometry in (x1..x4) coordinates: 4x4 for dim 3, 3x3 (x1,x2,x4) for dim 2.
struct Projective {
    int dim = 3;
    Eigen::MatrixXd m;
};

enum class PointClass { Interior, Ideal, Exterior };

Eigen::MatrixXd eta(AlgebraTag tag, int dim);
Mat2B herm(const ModelPoint& p);
ModelPoint from_herm(const Mat2B& X);
double herm_inner(const ModelPoint& p, const ModelPoint& q);
ModelPoint act(const GroupElem& A, const ModelPoint& p);
Projective to_projective(const GroupElem& A, int dim = 3);
Projective rescaling_matrix(double s, int dim = 3);
Projective conjugate_by_rescaling(const Projective& m, double s);
PointClass classify_point(const ModelPoint& p);
ModelPoint normalize_hyperboloid(const ModelPoint& p);

nlohmann::json to_json(const GroupElem& g);
GroupElem groupelem_from_json(const nlohmann::json& j, AlgebraTag tag);
nlohmann::json to_json(const Projective& p);

} // namespace transit
