#include "transit/geom.hpp"

#include <cmath>

#include "transit/errors.hpp"

namespace transit {

Mat2B operator*(const Mat2B& a, const Mat2B& b)
{
    check_same_tag(a.tag, b.tag);
    double k2 = a.tag.kappa_sq();
    return {a.tag, a.re * b.re + k2 * (a.im * b.im), a.re * b.im + a.im * b.re};
}

Mat2B operator+(const Mat2B& a, const Mat2B& b)
{
    check_same_tag(a.tag, b.tag);
    return {a.tag, a.re + b.re, a.im + b.im};
}

Mat2B operator-(const Mat2B& a, const Mat2B& b)
{
    check_same_tag(a.tag, b.tag);
    return {a.tag, a.re - b.re, a.im - b.im};
}

Mat2B operator*(const BElem& z, const Mat2B& a)
{
    check_same_tag(z.tag, a.tag);
    double k2 = a.tag.kappa_sq();
    return {a.tag, z.re * a.re + k2 * z.im * a.im, z.re * a.im + z.im * a.re};
}

BElem det(const Mat2B& a) { return a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0); }

BElem trace(const Mat2B& a) { return a.at(0, 0) + a.at(1, 1); }

Mat2B inverse(const Mat2B& a)
{
    BElem di = invert(det(a));
    Mat2B adj = a;
    adj.set(0, 0, a.at(1, 1));
    adj.set(1, 1, a.at(0, 0));
    adj.set(0, 1, -a.at(0, 1));
    adj.set(1, 0, -a.at(1, 0));
    return di * adj;
}

Mat2B star(const Mat2B& a) { return {a.tag, a.re.transpose(), -a.im.transpose()}; }

double max_abs(const Mat2B& a) { return std::max(a.re.cwiseAbs().maxCoeff(), a.im.cwiseAbs().maxCoeff()); }

Mat2B exp_traceless(const Mat2B& x)
{
    BElem d = -det(x);
    return exp_even(d) * Mat2B::identity(x.tag) + exp_odd(d) * x;
}

std::vector<BElem> unit_scalars(AlgebraTag tag)
{
    std::vector<BElem> u{BElem::real(1, tag), BElem::real(-1, tag)};
    if (tag.s < 0) {
        double k = 1.0 / std::abs(tag.s);
        u.push_back({0, k, tag});
        u.push_back({0, -k, tag});
    }
    return u;
}

GroupElem::GroupElem(const Mat2B& m)
{
    BElem d = det(m);
    if (is_zero_divisor(d) || sqnorm(d) <= 0)
        throw ContractError("matrix is not in PGL+: |det|^2 must be positive");
    det_sign_ = (m.tag.s > 0 || d.re > 0) ? 1 : -1;
    BElem root = sqrt(double(det_sign_) * d);
    Mat2B n = invert(root) * m;

    // Canonical unit: maximize the first well-conditioned entry, real part
    // first and imaginary part as tie-break.
    BElem lead = n.at(0, 0);
    for (int k = 0; k < 4; ++k) {
        BElem e = n.at(k / 2, k % 2);
        if (!is_zero_divisor(e) && std::max(std::abs(e.re), std::abs(e.im)) > 1e-12) {
            lead = e;
            break;
        }
    }
    BElem best = BElem::real(1, m.tag);
    BElem best_val = lead;
    for (const BElem& u : unit_scalars(m.tag)) {
        BElem v = u * lead;
        if (v.re > best_val.re + 1e-12 || (std::abs(v.re - best_val.re) <= 1e-12 && v.im > best_val.im + 1e-12)) {
            best = u;
            best_val = v;
        }
    }
    m_ = best * n;
}

double group_distance(const GroupElem& g, const GroupElem& h)
{
    check_same_tag(g.tag(), h.tag());
    double best = INFINITY;
    for (const BElem& u : unit_scalars(g.tag()))
        best = std::min(best, max_abs(g.mat() - u * h.mat()));
    return best;
}

Eigen::MatrixXd eta(AlgebraTag tag, int dim)
{
    double last = -tag.kappa_sq();
    if (dim == 2) return Eigen::Vector3d(-1, 1, last).asDiagonal();
    return Eigen::Vector4d(-1, 1, 1, last).asDiagonal();
}

Mat2B herm(const ModelPoint& p)
{
    const auto& x = p.x;
    Mat2B X(p.tag, Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero());
    X.re << x(0) + x(1), x(2), x(2), x(0) - x(1);
    X.im << 0, -x(3), x(3), 0;
    return X;
}

ModelPoint from_herm(const Mat2B& X)
{
    ModelPoint p{X.tag, {}};
    p.x(0) = 0.5 * (X.re(0, 0) + X.re(1, 1));
    p.x(1) = 0.5 * (X.re(0, 0) - X.re(1, 1));
    p.x(2) = 0.5 * (X.re(0, 1) + X.re(1, 0));
    p.x(3) = 0.5 * (X.im(1, 0) - X.im(0, 1));
    return p;
}

double herm_inner(const ModelPoint& p, const ModelPoint& q)
{
    check_same_tag(p.tag, q.tag);
    return -p.x(0) * q.x(0) + p.x(1) * q.x(1) + p.x(2) * q.x(2) - p.tag.kappa_sq() * p.x(3) * q.x(3);
}

ModelPoint act(const GroupElem& A, const ModelPoint& p)
{
    check_same_tag(A.tag(), p.tag);
    return from_herm(A.mat() * herm(p) * star(A.mat()));
}

Projective to_projective(const GroupElem& A, int dim)
{
    Eigen::Matrix4d m;
    for (int j = 0; j < 4; ++j) {
        ModelPoint e{A.tag(), Eigen::Vector4d::Unit(j)};
        m.col(j) = act(A, e).x;
    }
    if (dim == 3) return {3, m};
    if (dim != 2) throw ContractError("dimension must be 2 or 3");
    const int idx[3] = {0, 1, 3};
    Eigen::Matrix3d r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = m(idx[i], idx[j]);
    return {2, r};
}

Projective rescaling_matrix(double s, int dim)
{
    if (s == 0.0) throw InvalidRescale("rescaling matrix is singular at s = 0");
    int n = dim + 1;
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
    r(n - 1, n - 1) = 1.0 / std::abs(s);
    return {dim, r};
}

Projective conjugate_by_rescaling(const Projective& m, double s)
{
    if (s == 0.0) throw InvalidRescale("rescaling matrix is singular at s = 0");
    Projective out = m;
    int n = int(m.m.rows());
    double a = std::abs(s);
    for (int i = 0; i < n - 1; ++i) {
        out.m(i, n - 1) *= a;
        out.m(n - 1, i) /= a;
    }
    return out;
}

PointClass classify_point(const ModelPoint& p)
{
    double n2 = p.x.squaredNorm();
    if (n2 == 0.0) throw InvalidPoint("zero vector is not a projective point");
    double q = herm_inner(p, p);
    if (std::abs(q) <= 1e-12 * n2) return PointClass::Ideal;
    return q < 0 ? PointClass::Interior : PointClass::Exterior;
}

ModelPoint normalize_hyperboloid(const ModelPoint& p)
{
    if (classify_point(p) != PointClass::Interior) throw InvalidPoint("point is not in the interior of the model");
    double q = herm_inner(p, p);
    ModelPoint out = p;
    out.x /= std::sqrt(-q);
    if (out.x(0) < 0) out.x = -out.x;
    return out;
}

nlohmann::json to_json(const GroupElem& g)
{
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 2; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < 2; ++j) row.push_back(to_json(g.mat().at(i, j)));
        rows.push_back(row);
    }
    return {{"det_sign", g.det_sign()}, {"entries", rows}};
}

GroupElem groupelem_from_json(const nlohmann::json& j, AlgebraTag tag)
{
    if (!j.is_object() || !j.contains("entries")) throw InputError("group element needs \"entries\"");
    const auto& e = j.at("entries");
    if (!e.is_array() || e.size() != 2) throw InputError("entries must be a 2x2 array");
    Mat2B m = Mat2B::identity(tag);
    for (int i = 0; i < 2; ++i) {
        if (!e[i].is_array() || e[i].size() != 2) throw InputError("entries must be a 2x2 array");
        for (int k = 0; k < 2; ++k) m.set(i, k, belem_from_json(e[i][k], tag));
    }
    return GroupElem(m);
}

nlohmann::json to_json(const Projective& p)
{
    nlohmann::json flat = nlohmann::json::array();
    for (int i = 0; i < p.m.rows(); ++i)
        for (int j = 0; j < p.m.cols(); ++j) flat.push_back(p.m(i, j));
    return {{"dim", p.dim}, {"matrix", flat}};
}

} // namespace transit
