#include "transit/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "transit/errors.hpp"
#include "transit/halfpipe.hpp"

namespace transit {

using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

const AlgebraTag kHP{0.0};

Matrix2d rot2(double th)
{
    Matrix2d r;
    r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    return r;
}

Matrix2d transl(double d) { return Eigen::Vector2d(std::exp(d / 2), std::exp(-d / 2)).asDiagonal(); }

Matrix2d skew()
{
    Matrix2d w;
    w << 0, -1, 1, 0;
    return w;
}

Mat2B pw(const Mat2B& x, int n)
{
    Mat2B b = n >= 0 ? x : inverse(x);
    Mat2B r = Mat2B::identity(x.tag);
    for (int i = 0; i < std::abs(n); ++i) r = r * b;
    return r;
}

// Right-normalized infinitesimal part: x = (1 + z sigma) A.
Matrix2d inf_part(const Mat2B& x) { return x.im * x.re.inverse(); }

double dist_pm_identity(const Mat2B& x)
{
    Mat2B id = Mat2B::identity(x.tag);
    return std::min(max_abs(x - id), max_abs(x + id));
}

double proj_error(const MatrixXd& a, const MatrixXd& b)
{
    return std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff());
}

double fit_order(const std::vector<double>& ts, const std::vector<double>& errs)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (errs[i] <= 0) continue;
        double x = std::log(std::abs(ts[i])), y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    if (k < 2) return INFINITY;
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

} // namespace

// ---- transition reports ----

std::string classification(AlgebraTag tag)
{
    return tag.s > 0 ? "Hyperbolic" : (tag.s < 0 ? "AdS" : "HP");
}

nlohmann::json to_json(const TransitionReport& r)
{
    nlohmann::json out = nlohmann::json::array();
    for (const TransitionRow& row : r)
        out.push_back({{"t", row.t},
                       {"s", row.tag.s},
                       {"residual", row.residual},
                       {"classification", classification(row.tag)},
                       {"invariant", {{"kind", row.kind}, {"value", row.value}}},
                       {"representation", to_json(row.rep)}});
    return out;
}

TransitionReport transition_report_from_json(const nlohmann::json& j)
{
    if (!j.is_array()) throw InputError("transition report must be a JSON array");
    TransitionReport r;
    try {
        for (const auto& e : j) {
            TransitionRow row;
            row.t = e.at("t").get<double>();
            row.tag = AlgebraTag{e.at("s").get<double>()};
            row.residual = e.at("residual").get<double>();
            row.kind = e.at("invariant").at("kind").get<std::string>();
            row.value = e.at("invariant").at("value").get<double>();
            row.rep = representation_from_json(e.at("representation"));
            r.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed transition report: ") + e.what());
    }
    return r;
}

std::vector<double> t_grid(double t_min, double t_max, int steps)
{
    if (steps < 0) throw InputError("t-steps must be non-negative");
    if (!(t_min <= t_max)) throw InputError("t-min must not exceed t-max");
    std::vector<double> g;
    for (int i = 0; i < steps; ++i) {
        double t = steps == 1 ? t_min : t_min + (t_max - t_min) * i / (steps - 1);
        if (std::abs(t) < 1e-15 * std::max(1.0, std::abs(t_max - t_min))) t = 0.0;
        g.push_back(t);
    }
    return g;
}

// ---- singular torus ----

namespace {

const double kTorusLength = std::acosh(3.0);

Presentation torus_presentation() { return {{"a", "b"}, {}}; }

const Word kTorusCommutator{1, 2, -1, -2};

} // namespace

Representation torus_rep(double t)
{
    if (t == 0.0) throw ContractError("torus family is defined for t != 0");
    AlgebraTag tag{t > 0 ? 1.0 : -1.0};
    Mat2B a = Mat2B::real(tag, transl(kTorusLength));
    double u = t > 0 ? std::asinh(t) : std::asin(std::abs(t));
    Mat2B b = exp_traceless(Mat2B(tag, Matrix2d::Zero(), 0.5 * u * skew()));
    return {torus_presentation(), tag, 2, {GroupElem(a), GroupElem(b)}};
}

Representation torus_hp_rep()
{
    Mat2B a = Mat2B::real(kHP, transl(kTorusLength));
    Mat2B b(kHP, Matrix2d::Identity(), 0.5 * skew());
    return {torus_presentation(), kHP, 2, {GroupElem(a), GroupElem(b)}};
}

TorusMatrices torus_expected(double t)
{
    TorusMatrices e;
    double r2 = 2 * std::sqrt(2.0);
    e.a << 3, r2, 0, r2, 3, 0, 0, 0, 1;
    if (t > 0) {
        double c = std::sqrt(1 + t * t);
        e.b << c, 0, t, 0, 1, 0, t, 0, c;
        e.b_rescaled << c, 0, t * t, 0, 1, 0, 1, 0, c;
    } else {
        double a = std::abs(t), c = std::sqrt(1 - a * a);
        e.b << c, 0, -a, 0, 1, 0, a, 0, c;
        e.b_rescaled << c, 0, -a * a, 0, 1, 0, 1, 0, c;
    }
    return e;
}

TorusSummary torus_scenario(const std::vector<double>& grid)
{
    TorusSummary out;
    Representation hp = torus_hp_rep();
    for (double t : grid) {
        TransitionRow row;
        row.t = t;
        if (t == 0.0) {
            row.rep = hp;
            row.kind = "inf_cone_angle";
            row.value = infinitesimal_rotation_2d(evaluate_word(hp, kTorusCommutator));
        } else {
            row.rep = torus_rep(t);
            TorusMatrices e = torus_expected(t);
            Projective pa = to_projective(row.rep.images[0], 2), pb = to_projective(row.rep.images[1], 2);
            out.matrix_error = std::max({out.matrix_error, proj_error(pa.m, e.a), proj_error(pb.m, e.b),
                                         proj_error(conjugate_by_rescaling(pb, t).m, e.b_rescaled)});
            Projective g = to_projective(evaluate_word(row.rep, kTorusCommutator), 2);
            if (t > 0) {
                row.kind = "cone_angle";
                row.value = 2 * M_PI + rotation_angle(g, row.rep.tag).angle;
            } else {
                row.kind = "tachyon_mass";
                row.value = tachyon_mass(g, row.rep.tag, fixed_axis(g, row.rep.tag));
            }
        }
        row.tag = row.rep.tag;
        row.residual = relation_residual(row.rep);
        out.report.push_back(std::move(row));
    }

    Matrix3d b_lim, c_lim;
    b_lim << 1, 0, 0, 0, 1, 0, 1, 0, 1;
    c_lim << 1, 0, 0, 0, 1, 0, 2, -2 * std::sqrt(2.0), 1;
    out.hp_limit_error = std::max(proj_error(to_projective(hp.images[1], 2).m, b_lim),
                                  proj_error(to_projective(evaluate_word(hp, kTorusCommutator), 2).m, c_lim));

    std::vector<double> ts{1e-2, 1e-3, 1e-4}, errs;
    std::vector<std::pair<double, Representation>> hyp, ads;
    for (double t : ts) {
        Representation r = torus_rep(t);
        Projective g = conjugate_by_rescaling(to_projective(evaluate_word(r, kTorusCommutator), 2), t);
        errs.push_back(proj_error(g.m, c_lim));
        hyp.push_back({t, r});
        ads.push_back({-t, torus_rep(-t)});
    }
    out.commutator_limit_error = errs.back();
    out.commutator_order = fit_order(ts, errs);
    out.hyp_limit = rescaled_limit_check(hyp, hp);
    out.ads_limit = rescaled_limit_check(ads, hp);

    const double t = 1e-4;
    Representation rp = torus_rep(t), rm = torus_rep(-t);
    Projective gp = to_projective(evaluate_word(rp, kTorusCommutator), 2);
    Projective gm = to_projective(evaluate_word(rm, kTorusCommutator), 2);
    out.angle_rate = rotation_angle(gp, rp.tag).angle / t;
    out.mass_rate = tachyon_mass(gm, rm.tag, fixed_axis(gm, rm.tag)) / t;
    return out;
}

// ---- (2, m, m) ----

Word twomm_longitude() { return {-kAlpha, -kBeta, kAlpha, kBeta}; }

namespace {

// Gluing maps as words in alpha, beta~, mu.
struct GlueWords {
    Word gA, gB, gC, gD, beta;
};

GlueWords glue_words() { return {{}, {-kAlpha, -kBeta}, {-kAlpha, kMu, -kBeta}, {kMu}, {kBeta}}; }

std::vector<std::pair<std::string, Word>> equation_words(int m)
{
    GlueWords g = glue_words();
    Word am = power_word({kAlpha}, m), bm = power_word(g.beta, m);
    auto I = inverse_word;
    Word a{kAlpha}, ai{-kAlpha};
    std::vector<std::pair<std::string, Word>> eq{
        {"cycle_a", concat({g.gA, I(g.gC), g.gD, I(bm), I(g.gB)})},
        {"cycle_b", concat({g.gD, I(g.gC), I(am), g.gA, I(g.gB)})},
        {"cycle_c", concat({g.gD, I(bm), I(g.gB), g.gA, I(g.gC)})},
        {"cycle_d", concat({g.gA, I(g.gB), g.gD, I(g.gC), I(am)})},
        {"conjugacy_a", concat({g.gD, I(g.gA), I(concat({a, g.gC, I(g.gB), ai}))})},
        {"conjugacy_b", concat({g.gD, I(bm), I(g.gA), am, I(concat({a, g.gC, I(bm), I(g.gB), am, ai}))})},
        {"conjugacy_c", concat({g.gA, I(g.gB), g.gC, I(g.gA), I(concat({am, g.gC, I(bm), I(g.gB)}))})},
        {"conjugacy_d", concat({g.gD, I(bm), I(g.gB), am, g.gC, I(g.gD), I(concat({g.gC, I(g.gB)}))})},
        {"symmetry_a", concat({a, g.gB, g.beta, I(g.gA)})},
        {"symmetry_b", concat({a, g.gC, g.beta, I(g.gD)})},
    };
    // Reduced relations.
    Word b{kBeta}, mu{kMu};
    eq.push_back({"reduced_1", concat({power_word(concat({b, a}), 2), I(concat({bm, I(mu), ai, mu, a}))})});
    eq.push_back({"reduced_2", concat({power_word(concat({a, b}), 2), I(concat({am, mu, I(b), I(mu), b}))})});
    eq.push_back({"reduced_3", concat({mu, mu, I(concat({I(am), bm}))})});
    return eq;
}

// Invariant line of an HP element with hyperbolic finite part, as two points.
MatrixXd invariant_line(const Mat2B& g)
{
    MatrixXd M = to_projective(GroupElem(g), 3).m;
    Matrix3d Phi = M.topLeftCorner<3, 3>();
    Vector3d v = M.block<1, 3>(3, 0).transpose();
    double c = M(3, 3);
    Eigen::EigenSolver<Matrix3d> es(Phi);
    MatrixXd L(2, 4);
    int k = 0;
    for (int i = 0; i < 3 && k < 2; ++i) {
        double lam = es.eigenvalues()(i).real();
        if (std::abs(lam - 1) < 1e-9 || std::abs(lam + 1) < 1e-9) continue;
        Vector3d u = es.eigenvectors().col(i).real();
        L.row(k) << u.transpose(), v.dot(u) / (lam - c);
        ++k;
    }
    if (k < 2) throw ConstructionFailed("longitude has no invariant line");
    return L;
}

MatrixXd apply_line(const Mat2B& g, const MatrixXd& L)
{
    return (to_projective(GroupElem(g), 3).m * L.transpose()).transpose();
}

// Fiber coordinate of the line over the base point x (unit timelike).
double fiber_over(const MatrixXd& L, const Vector3d& x, double* resid)
{
    MatrixXd P = L.leftCols(3).transpose();
    VectorXd coef = P.colPivHouseholderQr().solve(x);
    Eigen::Vector4d pt = L.transpose() * coef;
    if (resid) *resid = std::max(*resid, (pt.head<3>() - x).norm());
    double q = pt(0) * pt(0) - pt(1) * pt(1) - pt(2) * pt(2);
    return pt(3) / std::sqrt(q) * (pt(0) > 0 ? 1.0 : -1.0);
}

double lorentz(const Vector3d& a, const Vector3d& b) { return -a(0) * b(0) + a(1) * b(1) + a(2) * b(2); }

struct TwoMMParts {
    Mat2B alpha, beta, mu;
};

TwoMMParts twomm_parts(int m, double theta_dot, double x)
{
    Matrix2d A = rot2(M_PI / m);
    Mat2B alpha(kHP, A, A * (theta_dot * skew()));
    double a = std::acosh((1 / std::sqrt(2.0)) / std::sin(M_PI / m));
    Matrix2d Tv = transl(a);
    Matrix2d Rv = Tv * rot2(M_PI / 2) * transl(-a);
    Matrix2d c = x * (Tv * Eigen::Vector2d(0.5, -0.5).asDiagonal() * Tv.inverse());
    Mat2B sym(kHP, Rv, c * Rv);
    Mat2B beta = sym * alpha * inverse(sym);
    Mat2B M2 = pw(alpha, -m) * pw(beta, m);
    Mat2B mu(kHP, Matrix2d::Identity(), 0.5 * inf_part(M2));
    return {alpha, beta, mu};
}

// Difference of the two sides of the first reduced relation, as a vector.
VectorXd rate_defect(int m, double theta_dot, double x)
{
    TwoMMParts p = twomm_parts(m, theta_dot, x);
    Mat2B lhs = pw(p.beta * p.alpha, 2);
    Mat2B rhs = pw(p.beta, m) * inverse(p.mu) * inverse(p.alpha) * p.mu * p.alpha;
    double s = lhs.re.trace() * rhs.re.trace() >= 0 ? 1.0 : -1.0;
    VectorXd d(8);
    Matrix2d dr = lhs.re - s * rhs.re, di = lhs.im - s * rhs.im;
    d << Eigen::Map<Eigen::Vector4d>(dr.data()), Eigen::Map<Eigen::Vector4d>(di.data());
    return d;
}

} // namespace

Presentation twomm_presentation(int m)
{
    Presentation p{{"alpha", "beta", "mu"}, {}};
    for (const auto& [name, w] : equation_words(m)) {
        if (name.rfind("cycle_", 0) != 0 && name.rfind("conjugacy_", 0) != 0) continue;
        Word r = free_reduce(w);
        if (!r.empty()) p.relators.push_back(r);
    }
    return p;
}

double TwoMMReport::max_residual() const
{
    double r = 0.0;
    for (const auto& [k, v] : residuals) r = std::max(r, v);
    return r;
}

TwoMMReport build_2mm(int m, double theta_dot, double rate_break)
{
    if (m < 5) throw RightAngleImpossible("m = " + std::to_string(m) + " gives cot(pi/m) <= 1");
    if (!(theta_dot > 0)) throw ContractError("theta_dot must be positive");
    TwoMMReport r;
    r.m = m;
    r.theta_dot = theta_dot;
    r.rate_break = rate_break;
    r.R = std::acosh(1 / std::tan(M_PI / m));

    // The defect is affine in x.
    VectorXd d0 = rate_defect(m, theta_dot, 0.0), d1 = rate_defect(m, theta_dot, 1.0);
    VectorXd sl = d1 - d0;
    r.x = -sl.dot(d0) / sl.dot(sl) * (1 + rate_break);
    TwoMMParts p = twomm_parts(m, theta_dot, r.x);
    r.alpha = p.alpha;
    r.beta = p.beta;
    r.mu = p.mu;

    std::vector<Mat2B> imgs{p.alpha, p.beta, p.mu};
    for (const auto& [name, w] : equation_words(m)) r.residuals[name] = dist_pm_identity(evaluate_word_raw(imgs, w));

    // Rate relation: (beta alpha)^2 is an infinitesimal rotation about the corner r.
    Mat2B ba = p.beta * p.alpha;
    Matrix3d Phi = to_projective(GroupElem(Mat2B::real(kHP, ba.re)), 3).m.topLeftCorner<3, 3>();
    Eigen::EigenSolver<Matrix3d> es(Phi);
    int ir = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(es.eigenvalues()(i).real() - 1) < std::abs(es.eigenvalues()(ir).real() - 1)) ir = i;
    Vector3d rc = es.eigenvectors().col(ir).real();
    rc /= std::sqrt(-lorentz(rc, rc));
    if (rc(0) < 0) rc = -rc;
    Matrix2d X;
    X << rc(0) + rc(1), rc(2), rc(2), rc(0) - rc(1);
    double theta_ba = rot(inf_part(pw(ba, 2)), X) / 4;
    r.residuals["rate"] = std::abs(2 * theta_ba - m * std::cosh(r.R) * theta_dot);

    Presentation pres = twomm_presentation(m);
    r.rho_hp = {pres, kHP, 3, {GroupElem(p.alpha), GroupElem(p.beta), GroupElem(p.mu)}};
    r.phi = infinitesimal_cone_angle(r.rho_hp, {kMu}, twomm_longitude());
    double ct = 1 / std::tan(M_PI / m);
    r.phi_closed_form = -std::sqrt(2.0) * m * theta_dot * std::sqrt(ct * ct - 1);

    // Placement of the lines over the corner r.
    Mat2B lam = evaluate_word_raw(imgs, twomm_longitude());
    MatrixXd L2 = invariant_line(lam);
    MatrixXd L1 = apply_line(ba, L2);
    MatrixXd L3 = apply_line(p.mu * pw(p.beta, -m) * ba, L2);
    MatrixXd L4 = apply_line(p.beta, L2);
    std::array<MatrixXd, 4> lines{L1, L2, L3, L4};
    // Unit tangent of the common base geodesic at r.
    Vector3d e = L2.row(0).head<3>().transpose();
    e -= -lorentz(e, rc) * rc;
    e /= std::sqrt(lorentz(e, e));
    // L1, L2, L3 lie over this geodesic; L4 crosses it over r only.
    auto fibers_at = [&](double s) {
        Vector3d xs = std::cosh(s) * rc + std::sinh(s) * e;
        std::array<double, 4> f{};
        for (int i = 0; i < (s == 0.0 ? 4 : 3); ++i) f[i] = fiber_over(lines[i], xs, &r.placement_residual);
        return f;
    };
    r.fibers = fibers_at(0.0);
    auto fp = fibers_at(0.5), fm = fibers_at(-0.5);
    // f_i - f_j = c1 cosh s + c2 sinh s along the geodesic; it keeps its sign iff |c1| > |c2|.
    auto separated = [&](int i, int j, double* sign) {
        double c1 = r.fibers[i] - r.fibers[j];
        double c2 = ((fp[i] - fp[j]) - (fm[i] - fm[j])) / (2 * std::sinh(0.5));
        *sign = c1;
        return std::abs(c1) > std::abs(c2);
    };
    double s12, s32;
    bool ok = r.placement_residual < 1e-8;
    r.l2_between = ok && separated(0, 1, &s12) && separated(2, 1, &s32) && s12 * s32 < 0;
    r.l4_between = ok && (r.fibers[0] - r.fibers[3]) * (r.fibers[1] - r.fibers[3]) < 0;

    if (rate_break == 0.0) {
        auto worst = std::max_element(r.residuals.begin(), r.residuals.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
        if (worst->second > 1e-8)
            throw ConstructionFailed("equation " + worst->first + " has residual " + std::to_string(worst->second));
    }
    return r;
}

double twomm_meridian_invariant(const Representation& rep)
{
    if (rep.tag.s == 0.0) return infinitesimal_cone_angle(rep, {kMu}, twomm_longitude());
    Projective g = to_projective(evaluate_word(rep, {kMu}), 3);
    Projective l = to_projective(evaluate_word(rep, twomm_longitude()), 3);
    Axis axis = fixed_axis(g, rep.tag, l);
    if (rep.tag.s > 0) return 2 * M_PI + rotation_angle(g, rep.tag, axis).angle;
    return tachyon_mass(g, rep.tag, axis);
}

namespace {

Representation regenerate_2mm(const TwoMMReport& rep, const Cocycle& z, double t, const NewtonOptions& opt)
{
    MeridianConstraint c{{kMu}, rep.phi};
    return t > 0 ? regenerate_hyp(rep.rho_hp.pres, z, t, c, opt).rep : regenerate_ads(rep.rho_hp.pres, z, t, c, opt).rep;
}

} // namespace

TwoMMTransition transition_2mm(const TwoMMReport& rep, const std::vector<double>& grid, const NewtonOptions& opt)
{
    TwoMMTransition out;
    Cocycle z = cocycle_from_hp(rep.rho_hp);
    out.h1 = h1_dimension(rep.rho_hp.pres, z.base);
    if (out.h1.h1 != 1) throw SmoothnessGateFailed("h1 = " + std::to_string(out.h1.h1) + ", expected 1");
    for (double t : grid) {
        TransitionRow row;
        row.t = t;
        row.rep = t == 0.0 ? rep.rho_hp : regenerate_2mm(rep, z, t, opt);
        row.tag = row.rep.tag;
        row.residual = relation_residual(row.rep);
        row.kind = t > 0 ? "cone_angle" : (t < 0 ? "tachyon_mass" : "inf_cone_angle");
        row.value = twomm_meridian_invariant(row.rep);
        out.report.push_back(std::move(row));
    }
    return out;
}

std::pair<LimitCheck, LimitCheck> twomm_compatibility(const TwoMMReport& rep, const NewtonOptions& opt)
{
    Cocycle z = cocycle_from_hp(rep.rho_hp);
    std::vector<std::pair<double, Representation>> hyp, ads;
    for (double t : {1e-2, 1e-3, 1e-4}) {
        hyp.push_back({t, regenerate_2mm(rep, z, t, opt)});
        ads.push_back({-t, regenerate_2mm(rep, z, -t, opt)});
    }
    return {rescaled_limit_check(hyp, rep.rho_hp), rescaled_limit_check(ads, rep.rho_hp)};
}

nlohmann::json to_json(const TwoMMReport& r)
{
    nlohmann::json res = nlohmann::json::object();
    for (const auto& [k, v] : r.residuals) res[k] = v;
    return {{"m", r.m},
            {"theta_dot", r.theta_dot},
            {"R", r.R},
            {"x", r.x},
            {"phi", r.phi},
            {"phi_closed_form", r.phi_closed_form},
            {"residuals", res},
            {"placement",
             {{"fibers", r.fibers},
              {"projection_residual", r.placement_residual},
              {"L2_between_L1_L3", r.l2_between},
              {"L4_between_L1_L2", r.l4_between}}},
            {"representation", to_json(r.rho_hp)}};
}

// ---- Borromean rings ----

Branch branch_from_string(const std::string& s)
{
    if (s == "T") return Branch::T;
    if (s == "R") return Branch::R;
    throw InputError("branch must be T or R, got " + s);
}

std::string to_string(Branch b) { return b == Branch::T ? "T" : "R"; }

Presentation borromean_presentation()
{
    Word a{1}, b{2}, c{3};
    Word r1 = commutator_word(commutator_word(a, b), c);
    Word r2 = commutator_word(commutator_word(c, inverse_word(b)), a);
    return {{"a", "b", "c"}, {r1, r2}};
}

Word borromean_peripheral() { return {1, 2, -1, -2}; }

double rectangular_length() { return 2 * std::asinh(1.0); }

namespace {

BorromeanRep borromean_build(double la, double lb, double phi, Branch branch)
{
    Matrix2d A = transl(la);
    Matrix2d B = rot2(phi / 2) * transl(lb) * rot2(-phi / 2);
    Matrix2d K = A * B * A.inverse() * B.inverse();
    // Conjugate the parabolic commutator to [[-1, 1], [0, -1]]; its fixed
    // vector is the dominant column of K + I.
    Matrix2d N = K + Matrix2d::Identity();
    int j = N.col(1).norm() > N.col(0).norm() ? 1 : 0;
    Eigen::Vector2d v = N.col(j);
    Matrix2d P;
    P.col(0) = v;
    P.col(1) = std::abs(v(0)) > 1e-8 ? Eigen::Vector2d(0, 1) : Eigen::Vector2d(1, 0);
    P /= std::sqrt(std::abs(P.determinant()));
    if (P.determinant() < 0) P.col(1) = -P.col(1);
    Matrix2d Kp = P.inverse() * K * P;
    double k = std::sqrt(std::abs(1 / Kp(0, 1)));
    P = P * Eigen::Vector2d(1 / k, k).asDiagonal();
    Matrix2d Pi = P.inverse();

    BorromeanRep r;
    r.la = la;
    r.lb = lb;
    r.phi_angle = phi;
    r.branch = branch;
    r.x = branch == Branch::T ? 0.0 : 0.5 / std::cosh(la / 2) / std::cosh(lb / 2) / std::tan(phi);
    Matrix2d C;
    C << -1, r.x, 0, -1;
    r.rep = make_real_rep(borromean_presentation(), {Pi * A * P, Pi * B * P, C});
    return r;
}

} // namespace

BorromeanRep borromean_rep(double la, double lb, Branch branch)
{
    if (!(la > 0 && lb > 0)) throw InputError("translation lengths must be positive");
    double prod = std::sinh(la / 2) * std::sinh(lb / 2);
    if (prod < 1 - 1e-12)
        throw NoParabolicAngle("sinh(la/2) sinh(lb/2) = " + std::to_string(prod) + " < 1");
    return borromean_build(la, lb, std::asin(std::min(1.0, 1 / prod)), branch);
}

BorromeanRep borromean_rep_angle(double la, double phi, Branch branch)
{
    double lb = 2 * std::asinh(1 / (std::sinh(la / 2) * std::sin(phi)));
    return borromean_build(la, lb, phi, branch);
}

BorromeanTangents borromean_tangents()
{
    const double l0 = rectangular_length(), h = 1e-5;
    BorromeanTangents out;
    out.rho0 = real_images(borromean_rep_angle(l0, M_PI / 2, Branch::T).rep);
    auto tangent = [&](Branch br) {
        auto p = real_images(borromean_rep_angle(l0, M_PI / 2 + h, br).rep);
        auto m = real_images(borromean_rep_angle(l0, M_PI / 2 - h, br).rep);
        Cocycle z{out.rho0, {}};
        for (int i = 0; i < 3; ++i) z.values.push_back((p[i] - m[i]) / (2 * h) * out.rho0[i].inverse());
        return z;
    };
    out.v = tangent(Branch::R);
    out.u = tangent(Branch::T);
    return out;
}

Representation borromean_ads(double eps, double t)
{
    if (!(t < 0)) throw ContractError("AdS side needs t < 0");
    const double l0 = rectangular_length();
    // sigma_t along branch R with derivative 2v, mu_t along branch T with derivative 2 eps u.
    auto sigma = real_images(borromean_rep_angle(l0, M_PI / 2 + 2 * t, Branch::R).rep);
    auto mu = real_images(borromean_rep_angle(l0, M_PI / 2 - 2 * eps * t, Branch::T).rep);
    AlgebraTag tag{-1.0};
    Representation r{borromean_presentation(), tag, 3, {}};
    for (int i = 0; i < 3; ++i) r.images.emplace_back(idempotent_combine(sigma[i], mu[i], tag));
    return r;
}

namespace {

// Hyperbolic attempt with first-order data w + i z; second order Y solved
// by Gauss-Newton under |Y| <= 10.
FlexAttempt flex_attempt(const BorromeanTangents& tg, const std::vector<Matrix2d>& z, double a, double b, double t,
                         const Presentation& pres, const std::vector<int>& signs)
{
    AlgebraTag tag{1.0};
    std::vector<Matrix2d> w;
    for (int i = 0; i < 3; ++i) w.push_back(a * tg.v.values[i] + b * tg.u.values[i]);
    auto images = [&](const VectorXd& y) {
        std::vector<Mat2B> out;
        for (int i = 0; i < 3; ++i) {
            Matrix2d yr = sl2_from_coords(Vector3d(y(6 * i), y(6 * i + 2), y(6 * i + 4)));
            Matrix2d yi = sl2_from_coords(Vector3d(y(6 * i + 1), y(6 * i + 3), y(6 * i + 5)));
            Mat2B X(tag, t * w[i] + t * t * yr, t * z[i] + t * t * yi);
            out.push_back(exp_traceless(X) * Mat2B::real(tag, tg.rho0[i]));
        }
        return out;
    };
    auto F = [&](const VectorXd& y) {
        auto im = images(y);
        VectorXd f(2 * 8 + 2);
        for (int k = 0; k < 2; ++k) {
            Mat2B D = evaluate_word_raw(im, pres.relators[k]);
            D.re -= signs[k] * Matrix2d::Identity();
            f.segment<4>(8 * k) = Eigen::Map<Eigen::Vector4d>(D.re.data());
            f.segment<4>(8 * k + 4) = Eigen::Map<Eigen::Vector4d>(D.im.data());
        }
        BElem tr = trace(evaluate_word_raw(im, borromean_peripheral()));
        f(16) = tr.re + 2;
        f(17) = tr.im;
        return f;
    };
    NewtonOptions opt;
    opt.fd_step = 1e-4;
    opt.max_iter = 50;
    opt.stall_iters = 50;
    VectorSolveResult res = gauss_newton(F, VectorXd::Zero(18), opt, 10.0);
    return {a, b, res.residual, res.iterations};
}

} // namespace

FlexReport borromean_flexibility(double eps, const std::vector<double>& grid)
{
    FlexReport out;
    out.eps = eps;
    BorromeanTangents tg = borromean_tangents();
    Presentation pres = borromean_presentation();
    Cocycle z{tg.rho0, {}};
    for (int i = 0; i < 3; ++i) z.values.push_back(tg.v.values[i] + eps * tg.u.values[i]);
    out.rho_hp = hp_from_cocycle(pres, z);
    std::vector<int> signs = relator_signs(pres, tg.rho0);
    for (double t : grid) {
        FlexRow row;
        row.t = t;
        if (t < 0) {
            row.rep = borromean_ads(eps, t);
            row.residual = relation_residual(*row.rep);
        } else if (t == 0) {
            row.rep = out.rho_hp;
            row.residual = relation_residual(out.rho_hp);
        } else {
            row.obstructed = true;
            for (double a : {-1.0, -0.5, 0.0, 0.5, 1.0})
                for (double b : {-1.0, 0.0, 1.0}) {
                    FlexAttempt at = flex_attempt(tg, z.values, a, b, t, pres, signs);
                    row.attempts.push_back(at);
                    if (at.residual < 1e-12) row.converged = true;
                    if (at.residual <= 1e-6) row.obstructed = false;
                }
            row.residual = INFINITY;
            for (const FlexAttempt& at : row.attempts) row.residual = std::min(row.residual, at.residual);
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

nlohmann::json to_json(const BorromeanRep& r)
{
    return {{"l_a", r.la},
            {"l_b", r.lb},
            {"phi_angle", r.phi_angle},
            {"branch", to_string(r.branch)},
            {"x", r.x},
            {"residual", relation_residual(r.rep)},
            {"representation", to_json(r.rep)}};
}

nlohmann::json to_json(const FlexReport& r)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const FlexRow& row : r.rows) {
        nlohmann::json j{{"t", row.t}, {"residual", row.residual}};
        if (row.t > 0) {
            nlohmann::json at = nlohmann::json::array();
            for (const FlexAttempt& a : row.attempts)
                at.push_back({{"w", {a.a, a.b}}, {"residual", a.residual}, {"iterations", a.iterations}});
            j["attempts"] = at;
            j["converged"] = row.converged;
            j["obstructed"] = row.obstructed;
        }
        if (row.rep) j["representation"] = to_json(*row.rep);
        rows.push_back(j);
    }
    return {{"epsilon", r.eps}, {"hp_representation", to_json(r.rho_hp)}, {"rows", rows}};
}

} // namespace transit
