#include "transit/reps.hpp"

#include <algorithm>
#include <cmath>

#include "transit/errors.hpp"

namespace transit {

using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

// ---- words ----

Word inverse_word(const Word& w)
{
    Word out(w.rbegin(), w.rend());
    for (int& k : out) k = -k;
    return out;
}

Word power_word(const Word& w, int n)
{
    Word base = n >= 0 ? w : inverse_word(w);
    Word out;
    for (int i = 0; i < std::abs(n); ++i) out.insert(out.end(), base.begin(), base.end());
    return out;
}

Word concat(std::initializer_list<Word> parts)
{
    Word out;
    for (const Word& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

Word free_reduce(const Word& w)
{
    Word out;
    for (int k : w) {
        if (!out.empty() && out.back() == -k) out.pop_back();
        else out.push_back(k);
    }
    return out;
}

Word commutator_word(const Word& a, const Word& b)
{
    return concat({a, b, inverse_word(a), inverse_word(b)});
}

void Presentation::validate() const
{
    if (generators.empty()) throw InputError("presentation has no generators");
    int n = int(generators.size());
    for (const Word& r : relators)
        for (int k : r)
            if (k == 0 || std::abs(k) > n) throw InputError("relator index out of range: " + std::to_string(k));
}

// ---- evaluation ----

Mat2B evaluate_word_raw(const std::vector<Mat2B>& images, const Word& w)
{
    if (images.empty()) throw ContractError("no generator images");
    Mat2B g = Mat2B::identity(images[0].tag);
    for (int k : w) {
        if (k == 0 || std::abs(k) > int(images.size())) throw InputError("word index out of range: " + std::to_string(k));
        const Mat2B& x = images[std::abs(k) - 1];
        g = g * (k > 0 ? x : inverse(x));
    }
    return g;
}

Matrix2d evaluate_word_real(const std::vector<Matrix2d>& images, const Word& w)
{
    Matrix2d g = Matrix2d::Identity();
    for (int k : w) {
        if (k == 0 || std::abs(k) > int(images.size())) throw InputError("word index out of range: " + std::to_string(k));
        const Matrix2d& x = images[std::abs(k) - 1];
        g = g * (k > 0 ? x : x.inverse());
    }
    return g;
}

GroupElem evaluate_word(const Representation& rep, const Word& w)
{
    GroupElem g = GroupElem::identity(rep.tag);
    for (int k : w) {
        if (k == 0 || std::abs(k) > int(rep.images.size())) throw InputError("word index out of range: " + std::to_string(k));
        const GroupElem& x = rep.images[std::abs(k) - 1];
        g = g * (k > 0 ? x : x.inverse());
    }
    return g;
}

double relation_residual(const Representation& rep)
{
    double r = 0.0;
    GroupElem id = GroupElem::identity(rep.tag);
    for (const Word& w : rep.pres.relators) r = std::max(r, group_distance(evaluate_word(rep, w), id));
    return r;
}

Representation make_real_rep(const Presentation& pres, const std::vector<Matrix2d>& images, int dim)
{
    Representation rep{pres, AlgebraTag{1.0}, dim, {}};
    for (const Matrix2d& m : images) rep.images.emplace_back(Mat2B::real(rep.tag, m));
    return rep;
}

std::vector<Matrix2d> real_images(const Representation& rep)
{
    std::vector<Matrix2d> out;
    for (const GroupElem& g : rep.images) {
        if (g.mat().im.cwiseAbs().maxCoeff() > 1e-14) throw ContractError("representation is not real");
        out.push_back(g.mat().re);
    }
    return out;
}

// ---- sl(2,R) and cocycles ----

Matrix2d sl2_from_coords(const Vector3d& c)
{
    Matrix2d x;
    x << c(0), c(1), c(2), -c(0);
    return x;
}

Vector3d sl2_coords(const Matrix2d& x) { return {0.5 * (x(0, 0) - x(1, 1)), x(0, 1), x(1, 0)}; }

Matrix2d Ad(const Matrix2d& g, const Matrix2d& x) { return g * x * g.inverse(); }

Matrix2d cocycle_extend(const Cocycle& z, const Word& w)
{
    Matrix2d Z = Matrix2d::Zero();
    Matrix2d G = Matrix2d::Identity();
    for (int k : w) {
        int i = std::abs(k) - 1;
        if (k == 0 || i >= int(z.base.size())) throw InputError("word index out of range: " + std::to_string(k));
        Matrix2d g = z.base[i];
        Matrix2d zz = z.values[i];
        if (k < 0) {
            g = g.inverse();
            zz = -Ad(g, zz);
        }
        Z += Ad(G, zz);
        G = G * g;
    }
    return Z;
}

double cocycle_defect(const Presentation& pres, const Cocycle& z)
{
    double d = 0.0;
    for (const Word& r : pres.relators) d = std::max(d, cocycle_extend(z, r).cwiseAbs().maxCoeff());
    return d;
}

int numeric_rank(const VectorXd& sv, std::size_t ncols)
{
    if (sv.size() == 0) return 0;
    double smax = sv.maxCoeff();
    if (smax == 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) >= 1e-8 * smax) ++rank;
    // Gap between the smallest kept and the largest dropped singular value.
    double kept = sv(rank - 1);
    double dropped = rank < sv.size() ? sv(rank) : 0.0;
    if (dropped > 0.0 && kept / dropped < 1e3)
        throw AmbiguousRank("singular value gap " + std::to_string(kept / dropped) + " at rank " + std::to_string(rank));
    (void)ncols;
    return rank;
}

namespace {

MatrixXd cocycle_matrix(const Presentation& pres, const std::vector<Matrix2d>& rho0)
{
    int n = int(rho0.size());
    MatrixXd M = MatrixXd::Zero(std::max<std::size_t>(1, 4 * pres.relators.size()), 3 * n);
    for (int j = 0; j < 3 * n; ++j) {
        Cocycle z{rho0, std::vector<Matrix2d>(n, Matrix2d::Zero())};
        z.values[j / 3] = sl2_from_coords(Vector3d::Unit(j % 3));
        for (std::size_t r = 0; r < pres.relators.size(); ++r) {
            Matrix2d v = cocycle_extend(z, pres.relators[r]);
            M.block<4, 1>(4 * r, j) = Eigen::Map<Eigen::Vector4d>(v.data());
        }
    }
    return M;
}

Cocycle cocycle_from_vector(const std::vector<Matrix2d>& rho0, const VectorXd& v)
{
    Cocycle z{rho0, {}};
    for (std::size_t i = 0; i < rho0.size(); ++i) z.values.push_back(sl2_from_coords(v.segment<3>(3 * i)));
    return z;
}

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

} // namespace

std::vector<Cocycle> cocycle_space(const Presentation& pres, const std::vector<Matrix2d>& rho0,
                                   std::vector<double>* singular_values)
{
    pres.validate();
    MatrixXd M = cocycle_matrix(pres, rho0);
    Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeFullV);
    VectorXd sv = svd.singularValues();
    if (singular_values) *singular_values = to_std(sv);
    int rank = pres.relators.empty() ? 0 : numeric_rank(sv, M.cols());
    std::vector<Cocycle> basis;
    for (int j = rank; j < M.cols(); ++j) basis.push_back(cocycle_from_vector(rho0, svd.matrixV().col(j)));
    return basis;
}

Cocycle coboundary(const std::vector<Matrix2d>& rho0, const Matrix2d& u)
{
    Cocycle z{rho0, {}};
    for (const Matrix2d& g : rho0) z.values.push_back(u - Ad(g, u));
    return z;
}

std::vector<Cocycle> coboundary_space(const Presentation& pres, const std::vector<Matrix2d>& rho0,
                                      std::vector<double>* singular_values)
{
    pres.validate();
    int n = int(rho0.size());
    MatrixXd D(3 * n, 3);
    for (int j = 0; j < 3; ++j) {
        Cocycle z = coboundary(rho0, sl2_from_coords(Vector3d::Unit(j)));
        for (int i = 0; i < n; ++i) D.block<3, 1>(3 * i, j) = sl2_coords(z.values[i]);
    }
    Eigen::JacobiSVD<MatrixXd> svd(D, Eigen::ComputeThinU);
    VectorXd sv = svd.singularValues();
    if (singular_values) *singular_values = to_std(sv);
    int rank = numeric_rank(sv, 3);
    std::vector<Cocycle> basis;
    for (int j = 0; j < rank; ++j) basis.push_back(cocycle_from_vector(rho0, svd.matrixU().col(j)));
    return basis;
}

CohomologyReport h1_dimension(const Presentation& pres, const std::vector<Matrix2d>& rho0)
{
    CohomologyReport r;
    r.z1 = int(cocycle_space(pres, rho0, &r.z1_singular_values).size());
    r.b1 = int(coboundary_space(pres, rho0, &r.b1_singular_values).size());
    r.h1 = r.z1 - r.b1;
    return r;
}

Representation hp_from_cocycle(const Presentation& pres, const Cocycle& z, double tol)
{
    double defect = cocycle_defect(pres, z);
    if (defect > tol) throw ContractError("not a cocycle: defect " + std::to_string(defect));
    Representation rep{pres, AlgebraTag{0.0}, 3, {}};
    for (std::size_t i = 0; i < z.base.size(); ++i)
        rep.images.emplace_back(Mat2B(rep.tag, z.base[i], z.values[i] * z.base[i]));
    return rep;
}

Cocycle cocycle_from_hp(const Representation& hp)
{
    Cocycle z;
    for (const GroupElem& g : hp.images) {
        z.base.push_back(g.mat().re);
        z.values.push_back(g.mat().im * g.mat().re.inverse());
    }
    return z;
}

// ---- solvers ----

namespace {

MatrixXd pinv_solve_matrix(const MatrixXd& A, double rcond)
{
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    VectorXd s = svd.singularValues();
    double cut = s.size() ? rcond * s(0) : 0.0;
    VectorXd inv = VectorXd::Zero(s.size());
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > cut && s(i) > 0) inv(i) = 1.0 / s(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double kappa_unit(AlgebraTag tag) { return tag.s == 0.0 ? 1.0 : 1.0 / std::abs(tag.s); }

Mat2B correction(const VectorXd& u, int i, int per, AlgebraTag tag)
{
    Mat2B x(tag, Matrix2d::Zero(), Matrix2d::Zero());
    if (per == 3) {
        x.re = sl2_from_coords(u.segment<3>(3 * i));
    } else {
        x.re = sl2_from_coords(Vector3d(u(6 * i), u(6 * i + 2), u(6 * i + 4)));
        x.im = kappa_unit(tag) * sl2_from_coords(Vector3d(u(6 * i + 1), u(6 * i + 3), u(6 * i + 5)));
    }
    return x;
}

VectorXd correction_coords(const Mat2B& x, int per)
{
    Vector3d r = sl2_coords(x.re);
    if (per == 3) return r;
    Vector3d m = sl2_coords(x.im) / kappa_unit(x.tag);
    VectorXd v(6);
    v << r(0), m(0), r(1), m(1), r(2), m(2);
    return v;
}

} // namespace

NewtonResult newton_project(const Presentation& pres, const std::vector<Mat2B>& guess,
                            const std::vector<int>& signs, const std::vector<TraceConstraint>& constraints,
                            const NewtonOptions& opt)
{
    pres.validate();
    const int n = int(guess.size());
    const AlgebraTag tag = guess.at(0).tag;
    const int per = opt.real_only ? 3 : 6;
    const int nu = per * n;
    const bool cplx = !opt.real_only;

    auto F = [&](const std::vector<Mat2B>& cur) {
        std::vector<double> r;
        for (std::size_t k = 0; k < pres.relators.size(); ++k) {
            Mat2B D = evaluate_word_raw(cur, pres.relators[k]);
            D.re -= double(signs[k]) * Matrix2d::Identity();
            for (int e = 0; e < 4; ++e) r.push_back(D.re.data()[e]);
            if (cplx)
                for (int e = 0; e < 4; ++e) r.push_back(D.im.data()[e]);
        }
        for (const TraceConstraint& c : constraints) {
            BElem tr = trace(evaluate_word_raw(cur, c.word));
            r.push_back(tr.re - c.target_re);
            if (cplx) r.push_back(tr.im / kappa_unit(tag) - c.target_im);
        }
        return VectorXd(Eigen::Map<VectorXd>(r.data(), Eigen::Index(r.size())));
    };
    auto apply = [&](const std::vector<Mat2B>& cur, const VectorXd& u) {
        std::vector<Mat2B> out;
        for (int i = 0; i < n; ++i) out.push_back(exp_traceless(correction(u, i, per, tag)) * cur[i]);
        return out;
    };

    NewtonResult res;
    res.images = guess;
    VectorXd f = F(res.images);
    res.residual = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
    res.history.push_back(res.residual);
    int stalled = 0;
    for (int it = 0; it < opt.max_iter; ++it) {
        if (res.residual < opt.tol) {
            res.converged = true;
            break;
        }
        MatrixXd J(f.size(), nu);
        for (int j = 0; j < nu; ++j) {
            VectorXd e = VectorXd::Zero(nu);
            e(j) = opt.fd_step;
            J.col(j) = (F(apply(res.images, e)) - F(apply(res.images, -e))) / (2 * opt.fd_step);
        }
        // Conjugation directions X - Ad(g)X are projected out of the step.
        std::vector<VectorXd> gauge;
        for (int b = 0; b < 3; ++b)
            for (int ph = 0; ph < (cplx ? 2 : 1); ++ph) {
                Mat2B X(tag, Matrix2d::Zero(), Matrix2d::Zero());
                (ph == 0 ? X.re : X.im) = sl2_from_coords(Vector3d::Unit(b)) * (ph == 0 ? 1.0 : kappa_unit(tag));
                VectorXd v(nu);
                for (int i = 0; i < n; ++i) {
                    Mat2B D = X - res.images[i] * X * inverse(res.images[i]);
                    v.segment(per * i, per) = correction_coords(D, per);
                }
                gauge.push_back(v);
            }
        MatrixXd G(nu, gauge.size());
        for (std::size_t k = 0; k < gauge.size(); ++k) G.col(k) = gauge[k];
        Eigen::ColPivHouseholderQR<MatrixXd> qr(G);
        qr.setThreshold(1e-10);
        int gr = int(qr.rank());
        MatrixXd Q = qr.householderQ();
        MatrixXd Nb = Q.rightCols(nu - gr);
        VectorXd du = -Nb * (pinv_solve_matrix(J * Nb, opt.rcond) * f);

        // Backtracking on the max-abs residual.
        double lam = 1.0;
        std::vector<Mat2B> best_imgs;
        double best = INFINITY;
        VectorXd best_f;
        for (int k = 0; k < 8; ++k, lam *= 0.5) {
            auto cand = apply(res.images, lam * du);
            VectorXd fc = F(cand);
            double rc = fc.cwiseAbs().maxCoeff();
            if (rc < best) {
                best = rc;
                best_imgs = cand;
                best_f = fc;
            }
            if (rc < res.residual) break;
        }
        res.images = best_imgs;
        f = best_f;
        res.residual = best;
        res.history.push_back(best);
        res.iterations = it + 1;
        stalled = res.residual > opt.stall_level ? stalled + 1 : 0;
        if (stalled >= opt.stall_iters) break;
    }
    if (res.residual < opt.tol) res.converged = true;
    return res;
}

VectorSolveResult gauss_newton(const std::function<VectorXd(const VectorXd&)>& F, VectorXd x0,
                               const NewtonOptions& opt, double box)
{
    auto clip = [&](VectorXd x) {
        if (std::isfinite(box)) x = x.cwiseMax(-box).cwiseMin(box);
        return x;
    };
    VectorSolveResult res;
    res.x = clip(std::move(x0));
    VectorXd f = F(res.x);
    res.residual = f.cwiseAbs().maxCoeff();
    int stalled = 0;
    const int n = int(res.x.size());
    for (int it = 0; it < opt.max_iter; ++it) {
        if (res.residual < opt.tol) break;
        MatrixXd J(f.size(), n);
        for (int j = 0; j < n; ++j) {
            VectorXd e = VectorXd::Zero(n);
            e(j) = opt.fd_step;
            J.col(j) = (F(res.x + e) - F(res.x - e)) / (2 * opt.fd_step);
        }
        VectorXd dx = -pinv_solve_matrix(J, opt.rcond) * f;
        double lam = 1.0;
        VectorXd best_x = res.x, best_f = f;
        double best = INFINITY;
        for (int k = 0; k < 8; ++k, lam *= 0.5) {
            VectorXd xc = clip(res.x + lam * dx);
            VectorXd fc = F(xc);
            double rc = fc.cwiseAbs().maxCoeff();
            if (rc < best) {
                best = rc;
                best_x = xc;
                best_f = fc;
            }
            if (rc < res.residual) break;
        }
        if (best >= res.residual) {
            res.iterations = it + 1;
            break;
        }
        res.x = best_x;
        f = best_f;
        res.residual = best;
        res.iterations = it + 1;
        stalled = res.residual > opt.stall_level ? stalled + 1 : 0;
        if (stalled >= opt.stall_iters) break;
    }
    res.converged = res.residual < opt.tol;
    return res;
}

std::vector<int> relator_signs(const Presentation& pres, const std::vector<Matrix2d>& rho0)
{
    std::vector<int> s;
    for (const Word& r : pres.relators) s.push_back(evaluate_word_real(rho0, r).trace() >= 0 ? 1 : -1);
    return s;
}

namespace {

Representation rep_from_mats(const Presentation& pres, const std::vector<Mat2B>& imgs, AlgebraTag tag)
{
    Representation rep{pres, tag, 3, {}};
    for (const Mat2B& m : imgs) rep.images.emplace_back(m);
    return rep;
}

int meridian_sign(const Cocycle& z, const Word& m)
{
    return evaluate_word_real(z.base, m).trace() >= 0 ? 1 : -1;
}

} // namespace

Regenerated regenerate_hyp(const Presentation& pres, const Cocycle& z, double t,
                           const std::optional<MeridianConstraint>& c, const NewtonOptions& opt)
{
    if (!(t > 0)) throw ContractError("hyperbolic regeneration needs t > 0");
    AlgebraTag tag{1.0};
    std::vector<Mat2B> guess;
    for (std::size_t i = 0; i < z.base.size(); ++i)
        guess.push_back(exp_traceless(Mat2B(tag, Matrix2d::Zero(), t * z.values[i])) * Mat2B::real(tag, z.base[i]));
    std::vector<TraceConstraint> cons;
    if (c) cons.push_back({c->meridian, meridian_sign(z, c->meridian) * 2.0 * std::cos(c->omega * t / 2), 0.0});
    NewtonOptions o = opt;
    o.real_only = false;
    NewtonResult nr = newton_project(pres, guess, relator_signs(pres, z.base), cons, o);
    if (!nr.converged) throw Obstructed("hyperbolic Newton did not converge", nr.residual);
    Regenerated out{rep_from_mats(pres, nr.images, tag), 0.0, nr.iterations};
    out.residual = relation_residual(out.rep);
    return out;
}

NewtonResult real_path_point(const Presentation& pres, const Cocycle& z, double t,
                             const std::optional<MeridianConstraint>& c, const NewtonOptions& opt)
{
    AlgebraTag tag{1.0};
    std::vector<Mat2B> guess;
    for (std::size_t i = 0; i < z.base.size(); ++i)
        guess.push_back(Mat2B::real(tag, (exp_traceless(Mat2B::real(tag, t * z.values[i])).re) * z.base[i]));
    std::vector<TraceConstraint> cons;
    if (c) cons.push_back({c->meridian, meridian_sign(z, c->meridian) * 2.0 * std::cosh(c->omega * t / 2), 0.0});
    NewtonOptions o = opt;
    o.real_only = true;
    return newton_project(pres, guess, relator_signs(pres, z.base), cons, o);
}

Mat2B idempotent_combine(const Matrix2d& P, const Matrix2d& Q, AlgebraTag tag)
{
    auto [ep, em] = idempotents(tag);
    return ep * Mat2B::real(tag, P) + em * Mat2B::real(tag, Q);
}

Regenerated regenerate_ads(const Presentation& pres, const Cocycle& z, double t,
                           const std::optional<MeridianConstraint>& c, const NewtonOptions& opt)
{
    if (!(t < 0)) throw ContractError("AdS regeneration needs t < 0");
    NewtonResult P = real_path_point(pres, z, t, c, opt);
    NewtonResult Q = real_path_point(pres, z, -t, c, opt);
    if (!P.converged || !Q.converged)
        throw NoRealPath("real path Newton stalled at residual " + std::to_string(std::max(P.residual, Q.residual)));
    AlgebraTag tag{-1.0};
    std::vector<Mat2B> imgs;
    for (std::size_t i = 0; i < P.images.size(); ++i)
        imgs.push_back(idempotent_combine(P.images[i].re, Q.images[i].re, tag));
    Regenerated out{rep_from_mats(pres, imgs, tag), 0.0, std::max(P.iterations, Q.iterations)};
    out.residual = relation_residual(out.rep);
    return out;
}

LimitCheck rescaled_limit_check(const std::vector<std::pair<double, Representation>>& path,
                                const Representation& rho_hp)
{
    LimitCheck best;
    for (int flip = 0; flip < 2; ++flip) {
        LimitCheck lc;
        lc.fiber_flipped = flip == 1;
        for (const auto& [t, rep] : path) {
            if (t == 0.0) throw InvalidRescale("path sample at t = 0");
            std::vector<double> per;
            double worst = 0.0;
            for (std::size_t i = 0; i < rep.images.size(); ++i) {
                const Mat2B& a = rep.images[i].mat();
                const Mat2B& h = rho_hp.images[i].mat();
                Matrix2d im_h = flip ? Matrix2d(-h.im) : h.im;
                double d = INFINITY;
                for (double sg : {1.0, -1.0}) {
                    double e = std::max((a.re - sg * h.re).cwiseAbs().maxCoeff(),
                                        (a.im / std::abs(t) - sg * im_h).cwiseAbs().maxCoeff());
                    d = std::min(d, e);
                }
                per.push_back(d);
                worst = std::max(worst, d);
            }
            lc.ts.push_back(t);
            lc.errors.push_back(worst);
            lc.per_generator.push_back(per);
        }
        // Least-squares slope of log(error) against log|t|.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int k = 0;
        bool exact = true;
        for (std::size_t i = 0; i < lc.ts.size(); ++i) {
            if (lc.errors[i] > 1e-13) exact = false;
            if (lc.errors[i] <= 0) continue;
            double x = std::log(std::abs(lc.ts[i])), y = std::log(lc.errors[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++k;
        }
        if (exact) lc.order = INFINITY;
        else if (k >= 2) lc.order = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        else lc.order = 0.0;
        lc.passed = lc.order >= 0.9;
        if (flip == 0 || (lc.passed && !best.passed) ||
            (lc.passed == best.passed && lc.errors.back() < best.errors.back()))
            best = lc;
    }
    return best;
}

// ---- singularity invariants ----

namespace {

double eta_dot(const VectorXd& a, const MatrixXd& eta, const VectorXd& b) { return a.dot(eta * b); }

// eta-orthonormal basis of the orthogonal complement of the columns of A.
std::vector<std::pair<VectorXd, double>> complement(const MatrixXd& A, const MatrixXd& eta)
{
    MatrixXd C = (A.transpose() * eta).fullPivLu().kernel();
    MatrixXd G = C.transpose() * eta * C;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (G + G.transpose()));
    std::vector<std::pair<VectorXd, double>> out;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double l = es.eigenvalues()(i);
        out.push_back({C * es.eigenvectors().col(i) / std::sqrt(std::abs(l)), l > 0 ? 1.0 : -1.0});
    }
    return out;
}

MatrixXd axis_matrix(const Axis& a)
{
    MatrixXd A(a.p.size(), a.d.size() ? 2 : 1);
    A.col(0) = a.p;
    if (a.d.size()) A.col(1) = a.d;
    return A;
}

// For s < 0 the projective image is only defined up to sign; use the one
// with positive trace, as for elements near the identity.
Projective signed_rep(const Projective& g, AlgebraTag tag)
{
    if (tag.s < 0 && g.m.trace() < 0) return {g.dim, -g.m};
    return g;
}

double axis_defect(const Projective& g, const Axis& a)
{
    double d = (g.m * a.p - a.p).cwiseAbs().maxCoeff();
    if (a.d.size()) d = std::max(d, (g.m * a.d - a.d).cwiseAbs().maxCoeff());
    return d;
}

// Oriented complement (v, w): det[axis, v, w] > 0.
std::pair<VectorXd, VectorXd> oriented_pair(const Axis& a, VectorXd v, VectorXd w)
{
    MatrixXd A = axis_matrix(a);
    MatrixXd full(A.rows(), A.rows());
    full << A, v, w;
    if (full.determinant() < 0) w = -w;
    return {v, w};
}

} // namespace

Axis fixed_axis(const Projective& g_in, AlgebraTag tag, const std::optional<Projective>& orient)
{
    const Projective g = signed_rep(g_in, tag);
    const int n = int(g.m.rows());
    const int k = g.dim == 3 ? 2 : 1;
    MatrixXd eta_m = eta(tag, g.dim);
    MatrixXd M = g.m - MatrixXd::Identity(n, n);
    Axis a;
    if (M.cwiseAbs().maxCoeff() < 1e-14) {
        a.p = VectorXd::Unit(n, 0);
        if (k == 2) a.d = VectorXd::Unit(n, 1);
        return a;
    }
    Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeFullV);
    VectorXd sv = svd.singularValues();
    if (sv(n - k) > 1e-9 * (1.0 + g.m.norm()))
        throw NotAxial("element has no fixed " + std::string(k == 2 ? "line" : "point"));
    MatrixXd B = svd.matrixV().rightCols(k);
    MatrixXd G = B.transpose() * eta_m * B;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (G + G.transpose()));
    if (es.eigenvalues()(0) >= 0) throw NotAxial("fixed set contains no interior point");
    a.p = B * es.eigenvectors().col(0) / std::sqrt(-es.eigenvalues()(0));
    if (a.p(0) < 0) a.p = -a.p;
    if (k == 2) {
        a.d = B * es.eigenvectors().col(1) / std::sqrt(std::abs(es.eigenvalues()(1)));
        double sgn;
        if (orient) {
            sgn = eta_dot(signed_rep(*orient, tag).m * a.p, eta_m, a.d);
        } else {
            Eigen::Index i;
            a.d.cwiseAbs().maxCoeff(&i);
            sgn = a.d(i);
        }
        if (sgn < 0) a.d = -a.d;
    }
    return a;
}

RotationResult rotation_angle(const Projective& g, AlgebraTag tag, const Axis& axis)
{
    if (tag.s <= 0) throw ContractError("rotation angle needs a hyperbolic model (s > 0)");
    MatrixXd eta_m = eta(tag, g.dim);
    if (axis_defect(g, axis) > 1e-9 * (1.0 + g.m.norm())) return {0.0, false};
    auto c = complement(axis_matrix(axis), eta_m);
    auto [v, w] = oriented_pair(axis, c[0].first, c[1].first);
    VectorXd gv = g.m * v;
    return {std::atan2(eta_dot(gv, eta_m, w), eta_dot(gv, eta_m, v)), true};
}

RotationResult rotation_angle(const Projective& g, AlgebraTag tag)
{
    int n = int(g.m.rows());
    if ((g.m - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-14) return {0.0, true};
    Axis a;
    try {
        a = fixed_axis(g, tag);
    } catch (const NotAxial&) {
        return {0.0, false};
    }
    return rotation_angle(g, tag, a);
}

double lifted_rotation_angle(const std::vector<Projective>& path, AlgebraTag tag, const Axis& axis)
{
    if (path.empty()) return 0.0;
    double total = 0.0;
    double prev = rotation_angle(path[0], tag, axis).angle;
    if (std::abs(prev) > 1e-9) throw ContractError("lifted path must start at the identity");
    for (std::size_t i = 1; i < path.size(); ++i) {
        double cur = rotation_angle(path[i], tag, axis).angle;
        double d = std::remainder(cur - prev, 2 * M_PI);
        if (std::abs(d) >= M_PI / 2) throw StepTooLarge("path step of " + std::to_string(d) + " rad");
        total += d;
        prev = cur;
    }
    return total;
}

double tachyon_mass(const Projective& g_in, AlgebraTag tag, const Axis& axis)
{
    const Projective g = signed_rep(g_in, tag);
    if (tag.s >= 0) throw ContractError("tachyon mass needs an AdS model (s < 0)");
    if (axis_defect(g, axis) > 1e-9 * (1.0 + g.m.norm())) throw NotAxial("element does not fix the axis");
    MatrixXd eta_m = eta(tag, g.dim);
    auto c = complement(axis_matrix(axis), eta_m);
    VectorXd v = c[0].second > 0 ? c[0].first : c[1].first;
    VectorXd w = c[0].second > 0 ? c[1].first : c[0].first;
    std::tie(v, w) = oriented_pair(axis, v, w);
    return std::asinh(-eta_dot(g.m * v, eta_m, w));
}

namespace {

// Orientation-preserving K with K G K^-1 diagonal, first eigenvalue the expanding one.
Matrix2d diagonalizer(const Matrix2d& G, bool expanding_first)
{
    Eigen::EigenSolver<Matrix2d> es(G);
    if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > 1e-12)
        throw ContractError("element has no real eigenvectors");
    Eigen::Vector2d ev = es.eigenvalues().real();
    Matrix2d V = es.eigenvectors().real();
    for (int j = 0; j < 2; ++j) {
        Eigen::Index i;
        V.col(j).cwiseAbs().maxCoeff(&i);
        if (V(i, j) < 0) V.col(j) = -V.col(j);
    }
    bool swap = expanding_first ? std::abs(ev(1)) > std::abs(ev(0))
                                : std::abs(V(0, 1)) > std::abs(V(0, 0));
    if (swap) V.col(0).swap(V.col(1));
    if (V.determinant() < 0) V.col(1) = -V.col(1);
    Matrix2d K = V.inverse();
    return K / std::sqrt(std::abs(K.determinant()));
}

} // namespace

double infinitesimal_cone_angle(const GroupElem& meridian, const std::optional<GroupElem>& longitude)
{
    if (meridian.tag().s != 0.0) throw ContractError("infinitesimal cone angle needs an HP element");
    Matrix2d A = meridian.mat().re;
    double sg = A(0, 0) >= 0 ? 1.0 : -1.0;
    if ((A - sg * Matrix2d::Identity()).cwiseAbs().maxCoeff() > 1e-10)
        throw NotInfinitesimal("meridian has a nontrivial finite part");
    Matrix2d h = meridian.mat().im * A.inverse();
    if (h.cwiseAbs().maxCoeff() < 1e-14) return 0.0;
    Matrix2d K = longitude ? diagonalizer(longitude->mat().re, true) : diagonalizer(h, false);
    Matrix2d hs = K * h * K.inverse();
    if (std::abs(hs(0, 1)) + std::abs(hs(1, 0)) > 1e-8 * (1.0 + h.cwiseAbs().maxCoeff()))
        throw ContractError("meridian and longitude do not share a line");
    Mat2B std_form(AlgebraTag{0.0}, Matrix2d::Identity(), hs);
    return to_projective(GroupElem(std_form), 3).m(3, 2);
}

double infinitesimal_cone_angle(const Representation& hp, const Word& meridian, const std::optional<Word>& longitude)
{
    std::optional<GroupElem> l;
    if (longitude) l = evaluate_word(hp, *longitude);
    return infinitesimal_cone_angle(evaluate_word(hp, meridian), l);
}

double infinitesimal_rotation_2d(const GroupElem& g)
{
    if (g.tag().s != 0.0) throw ContractError("infinitesimal rotation needs an HP element");
    MatrixXd M = to_projective(g, 2).m;
    M /= M(0, 0);
    if ((M.topLeftCorner(2, 2) - Matrix2d::Identity()).cwiseAbs().maxCoeff() > 1e-10)
        throw NotInfinitesimal("element has a nontrivial finite part");
    double l0 = M(2, 0), l1 = M(2, 1);
    if (std::abs(l0) + std::abs(l1) < 1e-14) return 0.0;
    // The row vanishes at the fixed point p; e is the unit normal with det[p, e] > 0.
    double q = l1 * l1 - l0 * l0;
    if (q <= 0) throw ContractError("infinitesimal has no fixed interior point");
    double p0 = std::abs(l1) / std::sqrt(q), p1 = -l0 / std::sqrt(q) * (l1 >= 0 ? 1.0 : -1.0);
    return l0 * p1 + l1 * p0;
}

std::pair<Projective, Projective> model_cone_generators(Geometry geo, double omega, double d, double mu, double t)
{
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity(), l = Eigen::Matrix4d::Identity();
    l(0, 0) = l(1, 1) = std::cosh(d);
    l(0, 1) = l(1, 0) = std::sinh(d);
    switch (geo) {
    case Geometry::Hyp:
        m(2, 2) = m(3, 3) = std::cos(omega * t);
        m(2, 3) = -std::sin(omega * t);
        m(3, 2) = std::sin(omega * t);
        l(2, 2) = l(3, 3) = std::cos(mu * t);
        l(2, 3) = -std::sin(mu * t);
        l(3, 2) = std::sin(mu * t);
        break;
    case Geometry::AdS:
        m(2, 2) = m(3, 3) = std::cosh(omega * t);
        m(2, 3) = m(3, 2) = std::sinh(omega * t);
        l(2, 2) = l(3, 3) = std::cosh(mu * t);
        l(2, 3) = l(3, 2) = std::sinh(mu * t);
        break;
    case Geometry::HP:
        m(3, 2) = omega;
        l(3, 2) = mu;
        break;
    }
    return {{3, m}, {3, l}};
}

// ---- JSON ----

nlohmann::json to_json(const Presentation& p) { return {{"generators", p.generators}, {"relators", p.relators}}; }

nlohmann::json to_json(const Representation& r, const std::vector<std::string>&)
{
    nlohmann::json imgs = nlohmann::json::object();
    for (std::size_t i = 0; i < r.images.size(); ++i) imgs[r.pres.generators.at(i)] = to_json(r.images[i]);
    return {{"algebra", {{"s", r.tag.s}}},
            {"dim", r.dim},
            {"generators", r.pres.generators},
            {"relators", r.pres.relators},
            {"images", imgs}};
}

Representation representation_from_json(const nlohmann::json& j)
{
    try {
        Representation r;
        r.tag = AlgebraTag{j.at("algebra").at("s").get<double>()};
        r.dim = j.value("dim", 3);
        r.pres.generators = j.at("generators").get<std::vector<std::string>>();
        r.pres.relators = j.at("relators").get<std::vector<Word>>();
        r.pres.validate();
        for (const auto& g : r.pres.generators) r.images.push_back(groupelem_from_json(j.at("images").at(g), r.tag));
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed representation: ") + e.what());
    }
}

} // namespace transit
