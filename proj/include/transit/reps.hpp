#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "transit/geom.hpp"

namespace transit {

// Signed 1-based generator indices; negative means inverse.
using Word = std::vector<int>;

Word inverse_word(const Word& w);
Word power_word(const Word& w, int n);
Word concat(std::initializer_list<Word> parts);
Word free_reduce(const Word& w);
Word commutator_word(const Word& a, const Word& b);

struct Presentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;

    void validate() const;
};

struct Representation {
    Presentation pres;
    AlgebraTag tag;
    int dim = 3;
    std::vector<GroupElem> images;
};

GroupElem evaluate_word(const Representation& rep, const Word& w);
double relation_residual(const Representation& rep);

// Raw matrix products, with no renormalization, for solvers that need continuity.
Mat2B evaluate_word_raw(const std::vector<Mat2B>& images, const Word& w);
Eigen::Matrix2d evaluate_word_real(const std::vector<Eigen::Matrix2d>& images, const Word& w);

Representation make_real_rep(const Presentation& pres, const std::vector<Eigen::Matrix2d>& images, int dim = 3);
// Real parts of the images; throws if any imaginary part is nonzero.
std::vector<Eigen::Matrix2d> real_images(const Representation& rep);

// sl(2,R) in the basis H = [[1,0],[0,-1]], E = [[0,1],[0,0]], F = [[0,0],[1,0]].
Eigen::Matrix2d sl2_from_coords(const Eigen::Vector3d& c);
Eigen::Vector3d sl2_coords(const Eigen::Matrix2d& x);
Eigen::Matrix2d Ad(const Eigen::Matrix2d& g, const Eigen::Matrix2d& x);

struct Cocycle {
    std::vector<Eigen::Matrix2d> base;
    std::vector<Eigen::Matrix2d> values;
};

Eigen::Matrix2d cocycle_extend(const Cocycle& z, const Word& w);
// Largest |z(r)| over relators.
double cocycle_defect(const Presentation& pres, const Cocycle& z);

struct CohomologyReport {
    int z1 = 0;
    int b1 = 0;
    int h1 = 0;
    std::vector<double> z1_singular_values;
    std::vector<double> b1_singular_values;
};

// Numeric rank: singular values below 1e-8 * sigma_max are zero; AmbiguousRank
// when the gap around the cut is below 1e3.
int numeric_rank(const Eigen::VectorXd& sv, std::size_t ncols);

std::vector<Cocycle> cocycle_space(const Presentation& pres, const std::vector<Eigen::Matrix2d>& rho0,
                                   std::vector<double>* singular_values = nullptr);
std::vector<Cocycle> coboundary_space(const Presentation& pres, const std::vector<Eigen::Matrix2d>& rho0,
                                      std::vector<double>* singular_values = nullptr);
Cocycle coboundary(const std::vector<Eigen::Matrix2d>& rho0, const Eigen::Matrix2d& u);
CohomologyReport h1_dimension(const Presentation& pres, const std::vector<Eigen::Matrix2d>& rho0);

// rho_HP(g) = (1 + z(g) sigma) rho0(g).
Representation hp_from_cocycle(const Presentation& pres, const Cocycle& z, double tol = 1e-8);
// z(g) = Y(g) rho0(g)^-1 for rho_HP = rho0 + Y sigma.
Cocycle cocycle_from_hp(const Representation& hp);

// ---- Newton projection onto the representation variety ----

struct TraceConstraint {
    Word word;
    double target_re = 0.0;
    double target_im = 0.0;
};

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 50;
    double stall_level = 1e-8;
    int stall_iters = 10;
    double fd_step = 1e-7;
    double rcond = 1e-12;
    bool real_only = false;
};

struct NewtonResult {
    std::vector<Mat2B> images;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

// Relators must evaluate to sign * I, with signs taken from the base point.
NewtonResult newton_project(const Presentation& pres, const std::vector<Mat2B>& guess,
                            const std::vector<int>& relator_signs, const std::vector<TraceConstraint>& constraints,
                            const NewtonOptions& opt = {});

// Generic damped Gauss-Newton on a vector of unknowns, used where the
// parametrization is not a product of group elements.
struct VectorSolveResult {
    Eigen::VectorXd x;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};
VectorSolveResult gauss_newton(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& F, Eigen::VectorXd x0,
                               const NewtonOptions& opt, double box = INFINITY);

std::vector<int> relator_signs(const Presentation& pres, const std::vector<Eigen::Matrix2d>& rho0);

struct MeridianConstraint {
    Word meridian;
    double omega = 0.0;
};

struct Regenerated {
    Representation rep;
    double residual = 0.0;
    int iterations = 0;
};

// t > 0: Newton from exp(t i z) rho0 with tr rho(meridian) = +-2cos(omega t / 2).
Regenerated regenerate_hyp(const Presentation& pres, const Cocycle& z, double t,
                           const std::optional<MeridianConstraint>& c, const NewtonOptions& opt = {});
// Real path through rho0 with derivative z, boost constraint tr = +-2cosh(omega t / 2).
NewtonResult real_path_point(const Presentation& pres, const Cocycle& z, double t,
                             const std::optional<MeridianConstraint>& c, const NewtonOptions& opt = {});
// t < 0: e+ phi_t + e- phi_{-t}.
Regenerated regenerate_ads(const Presentation& pres, const Cocycle& z, double t,
                           const std::optional<MeridianConstraint>& c, const NewtonOptions& opt = {});
// Assemble e+ P + e- Q over B_s (s < 0) from two real images.
Mat2B idempotent_combine(const Eigen::Matrix2d& P, const Eigen::Matrix2d& Q, AlgebraTag tag);

struct LimitCheck {
    bool passed = false;
    bool fiber_flipped = false;
    double order = 0.0;
    std::vector<double> ts;
    std::vector<double> errors;
    std::vector<std::vector<double>> per_generator;
};

// Each path entry is (t, rep over B_{sign t}); compares rescale_algebra at s = t
// with rho_HP componentwise.
LimitCheck rescaled_limit_check(const std::vector<std::pair<double, Representation>>& path,
                                const Representation& rho_hp);

// ---- singularity invariants ----

// Axis: a point p (q = -1, x1 > 0) and, in dimension 3, a unit direction d.
struct Axis {
    Eigen::VectorXd p;
    Eigen::VectorXd d;
};

// Fixed point (dim 2) or fixed line (dim 3) of g. In dimension 3 the
// direction is oriented so that `orient` translates p towards +d, when given.
Axis fixed_axis(const Projective& g, AlgebraTag tag, const std::optional<Projective>& orient = std::nullopt);

struct RotationResult {
    double angle = 0.0;
    bool elliptic = true;
};

RotationResult rotation_angle(const Projective& g, AlgebraTag tag, const Axis& axis);
RotationResult rotation_angle(const Projective& g, AlgebraTag tag);
// Total angle of a sampled path starting at the identity.
double lifted_rotation_angle(const std::vector<Projective>& path, AlgebraTag tag, const Axis& axis);
double tachyon_mass(const Projective& g, AlgebraTag tag, const Axis& axis);

// omega from the (4,3) entry after moving the meridian's line to standard
// position; the longitude, when given, orients the line.
double infinitesimal_cone_angle(const Representation& hp, const Word& meridian,
                                const std::optional<Word>& longitude = std::nullopt);
double infinitesimal_cone_angle(const GroupElem& meridian, const std::optional<GroupElem>& longitude = std::nullopt);

// Dimension 2: rotation rate about the fixed point of a pure infinitesimal,
// read off the lower row of its 3x3 projective matrix.
double infinitesimal_rotation_2d(const GroupElem& g);

enum class Geometry { Hyp, AdS, HP };
std::pair<Projective, Projective> model_cone_generators(Geometry geo, double omega, double d, double mu, double t);

nlohmann::json to_json(const Presentation& p);
nlohmann::json to_json(const Representation& r, const std::vector<std::string>& names = {});
Representation representation_from_json(const nlohmann::json& j);

} // namespace transit
