#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "transit/reps.hpp"

namespace transit {

// ---- transition reports ----

struct TransitionRow {
    double t = 0.0;
    AlgebraTag tag;
    double residual = 0.0;
    std::string kind;  // cone_angle | tachyon_mass | inf_cone_angle
    double value = 0.0;
    Representation rep;
};

using TransitionReport = std::vector<TransitionRow>;

std::string classification(AlgebraTag tag);
nlohmann::json to_json(const TransitionReport& r);
// Throws InputError on anything that is not a report array.
TransitionReport transition_report_from_json(const nlohmann::json& j);

// steps evenly spaced values from t_min to t_max; steps = 1 gives {t_min}.
std::vector<double> t_grid(double t_min, double t_max, int steps);

// ---- singular torus ----

// Free group <a, b>. t > 0 over B_1, t < 0 over B_-1 (the AdS family at |t|).
Representation torus_rep(double t);
Representation torus_hp_rep();
// Expected 3x3 matrices of the a, b images and of the rescaled b image.
struct TorusMatrices {
    Eigen::Matrix3d a, b, b_rescaled;
};
TorusMatrices torus_expected(double t);

struct TorusSummary {
    TransitionReport report;
    double matrix_error = 0.0;          // max over the grid, printed vs built
    double hp_limit_error = 0.0;        // rescaled b at t = 1e-6 vs its limit
    double commutator_limit_error = 0.0;
    double commutator_order = 0.0;
    double angle_rate = 0.0;            // (theta(t) - 2pi)/t at t = 1e-4
    double mass_rate = 0.0;             // boost angle / |t| at t = -1e-4
    LimitCheck hyp_limit;
    LimitCheck ads_limit;
};

TorusSummary torus_scenario(const std::vector<double>& grid);

// ---- (2, m, m) unit tangent bundle ----

struct TwoMMReport {
    int m = 5;
    double theta_dot = 1.0;
    double R = 0.0;          // circumradius of the right-angled m-gon
    double x = 0.0;          // infinitesimal translation of the symmetry
    double rate_break = 0.0;
    Mat2B alpha, beta, mu;   // over B_0
    std::map<std::string, double> residuals;
    double phi = 0.0;
    double phi_closed_form = 0.0;
    std::array<double, 4> fibers{};  // L1..L4 over the corner r
    double placement_residual = 0.0;
    bool l2_between = false;
    bool l4_between = false;
    Representation rho_hp;   // generators alpha, beta, mu; gluing relators

    double max_residual() const;
};

// Generator indices of the (2, m, m) presentation.
inline constexpr int kAlpha = 1, kBeta = 2, kMu = 3;
Word twomm_longitude();
Presentation twomm_presentation(int m);

// rate_break != 0 scales the solved symmetry translation by (1 + rate_break)
// and skips the ConstructionFailed check.
TwoMMReport build_2mm(int m, double theta_dot, double rate_break = 0.0);

struct TwoMMTransition {
    CohomologyReport h1;
    TransitionReport report;
};

TwoMMTransition transition_2mm(const TwoMMReport& rep, const std::vector<double>& grid, const NewtonOptions& opt = {});
// Invariant of the meridian at a regenerated representation.
double twomm_meridian_invariant(const Representation& rep);
// rescaled_limit_check on {1e-2, 1e-3, 1e-4} and its negative.
std::pair<LimitCheck, LimitCheck> twomm_compatibility(const TwoMMReport& rep, const NewtonOptions& opt = {});

nlohmann::json to_json(const TwoMMReport& r);

// ---- Borromean rings ----

enum class Branch { T, R };
Branch branch_from_string(const std::string& s);
std::string to_string(Branch b);

struct BorromeanRep {
    double la = 0.0, lb = 0.0;
    double phi_angle = 0.0;
    Branch branch = Branch::T;
    double x = 0.0;
    Representation rep;
};

Presentation borromean_presentation();
Word borromean_peripheral();  // [a, b]
// Public entry: translation lengths. NoParabolicAngle when sinh(la/2) sinh(lb/2) < 1.
BorromeanRep borromean_rep(double la, double lb, Branch branch);
// Chart by (la, axis angle); lb follows from the parabolic condition.
BorromeanRep borromean_rep_angle(double la, double phi, Branch branch);
double rectangular_length();

struct BorromeanTangents {
    std::vector<Eigen::Matrix2d> rho0;
    Cocycle v;  // along branch R
    Cocycle u;  // along branch T
};
BorromeanTangents borromean_tangents();

struct FlexAttempt {
    double a = 0.0, b = 0.0;  // w = a v + b u
    double residual = 0.0;
    int iterations = 0;
};

struct FlexRow {
    double t = 0.0;
    double residual = 0.0;             // AdS rows and the HP row
    std::vector<FlexAttempt> attempts; // hyperbolic rows
    bool converged = false;            // some attempt reached 1e-12
    bool obstructed = false;           // every attempt stopped above 1e-6
    std::optional<Representation> rep;
};

struct FlexReport {
    double eps = 0.0;
    Representation rho_hp;
    std::vector<FlexRow> rows;
};

FlexReport borromean_flexibility(double eps, const std::vector<double>& grid);
// Mixed idempotent AdS representation at t < 0.
Representation borromean_ads(double eps, double t);

nlohmann::json to_json(const BorromeanRep& r);
nlohmann::json to_json(const FlexReport& r);

} // namespace transit
