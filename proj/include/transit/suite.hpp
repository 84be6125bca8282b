#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "transit/geom.hpp"
#include "transit/halfpipe.hpp"

namespace transit {

struct SuiteConfig {
    double tol = 1e-9;
    std::uint64_t seed = 0;
    int dim = 3;
};

// One measured quantity against a pinned threshold. Residual checks scale
// their threshold by tol / 1e-9; rate, order and count checks do not.
struct Check {
    int criterion = 0;
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    enum class Kind { AtMost, AtLeast, Equal } kind = Kind::AtMost;
    bool scales_with_tol = true;
    bool passed = false;
    std::string note;
};

// ---- seeded generators ----

using Rng = std::mt19937_64;

Eigen::Matrix2d random_traceless(Rng& rng, double scale = 1.0);
// exp of a random traceless matrix: det 1, moderate norm.
Eigen::Matrix2d random_sl2(Rng& rng, double scale = 1.0);
// Random invertible element over B_s with |det|^2 > 0, normalized.
GroupElem random_groupelem(AlgebraTag tag, Rng& rng);
// Element preserving the x3 = 0 slice, for dimension-2 checks.
GroupElem random_groupelem_2d(AlgebraTag tag, Rng& rng);
HPIsometry random_hp_isometry(Rng& rng);
HPPoint random_hp_point(Rng& rng);

// ---- suites, grouped by acceptance criterion ----

std::vector<Check> torus_checks(const SuiteConfig& cfg);          // 1
std::vector<Check> isomorphism_checks(const SuiteConfig& cfg);    // 2
std::vector<Check> hp_action_checks(const SuiteConfig& cfg);      // 3
std::vector<Check> twomm_checks(const SuiteConfig& cfg);          // 4
std::vector<Check> regeneration_checks(const SuiteConfig& cfg);   // 5
std::vector<Check> borromean_checks(const SuiteConfig& cfg);      // 6
std::vector<Check> cohomology_checks(const SuiteConfig& cfg);     // 7

// Applies the tolerance scaling and sets `passed`.
void grade(std::vector<Check>& checks, const SuiteConfig& cfg);
std::vector<Check> all_checks(const SuiteConfig& cfg);
nlohmann::json to_json(const Check& c);

} // namespace transit
