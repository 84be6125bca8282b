#pragma once

#include <complex>
#include <utility>

#include "json.hpp"

namespace transit {

// B_s = R + R kappa with kappa^2 = -sign(s) s^2.
// s > 0: complex numbers, s = 0: dual numbers, s < 0: split-complex numbers.
struct AlgebraTag {
    double s = 1.0;

    double kappa_sq() const { return s > 0 ? -s * s : (s < 0 ? s * s : 0.0); }
    int sign() const { return s > 0 ? 1 : (s < 0 ? -1 : 0); }
    bool operator==(const AlgebraTag& o) const { return s == o.s; }
};

struct BElem {
    double re = 0.0;
    double im = 0.0;
    AlgebraTag tag;

    BElem() = default;
    BElem(double re_, double im_, AlgebraTag t) : re(re_), im(im_), tag(t) {}
    static BElem real(double x, AlgebraTag t) { return {x, 0.0, t}; }
    static BElem kappa(AlgebraTag t) { return {0.0, 1.0, t}; }
};

void check_same_tag(const AlgebraTag& a, const AlgebraTag& b);

BElem operator+(const BElem& z, const BElem& w);
BElem operator-(const BElem& z, const BElem& w);
BElem operator-(const BElem& z);
BElem operator*(const BElem& z, const BElem& w);
BElem operator*(double c, const BElem& z);
BElem mul(const BElem& z, const BElem& w);

BElem conj(const BElem& z);
double sqnorm(const BElem& z);
// Throws ZeroDivisor when |sqnorm| <= 1e-12 * max(|re|,|im|)^2.
bool is_zero_divisor(const BElem& z);
BElem invert(const BElem& z);
BElem operator/(const BElem& z, const BElem& w);

// a + b*unit over B_{sign(s)} to a + (b/|s|) kappa_s.
BElem rescale_algebra(const BElem& z, double s);
// e+ = (1 + kappa/|s|)/2, e- = (1 - kappa/|s|)/2; s < 0 only.
std::pair<BElem, BElem> idempotents(const AlgebraTag& tag);

// Even and odd parts of the exponential series evaluated at d:
// ch(d) = sum d^k/(2k)!, sh(d) = sum d^k/(2k+1)!.  For a traceless X with
// X^2 = d I, exp(X) = ch(d) I + sh(d) X.
BElem exp_even(const BElem& d);
BElem exp_odd(const BElem& d);
// Principal square root where defined (real part > 0 for s = 0, both
// idempotent components >= 0 for s < 0).
BElem sqrt(const BElem& z);

nlohmann::json to_json(const BElem& z);
BElem belem_from_json(const nlohmann::json& j, AlgebraTag tag);

} // namespace transit
