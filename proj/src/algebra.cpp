#include "transit/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "transit/errors.hpp"

namespace transit {

void check_same_tag(const AlgebraTag& a, const AlgebraTag& b)
{
    if (!(a == b))
        throw ContractError("algebra tags differ: s=" + std::to_string(a.s) +
                            " vs s=" + std::to_string(b.s));
}

BElem operator+(const BElem& z, const BElem& w)
{
    check_same_tag(z.tag, w.tag);
    return {z.re + w.re, z.im + w.im, z.tag};
}

BElem operator-(const BElem& z, const BElem& w)
{
    check_same_tag(z.tag, w.tag);
    return {z.re - w.re, z.im - w.im, z.tag};
}

BElem operator-(const BElem& z) { return {-z.re, -z.im, z.tag}; }

BElem mul(const BElem& z, const BElem& w)
{
    check_same_tag(z.tag, w.tag);
    double k2 = z.tag.kappa_sq();
    return {z.re * w.re + z.im * w.im * k2, z.re * w.im + z.im * w.re, z.tag};
}

BElem operator*(const BElem& z, const BElem& w) { return mul(z, w); }
BElem operator*(double c, const BElem& z) { return {c * z.re, c * z.im, z.tag}; }

BElem conj(const BElem& z) { return {z.re, -z.im, z.tag}; }

double sqnorm(const BElem& z) { return z.re * z.re - z.im * z.im * z.tag.kappa_sq(); }

bool is_zero_divisor(const BElem& z)
{
    double m = std::max(std::abs(z.re), std::abs(z.im));
    return std::abs(sqnorm(z)) <= 1e-12 * m * m || m == 0.0;
}

BElem invert(const BElem& z)
{
    if (is_zero_divisor(z))
        throw ZeroDivisor("element " + std::to_string(z.re) + " + " + std::to_string(z.im) +
                          " kappa has vanishing square norm");
    double n = sqnorm(z);
    return {z.re / n, -z.im / n, z.tag};
}

BElem operator/(const BElem& z, const BElem& w) { return z * invert(w); }

BElem rescale_algebra(const BElem& z, double s)
{
    if (s == 0.0)
        throw InvalidRescale("rescaling at s = 0 is only defined as a limit");
    AlgebraTag src{s > 0 ? 1.0 : -1.0};
    check_same_tag(z.tag, src);
    return {z.re, z.im / std::abs(s), AlgebraTag{s}};
}

std::pair<BElem, BElem> idempotents(const AlgebraTag& tag)
{
    if (tag.s >= 0)
        throw NoIdempotents("B_s has no nontrivial idempotents for s >= 0");
    double u = 0.5 / std::abs(tag.s);
    return {BElem{0.5, u, tag}, BElem{0.5, -u, tag}};
}

namespace {

using cplx = std::complex<double>;

// Apply an analytic function componentwise through the structure of B_s.
// f acts on complex arguments; df is its derivative (needed for s = 0).
BElem apply(const BElem& z, const std::function<cplx(cplx)>& f,
            const std::function<cplx(cplx)>& df)
{
    double s = z.tag.s;
    if (s > 0) {
        cplx w = f(cplx(z.re, z.im * s));
        return {w.real(), w.imag() / s, z.tag};
    }
    if (s < 0) {
        double a = std::abs(s);
        double p = f(cplx(z.re + z.im * a, 0)).real();
        double q = f(cplx(z.re - z.im * a, 0)).real();
        return {0.5 * (p + q), 0.5 * (p - q) / a, z.tag};
    }
    return {f(cplx(z.re, 0)).real(), z.im * df(cplx(z.re, 0)).real(), z.tag};
}

// sum_k d^k/(2k+off)! (off = 0 or 1), or its derivative in d.
cplx series(cplx d, int off, bool deriv)
{
    cplx sum = 0, pw = 1;
    double fact = 1.0;
    for (int k = 0; k < 25; ++k) {
        if (!deriv) {
            sum += pw / fact;
            pw *= d;
        } else if (k > 0) {
            sum += double(k) * pw / fact;
            pw *= d;
        }
        fact *= double(2 * k + 1 + off) * double(2 * k + 2 + off);
    }
    return sum;
}

cplx ch(cplx d)
{
    if (std::abs(d) < 1.0) return series(d, 0, false);
    return std::cosh(std::sqrt(d));
}

cplx sh(cplx d)
{
    if (std::abs(d) < 1.0) return series(d, 1, false);
    cplx r = std::sqrt(d);
    return std::sinh(r) / r;
}

cplx dsh(cplx d)
{
    if (std::abs(d) < 1.0) return series(d, 1, true);
    return (ch(d) - sh(d)) / (2.0 * d);
}

} // namespace

BElem exp_even(const BElem& d)
{
    return apply(d, ch, [](cplx x) { return 0.5 * sh(x); });
}

BElem exp_odd(const BElem& d) { return apply(d, sh, dsh); }

BElem sqrt(const BElem& z)
{
    return apply(
        z, [](cplx x) { return std::sqrt(x); },
        [](cplx x) { return 0.5 / std::sqrt(x); });
}

nlohmann::json to_json(const BElem& z) { return nlohmann::json::array({z.re, z.im}); }

BElem belem_from_json(const nlohmann::json& j, AlgebraTag tag)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError("algebra element must be a pair [re, im]");
    return {j[0].get<double>(), j[1].get<double>(), tag};
}

} // namespace transit
