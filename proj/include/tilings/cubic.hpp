#pragma once

// Classification of the cubic f(z) = z^3 - p z^2 + q z + r over the integer
// parameter family p,q >= 0, r >= 1, together with high-precision roots.
//
// Decision order:
//   1. exact integer-root search over the divisors +-k of r  -> Reducible(k)
//   2. complex-root test: p^2 < 3q, or p^2 >= 3q and
//        27 r > 2 (p^2-3q) (p + sqrt(p^2-3q)) - 3 p q
//      (exact equality, only possible when p^2-3q is a perfect square,
//       means a repeated real root and is reported as Degenerate)
//   3. p = q = 0            -> complex root but not Perron
//   4. r > p+q+1            -> all roots outside the unit circle
//      r < p+q+1            -> the real root is inside: complex Pisot
//      (r = p+q+1 cannot reach step 4: -1 is then an integer root)
//
// Roots come from the closed form on the depressed cubic and are polished by
// Newton iteration to ~1e-15 residuals.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "tilings/errors.hpp"
#include "tilings/linalg.hpp"

namespace tilings {

struct CubicParams {
    std::int64_t p = 0;
    std::int64_t q = 0;
    std::int64_t r = 1;
};

inline void validate(const CubicParams& c) {
    if (c.p < 0 || c.q < 0 || c.r < 1)
        throw UsageError("cubic parameters require p >= 0, q >= 0, r >= 1");
}

enum class CubicTag {
    Reducible,
    ThreeRealRoots,
    ComplexNonPerron,
    ComplexPisot,
    ComplexPerronStronglyNonPisot,
};

inline const char* to_string(CubicTag t) {
    switch (t) {
        case CubicTag::Reducible: return "Reducible";
        case CubicTag::ThreeRealRoots: return "ThreeRealRoots";
        case CubicTag::ComplexNonPerron: return "ComplexNonPerron";
        case CubicTag::ComplexPisot: return "ComplexPisot";
        case CubicTag::ComplexPerronStronglyNonPisot: return "ComplexPerronStronglyNonPisot";
    }
    return "?";
}

struct CubicClass {
    CubicTag tag;
    std::optional<cplx> lambda;  // the complex root with Im > 0, when one exists
    double realRoot = 0.0;       // unique real root if a complex pair exists;
                                 // for Reducible, the integer root
    double lambdaModulus = 0.0;
    std::optional<std::int64_t> integerRoot;
};

inline double eval_cubic(const CubicParams& c, double z) {
    return ((z - static_cast<double>(c.p)) * z + static_cast<double>(c.q)) * z +
           static_cast<double>(c.r);
}

inline cplx eval_cubic(const CubicParams& c, cplx z) {
    return ((z - cplx(static_cast<double>(c.p), 0)) * z + cplx(static_cast<double>(c.q), 0)) * z +
           cplx(static_cast<double>(c.r), 0);
}

namespace detail {

inline __int128 eval_cubic_exact(const CubicParams& c, std::int64_t k) {
    __int128 z = k;
    return ((z - c.p) * z + c.q) * z + c.r;
}

inline std::optional<std::int64_t> integer_root(const CubicParams& c) {
    // any rational root of the monic f divides the constant term r
    std::optional<std::int64_t> best;
    for (std::int64_t k = 1; k <= c.r; ++k) {
        if (c.r % k != 0) continue;
        for (std::int64_t s : {k, -k}) {
            if (eval_cubic_exact(c, s) == 0) {
                if (!best || std::abs(s) < std::abs(*best)) best = s;
            }
        }
        if (best) break;  // divisors scanned in increasing modulus
    }
    return best;
}

inline double newton_real(const CubicParams& c, double z) {
    const double p = static_cast<double>(c.p), q = static_cast<double>(c.q);
    for (int i = 0; i < 50; ++i) {
        const double f = eval_cubic(c, z);
        const double df = (3.0 * z - 2.0 * p) * z + q;
        if (df == 0.0) break;
        const double step = f / df;
        z -= step;
        if (std::abs(step) < 1e-17 * (1.0 + std::abs(z))) break;
    }
    return z;
}

inline cplx newton_complex(const CubicParams& c, cplx z) {
    const double p = static_cast<double>(c.p), q = static_cast<double>(c.q);
    for (int i = 0; i < 50; ++i) {
        const cplx f = eval_cubic(c, z);
        const cplx df = (3.0 * z - 2.0 * p) * z + q;
        if (df == cplx(0, 0)) break;
        const cplx step = f / df;
        z -= step;
        if (std::abs(step) < 1e-17 * (1.0 + std::abs(z))) break;
    }
    return z;
}

// Unique real root when the discriminant is negative (one real, two complex).
inline double cardano_single_real(const CubicParams& c) {
    const double p = static_cast<double>(c.p), q = static_cast<double>(c.q),
                 r = static_cast<double>(c.r);
    // depress: z = w + p/3
    const double a = q - p * p / 3.0;
    const double b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    const double disc = b * b / 4.0 + a * a * a / 27.0;  // > 0 here
    const double s = std::sqrt(std::max(disc, 0.0));
    const double w = std::cbrt(-b / 2.0 + s) + std::cbrt(-b / 2.0 - s);
    return newton_real(c, w + p / 3.0);
}

} // namespace detail

// Complex root with positive imaginary part, Newton-polished from the Cardano
// seed. Throws NoComplexRoot when all three roots are real.
inline cplx complex_root(const CubicParams& c) {
    validate(c);
    const double p = static_cast<double>(c.p), q = static_cast<double>(c.q);
    const double a = q - p * p / 3.0;
    const double b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + static_cast<double>(c.r);
    const double disc = b * b / 4.0 + a * a * a / 27.0;
    if (disc <= 0.0)
        throw NoComplexRoot("all roots of z^3 - " + std::to_string(c.p) + "z^2 + " +
                            std::to_string(c.q) + "z + " + std::to_string(c.r) + " are real");
    const double beta = detail::cardano_single_real(c);
    // f(z) = (z - beta)(z^2 + Bz + C)
    const double B = beta - p;
    const double C = beta * beta - p * beta + q;
    const double quadDisc = B * B - 4.0 * C;  // negative
    cplx lam(-B / 2.0, std::sqrt(std::max(-quadDisc, 0.0)) / 2.0);
    lam = detail::newton_complex(c, lam);
    if (lam.imag() < 0) lam = std::conj(lam);
    return lam;
}

inline CubicClass classify_cubic(const CubicParams& c) {
    validate(c);
    CubicClass out{};

    if (auto k = detail::integer_root(c)) {
        out.tag = CubicTag::Reducible;
        out.integerRoot = *k;
        out.realRoot = static_cast<double>(*k);
        // the quadratic cofactor may still contribute a complex pair
        const double p = static_cast<double>(c.p), q = static_cast<double>(c.q);
        const double beta = out.realRoot;
        const double B = beta - p;
        const double quadDisc = B * B - 4.0 * (beta * beta - p * beta + q);
        if (quadDisc < 0) {
            cplx lam(-B / 2.0, std::sqrt(-quadDisc) / 2.0);
            lam = detail::newton_complex(c, lam);
            if (lam.imag() < 0) lam = std::conj(lam);
            out.lambda = lam;
            out.lambdaModulus = std::abs(lam);
        }
        return out;
    }

    // complex-root test, with the repeated-root boundary checked exactly
    const std::int64_t d = c.p * c.p - 3 * c.q;
    bool hasComplex;
    if (d < 0) {
        hasComplex = true;
    } else {
        const auto k = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(d))));
        if (k * k == d) {
            const __int128 boundary =
                static_cast<__int128>(2) * d * (c.p + k) - static_cast<__int128>(3) * c.p * c.q;
            const __int128 lhs = static_cast<__int128>(27) * c.r;
            if (lhs == boundary)
                throw Degenerate("27r equals 2(p^2-3q)(p+sqrt(p^2-3q)) - 3pq: repeated real root");
            hasComplex = lhs > boundary;
        } else {
            const double boundary = 2.0 * static_cast<double>(d) *
                                        (static_cast<double>(c.p) + std::sqrt(static_cast<double>(d))) -
                                    3.0 * static_cast<double>(c.p) * static_cast<double>(c.q);
            hasComplex = 27.0 * static_cast<double>(c.r) > boundary;
        }
    }

    if (!hasComplex) {
        out.tag = CubicTag::ThreeRealRoots;
        // report the real root of largest modulus
        const double p = static_cast<double>(c.p), q = static_cast<double>(c.q);
        const double a = q - p * p / 3.0;
        const double b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + static_cast<double>(c.r);
        const double m = 2.0 * std::sqrt(-a / 3.0);
        const double phi = std::acos(std::clamp(3.0 * b / (a * m), -1.0, 1.0)) / 3.0;
        double best = 0.0;
        for (int k3 = 0; k3 < 3; ++k3) {
            const double w = m * std::cos(phi - 2.0 * M_PI * k3 / 3.0);
            const double root = detail::newton_real(c, w + p / 3.0);
            if (std::abs(root) > std::abs(best)) best = root;
        }
        out.realRoot = best;
        return out;
    }

    const cplx lam = complex_root(c);
    const double beta = detail::cardano_single_real(c);
    out.lambda = lam;
    out.lambdaModulus = std::abs(lam);
    out.realRoot = beta;

    if (std::abs(std::abs(beta) - 1.0) < 1e-12)
        throw Degenerate("real root on the unit circle");

    if (c.p == 0 && c.q == 0) {
        out.tag = CubicTag::ComplexNonPerron;
    } else if (c.r > c.p + c.q + 1) {
        out.tag = CubicTag::ComplexPerronStronglyNonPisot;
    } else {
        out.tag = CubicTag::ComplexPisot;
    }
    return out;
}

} // namespace tilings
