#pragma once

// The spectral cocycle over the toral endomorphism z -> M^T z mod Z^s:
//
//   M(z)_{jk} = sum_{x in alpha(D_jk)} exp(-2 pi i <z, x>)
//   M(z, n)   = M((M^T)^{n-1} z) ... M(z)
//
// M(0) is the transpose substitution matrix, so chi(0) = d log theta, and
// |M(z)_{jk}| <= M(0)_{jk} entrywise gives chi+(z) <= d log theta everywhere.
//
// Products are renormalized to unit Frobenius norm step by step, with the log
// of the scale accumulated, so arbitrarily long products never overflow. The
// torus point is reduced mod 1 each step; this commutes with the iteration
// because M^T is an integer matrix.

#include <cmath>
#include <complex>
#include <vector>

#include "tilings/errors.hpp"
#include "tilings/linalg.hpp"
#include "tilings/substitution.hpp"

namespace tilings {

struct TorusPoint {
    std::vector<double> coords;  // each in [0,1)

    static TorusPoint zero(int s) {
        TorusPoint z;
        z.coords.assign(static_cast<std::size_t>(s), 0.0);
        return z;
    }
};

inline double frac01(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;  // guard against floor rounding at the boundary
    return f;
}

inline TorusPoint reduce(std::vector<double> v) {
    for (auto& x : v) x = frac01(x);
    return TorusPoint{std::move(v)};
}

// z -> frac(M^T z)
inline TorusPoint advance(const MatI& driver, const TorusPoint& z) {
    const int s = driver.rows;
    std::vector<double> out(static_cast<std::size_t>(s), 0.0);
    for (int i = 0; i < s; ++i) {
        double acc = 0;
        for (int j = 0; j < s; ++j)
            acc += static_cast<double>(driver(j, i)) * z.coords[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = frac01(acc);
    }
    return TorusPoint{std::move(out)};
}

// exp(-2 pi i t) with t reduced mod 1 term by term; x are exact integers.
inline cplx unit_phase(const TorusPoint& z, std::span<const std::int64_t> x) {
    double t = 0;
    for (std::size_t i = 0; i < z.coords.size(); ++i)
        t += frac01(z.coords[i] * static_cast<double>(x[i]));
    t = frac01(t);
    return std::polar(1.0, -2.0 * M_PI * t);
}

inline MatC fourier_matrix(const SubstitutionSystem& sys, const TorusPoint& z,
                           DigitConvention conv = DigitConvention::Spectral) {
    const DigitTable& D = sys.table(conv);
    MatC out(sys.m, sys.m);
    for (int j = 0; j < sys.m; ++j)
        for (int k = 0; k < sys.m; ++k)
            for (const AddressVector& x : D[j][k])
                out(j, k) += unit_phase(z, std::span<const std::int64_t>(x));
    return out;
}

struct CocycleResult {
    double logNorm = 0;   // log of the accumulated Frobenius scale
    MatC unitMatrix;      // norm-1 remainder: M(z,n) = exp(logNorm) * unitMatrix
    int steps = 0;
    std::vector<double> trail;  // (1/k) logNorm after k steps, when requested
};

inline CocycleResult cocycle_product(const SubstitutionSystem& sys, TorusPoint z, int n,
                                     bool wantTrail = false,
                                     DigitConvention conv = DigitConvention::Spectral) {
    if (n < 1) throw UsageError("cocycle_product requires n >= 1");
    CocycleResult res;
    res.steps = n;
    if (wantTrail) res.trail.reserve(static_cast<std::size_t>(n));
    MatC U;
    for (int k = 0; k < n; ++k) {
        const MatC Mz = fourier_matrix(sys, z, conv);
        U = (k == 0) ? Mz : Mz * U;
        const double f = frobenius(U);
        if (f <= 0.0) throw Degenerate("cocycle product vanished");
        res.logNorm += std::log(f);
        for (auto& e : U.a) e /= f;
        if (wantTrail) res.trail.push_back(res.logNorm / static_cast<double>(k + 1));
        z = advance(sys.driver, z);
    }
    res.unitMatrix = std::move(U);
    return res;
}

// Unrenormalized product, for small n (tests, domination bound).
inline MatC cocycle_product_raw(const SubstitutionSystem& sys, TorusPoint z, int n,
                                DigitConvention conv = DigitConvention::Spectral) {
    MatC U;
    for (int k = 0; k < n; ++k) {
        const MatC Mz = fourier_matrix(sys, z, conv);
        U = (k == 0) ? Mz : Mz * U;
        z = advance(sys.driver, z);
    }
    return U;
}

struct LyapunovEstimate {
    double chiPlus = 0;
    std::vector<double> trail;
};

// limsup estimator: max of (1/n) log||M(z,n)|| over a trailing window.
inline LyapunovEstimate lyapunov(const SubstitutionSystem& sys, TorusPoint z, int N,
                                 int window, bool wantTrail = false,
                                 DigitConvention conv = DigitConvention::Spectral) {
    if (N < 1 || window < 1 || window > N) throw UsageError("lyapunov requires N >= window >= 1");
    LyapunovEstimate est;
    est.chiPlus = -std::numeric_limits<double>::infinity();
    if (wantTrail) est.trail.reserve(static_cast<std::size_t>(N));
    double logNorm = 0;
    MatC U;
    for (int k = 0; k < N; ++k) {
        const MatC Mz = fourier_matrix(sys, z, conv);
        U = (k == 0) ? Mz : Mz * U;
        const double f = frobenius(U);
        if (f <= 0.0) throw Degenerate("cocycle product vanished");
        logNorm += std::log(f);
        for (auto& e : U.a) e /= f;
        const int n = k + 1;
        const double avg = logNorm / static_cast<double>(n);
        if (wantTrail) est.trail.push_back(avg);
        if (n >= N - window) est.chiPlus = std::max(est.chiPlus, avg);
        z = advance(sys.driver, z);
    }
    return est;
}

// Directional exponent: limsup (1/n) log ||M(z,n) zeta||, same renormalization
// scheme applied to the vector.
inline double lyapunov_directional(const SubstitutionSystem& sys, TorusPoint z,
                                   std::vector<cplx> zeta, int N, int window = 0,
                                   DigitConvention conv = DigitConvention::Spectral) {
    double norm0 = 0;
    for (auto& c : zeta) norm0 += std::norm(c);
    norm0 = std::sqrt(norm0);
    if (norm0 <= 0.0) throw ZeroVector("lyapunov_directional needs a nonzero vector");
    for (auto& c : zeta) c /= norm0;
    if (window <= 0) window = std::max(1, N / 10);

    double best = -std::numeric_limits<double>::infinity();
    double logNorm = 0;
    for (int k = 0; k < N; ++k) {
        const MatC Mz = fourier_matrix(sys, z, conv);
        std::vector<cplx> next(zeta.size(), cplx(0, 0));
        for (int i = 0; i < sys.m; ++i)
            for (int j = 0; j < sys.m; ++j) next[static_cast<std::size_t>(i)] += Mz(i, j) * zeta[static_cast<std::size_t>(j)];
        double f = 0;
        for (auto& c : next) f += std::norm(c);
        f = std::sqrt(f);
        if (f <= 0.0) throw Degenerate("directional product vanished");
        logNorm += std::log(f);
        for (auto& c : next) c /= f;
        zeta = std::move(next);
        const int n = k + 1;
        if (n >= N - window) best = std::max(best, logNorm / static_cast<double>(n));
        z = advance(sys.driver, z);
    }
    return best;
}

// |M(z,n)_{jk}| <= ((S^T)^n)_{jk} + 1e-9 entrywise, with the unrenormalized
// product (n small enough for exact integer powers).
inline bool domination_check(const SubstitutionSystem& sys, const TorusPoint& z, int n,
                             DigitConvention conv = DigitConvention::Spectral) {
    const MatC prod = cocycle_product_raw(sys, z, n, conv);
    const MatI Sn = pow_checked(substitution_matrix(sys).transpose(), n);
    for (int j = 0; j < sys.m; ++j)
        for (int k = 0; k < sys.m; ++k)
            if (std::abs(prod(j, k)) > static_cast<double>(Sn(j, k)) + 1e-9) return false;
    return true;
}

} // namespace tilings
