#pragma once

// Shape matrices L (d x s) and the lift z = L^T lam, the torus-distance
// sequence eps_n(z) = ||(M^T)^n z||_{R^s/Z^s} in the sup norm, the
// eigenvalue/weak-mixing test, the quantitative-Veech escape statistic, and
// deformation sampling.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tilings/cocycle.hpp"
#include "tilings/errors.hpp"
#include "tilings/linalg.hpp"
#include "tilings/rng.hpp"
#include "tilings/substitution.hpp"

namespace tilings {

struct ShapeMatrix {
    MatD L;  // d x s
    std::string basisLabel;
};

inline ShapeMatrix default_shape(const SubstitutionSystem& sys) {
    return ShapeMatrix{sys.defaultShape, sys.name + " default basis"};
}

// Largest |det| over all d x d column minors; the rank-d proxy.
inline double max_minor(const MatD& L) {
    const int d = L.rows, s = L.cols;
    if (d > s) return 0.0;
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = i;
    double best = 0.0;
    while (true) {
        // determinant of the selected columns (d <= 3 in practice)
        double det = 0;
        if (d == 1) {
            det = L(0, idx[0]);
        } else if (d == 2) {
            det = L(0, idx[0]) * L(1, idx[1]) - L(0, idx[1]) * L(1, idx[0]);
        } else if (d == 3) {
            det = L(0, idx[0]) * (L(1, idx[1]) * L(2, idx[2]) - L(1, idx[2]) * L(2, idx[1])) -
                  L(0, idx[1]) * (L(1, idx[0]) * L(2, idx[2]) - L(1, idx[2]) * L(2, idx[0])) +
                  L(0, idx[2]) * (L(1, idx[0]) * L(2, idx[1]) - L(1, idx[1]) * L(2, idx[0]));
        } else {
            throw UsageError("max_minor supports d <= 3");
        }
        best = std::max(best, std::abs(det));
        int i = d - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == s - d + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

// z = L^T lam reduced mod Z^s
inline TorusPoint lift(const ShapeMatrix& shape, const std::vector<double>& lam) {
    const MatD& L = shape.L;
    if (static_cast<int>(lam.size()) != L.rows) throw UsageError("lift: lam has wrong dimension");
    std::vector<double> z(static_cast<std::size_t>(L.cols), 0.0);
    for (int j = 0; j < L.cols; ++j) {
        double acc = 0;
        for (int i = 0; i < L.rows; ++i) acc += L(i, j) * lam[static_cast<std::size_t>(i)];
        z[static_cast<std::size_t>(j)] = frac01(acc);
    }
    return TorusPoint{std::move(z)};
}

// sup-norm distance from a reduced torus point to the nearest lattice point
inline double torus_distance(const TorusPoint& z) {
    double d = 0;
    for (double x : z.coords) d = std::max(d, std::min(x, 1.0 - x));
    return d;
}

struct EpsilonSequence {
    std::vector<double> values;  // eps_0 .. eps_N
};

inline EpsilonSequence epsilon_sequence(const SubstitutionSystem& sys, TorusPoint z, int N) {
    if (N < 1) throw UsageError("epsilon_sequence requires N >= 1");
    EpsilonSequence seq;
    seq.values.reserve(static_cast<std::size_t>(N) + 1);
    seq.values.push_back(torus_distance(z));
    for (int n = 0; n < N; ++n) {
        z = advance(sys.driver, z);
        seq.values.push_back(torus_distance(z));
    }
    return seq;
}

struct EigenvalueVerdict {
    bool candidate = false;
    int firstEscape = -1;        // first n in the tail with eps_n >= tol, when rejected
    double minTailEpsilon = 0;   // diagnostics
    double maxTailEpsilon = 0;
    double fitSlope = 0;         // log-linear fit slope over nonzero eps_n
};

// CandidateEigenvalue iff eps_n < tol on the final third of [0,N] and a
// log-linear fit of the nonzero eps_n decays. The paper only requires
// exponentially fast convergence; this finite-N decision rule is ours.
inline EigenvalueVerdict eigenvalue_test(const SubstitutionSystem& sys, const ShapeMatrix& shape,
                                         const std::vector<double>& lam, int N, double tol) {
    if (N < 50) throw UsageError("eigenvalue_test requires N >= 50");
    const EpsilonSequence seq = epsilon_sequence(sys, lift(shape, lam), N);
    EigenvalueVerdict v;
    const int tailStart = (2 * N) / 3;
    v.minTailEpsilon = std::numeric_limits<double>::infinity();
    for (int n = tailStart; n <= N; ++n) {
        const double e = seq.values[static_cast<std::size_t>(n)];
        v.minTailEpsilon = std::min(v.minTailEpsilon, e);
        v.maxTailEpsilon = std::max(v.maxTailEpsilon, e);
        if (e >= tol && v.firstEscape < 0) v.firstEscape = n;
    }
    if (v.firstEscape >= 0) {
        v.candidate = false;
        return v;
    }
    // log-linear fit over nonzero entries; an identically-zero sequence is an
    // exact (lattice) eigenvalue
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int n = 0; n <= N; ++n) {
        const double e = seq.values[static_cast<std::size_t>(n)];
        if (e <= 0.0) continue;
        const double x = static_cast<double>(n), y = std::log(e);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt < 2) {
        v.candidate = true;  // eps identically zero (up to one stray sample)
        v.fitSlope = -std::numeric_limits<double>::infinity();
        return v;
    }
    v.fitSlope = (static_cast<double>(cnt) * sxy - sx * sy) / (static_cast<double>(cnt) * sxx - sx * sx);
    v.candidate = v.fitSlope < 0.0;
    if (!v.candidate && v.firstEscape < 0) v.firstEscape = tailStart;
    return v;
}

// Fraction of n in (0,N] with eps_n(z) < rho; Eq. (Veech:times) bounds its
// limsup away from 1 for quantitatively weak-mixing deformations.
inline double veech_statistic(const SubstitutionSystem& sys, TorusPoint z, int N, double rho) {
    if (N < 1) throw UsageError("veech_statistic requires N >= 1");
    if (!(rho > 0.0 && rho < 0.5)) throw UsageError("veech_statistic requires 0 < rho < 1/2");
    int inside = 0;
    for (int n = 1; n <= N; ++n) {
        z = advance(sys.driver, z);
        if (torus_distance(z) < rho) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(N);
}

// rho = 2 (||M^T||_inf + 1)^{-1}, clamped into (0, 1/2].
inline double rho_default(const SubstitutionSystem& sys) {
    const double norm = inf_norm(sys.driver.transpose());
    return std::min(0.5, 2.0 / (norm + 1.0));
}

struct ExpandingDimension {
    int dimEplus = 0;
    bool hypothesisMet = false;  // dim E+ >= d + 1
};

inline ExpandingDimension expanding_dimension(const SubstitutionSystem& sys) {
    const auto ev = eigenvalues(to_double(sys.driver));
    ExpandingDimension out;
    for (const auto& z : ev) {
        const double m = std::abs(z);
        if (std::abs(m - 1.0) < 1e-9)
            throw Degenerate("driver eigenvalue on the unit circle (|.| = " + std::to_string(m) + ")");
        if (m > 1.0) ++out.dimEplus;
    }
    out.hypothesisMet = out.dimEplus >= sys.d + 1;
    return out;
}

// Uniform entrywise perturbations of L0 within +-radius. Samples whose
// rank-d minor drops below `minorFloor` are rejected and redrawn;
// RadiusTooLarge if more than half of the draws get rejected.
inline std::vector<ShapeMatrix> sample_deformations(const ShapeMatrix& L0, double radius,
                                                    int count, std::uint64_t seed,
                                                    double minorFloor = 1e-6) {
    std::vector<ShapeMatrix> out;
    out.reserve(static_cast<std::size_t>(count));
    Rng rng(seed);
    long draws = 0, rejected = 0;
    while (static_cast<int>(out.size()) < count) {
        ShapeMatrix s = L0;
        for (auto& e : s.L.a) e += rng.uniform(-radius, radius);
        ++draws;
        if (max_minor(s.L) < minorFloor) {
            ++rejected;
            if (draws >= 16 && 2 * rejected > draws)
                throw RadiusTooLarge("rejection rate exceeds 50% at radius " + std::to_string(radius));
            continue;
        }
        s.basisLabel = L0.basisLabel + " perturbed";
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace tilings
