#pragma once

// Twisted ergodic integrals over deformed supertiles, their brute-force
// counterparts, the hierarchical box decomposition, and the local-dimension
// lower-bound formulas.
//
// The supertile identity: with z = L^T lam,
//
//   integral over T_j^{f,n} of e^{-2 pi i <lam,t>} phi(T^f - t) dt
//     = [ M(z,n) PsiHat(lam) ](j)
//
// which the fast path evaluates through the cocycle and the brute-force path
// through the expanded patch. Test functions enter only through their Fourier
// transforms psiHat_k(lam).

#include <complex>
#include <functional>
#include <vector>

#include "tilings/cocycle.hpp"
#include "tilings/deformation.hpp"
#include "tilings/errors.hpp"
#include "tilings/geom2d.hpp"
#include "tilings/geometry.hpp"
#include "tilings/substitution.hpp"

namespace tilings {

struct TestFunction {
    // psiHat(k, lam): d-dimensional Fourier transform of psi_k at lam
    std::function<cplx(int, const std::vector<double>&)> psiHat;
    std::string description;
};

namespace detail {

inline double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

// FT of the indicator of the parallelogram spanned by u,v anchored at 0:
//   |det[u v]| e^{-pi i <lam,u+v>} sinc(pi <lam,u>) sinc(pi <lam,v>)
inline cplx parallelogram_hat(Vec2 u, Vec2 v, const std::vector<double>& lam) {
    const double lu = lam[0] * u[0] + lam[1] * u[1];
    const double lv = lam[0] * v[0] + lam[1] * v[1];
    const double area = std::abs(cross(u, v));
    return area * std::polar(1.0, -M_PI * (lu + lv)) * sinc(M_PI * lu) * sinc(M_PI * lv);
}

} // namespace detail

// Indicators of the prototile parallelograms under the given shape.
inline TestFunction indicator_test_function(const SubstitutionSystem& sys,
                                            const ShapeMatrix& shape) {
    const auto spans = sys.prototileSpans;
    const MatD L = shape.L;
    TestFunction tf;
    tf.description = "prototile indicators";
    tf.psiHat = [spans, L](int k, const std::vector<double>& lam) {
        const auto [ci, cj] = spans[static_cast<std::size_t>(k)];
        const Vec2 u = {L(0, ci), L(1, ci)};
        const Vec2 v = {L(0, cj), L(1, cj)};
        return detail::parallelogram_hat(u, v, lam);
    };
    return tf;
}

// A combination of prototile indicators orthogonal to the tile-frequency
// vector, so PsiHat(0) is orthogonal to the PF eigenvector of S: the test
// function for the spectral bound at lam = 0.
inline TestFunction mean_zero_test_function(const SubstitutionSystem& sys,
                                            const ShapeMatrix& shape) {
    const PerronData pf = pf_data(substitution_matrix(sys));
    const TestFunction ind = indicator_test_function(sys, shape);
    std::vector<double> c(static_cast<std::size_t>(sys.m), 0.0);
    const std::vector<double> zero(static_cast<std::size_t>(sys.d), 0.0);
    const double a0 = ind.psiHat(0, zero).real();
    const double a1 = ind.psiHat(1, zero).real();
    c[0] = 1.0 / (a0 * pf.rightVec[0]);
    c[1] = -1.0 / (a1 * pf.rightVec[1]);
    TestFunction tf;
    tf.description = "mean-zero indicator combination";
    tf.psiHat = [c, ind](int k, const std::vector<double>& lam) {
        return c[static_cast<std::size_t>(k)] * ind.psiHat(k, lam);
    };
    return tf;
}

inline std::vector<cplx> psi_hat_vector(const SubstitutionSystem& sys, const TestFunction& psi,
                                        const std::vector<double>& lam) {
    std::vector<cplx> v(static_cast<std::size_t>(sys.m));
    for (int k = 0; k < sys.m; ++k) v[static_cast<std::size_t>(k)] = psi.psiHat(k, lam);
    return v;
}

// [ M(z,n) PsiHat(lam) ](j) with z = L^T lam. Small n uses the plain product;
// large n runs the renormalized vector recursion.
inline cplx twisted_supertile_integral(const SubstitutionSystem& sys, const ShapeMatrix& shape,
                                       const std::vector<double>& lam, int j, int n,
                                       const TestFunction& psi,
                                       DigitConvention conv = DigitConvention::Spectral) {
    std::vector<cplx> v = psi_hat_vector(sys, psi, lam);
    if (n == 0) return v[static_cast<std::size_t>(j)];
    TorusPoint z = lift(shape, lam);
    if (n <= 20) {
        const MatC prod = cocycle_product_raw(sys, z, n, conv);
        cplx acc(0, 0);
        for (int k = 0; k < sys.m; ++k) acc += prod(j, k) * v[static_cast<std::size_t>(k)];
        return acc;
    }
    double logScale = 0;
    for (int step = 0; step < n; ++step) {
        const MatC Mz = fourier_matrix(sys, z, conv);
        std::vector<cplx> next(v.size(), cplx(0, 0));
        for (int a = 0; a < sys.m; ++a)
            for (int b = 0; b < sys.m; ++b)
                next[static_cast<std::size_t>(a)] += Mz(a, b) * v[static_cast<std::size_t>(b)];
        double f = 0;
        for (const auto& cvl : next) f += std::norm(cvl);
        f = std::sqrt(f);
        if (f <= 0.0) return cplx(0, 0);
        for (auto& cvl : next) cvl /= f;
        logScale += std::log(f);
        v = std::move(next);
        z = advance(sys.driver, z);
    }
    return std::exp(logScale) * v[static_cast<std::size_t>(j)];
}

// Direct evaluation over the expanded patch:
//   sum over (k, a) of e^{-2 pi i <L^T lam, a>} psiHat_k(lam)
inline cplx twisted_supertile_bruteforce(const SubstitutionSystem& sys, const ShapeMatrix& shape,
                                         const std::vector<double>& lam, int j, int n,
                                         const TestFunction& psi,
                                         DigitConvention conv = DigitConvention::Spectral) {
    if (n > 12) throw UsageError("brute-force twisted integral limited to n <= 12");
    const Patch patch = expand_supertile(sys, j, n, conv);
    const TorusPoint z = lift(shape, lam);
    cplx acc(0, 0);
    for (std::size_t i = 0; i < patch.size(); ++i)
        acc += unit_phase(z, patch.addr(i)) * psi.psiHat(patch.types[i], lam);
    return acc;
}

inline cplx translated_supertile_integral(const SubstitutionSystem& sys, const ShapeMatrix& shape,
                                          const std::vector<double>& lam, int j, int n,
                                          const std::vector<double>& y, const TestFunction& psi,
                                          DigitConvention conv = DigitConvention::Spectral) {
    double t = 0;
    for (std::size_t i = 0; i < y.size(); ++i) t += lam[i] * y[i];
    return std::polar(1.0, -2.0 * M_PI * t) *
           twisted_supertile_integral(sys, shape, lam, j, n, psi, conv);
}

// ------------------------------------------------------------ decomposition

struct BoxSupertile {
    int type = 0;
    int level = 0;
    AddressVector origin;  // absolute integer address of the supertile anchor
};

struct BoxDecomposition {
    int seedType = 0;
    int seedLevel = 0;
    Vec2 centering{0, 0};          // patch was translated by -centering
    std::vector<std::vector<std::int64_t>> counts;  // [level][type]
    std::vector<BoxSupertile> supertiles;           // levels >= 1
    std::vector<BoxSupertile> leftover;             // level-0 tiles not inside any of them
    std::size_t containedTiles = 0;
};

namespace detail {

struct BoxWalker {
    const SubstitutionSystem& sys;
    const std::vector<Quad>& quads;
    const MatD& L;
    Vec2 shift;
    double R;
    std::vector<MatI> driverPow;
    BoxDecomposition* out;

    Vec2 position(const AddressVector& a) const {
        Vec2 p = {-shift[0], -shift[1]};
        for (int c = 0; c < sys.s; ++c) {
            p[0] += L(0, c) * static_cast<double>(a[static_cast<std::size_t>(c)]);
            p[1] += L(1, c) * static_cast<double>(a[static_cast<std::size_t>(c)]);
        }
        return p;
    }

    // whether every leaf tile of the node lies inside the closed box
    bool contained(int type, int level, const AddressVector& origin) {
        if (level == 0) {
            const Vec2 p = position(origin);
            for (const auto& corner : quads[static_cast<std::size_t>(type)]) {
                const Vec2 q = corner + p;
                if (std::abs(q[0]) > R || std::abs(q[1]) > R) return false;
            }
            return true;
        }
        const auto& D = sys.geomDigits;
        for (int k = 0; k < sys.m; ++k)
            for (const AddressVector& x : D[static_cast<std::size_t>(type)][static_cast<std::size_t>(k)]) {
                AddressVector childOrigin = origin;
                const auto shiftVec = mul_checked(driverPow[static_cast<std::size_t>(level - 1)], x);
                for (int c = 0; c < sys.s; ++c)
                    childOrigin[static_cast<std::size_t>(c)] =
                        add_checked(childOrigin[static_cast<std::size_t>(c)], shiftVec[static_cast<std::size_t>(c)]);
                if (!contained(k, level - 1, childOrigin)) return false;
            }
        return true;
    }

    void assign(int type, int level, const AddressVector& origin) {
        if (contained(type, level, origin)) {
            out->counts[static_cast<std::size_t>(level)][static_cast<std::size_t>(type)] += 1;
            if (level >= 1)
                out->supertiles.push_back({type, level, origin});
            else
                out->leftover.push_back({type, 0, origin});
            std::int64_t leafCount = 1;
            if (level > 0) {
                const auto census = pow_checked(substitution_matrix(sys), level);
                leafCount = 0;
                for (int i = 0; i < sys.m; ++i) leafCount += census(i, type);
            }
            out->containedTiles += static_cast<std::size_t>(leafCount);
            return;
        }
        if (level == 0) return;  // crosses the boundary; dropped
        const auto& D = sys.geomDigits;
        for (int k = 0; k < sys.m; ++k)
            for (const AddressVector& x : D[static_cast<std::size_t>(type)][static_cast<std::size_t>(k)]) {
                AddressVector childOrigin = origin;
                const auto shiftVec = mul_checked(driverPow[static_cast<std::size_t>(level - 1)], x);
                for (int c = 0; c < sys.s; ++c)
                    childOrigin[static_cast<std::size_t>(c)] =
                        add_checked(childOrigin[static_cast<std::size_t>(c)], shiftVec[static_cast<std::size_t>(c)]);
                assign(k, level - 1, childOrigin);
            }
    }
};

} // namespace detail

// Greedy top-down decomposition of the tiles contained in Q_R = [-R,R]^2 into
// maximal supertiles, inside a seed supertile recentered on the box. The seed
// must cover the box; BoxTooLarge otherwise.
inline BoxDecomposition box_decomposition(const SubstitutionSystem& sys, const ShapeMatrix& shape,
                                          double R, int seedType, int seedLevel) {
    const Patch seed = expand_supertile(sys, seedType, seedLevel, DigitConvention::Geometric);
    const RealizedPatch realized = realize_patch(sys, shape, seed);

    // center the seed's bounding box on the origin
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t i = 0; i < realized.size(); ++i)
        for (const auto& p : realized.polygon(i)) {
            xmin = std::min(xmin, p[0]); xmax = std::max(xmax, p[0]);
            ymin = std::min(ymin, p[1]); ymax = std::max(ymax, p[1]);
        }
    const Vec2 center = {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};

    // coverage check: clipped tile areas must fill the box exactly
    double clipped = 0;
    for (std::size_t i = 0; i < realized.size(); ++i) {
        Quad q = realized.polygon(i);
        for (auto& p : q) p = p - center;
        clipped += quad_box_clip_area(q, R);
    }
    if (std::abs(clipped - 4.0 * R * R) > 1e-6 * 4.0 * R * R)
        throw BoxTooLarge("seed supertile does not cover [-R,R]^2 (covered " +
                          std::to_string(clipped) + " of " + std::to_string(4 * R * R) + ")");

    BoxDecomposition out;
    out.seedType = seedType;
    out.seedLevel = seedLevel;
    out.centering = center;
    out.counts.assign(static_cast<std::size_t>(seedLevel) + 1,
                      std::vector<std::int64_t>(static_cast<std::size_t>(sys.m), 0));

    const auto quads = prototile_quads(sys, shape);
    std::vector<MatI> driverPow;
    driverPow.push_back(MatI::identity(sys.s));
    for (int i = 1; i <= seedLevel; ++i) driverPow.push_back(mul_checked(sys.driver, driverPow.back()));

    detail::BoxWalker walker{sys, quads, shape.L, center, R, std::move(driverPow), &out};
    AddressVector origin(static_cast<std::size_t>(sys.s), 0);
    walker.assign(seedType, seedLevel, origin);
    return out;
}

// Box integral via the decomposition: supertile contributions through the
// cocycle plus the leftover single-tile phases. Matches the flat sum over all
// tiles contained in the box.
inline cplx twisted_box_integral(const SubstitutionSystem& sys, const ShapeMatrix& shape,
                                 const std::vector<double>& lam, double R, const TestFunction& psi,
                                 int seedType, int seedLevel) {
    const BoxDecomposition dec = box_decomposition(sys, shape, R, seedType, seedLevel);
    cplx acc(0, 0);
    auto contribution = [&](const BoxSupertile& st) {
        std::vector<double> y(2);
        Vec2 pos = {-dec.centering[0], -dec.centering[1]};
        for (int c = 0; c < sys.s; ++c) {
            pos[0] += shape.L(0, c) * static_cast<double>(st.origin[static_cast<std::size_t>(c)]);
            pos[1] += shape.L(1, c) * static_cast<double>(st.origin[static_cast<std::size_t>(c)]);
        }
        y[0] = pos[0]; y[1] = pos[1];
        return translated_supertile_integral(sys, shape, lam, st.type, st.level, y, psi,
                                             DigitConvention::Geometric);
    };
    for (const auto& st : dec.supertiles) acc += contribution(st);
    for (const auto& st : dec.leftover) acc += contribution(st);
    return acc;
}

// Flat reference sum over the tiles of the recentered seed patch contained in
// the box (oracle for twisted_box_integral).
inline cplx twisted_box_bruteforce(const SubstitutionSystem& sys, const ShapeMatrix& shape,
                                   const std::vector<double>& lam, double R,
                                   const TestFunction& psi, int seedType, int seedLevel) {
    const Patch seed = expand_supertile(sys, seedType, seedLevel, DigitConvention::Geometric);
    const RealizedPatch realized = realize_patch(sys, shape, seed);
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t i = 0; i < realized.size(); ++i)
        for (const auto& p : realized.polygon(i)) {
            xmin = std::min(xmin, p[0]); xmax = std::max(xmax, p[0]);
            ymin = std::min(ymin, p[1]); ymax = std::max(ymax, p[1]);
        }
    const Vec2 center = {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    cplx acc(0, 0);
    for (std::size_t i = 0; i < realized.size(); ++i) {
        Quad q = realized.polygon(i);
        bool inside = true;
        for (auto& p : q) {
            p = p - center;
            if (std::abs(p[0]) > R || std::abs(p[1]) > R) { inside = false; break; }
        }
        if (!inside) continue;
        const Vec2 pos = realized.anchors[i] - center;
        const double t = lam[0] * pos[0] + lam[1] * pos[1];
        acc += std::polar(1.0, -2.0 * M_PI * t) * psi.psiHat(realized.types[i], lam);
    }
    return acc;
}

// ------------------------------------------------------------- dim bounds

// 2 min{ d - chi+/log theta , 1 }, clamped below at 0.
inline double dim_lower_bound(double chiPlus, int d, double theta) {
    if (!(theta > 1.0)) throw UsageError("dim_lower_bound requires theta > 1");
    const double v = 2.0 * std::min(static_cast<double>(d) - chiPlus / std::log(theta), 1.0);
    return std::max(v, 0.0);
}

// Bound at lam = 0 for mean-zero functions, via the second eigenvalue of S.
inline double dim_lower_bound_zero(const MatI& S, int d, double theta) {
    const PerronData pf = pf_data(S);
    return dim_lower_bound(std::log(pf.secondModulus), d, theta);
}

} // namespace tilings
