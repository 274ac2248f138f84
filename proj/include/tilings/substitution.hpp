#pragma once

// Substitution systems in integer address coordinates.
//
// A system has m prototiles, a recurrence module of rank s with address map
// alpha, digit sets alpha(D_jk) listing the translations of prototile k inside
// the inflated prototile j, and an integer driver matrix M with
// alpha(phi x) = M alpha(x). Geometry enters only later, through a d x s shape
// matrix; everything here is exact 64-bit integer arithmetic with overflow
// detection.
//
// Systems carry two digit tables. `digits` is the combinatorial table that the
// spectral cocycle is built from. `geomDigits` holds the support anchors used
// to realize patches as polygons; for most systems the two coincide, but for
// substitutions with amalgamation the printed translation sets are exact for
// the limit (fractal) tiles while the polygonal stand-ins sit at per-edge
// lattice corrections of them. Counts, and hence the substitution matrix,
// agree between the two tables.

#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tilings/errors.hpp"
#include "tilings/linalg.hpp"
#include "tilings/rng.hpp"

namespace tilings {

using AddressVector = std::vector<std::int64_t>;

// [j][k] -> list of address vectors alpha(D_jk)
using DigitTable = std::vector<std::vector<std::vector<AddressVector>>>;

enum class DigitConvention { Spectral, Geometric };

struct Patch {
    int s = 0;
    int level = 0;
    int root = 0;
    DigitConvention convention = DigitConvention::Spectral;
    std::vector<std::uint16_t> types;
    std::vector<std::int64_t> coords;  // flat, size() * s entries

    std::size_t size() const { return types.size(); }
    std::span<const std::int64_t> addr(std::size_t i) const {
        return {coords.data() + i * static_cast<std::size_t>(s), static_cast<std::size_t>(s)};
    }
};

struct SubstitutionSystem {
    std::string name;
    int m = 0;  // prototile count
    int s = 0;  // recurrence-module rank
    int d = 0;  // ambient dimension
    DigitTable digits;
    DigitTable geomDigits;
    MatI driver;        // s x s
    double theta = 0;   // expansion constant, > 1
    MatD defaultShape;  // d x s
    // Prototile k is the parallelepiped spanned by the given shape columns,
    // anchored at the digit position.
    std::vector<std::pair<int, int>> prototileSpans;
    std::vector<std::string> labels;
    // Geometric multiplication oracle: the action of the expansion on an
    // address vector, derived independently of `driver` (model-specific).
    std::function<AddressVector(const AddressVector&)> expansionOracle;

    const DigitTable& table(DigitConvention c) const {
        return c == DigitConvention::Geometric ? geomDigits : digits;
    }

    std::string label(int j) const {
        if (j >= 0 && j < static_cast<int>(labels.size())) return labels[j];
        return std::to_string(j);
    }
};

// S(j,k) = #D_kj: column k counts the tiles produced from prototile k.
inline MatI substitution_matrix(const SubstitutionSystem& sys) {
    MatI S(sys.m, sys.m);
    for (int j = 0; j < sys.m; ++j)
        for (int k = 0; k < sys.m; ++k)
            S(j, k) = static_cast<std::int64_t>(sys.digits[k][j].size());
    return S;
}

// Primitivity via boolean reachability: S^k > 0 for some k <= (m-1)^2 + 1
// (Wielandt bound). Boolean products avoid integer overflow entirely.
inline bool is_primitive(const MatI& S) {
    const int m = S.rows;
    std::vector<bool> cur(S.a.size());
    for (std::size_t i = 0; i < S.a.size(); ++i) cur[i] = S.a[i] > 0;
    const int bound = (m - 1) * (m - 1) + 1;
    auto all_positive = [&](const std::vector<bool>& b) {
        for (bool v : b)
            if (!v) return false;
        return true;
    };
    std::vector<bool> base = cur;
    for (int step = 1; step <= bound; ++step) {
        if (all_positive(cur)) return true;
        std::vector<bool> nxt(cur.size(), false);
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k)
                if (cur[static_cast<std::size_t>(i) * m + k])
                    for (int j = 0; j < m; ++j)
                        if (base[static_cast<std::size_t>(k) * m + j])
                            nxt[static_cast<std::size_t>(i) * m + j] = true;
        cur = nxt;
    }
    return all_positive(cur);
}

// P_0(j) = {(j, 0)};  P_{n+1}(j) = U_k U_{x in D_jk} (P_n(k) + M^n alpha(x)).
inline Patch expand_supertile(const SubstitutionSystem& sys, int j, int n,
                              DigitConvention conv = DigitConvention::Spectral) {
    if (j < 0 || j >= sys.m) throw UsageError("prototile index out of range");
    if (n < 0) throw UsageError("negative supertile level");
    const DigitTable& D = sys.table(conv);

    // patches for every type, level by level
    std::vector<Patch> cur(static_cast<std::size_t>(sys.m));
    for (int k = 0; k < sys.m; ++k) {
        cur[k].s = sys.s;
        cur[k].root = k;
        cur[k].convention = conv;
        cur[k].types = {static_cast<std::uint16_t>(k)};
        cur[k].coords.assign(static_cast<std::size_t>(sys.s), 0);
    }
    MatI Mn = MatI::identity(sys.s);
    for (int lvl = 0; lvl < n; ++lvl) {
        std::vector<Patch> nxt(static_cast<std::size_t>(sys.m));
        for (int jj = 0; jj < sys.m; ++jj) {
            Patch& out = nxt[jj];
            out.s = sys.s;
            out.level = lvl + 1;
            out.root = jj;
            out.convention = conv;
            for (int k = 0; k < sys.m; ++k) {
                for (const AddressVector& x : D[jj][k]) {
                    const auto shift = mul_checked(Mn, x);
                    const Patch& sub = cur[k];
                    for (std::size_t t = 0; t < sub.size(); ++t) {
                        out.types.push_back(sub.types[t]);
                        const auto a = sub.addr(t);
                        for (int c = 0; c < sys.s; ++c)
                            out.coords.push_back(add_checked(a[c], shift[static_cast<std::size_t>(c)]));
                    }
                }
            }
        }
        cur = std::move(nxt);
        Mn = mul_checked(sys.driver, Mn);
    }
    return cur[static_cast<std::size_t>(j)];
}

inline std::vector<std::int64_t> tile_census(const SubstitutionSystem& sys, int j, int n) {
    const Patch p = expand_supertile(sys, j, n);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(sys.m), 0);
    for (auto t : p.types) ++counts[t];
    return counts;
}

struct PerronData {
    double pfValue = 0;
    std::vector<double> rightVec;  // normalized to sum 1: relative tile frequencies
    std::vector<double> leftVec;   // normalized to sum 1
    double secondModulus = 0;
};

inline PerronData pf_data(const MatI& S) {
    if (!is_primitive(S)) throw NotPrimitive("pf_data requires a primitive matrix");
    const MatD Sd = to_double(S);
    auto ev = eigenvalues(Sd);
    // spectral radius of a primitive non-negative matrix is real and simple
    int pfIdx = 0;
    for (std::size_t i = 1; i < ev.size(); ++i)
        if (std::abs(ev[i]) > std::abs(ev[static_cast<std::size_t>(pfIdx)]))
            pfIdx = static_cast<int>(i);
    PerronData out;
    out.pfValue = ev[static_cast<std::size_t>(pfIdx)].real();
    double second = 0;
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (static_cast<int>(i) != pfIdx) second = std::max(second, std::abs(ev[i]));
    out.secondModulus = second;

    auto normalize_sum1 = [](std::vector<double> v) {
        double sum = std::accumulate(v.begin(), v.end(), 0.0);
        for (auto& x : v) x /= sum;
        return v;
    };
    out.rightVec = normalize_sum1(right_eigenvector(Sd, out.pfValue));
    out.leftVec = normalize_sum1(right_eigenvector(Sd.transpose(), out.pfValue));
    return out;
}

// Checks alpha(phi . x) = M x on random address vectors, using the system's
// independent expansion oracle. Throws InconsistentDriver on the first
// counterexample.
inline bool driver_consistency(const SubstitutionSystem& sys, int samples,
                               std::uint64_t seed = 1234) {
    if (!sys.expansionOracle)
        throw UsageError("system \"" + sys.name + "\" has no expansion oracle");
    Rng rng(seed);
    for (int it = 0; it < samples; ++it) {
        AddressVector x(static_cast<std::size_t>(sys.s));
        for (auto& v : x) v = rng.uniform_int(-1000, 1000);
        const AddressVector viaOracle = sys.expansionOracle(x);
        const auto viaDriver = mul_checked(sys.driver, x);
        if (viaOracle != viaDriver) {
            std::string msg = "alpha(phi x) != M x at x = (";
            for (std::size_t i = 0; i < x.size(); ++i)
                msg += (i ? "," : "") + std::to_string(x[i]);
            throw InconsistentDriver(msg + ")");
        }
    }
    return true;
}

} // namespace tilings
