#pragma once

// The two concrete systems: Kenyon's (p,q,r) parallelogram family and the
// 3-letter square tiling with expansion 6.
//
// Kenyon family. Prototiles A, B, C are the parallelograms spanned by the
// vector pairs (1,lambda), (lambda,lambda^2), (1,lambda^2), where lambda is
// the complex root of f(z) = z^3 - p z^2 + q z + r. The recurrence module is
// Z[1,lambda,lambda^2] with address map alpha(n1 + n2 L + n3 L^2) = (n1,n2,n3)
// and driver-transpose
//        [ 0  1  0 ]
//        [ 0  0  1 ]
//        [-r -q  p ].
//
// The spectral digit table lists the translations of the substitution rule
//   lambda A = B
//   lambda B = U_{j<q} (B - r - j lambda + p lambda^2) U_{1<=j<=r} (C - j + p lambda^2)
//   lambda C = U_{1<=j<=r} (A - j + p lambda^2) U_{j<p} (B - j lambda^2 + p lambda^2)
// which are exact for the limit (fractal) tiles. Expanding the free-group
// commutator words instead gives the anchors of the parallelogram patches;
// those differ by one lattice step on the B-children of B and of C and are
// stored in the geometric table, which is what makes realized patches
// interior-disjoint at every level.

#include <array>
#include <cassert>
#include <string>

#include "tilings/cubic.hpp"
#include "tilings/substitution.hpp"

namespace tilings {

struct KenyonModel {
    CubicParams params;
    CubicClass cubicClass;
    cplx lambda;
    SubstitutionSystem system;
};

inline KenyonModel kenyon_system(const CubicParams& params) {
    const CubicClass cls = classify_cubic(params);
    switch (cls.tag) {
        case CubicTag::Reducible:
            throw Reducible("f(z) has the integer root " + std::to_string(*cls.integerRoot) +
                            " (Perron lemma, part iv)");
        case CubicTag::ThreeRealRoots:
            throw NoComplexRoot("f(z) has three real roots (Perron lemma, part i)");
        case CubicTag::ComplexNonPerron:
            throw NonPerron("p = q = 0: the complex root is not Perron (Perron lemma, part ii)");
        default:
            break;
    }
    const cplx lam = *cls.lambda;
    const cplx lam2 = lam * lam;
    const auto p = params.p, q = params.q, r = params.r;

    KenyonModel model;
    model.params = params;
    model.cubicClass = cls;
    model.lambda = lam;

    SubstitutionSystem& sys = model.system;
    sys.name = "kenyon(" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r) + ")";
    sys.m = 3;
    sys.s = 3;
    sys.d = 2;
    sys.labels = {"A", "B", "C"};
    enum { A = 0, B = 1, C = 2 };

    sys.digits.assign(3, std::vector<std::vector<AddressVector>>(3));
    sys.digits[A][B] = {{0, 0, 0}};
    for (std::int64_t j = 0; j < q; ++j) sys.digits[B][B].push_back({-r, -j, p});
    for (std::int64_t j = 1; j <= r; ++j) sys.digits[B][C].push_back({-j, 0, p});
    for (std::int64_t j = 1; j <= r; ++j) sys.digits[C][A].push_back({-j, 0, p});
    for (std::int64_t j = 0; j < p; ++j) sys.digits[C][B].push_back({0, 0, p - j});

    sys.geomDigits.assign(3, std::vector<std::vector<AddressVector>>(3));
    sys.geomDigits[A][B] = {{0, 0, 0}};
    for (std::int64_t j = 1; j <= q; ++j) sys.geomDigits[B][B].push_back({-r, -j, p});
    sys.geomDigits[B][C] = sys.digits[B][C];
    sys.geomDigits[C][A] = sys.digits[C][A];
    for (std::int64_t j = 0; j < p; ++j) sys.geomDigits[C][B].push_back({0, 0, j});

    sys.driver = MatI(3, 3, {0, 0, -r,
                             1, 0, -q,
                             0, 1, p});
    sys.theta = std::abs(lam);
    sys.defaultShape = MatD(2, 3, {1.0, lam.real(), lam2.real(),
                                   0.0, lam.imag(), lam2.imag()});
    sys.prototileSpans = {{0, 1}, {1, 2}, {0, 2}};

    // multiplication by z in Z[z]/(f), by polynomial reduction
    sys.expansionOracle = [p, q, r](const AddressVector& x) {
        assert(x.size() == 3);
        // (n1 + n2 z + n3 z^2) * z, then z^3 -> p z^2 - q z - r
        std::int64_t c0 = 0, c1 = x[0], c2 = x[1], c3 = x[2];
        c2 = add_checked(c2, mul_checked(p, c3));
        c1 = add_checked(c1, mul_checked(-q, c3));
        c0 = add_checked(c0, mul_checked(-r, c3));
        return AddressVector{c0, c1, c2};
    };
    return model;
}

// -------------------------------------------------------------------------
// Square tiling: three unit-square labels, pure dilation by 6. Every tiling
// has rows of 2's in pairs alternating with rows of 0/1's in pairs.

struct SquareModel {
    SubstitutionSystem system;
    // grids[j][y][x], y counted from the bottom
    std::array<std::array<std::string, 6>, 3> grids;
};

inline SquareModel square_system() {
    SquareModel model;
    // printed top-down in the source, stored bottom-up
    const std::array<std::array<std::string, 6>, 3> printed = {{
        {{"222222", "222222", "101001", "100101", "222222", "222222"}},
        {{"222222", "222222", "101001", "101101", "222222", "222222"}},
        {{"010001", "001100", "222222", "222222", "100100", "100101"}},
    }};
    for (int j = 0; j < 3; ++j)
        for (int y = 0; y < 6; ++y) model.grids[j][y] = printed[j][5 - y];

    SubstitutionSystem& sys = model.system;
    sys.name = "square";
    sys.m = 3;
    sys.s = 3;  // basis (v01, v2, h)
    sys.d = 2;
    sys.labels = {"0", "1", "2"};

    auto rowIs2 = [](const std::string& row) { return row.find_first_not_of('2') == std::string::npos; };

    sys.digits.assign(3, std::vector<std::vector<AddressVector>>(3));
    for (int j = 0; j < 3; ++j) {
        std::int64_t c01 = 0, c2 = 0;  // rows of each kind strictly below y
        for (int y = 0; y < 6; ++y) {
            for (int x = 0; x < 6; ++x) {
                const int k = model.grids[j][y][static_cast<std::size_t>(x)] - '0';
                sys.digits[j][k].push_back({c01, c2, x});
            }
            if (rowIs2(model.grids[j][y])) ++c2; else ++c01;
        }
    }
    sys.geomDigits = sys.digits;

    sys.driver = MatI(3, 3, {2, 4, 0,
                             4, 2, 0,
                             0, 0, 6});
    sys.theta = 6.0;
    sys.defaultShape = MatD(2, 3, {0.0, 0.0, 1.0,
                                   1.0, 1.0, 0.0});
    sys.prototileSpans = {{2, 0}, {2, 0}, {2, 1}};

    // Row bookkeeping oracle for the dilation by 6: crossing a 0/1 tile
    // vertically crosses the rows of a 0/1 image, and likewise for a 2 tile.
    // The row profiles are counted from the grids, not taken from the driver.
    std::int64_t rows01_in01 = 0, rows2_in01 = 0, rows01_in2 = 0, rows2_in2 = 0;
    for (int y = 0; y < 6; ++y) {
        (rowIs2(model.grids[0][y]) ? rows2_in01 : rows01_in01) += 1;
        (rowIs2(model.grids[2][y]) ? rows2_in2 : rows01_in2) += 1;
    }
    assert(model.grids[0][0].size() == 6);
    sys.expansionOracle = [=](const AddressVector& x) {
        assert(x.size() == 3);
        return AddressVector{
            add_checked(mul_checked(rows01_in01, x[0]), mul_checked(rows01_in2, x[1])),
            add_checked(mul_checked(rows2_in01, x[0]), mul_checked(rows2_in2, x[1])),
            mul_checked(6, x[2])};
    };
    return model;
}

// Eigenvalue moduli of the square driver, sorted descending, and the
// expanding dimension.
inline std::pair<std::vector<double>, int> square_driver_eigen() {
    const SquareModel model = square_system();
    auto ev = eigenvalues(to_double(model.system.driver));
    std::vector<double> moduli;
    moduli.reserve(ev.size());
    for (auto z : ev) moduli.push_back(std::abs(z));
    std::sort(moduli.rbegin(), moduli.rend());
    int expanding = 0;
    for (double m : moduli)
        if (m > 1.0) ++expanding;
    return {moduli, expanding};
}

} // namespace tilings
