#pragma once

// Geometric realization of address patches, coronas, collared prototiles and
// SVG rendering.
//
// A tile (k, a) is realized as the prototile parallelogram of type k
// translated by shape * a. Addresses stay exact integers; only intersection
// detection is floating, with an absolute 1e-9 contact tolerance. Corona
// signatures therefore compare exactly: two tiles are translation-equivalent
// precisely when their (type, address-offset) neighbor lists coincide.

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tilings/deformation.hpp"
#include "tilings/errors.hpp"
#include "tilings/geom2d.hpp"
#include "tilings/substitution.hpp"

namespace tilings {

inline std::vector<Quad> prototile_quads(const SubstitutionSystem& sys, const ShapeMatrix& shape) {
    if (sys.d != 2) throw UsageError("polygon realization is two-dimensional");
    if (static_cast<int>(sys.prototileSpans.size()) != sys.m)
        throw UsageError("system lacks prototile span data");
    std::vector<Quad> quads;
    quads.reserve(static_cast<std::size_t>(sys.m));
    for (const auto& [ci, cj] : sys.prototileSpans) {
        const Vec2 u = {shape.L(0, ci), shape.L(1, ci)};
        const Vec2 v = {shape.L(0, cj), shape.L(1, cj)};
        Quad q = {Vec2{0, 0}, u, u + v, v};
        const double area = quad_area(q);
        if (std::abs(area) < 1e-9)
            throw DegenerateShape("prototile area " + std::to_string(area) + " below 1e-9");
        if (area < 0) std::swap(q[1], q[3]);  // keep counterclockwise
        quads.push_back(q);
    }
    return quads;
}

struct RealizedPatch {
    ShapeMatrix shape;
    int s = 0;
    int level = 0;
    int root = 0;
    std::vector<std::uint16_t> types;
    std::vector<std::int64_t> coords;   // flat addresses
    std::vector<Vec2> anchors;          // shape * address
    std::vector<Quad> prototiles;       // per type, anchored at 0
    double maxDiameter = 0;

    std::size_t size() const { return types.size(); }
    std::span<const std::int64_t> addr(std::size_t i) const {
        return {coords.data() + i * static_cast<std::size_t>(s), static_cast<std::size_t>(s)};
    }
    Quad polygon(std::size_t i) const {
        Quad q = prototiles[types[i]];
        for (auto& p : q) p = p + anchors[i];
        return q;
    }
};

inline RealizedPatch realize_patch(const SubstitutionSystem& sys, const ShapeMatrix& shape,
                                   const Patch& patch) {
    RealizedPatch out;
    out.shape = shape;
    out.s = patch.s;
    out.level = patch.level;
    out.root = patch.root;
    out.types = patch.types;
    out.coords = patch.coords;
    out.prototiles = prototile_quads(sys, shape);
    for (const auto& q : out.prototiles)
        for (const auto& p : q) out.maxDiameter = std::max(out.maxDiameter, 2.0 * norm(p));
    out.anchors.resize(patch.size());
    for (std::size_t i = 0; i < patch.size(); ++i) {
        const auto a = patch.addr(i);
        Vec2 pos = {0, 0};
        for (int c = 0; c < patch.s; ++c) {
            pos[0] += shape.L(0, c) * static_cast<double>(a[c]);
            pos[1] += shape.L(1, c) * static_cast<double>(a[c]);
        }
        out.anchors[i] = pos;
    }
    return out;
}

// Spatial hash over tile anchors; cell size 2*maxDiameter so touching tiles
// are always in adjacent cells.
class TileIndex {
public:
    explicit TileIndex(const RealizedPatch& patch) : patch_(patch) {
        cell_ = std::max(patch.maxDiameter * 2.0, 1e-12);
        for (std::size_t i = 0; i < patch.size(); ++i)
            grid_[key(patch.anchors[i])].push_back(i);
    }

    std::vector<std::size_t> candidates(std::size_t i) const {
        const auto [cx, cy] = key(patch_.anchors[i]);
        std::vector<std::size_t> out;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                auto it = grid_.find({cx + dx, cy + dy});
                if (it == grid_.end()) continue;
                for (auto j : it->second)
                    if (j != i) out.push_back(j);
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    // tiles whose closed supports meet tile i's within tol
    std::vector<std::size_t> touching(std::size_t i, double tol = 1e-9) const {
        const Quad qi = patch_.polygon(i);
        std::vector<std::size_t> out;
        for (auto j : candidates(i))
            if (quad_distance(qi, patch_.polygon(j)) <= tol) out.push_back(j);
        return out;
    }

private:
    using Key = std::pair<long, long>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return std::hash<long>()(k.first * 1000003L) ^ std::hash<long>()(k.second);
        }
    };
    Key key(Vec2 p) const {
        return {static_cast<long>(std::floor(p[0] / cell_)), static_cast<long>(std::floor(p[1] / cell_))};
    }
    const RealizedPatch& patch_;
    double cell_ = 1;
    std::unordered_map<Key, std::vector<std::size_t>, KeyHash> grid_;
};

namespace detail {

// Is the whole boundary of tile i covered by the given neighbors?
// Each edge's coverage intervals are clipped exactly and merged; a corona is
// complete iff no edge has a gap.
inline bool boundary_covered(const RealizedPatch& patch, std::size_t i,
                             const std::vector<std::size_t>& nbrs,
                             std::vector<std::pair<Vec2, Vec2>>* uncovered = nullptr) {
    const Quad qi = patch.polygon(i);
    const double inflate = 1e-7 * std::max(1.0, patch.maxDiameter);
    bool complete = true;
    for (int e = 0; e < 4; ++e) {
        const Vec2 a = qi[e], b = qi[(e + 1) % 4];
        std::vector<std::pair<double, double>> ivs;
        for (auto j : nbrs) {
            auto [t0, t1] = clip_segment_to_quad(a, b, patch.polygon(j), inflate);
            if (t0 < t1) ivs.emplace_back(t0, t1);
        }
        std::sort(ivs.begin(), ivs.end());
        const double slack = 1e-6;
        double covered = 0.0;
        for (const auto& [t0, t1] : ivs) {
            if (t0 > covered + slack) break;
            covered = std::max(covered, t1);
            if (covered >= 1.0 - slack) break;
        }
        if (covered < 1.0 - slack) {
            complete = false;
            if (uncovered) {
                // report the first uncovered piece of this edge
                const double t0 = covered;
                double t1 = 1.0;
                for (const auto& [u0, u1] : ivs)
                    if (u0 > covered + slack) { t1 = u0; break; }
                uncovered->emplace_back(a + t0 * (b - a), a + t1 * (b - a));
            } else {
                return false;
            }
        }
    }
    return complete;
}

} // namespace detail

// All tiles whose closed supports intersect tile `index`'s closed support.
// Throws IncompleteCorona when the patch does not surround the tile.
inline std::vector<std::size_t> corona(const RealizedPatch& patch, const TileIndex& index,
                                       std::size_t tile, double tol = 1e-9) {
    auto nbrs = index.touching(tile, tol);
    if (!detail::boundary_covered(patch, tile, nbrs))
        throw IncompleteCorona("tile " + std::to_string(tile) + " is not surrounded");
    return nbrs;
}

inline std::vector<std::size_t> corona(const RealizedPatch& patch, std::size_t tile,
                                       double tol = 1e-9) {
    TileIndex index(patch);
    return corona(patch, index, tile, tol);
}

struct CollaredAtlas {
    struct Class {
        int centerType = 0;
        // sorted (type, address offset) list over the collar
        std::vector<std::pair<int, AddressVector>> corona;
        std::size_t witnesses = 0;
    };
    std::vector<Class> classes;
    int collarRadius = 1;
    int saturationLevel = 0;
    int root = 0;
    std::size_t count() const { return classes.size(); }
};

namespace detail {

using Signature = std::pair<int, std::vector<std::pair<int, AddressVector>>>;

inline Signature tile_signature(const RealizedPatch& patch, std::size_t i,
                                const std::vector<std::size_t>& collarTiles) {
    Signature sig;
    sig.first = patch.types[i];
    const auto base = patch.addr(i);
    for (auto j : collarTiles) {
        AddressVector off(static_cast<std::size_t>(patch.s));
        const auto aj = patch.addr(j);
        for (int c = 0; c < patch.s; ++c) off[static_cast<std::size_t>(c)] = aj[c] - base[c];
        sig.second.emplace_back(patch.types[j], std::move(off));
    }
    std::sort(sig.second.begin(), sig.second.end());
    return sig;
}

// classes present at one level; empty result means no complete tile yet
inline std::map<Signature, std::size_t> level_classes(const RealizedPatch& patch,
                                                      int collarRadius) {
    TileIndex index(patch);
    const std::size_t n = patch.size();
    std::vector<std::vector<std::size_t>> nbrs(n);
    std::vector<char> complete(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        nbrs[i] = index.touching(i);
        complete[i] = boundary_covered(patch, i, nbrs[i]) ? 1 : 0;
    }
    std::map<Signature, std::size_t> classes;
    for (std::size_t i = 0; i < n; ++i) {
        if (!complete[i]) continue;
        if (collarRadius == 1) {
            classes[tile_signature(patch, i, nbrs[i])] += 1;
            continue;
        }
        // radius 2: neighbors of neighbors, all first-ring coronas complete
        bool ok = true;
        std::vector<std::size_t> ring(nbrs[i]);
        for (auto j : nbrs[i]) {
            if (!complete[j]) { ok = false; break; }
            ring.insert(ring.end(), nbrs[j].begin(), nbrs[j].end());
        }
        if (!ok) continue;
        std::sort(ring.begin(), ring.end());
        ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
        ring.erase(std::remove(ring.begin(), ring.end(), i), ring.end());
        classes[tile_signature(patch, i, ring)] += 1;
    }
    return classes;
}

} // namespace detail

// Enumerates collared prototiles from supertile realizations of increasing
// level until the class count repeats with every class witnessed twice.
inline CollaredAtlas collared_prototiles(const SubstitutionSystem& sys, const ShapeMatrix& shape,
                                         int maxLevel, int collarRadius = 1, int root = 0) {
    std::map<detail::Signature, std::size_t> prev;
    bool havePrev = false;
    for (int level = 2; level <= maxLevel; ++level) {
        const Patch patch = expand_supertile(sys, root, level, DigitConvention::Geometric);
        const RealizedPatch realized = realize_patch(sys, shape, patch);
        auto classes = detail::level_classes(realized, collarRadius);
        const bool sameKeys =
            havePrev && classes.size() == prev.size() &&
            std::equal(classes.begin(), classes.end(), prev.begin(),
                       [](const auto& a, const auto& b) { return a.first == b.first; });
        const bool allTwice =
            !classes.empty() &&
            std::all_of(classes.begin(), classes.end(), [](const auto& kv) { return kv.second >= 2; });
        if (sameKeys && allTwice) {
            CollaredAtlas atlas;
            atlas.collarRadius = collarRadius;
            atlas.saturationLevel = level;
            atlas.root = root;
            for (const auto& [sig, witnesses] : classes) {
                CollaredAtlas::Class cls;
                cls.centerType = sig.first;
                cls.corona = sig.second;
                cls.witnesses = witnesses;
                atlas.classes.push_back(std::move(cls));
            }
            return atlas;
        }
        prev = std::move(classes);
        havePrev = true;
    }
    throw NotSaturated("collared class count still changing at level " + std::to_string(maxLevel));
}

// Class index per tile: exact signature match for interior tiles; boundary
// tiles get the first class consistent with their partial corona, else -1.
inline std::vector<int> classify_tiles(const RealizedPatch& patch, const CollaredAtlas& atlas) {
    TileIndex index(patch);
    std::map<detail::Signature, int> exact;
    for (std::size_t c = 0; c < atlas.classes.size(); ++c)
        exact[{atlas.classes[c].centerType, atlas.classes[c].corona}] = static_cast<int>(c);
    std::vector<int> out(patch.size(), -1);
    for (std::size_t i = 0; i < patch.size(); ++i) {
        auto nbrs = index.touching(i);
        const auto sig = detail::tile_signature(patch, i, nbrs);
        if (detail::boundary_covered(patch, i, nbrs)) {
            auto it = exact.find(sig);
            if (it != exact.end()) out[i] = it->second;
            continue;
        }
        for (std::size_t c = 0; c < atlas.classes.size(); ++c) {
            const auto& cls = atlas.classes[c];
            if (cls.centerType != sig.first) continue;
            if (std::includes(cls.corona.begin(), cls.corona.end(), sig.second.begin(),
                              sig.second.end())) {
                out[i] = static_cast<int>(c);
                break;
            }
        }
    }
    return out;
}

// Boundary of the patch support: the uncovered parts of tile edges.
inline std::vector<std::pair<Vec2, Vec2>> boundary_segments(const RealizedPatch& patch) {
    TileIndex index(patch);
    std::vector<std::pair<Vec2, Vec2>> segs;
    for (std::size_t i = 0; i < patch.size(); ++i) {
        auto nbrs = index.touching(i);
        detail::boundary_covered(patch, i, nbrs, &segs);
    }
    return segs;
}

// Radius of the smallest enclosing ball of the patch support.
inline double patch_circumradius(const RealizedPatch& patch) {
    std::vector<Vec2> corners;
    corners.reserve(patch.size() * 4);
    for (std::size_t i = 0; i < patch.size(); ++i)
        for (const auto& p : patch.polygon(i)) corners.push_back(p);
    return min_enclosing_circle(convex_hull(std::move(corners))).radius;
}

// Lower bound for the inscribed radius: best clearance from a tile centroid
// to the patch boundary.
inline double patch_inradius(const RealizedPatch& patch) {
    const auto segs = boundary_segments(patch);
    if (segs.empty()) return 0;
    double best = 0;
    for (std::size_t i = 0; i < patch.size(); ++i) {
        const Quad q = patch.polygon(i);
        Vec2 c = {0, 0};
        for (const auto& p : q) c = c + 0.25 * p;
        double clearance = std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : segs)
            clearance = std::min(clearance, segment_point_distance(a, b, c));
        best = std::max(best, clearance);
    }
    return best;
}

inline double patch_total_area(const RealizedPatch& patch) {
    double total = 0;
    std::vector<double> areas;
    areas.reserve(patch.prototiles.size());
    for (const auto& q : patch.prototiles) areas.push_back(quad_area(q));
    for (auto t : patch.types) total += areas[t];
    return total;
}

// True when no two tiles overlap on a set of positive area.
inline bool interior_disjoint(const RealizedPatch& patch, double areaTol = 1e-9) {
    TileIndex index(patch);
    for (std::size_t i = 0; i < patch.size(); ++i) {
        const Quad qi = patch.polygon(i);
        for (auto j : index.candidates(i)) {
            if (j <= i) continue;
            if (quad_quad_clip_area(qi, patch.polygon(j)) > areaTol) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- rendering

struct ByType {};
struct ByCollaredClass {
    const CollaredAtlas* atlas;
};
using Coloring = std::variant<ByType, ByCollaredClass>;

namespace detail {

// fixed palette; distinct hues, stable across runs
inline const char* palette(std::size_t i) {
    static const char* kColors[] = {
        "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
        "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
        "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
        "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
        "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173", "#5254a3", "#8ca252", "#bd9e39",
        "#ad494a", "#a55194", "#6b6ecf", "#b5cf6b", "#e7ba52", "#d6616b", "#ce6dbd", "#9c9ede",
        "#cedb9c", "#e7cb94", "#e7969c", "#de9ed6", "#3182bd", "#e6550d", "#31a354", "#756bb1",
        "#636363", "#6baed6", "#fd8d3c", "#74c476", "#9e9ac8", "#969696", "#9ecae1", "#fdae6b",
    };
    return kColors[i % (sizeof(kColors) / sizeof(kColors[0]))];
}

} // namespace detail

// Deterministic SVG: one polygon per tile, ordered by (type, address), fixed
// palette, viewBox padded by 2%. Identical inputs give identical bytes.
inline void render_svg(const RealizedPatch& patch, const Coloring& coloring,
                       const std::string& path) {
    std::vector<std::size_t> order(patch.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (patch.types[a] != patch.types[b]) return patch.types[a] < patch.types[b];
        const auto aa = patch.addr(a), ab = patch.addr(b);
        return std::lexicographical_compare(aa.begin(), aa.end(), ab.begin(), ab.end());
    });

    std::vector<int> classIds;
    if (std::holds_alternative<ByCollaredClass>(coloring)) {
        const auto* atlas = std::get<ByCollaredClass>(coloring).atlas;
        if (!atlas) throw UsageError("ByCollaredClass rendering needs an atlas");
        classIds = classify_tiles(patch, *atlas);
    }

    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    for (std::size_t i = 0; i < patch.size(); ++i)
        for (const auto& p : patch.polygon(i)) {
            // SVG y points down; flip
            const double x = p[0], y = -p[1];
            if (first) { xmin = xmax = x; ymin = ymax = y; first = false; }
            xmin = std::min(xmin, x); xmax = std::max(xmax, x);
            ymin = std::min(ymin, y); ymax = std::max(ymax, y);
        }
    const double padX = 0.02 * std::max(xmax - xmin, 1e-9);
    const double padY = 0.02 * std::max(ymax - ymin, 1e-9);

    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::fprintf(f,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
                 "viewBox=\"%.6f %.6f %.6f %.6f\">\n",
                 xmin - padX, ymin - padY, (xmax - xmin) + 2 * padX, (ymax - ymin) + 2 * padY);
    const double stroke = 0.004 * std::max(patch.maxDiameter, 1e-9);
    for (auto i : order) {
        const Quad q = patch.polygon(i);
        const char* fill;
        if (std::holds_alternative<ByType>(coloring)) {
            fill = detail::palette(patch.types[i]);
        } else {
            const int c = classIds[i];
            fill = c >= 0 ? detail::palette(static_cast<std::size_t>(c)) : "#ffffff";
        }
        std::fprintf(f, "<polygon points=\"");
        for (int v = 0; v < 4; ++v)
            std::fprintf(f, "%s%.6f,%.6f", v ? " " : "", q[v][0], -q[v][1]);
        std::fprintf(f, "\" fill=\"%s\" stroke=\"#303030\" stroke-width=\"%.6f\"/>\n", fill, stroke);
    }
    std::fprintf(f, "</svg>\n");
    if (std::fclose(f) != 0) throw IoError("failed to close " + path);
}

} // namespace tilings
