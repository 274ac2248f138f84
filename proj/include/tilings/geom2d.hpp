#pragma once

// Minimal 2D helpers for convex quadrilateral tiles: distances, segment
// clipping against a convex polygon, polygon/box area clipping, minimal
// enclosing circle.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace tilings {

using Vec2 = std::array<double, 2>;
using Quad = std::array<Vec2, 4>;  // counterclockwise

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double t, Vec2 a) { return {t * a[0], t * a[1]}; }
inline double dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }
inline double cross(Vec2 a, Vec2 b) { return a[0] * b[1] - a[1] * b[0]; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

inline double segment_point_distance(Vec2 a, Vec2 b, Vec2 p) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

inline bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

inline double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min(std::min(segment_point_distance(a, b, c), segment_point_distance(a, b, d)),
                    std::min(segment_point_distance(c, d, a), segment_point_distance(c, d, b)));
}

inline double quad_area(const Quad& q) {
    double s = 0;
    for (int i = 0; i < 4; ++i) s += cross(q[i], q[(i + 1) % 4]);
    return 0.5 * s;  // signed; positive when counterclockwise
}

inline bool point_in_quad(const Quad& q, Vec2 p, double tol = 0.0) {
    for (int i = 0; i < 4; ++i) {
        const Vec2 e = q[(i + 1) % 4] - q[i];
        if (cross(e, p - q[i]) < -tol * norm(e)) return false;
    }
    return true;
}

// Distance between convex quads that do not overlap (tiles in a patch);
// returns 0 when they touch or intersect.
inline double quad_distance(const Quad& a, const Quad& b) {
    if (point_in_quad(a, b[0]) || point_in_quad(b, a[0])) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            best = std::min(best, segment_segment_distance(a[i], a[(i + 1) % 4], b[j], b[(j + 1) % 4]));
    return best;
}

// Clip the segment a + t (b-a), t in [0,1], against a convex quad inflated
// outward by `inflate`; returns the parameter interval or an empty one.
inline std::pair<double, double> clip_segment_to_quad(Vec2 a, Vec2 b, const Quad& q,
                                                      double inflate) {
    double t0 = 0.0, t1 = 1.0;
    const Vec2 dir = b - a;
    for (int i = 0; i < 4; ++i) {
        Vec2 e = q[(i + 1) % 4] - q[i];
        const double elen = norm(e);
        if (elen == 0) continue;
        // inward normal n (CCW polygon), halfplane dot(n, x - q[i]) >= -inflate
        const Vec2 n = {-e[1] / elen, e[0] / elen};
        const double num = dot(n, a - q[i]) + inflate;
        const double den = dot(n, dir);
        if (std::abs(den) < 1e-300) {
            if (num < 0) return {1.0, 0.0};
            continue;
        }
        const double t = -num / den;
        if (den > 0) t0 = std::max(t0, t);
        else t1 = std::min(t1, t);
        if (t0 > t1) return {1.0, 0.0};
    }
    return {t0, t1};
}

// Area of quad ∩ axis box [-R,R]^2 via Sutherland-Hodgman.
inline double quad_box_clip_area(const Quad& q, double R) {
    std::vector<Vec2> poly(q.begin(), q.end());
    auto clip = [&](auto inside, auto intersect) {
        std::vector<Vec2> out;
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 cur = poly[i], prev = poly[(i + n - 1) % n];
            const bool cin = inside(cur), pin = inside(prev);
            if (cin) {
                if (!pin) out.push_back(intersect(prev, cur));
                out.push_back(cur);
            } else if (pin) {
                out.push_back(intersect(prev, cur));
            }
        }
        poly = std::move(out);
    };
    auto xcut = [&](double bound, int sign) {
        clip([=](Vec2 p) { return sign * p[0] <= bound; },
             [=](Vec2 a, Vec2 b) {
                 const double t = (bound - sign * a[0]) / (sign * b[0] - sign * a[0]);
                 return a + t * (b - a);
             });
    };
    auto ycut = [&](double bound, int sign) {
        clip([=](Vec2 p) { return sign * p[1] <= bound; },
             [=](Vec2 a, Vec2 b) {
                 const double t = (bound - sign * a[1]) / (sign * b[1] - sign * a[1]);
                 return a + t * (b - a);
             });
    };
    xcut(R, 1); if (poly.empty()) return 0;
    xcut(R, -1); if (poly.empty()) return 0;
    ycut(R, 1); if (poly.empty()) return 0;
    ycut(R, -1); if (poly.empty()) return 0;
    double s = 0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        s += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * std::abs(s);
}

// Area of the intersection of two convex quads (Sutherland-Hodgman).
inline double quad_quad_clip_area(const Quad& subject, const Quad& clipQuad) {
    std::vector<Vec2> poly(subject.begin(), subject.end());
    for (int i = 0; i < 4 && !poly.empty(); ++i) {
        const Vec2 a = clipQuad[i], e = clipQuad[(i + 1) % 4] - clipQuad[i];
        std::vector<Vec2> out;
        const std::size_t n = poly.size();
        for (std::size_t k = 0; k < n; ++k) {
            const Vec2 cur = poly[k], prev = poly[(k + n - 1) % n];
            const double dc = cross(e, cur - a), dp = cross(e, prev - a);
            const bool cin = dc >= 0, pin = dp >= 0;
            if (cin) {
                if (!pin) out.push_back(prev + (dp / (dp - dc)) * (cur - prev));
                out.push_back(cur);
            } else if (pin) {
                out.push_back(prev + (dp / (dp - dc)) * (cur - prev));
            }
        }
        poly = std::move(out);
    }
    if (poly.size() < 3) return 0;
    double s = 0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        s += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * std::abs(s);
}

// Welzl's algorithm on a tiny fixed point set (deterministic order).
struct Circle {
    Vec2 center{0, 0};
    double radius = 0;
};

inline Circle circle_from(Vec2 a, Vec2 b) {
    const Vec2 c = 0.5 * (a + b);
    return {c, norm(a - c)};
}

inline Circle circle_from(Vec2 a, Vec2 b, Vec2 c) {
    const double d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if (std::abs(d) < 1e-14) {
        Circle best = circle_from(a, b);
        for (const auto& cc : {circle_from(a, c), circle_from(b, c)})
            if (cc.radius > best.radius) best = cc;
        return best;
    }
    const double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
    Vec2 u = {(a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d,
              (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d};
    return {u, norm(a - u)};
}

inline bool in_circle(const Circle& c, Vec2 p, double tol = 1e-9) {
    return norm(p - c.center) <= c.radius + tol;
}

inline Circle min_enclosing_circle(std::vector<Vec2> pts) {
    // deterministic shuffle-free O(n^3) worst case is fine for our sizes after
    // pre-reducing to the convex extremes; patches pass corner hulls only
    Circle c{{0, 0}, -1};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (c.radius >= 0 && in_circle(c, pts[i])) continue;
        c = {pts[i], 0};
        for (std::size_t j = 0; j < i; ++j) {
            if (in_circle(c, pts[j])) continue;
            c = circle_from(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (in_circle(c, pts[k])) continue;
                c = circle_from(pts[i], pts[j], pts[k]);
            }
        }
    }
    if (c.radius < 0) c.radius = 0;
    return c;
}

inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace tilings
