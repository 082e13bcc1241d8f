#include "vpmf/interface_extract.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace vpmf {

namespace {

inline bool positive(double v) { return v >= 0.0; }  // phi == 0 joins the + phase

// Lattice edges: axis1 edge (i,j) runs (i,j)->(i,j+1), axis0 edge runs
// (i,j)->(i+1,j). Ids interleave the two families.
inline std::uint64_t edge_id(int axis, int i, int j, int n) {
    return 2ull * (static_cast<std::uint64_t>(i) * n + j) + axis;
}

struct EdgeData {
    std::array<double, 3> pt{0, 0, 0};
    std::uint64_t nbr[2] = {0, 0};
    int deg = 0;
};

}  // namespace

std::vector<InterfaceLoop> extract_interface_2d(const ScalarField& phi) {
    const TorusGrid& g = phi.grid;
    if (g.dim != 2) throw std::invalid_argument("extract_interface_2d: needs dim == 2");
    const int n = g.n;
    const double h = g.h;

    auto val = [&](int i, int j) { return phi[g.index({i, j, 0})]; };
    auto cross_t = [](double a, double b) { return a / (a - b); };

    std::unordered_map<std::uint64_t, EdgeData> edges;
    auto edge_point = [&](int axis, int i, int j) -> std::uint64_t {
        std::uint64_t id = edge_id(axis, g.wrap(i), g.wrap(j), n);
        auto it = edges.find(id);
        if (it != edges.end()) return id;
        double a, b;
        std::array<double, 3> pa{(g.wrap(i) + 0.5) * h, (g.wrap(j) + 0.5) * h, 0.0};
        if (axis == 1) {
            a = val(i, j);
            b = val(i, j + 1);
        } else {
            a = val(i, j);
            b = val(i + 1, j);
        }
        double t = cross_t(a, b);
        EdgeData e;
        e.pt = pa;
        e.pt[axis == 1 ? 1 : 0] += t * h;  // may exceed 1 at the seam; folded later
        edges.emplace(id, e);
        return id;
    };
    auto link = [&](std::uint64_t a, std::uint64_t b) {
        EdgeData& ea = edges[a];
        EdgeData& eb = edges[b];
        if (ea.deg >= 2 || eb.deg >= 2)
            throw std::runtime_error("interface extraction: non-manifold connectivity");
        ea.nbr[ea.deg++] = b;
        eb.nbr[eb.deg++] = a;
    };

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double c00 = val(i, j), c01 = val(i, j + 1);
            const double c10 = val(i + 1, j), c11 = val(i + 1, j + 1);
            const bool p00 = positive(c00), p01 = positive(c01);
            const bool p10 = positive(c10), p11 = positive(c11);
            int changes = (p00 != p01) + (p01 != p11) + (p11 != p10) + (p10 != p00);
            if (changes == 0) continue;
            // edge ids around the square
            auto bottom = [&] { return edge_point(1, i, j); };
            auto right = [&] { return edge_point(0, i, j + 1); };
            auto top = [&] { return edge_point(1, i + 1, j); };
            auto left = [&] { return edge_point(0, i, j); };
            if (changes == 2) {
                std::uint64_t a = 0, b = 0;
                bool first = true;
                auto take = [&](std::uint64_t e) {
                    if (first) {
                        a = e;
                        first = false;
                    } else
                        b = e;
                };
                if (p00 != p01) take(bottom());
                if (p01 != p11) take(right());
                if (p11 != p10) take(top());
                if (p10 != p00) take(left());
                link(a, b);
            } else {
                // saddle: corner signs alternate; the cell mean decides which
                // diagonal the curve separates
                const double mean = 0.25 * (c00 + c01 + c10 + c11);
                std::uint64_t eb = bottom(), er = right(), et = top(), el = left();
                if (positive(mean) == p00) {
                    link(eb, er);  // curve hugs c01
                    link(et, el);  // curve hugs c10
                } else {
                    link(eb, el);  // curve hugs c00
                    link(er, et);  // curve hugs c11
                }
            }
        }

    // every crossing edge must sit on a closed curve
    for (const auto& [id, e] : edges)
        if (e.deg != 2) throw std::runtime_error("interface extraction: open curve");

    std::vector<InterfaceLoop> loops;
    std::unordered_map<std::uint64_t, bool> seen;
    for (const auto& [start, e0] : edges) {
        if (seen[start]) continue;
        InterfaceLoop loop;
        std::uint64_t prev = start, cur = e0.nbr[0];
        seen[start] = true;
        // unwrap: keep consecutive points within half a period
        std::array<double, 3> anchor = e0.pt;
        loop.pts.push_back(anchor);
        while (cur != start) {
            seen[cur] = true;
            const EdgeData& ec = edges[cur];
            std::array<double, 3> p = ec.pt;
            for (int a = 0; a < 2; ++a) p[a] = anchor[a] + wrap_delta(p[a] - anchor[a]);
            loop.pts.push_back(p);
            anchor = p;
            std::uint64_t nxt = ec.nbr[0] == prev ? ec.nbr[1] : ec.nbr[0];
            prev = cur;
            cur = nxt;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

std::vector<std::array<double, 3>> extract_interface_cloud(const ScalarField& phi) {
    const TorusGrid& g = phi.grid;
    const int n = g.n;
    const double h = g.h;
    std::vector<std::array<double, 3>> pts;
    const std::size_t nc = g.cells();
    for (std::size_t idx = 0; idx < nc; ++idx) {
        auto k = g.coords(idx);
        const double a = phi[idx];
        for (int axis = 0; axis < g.dim; ++axis) {
            auto kn = k;
            kn[axis] += 1;
            const double b = phi[g.index(kn)];
            if (positive(a) == positive(b)) continue;
            auto p = g.center(k);
            p[axis] += (a / (a - b)) * h;
            if (p[axis] >= 1.0) p[axis] -= 1.0;
            pts.push_back(p);
        }
    }
    return pts;
}

double loop_area(const InterfaceLoop& loop) {
    const auto& p = loop.pts;
    const std::size_t m = p.size();
    if (m < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = p[i];
        const auto& b = p[(i + 1) % m];
        s += a[0] * b[1] - b[0] * a[1];
    }
    return 0.5 * std::fabs(s);
}

double loop_perimeter(const InterfaceLoop& loop) {
    const auto& p = loop.pts;
    const std::size_t m = p.size();
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = p[i];
        const auto& b = p[(i + 1) % m];
        s += std::hypot(b[0] - a[0], b[1] - a[1]);
    }
    return s;
}

CircleFit fit_circle(const InterfaceLoop& loop) {
    // Kasa fit: minimize sum (|p - c|^2 - r^2)^2, linear in (c, r^2 - |c|^2).
    const auto& p = loop.pts;
    const std::size_t m = p.size();
    if (m < 3) throw std::invalid_argument("fit_circle: need at least 3 points");
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, sxz = 0, syz = 0, sz = 0;
    for (const auto& q : p) {
        const double x = q[0], y = q[1], z = x * x + y * y;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
        sxz += x * z;
        syz += y * z;
        sz += z;
    }
    const double N = static_cast<double>(m);
    // normal equations for z = 2 cx x + 2 cy y + (r^2 - cx^2 - cy^2)
    const double a11 = sxx, a12 = sxy, a13 = sx;
    const double a22 = syy, a23 = sy;
    const double det = a11 * (a22 * N - a23 * a23) - a12 * (a12 * N - a23 * a13) +
                       a13 * (a12 * a23 - a22 * a13);
    if (std::fabs(det) < 1e-300) throw std::runtime_error("fit_circle: degenerate points");
    const double b1 = sxz, b2 = syz, b3 = sz;
    const double u = (b1 * (a22 * N - a23 * a23) - a12 * (b2 * N - a23 * b3) +
                      a13 * (b2 * a23 - a22 * b3)) /
                     det;
    const double v = (a11 * (b2 * N - b3 * a23) - b1 * (a12 * N - a23 * a13) +
                      a13 * (a12 * b3 - b2 * a13)) /
                     det;
    const double w = (a11 * (a22 * b3 - b2 * a23) - a12 * (a12 * b3 - b2 * a13) +
                      b1 * (a12 * a23 - a22 * a13)) /
                     det;
    CircleFit f;
    const double cx = 0.5 * u, cy = 0.5 * v;
    f.radius = std::sqrt(std::max(0.0, w + cx * cx + cy * cy));
    double fx = cx - std::floor(cx);
    double fy = cy - std::floor(cy);
    f.center = {fx, fy, 0.0};
    double ss = 0.0;
    for (const auto& q : p) {
        double d = std::hypot(q[0] - cx, q[1] - cy) - f.radius;
        ss += d * d;
    }
    f.rms = std::sqrt(ss / N);
    return f;
}

}  // namespace vpmf
