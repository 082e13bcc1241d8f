#pragma once
// Cell-centered uniform grid on the flat torus [0,1)^d, d = 2 or 3.
// Cell i has center x_i = (k_i + 1/2) h with h = 1/n; all fields are
// row-major over the axis order (axis 0 slowest, axis d-1 fastest).

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vpmf {

struct TorusGrid {
    int dim = 2;
    int n = 0;       // cells per axis
    double h = 0.0;  // spacing, exactly 1.0/n

    static TorusGrid make(int dim, int n) {
        if (dim != 2 && dim != 3)
            throw std::invalid_argument("grid: dim must be 2 or 3, got " + std::to_string(dim));
        if (n < 8)
            throw std::invalid_argument("grid: n must be >= 8, got " + std::to_string(n));
        TorusGrid g;
        g.dim = dim;
        g.n = n;
        g.h = 1.0 / n;
        return g;
    }

    std::size_t cells() const {
        std::size_t c = static_cast<std::size_t>(n) * n;
        if (dim == 3) c *= n;
        return c;
    }

    int wrap(int i) const {
        i %= n;
        return i < 0 ? i + n : i;
    }

    std::size_t index(const std::array<int, 3>& k) const {
        std::size_t idx = static_cast<std::size_t>(wrap(k[0])) * n + wrap(k[1]);
        if (dim == 3) idx = idx * n + wrap(k[2]);
        return idx;
    }

    std::array<int, 3> coords(std::size_t idx) const {
        std::array<int, 3> k{0, 0, 0};
        if (dim == 3) {
            k[2] = static_cast<int>(idx % n);
            idx /= n;
        }
        k[1] = static_cast<int>(idx % n);
        k[0] = static_cast<int>(idx / n);
        return k;
    }

    std::array<double, 3> center(const std::array<int, 3>& k) const {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a) x[a] = (k[a] + 0.5) * h;
        return x;
    }

    bool operator==(const TorusGrid& o) const { return dim == o.dim && n == o.n; }
};

struct ScalarField {
    TorusGrid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const TorusGrid& g, double fill = 0.0) : grid(g), v(g.cells(), fill) {}

    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
    std::size_t size() const { return v.size(); }
};

struct VectorField {
    TorusGrid grid;
    std::array<std::vector<double>, 3> comp;  // comp[a] used for a < grid.dim

    VectorField() = default;
    explicit VectorField(const TorusGrid& g) : grid(g) {
        for (int a = 0; a < g.dim; ++a) comp[a].assign(g.cells(), 0.0);
    }
};

// Samples f at every cell center.
ScalarField sample(const TorusGrid& g, const std::function<double(const std::array<double, 3>&)>& f);

// Signed distance on one periodic axis, wrapped into [-1/2, 1/2).
inline double wrap_delta(double d) {
    d -= std::int64_t(d);  // |d| expected O(1); cheap first reduction
    if (d >= 0.5) d -= 1.0;
    if (d < -0.5) d += 1.0;
    return d;
}

// Min-image Euclidean distance between torus points.
double torus_distance(const std::array<double, 3>& a, const std::array<double, 3>& b, int dim);

// True when every entry is finite.
bool all_finite(const ScalarField& f);

// Kernel parallelism: contiguous range split across worker threads.
// Thread count is hardware concurrency capped by the VPMF_THREADS environment
// variable; ranges below a fixed grain run inline. Results never depend on the
// thread count (disjoint writes only; reductions elsewhere stay serial).
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace vpmf
