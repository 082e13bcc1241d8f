#include "vpmf/calculus.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace vpmf {

double integrate(const ScalarField& f) {
    // Serial, ascending flat index: bit-reproducible across runs and thread counts.
    double s = 0.0;
    for (double x : f.v) s += x;
    double hd = f.grid.h * f.grid.h;
    if (f.grid.dim == 3) hd *= f.grid.h;
    return hd * s;
}

ScalarField laplacian(const ScalarField& f) {
    const TorusGrid& g = f.grid;
    const int n = g.n;
    const double ih2 = 1.0 / (g.h * g.h);
    ScalarField out(g);
    const double* p = f.v.data();
    double* q = out.v.data();
    if (g.dim == 2) {
        parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const std::size_t up = (i + 1 == static_cast<std::size_t>(n) ? 0 : i + 1) * n;
                const std::size_t dn = (i == 0 ? n - 1 : i - 1) * static_cast<std::size_t>(n);
                const std::size_t row = i * n;
                for (int j = 0; j < n; ++j) {
                    const int jr = j + 1 == n ? 0 : j + 1;
                    const int jl = j == 0 ? n - 1 : j - 1;
                    q[row + j] = ih2 * (p[up + j] + p[dn + j] + p[row + jr] + p[row + jl] - 4.0 * p[row + j]);
                }
            }
        });
    } else {
        const std::size_t nn = static_cast<std::size_t>(n) * n;
        parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const std::size_t ip = (i + 1 == static_cast<std::size_t>(n) ? 0 : i + 1) * nn;
                const std::size_t im = (i == 0 ? n - 1 : i - 1) * nn;
                const std::size_t base_i = i * nn;
                for (int j = 0; j < n; ++j) {
                    const std::size_t jp = static_cast<std::size_t>(j + 1 == n ? 0 : j + 1) * n;
                    const std::size_t jm = static_cast<std::size_t>(j == 0 ? n - 1 : j - 1) * n;
                    const std::size_t base = base_i + static_cast<std::size_t>(j) * n;
                    for (int k = 0; k < n; ++k) {
                        const int kp = k + 1 == n ? 0 : k + 1;
                        const int km = k == 0 ? n - 1 : k - 1;
                        q[base + k] = ih2 * (p[ip + static_cast<std::size_t>(j) * n + k] +
                                             p[im + static_cast<std::size_t>(j) * n + k] +
                                             p[base_i + jp + k] + p[base_i + jm + k] +
                                             p[base + kp] + p[base + km] - 6.0 * p[base + k]);
                    }
                }
            }
        });
    }
    return out;
}

VectorField gradient(const ScalarField& f) {
    const TorusGrid& g = f.grid;
    const int n = g.n;
    const double i2h = 1.0 / (2.0 * g.h);
    VectorField out(g);
    const double* p = f.v.data();
    if (g.dim == 2) {
        double* g0 = out.comp[0].data();
        double* g1 = out.comp[1].data();
        parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const std::size_t up = (i + 1 == static_cast<std::size_t>(n) ? 0 : i + 1) * n;
                const std::size_t dn = (i == 0 ? n - 1 : i - 1) * static_cast<std::size_t>(n);
                const std::size_t row = i * n;
                for (int j = 0; j < n; ++j) {
                    const int jr = j + 1 == n ? 0 : j + 1;
                    const int jl = j == 0 ? n - 1 : j - 1;
                    g0[row + j] = i2h * (p[up + j] - p[dn + j]);
                    g1[row + j] = i2h * (p[row + jr] - p[row + jl]);
                }
            }
        });
    } else {
        const std::size_t nn = static_cast<std::size_t>(n) * n;
        double* g0 = out.comp[0].data();
        double* g1 = out.comp[1].data();
        double* g2 = out.comp[2].data();
        parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const std::size_t ip = (i + 1 == static_cast<std::size_t>(n) ? 0 : i + 1) * nn;
                const std::size_t im = (i == 0 ? n - 1 : i - 1) * nn;
                const std::size_t base_i = i * nn;
                for (int j = 0; j < n; ++j) {
                    const std::size_t jp = static_cast<std::size_t>(j + 1 == n ? 0 : j + 1) * n;
                    const std::size_t jm = static_cast<std::size_t>(j == 0 ? n - 1 : j - 1) * n;
                    const std::size_t base = base_i + static_cast<std::size_t>(j) * n;
                    for (int k = 0; k < n; ++k) {
                        const int kp = k + 1 == n ? 0 : k + 1;
                        const int km = k == 0 ? n - 1 : k - 1;
                        g0[base + k] = i2h * (p[ip + static_cast<std::size_t>(j) * n + k] -
                                              p[im + static_cast<std::size_t>(j) * n + k]);
                        g1[base + k] = i2h * (p[base_i + jp + k] - p[base_i + jm + k]);
                        g2[base + k] = i2h * (p[base + kp] - p[base + km]);
                    }
                }
            }
        });
    }
    return out;
}

ScalarField forward_diff(const ScalarField& f, int axis) {
    const TorusGrid& g = f.grid;
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("forward_diff: axis out of range");
    const double ih = 1.0 / g.h;
    ScalarField out(g);
    const std::size_t nc = g.cells();
    for (std::size_t idx = 0; idx < nc; ++idx) {
        auto k = g.coords(idx);
        auto kp = k;
        kp[axis] += 1;
        out[idx] = ih * (f[g.index(kp)] - f[idx]);
    }
    return out;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("dot: grid mismatch");
    ScalarField out(a.grid);
    const std::size_t nc = out.size();
    for (int ax = 0; ax < a.grid.dim; ++ax)
        for (std::size_t i = 0; i < nc; ++i) out[i] += a.comp[ax][i] * b.comp[ax][i];
    return out;
}

ScalarField norm_sq(const VectorField& g) { return dot(g, g); }

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::fabs(x));
    return m;
}

namespace {

// FFTW plans for one (dim, n). Plan creation is not thread-safe, execution via
// the new-array interface is; the dummy buffers fix the alignment the plans
// were measured with, so call buffers come from fftw_malloc too.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
};

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

PlanPair& plans_for(const TorusGrid& g) {
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto key = std::make_pair(g.dim, g.n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    PlanPair p;
    const int n = g.n;
    const std::size_t real_count = g.cells();
    const std::size_t cplx_count = (g.dim == 2)
                                       ? static_cast<std::size_t>(n) * (n / 2 + 1)
                                       : static_cast<std::size_t>(n) * n * (n / 2 + 1);
    p.rbuf = static_cast<double*>(fftw_malloc(sizeof(double) * real_count));
    p.cbuf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * cplx_count));
    if (g.dim == 2) {
        p.fwd = fftw_plan_dft_r2c_2d(n, n, p.rbuf, p.cbuf, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_c2r_2d(n, n, p.cbuf, p.rbuf, FFTW_ESTIMATE);
    } else {
        p.fwd = fftw_plan_dft_r2c_3d(n, n, n, p.rbuf, p.cbuf, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_c2r_3d(n, n, n, p.cbuf, p.rbuf, FFTW_ESTIMATE);
    }
    if (!p.fwd || !p.bwd) throw std::runtime_error("helmholtz_solve: fftw plan creation failed");
    return cache.emplace(key, p).first->second;
}

// Symbol of the compact stencil on mode k, per axis: (2 - 2 cos(2 pi k / n)) / h^2.
double stencil_eig_1d(int k, int n, double h) {
    return (2.0 - 2.0 * std::cos(2.0 * M_PI * k / n)) / (h * h);
}

}  // namespace

ScalarField helmholtz_solve(const ScalarField& f, double a, double b) {
    if (!(a > 0.0)) throw std::invalid_argument("helmholtz_solve: a must be positive");
    if (b < 0.0) throw std::invalid_argument("helmholtz_solve: b must be nonnegative");
    const TorusGrid& g = f.grid;
    const int n = g.n;
    PlanPair& pp = plans_for(g);

    const std::size_t real_count = g.cells();
    const std::size_t cplx_count = (g.dim == 2)
                                       ? static_cast<std::size_t>(n) * (n / 2 + 1)
                                       : static_cast<std::size_t>(n) * n * (n / 2 + 1);
    double* rbuf = static_cast<double*>(fftw_malloc(sizeof(double) * real_count));
    fftw_complex* cbuf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * cplx_count));
    for (std::size_t i = 0; i < real_count; ++i) rbuf[i] = f[i];

    fftw_execute_dft_r2c(pp.fwd, rbuf, cbuf);

    std::vector<double> eig(n);
    for (int k = 0; k < n; ++k) eig[k] = stencil_eig_1d(k, n, g.h);
    const double inv_total = 1.0 / static_cast<double>(real_count);
    const int nh = n / 2 + 1;
    if (g.dim == 2) {
        for (int k0 = 0; k0 < n; ++k0)
            for (int k1 = 0; k1 < nh; ++k1) {
                const double denom = a + b * (eig[k0] + eig[k1]);
                const double scale = inv_total / denom;
                const std::size_t idx = static_cast<std::size_t>(k0) * nh + k1;
                cbuf[idx][0] *= scale;
                cbuf[idx][1] *= scale;
            }
    } else {
        for (int k0 = 0; k0 < n; ++k0)
            for (int k1 = 0; k1 < n; ++k1)
                for (int k2 = 0; k2 < nh; ++k2) {
                    const double denom = a + b * (eig[k0] + eig[k1] + eig[k2]);
                    const double scale = inv_total / denom;
                    const std::size_t idx = (static_cast<std::size_t>(k0) * n + k1) * nh + k2;
                    cbuf[idx][0] *= scale;
                    cbuf[idx][1] *= scale;
                }
    }

    fftw_execute_dft_c2r(pp.bwd, cbuf, rbuf);

    ScalarField out(g);
    for (std::size_t i = 0; i < real_count; ++i) out[i] = rbuf[i];
    fftw_free(rbuf);
    fftw_free(cbuf);
    return out;
}

double ball_integral(const ScalarField& f, const std::array<double, 3>& x0, double r) {
    const TorusGrid& g = f.grid;
    if (!(r > 0.0) || r >= 0.5)
        throw std::invalid_argument("ball_integral: radius must lie in (0, 1/2)");
    const int n = g.n;
    const double h = g.h;
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) {
        lo[a] = static_cast<int>(std::floor((x0[a] - r) / h - 0.5));
        hi[a] = static_cast<int>(std::ceil((x0[a] + r) / h - 0.5));
        if (hi[a] - lo[a] + 1 > n) hi[a] = lo[a] + n - 1;
    }
    const double r2 = r * r;
    double s = 0.0;
    std::array<int, 3> k{0, 0, 0};
    for (int i = lo[0]; i <= hi[0]; ++i) {
        k[0] = i;
        for (int j = lo[1]; j <= hi[1]; ++j) {
            k[1] = j;
            if (g.dim == 2) {
                const auto c = g.center({i, j, 0});
                double d0 = wrap_delta(c[0] - x0[0]);
                double d1 = wrap_delta(c[1] - x0[1]);
                if (d0 * d0 + d1 * d1 <= r2) s += f[g.index(k)];
            } else {
                for (int m = lo[2]; m <= hi[2]; ++m) {
                    k[2] = m;
                    const auto c = g.center({i, j, m});
                    double d0 = wrap_delta(c[0] - x0[0]);
                    double d1 = wrap_delta(c[1] - x0[1]);
                    double d2 = wrap_delta(c[2] - x0[2]);
                    if (d0 * d0 + d1 * d1 + d2 * d2 <= r2) s += f[g.index(k)];
                }
            }
        }
    }
    double hd = h * h;
    if (g.dim == 3) hd *= h;
    return hd * s;
}

}  // namespace vpmf
