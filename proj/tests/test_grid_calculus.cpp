#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "vpmf/calculus.hpp"
#include "vpmf/grid.hpp"
#include "vpmf/snapshot.hpp"

using namespace vpmf;

namespace {

// Independent index arithmetic for the dense oracle; deliberately avoids
// TorusGrid::index / wrap.
int imod(int i, int n) {
    int r = i % n;
    return r < 0 ? r + n : r;
}

std::size_t flat2(int i, int j, int n) {
    return static_cast<std::size_t>(imod(i, n)) * n + imod(j, n);
}

std::size_t flat3(int i, int j, int k, int n) {
    return (static_cast<std::size_t>(imod(i, n)) * n + imod(j, n)) * n + imod(k, n);
}

// Dense matrix of the compact Laplacian, built row by row.
std::vector<std::vector<double>> dense_laplacian(const TorusGrid& g) {
    const int n = g.n;
    const double ih2 = 1.0 / (g.h * g.h);
    const std::size_t nc = g.cells();
    std::vector<std::vector<double>> A(nc, std::vector<double>(nc, 0.0));
    if (g.dim == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::size_t r = flat2(i, j, n);
                A[r][flat2(i + 1, j, n)] += ih2;
                A[r][flat2(i - 1, j, n)] += ih2;
                A[r][flat2(i, j + 1, n)] += ih2;
                A[r][flat2(i, j - 1, n)] += ih2;
                A[r][flat2(i, j, n)] += -4.0 * ih2;
            }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    std::size_t r = flat3(i, j, k, n);
                    A[r][flat3(i + 1, j, k, n)] += ih2;
                    A[r][flat3(i - 1, j, k, n)] += ih2;
                    A[r][flat3(i, j + 1, k, n)] += ih2;
                    A[r][flat3(i, j - 1, k, n)] += ih2;
                    A[r][flat3(i, j, k + 1, n)] += ih2;
                    A[r][flat3(i, j, k - 1, n)] += ih2;
                    A[r][flat3(i, j, k, n)] += -6.0 * ih2;
                }
    }
    return A;
}

std::vector<double> matvec(const std::vector<std::vector<double>>& A, const std::vector<double>& x) {
    std::vector<double> y(A.size(), 0.0);
    for (std::size_t r = 0; r < A.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) y[r] += A[r][c] * x[c];
    return y;
}

double stencil_mu(const std::array<int, 3>& k, const TorusGrid& g) {
    double mu = 0.0;
    for (int a = 0; a < g.dim; ++a)
        mu += (2.0 - 2.0 * std::cos(2.0 * M_PI * k[a] / g.n)) / (g.h * g.h);
    return mu;
}

}  // namespace

TEST_CASE("grid construction and indexing") {
    CHECK_THROWS_AS(TorusGrid::make(1, 16), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid::make(4, 16), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid::make(2, 7), std::invalid_argument);

    auto g = TorusGrid::make(2, 16);
    CHECK(g.h == 1.0 / 16);
    CHECK(g.cells() == 256);
    // roundtrip
    for (std::size_t idx : {std::size_t(0), std::size_t(17), std::size_t(255)}) {
        CHECK(g.index(g.coords(idx)) == idx);
    }
    // wrap handles negatives
    CHECK(g.index({-1, -1, 0}) == g.index({15, 15, 0}));
    CHECK(g.index({16, 3, 0}) == g.index({0, 3, 0}));

    auto g3 = TorusGrid::make(3, 8);
    CHECK(g3.cells() == 512);
    CHECK(g3.index(g3.coords(511)) == 511);

    // cell centers offset by h/2
    auto c = g.center({0, 3, 0});
    CHECK(c[0] == doctest::Approx(0.5 / 16).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx(3.5 / 16).epsilon(1e-15));
}

TEST_CASE("wrap_delta and torus_distance use the minimum image") {
    CHECK(wrap_delta(0.3) == doctest::Approx(0.3));
    CHECK(wrap_delta(0.7) == doctest::Approx(-0.3));
    CHECK(wrap_delta(-0.6) == doctest::Approx(0.4));
    CHECK(wrap_delta(1.25) == doctest::Approx(0.25));
    CHECK(wrap_delta(-2.9) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(torus_distance({0.05, 0.5, 0.0}, {0.95, 0.5, 0.0}, 2) == doctest::Approx(0.1));
    CHECK(torus_distance({0.1, 0.1, 0.0}, {0.2, 0.9, 0.0}, 2) ==
          doctest::Approx(std::sqrt(0.01 + 0.04)));
}

TEST_CASE("laplacian matches an independently built dense stencil matrix") {
    for (int dim : {2, 3}) {
        auto g = TorusGrid::make(dim, 8);
        auto A = dense_laplacian(g);
        for (unsigned seed : {11u, 12u, 13u}) {
            auto f = testutil::random_smooth_field(g, seed, 3, 5);
            auto lap = laplacian(f);
            auto ref = matvec(A, f.v);
            double scale = 0.0;
            for (double x : ref) scale = std::max(scale, std::fabs(x));
            for (std::size_t i = 0; i < ref.size(); ++i)
                CHECK(std::fabs(lap[i] - ref[i]) <= 1e-10 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("plane waves are laplacian eigenfunctions with the stencil symbol") {
    auto g = TorusGrid::make(2, 16);
    std::array<int, 3> k{2, 3, 0};
    auto f = sample(g, [&](const std::array<double, 3>& x) {
        return std::cos(2.0 * M_PI * (k[0] * x[0] + k[1] * x[1]) + 0.37);
    });
    double mu = stencil_mu(k, g);
    auto lap = laplacian(f);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::fabs(lap[i] - (-mu * f[i])) <= 1e-11 * mu);
}

TEST_CASE("summation by parts holds to roundoff on random fields") {
    // integrate(f * lap g) == -sum_a h^d sum (D+_a f)(D+_a g)
    for (int dim : {2, 3}) {
        int n = dim == 2 ? 32 : 16;
        auto g = TorusGrid::make(dim, n);
        double hd = std::pow(g.h, dim);
        for (unsigned seed = 0; seed < (dim == 2 ? 10u : 4u); ++seed) {
            auto f = testutil::random_smooth_field(g, 100 + seed);
            auto w = testutil::random_smooth_field(g, 200 + seed);
            auto lw = laplacian(w);
            ScalarField prod(g);
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f[i] * lw[i];
            double lhs = integrate(prod);
            double rhs = 0.0;
            for (int a = 0; a < dim; ++a) {
                auto df = forward_diff(f, a);
                auto dw = forward_diff(w, a);
                double s = 0.0;
                for (std::size_t i = 0; i < df.size(); ++i) s += df[i] * dw[i];
                rhs -= hd * s;
            }
            double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
            CHECK(std::fabs(lhs - rhs) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("laplacian integrates to zero (telescoping)") {
    for (int dim : {2, 3}) {
        auto g = TorusGrid::make(dim, dim == 2 ? 32 : 16);
        auto f = testutil::random_smooth_field(g, 7);
        auto lap = laplacian(f);
        // scale: integral of |lap| would be O(max|lap|); roundoff budget relative to that
        CHECK(std::fabs(integrate(lap)) <= 1e-10 * std::max(1.0, max_abs(lap)));
    }
}

TEST_CASE("shift equivariance is bitwise exact") {
    auto g = TorusGrid::make(2, 32);
    auto f = testutil::random_smooth_field(g, 42);
    const int s0 = 5, s1 = 11;
    ScalarField fs(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto k = g.coords(i);
        fs[g.index({k[0] + s0, k[1] + s1, 0})] = f[i];
    }
    auto lap = laplacian(f);
    auto laps = laplacian(fs);
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto k = g.coords(i);
        CHECK(laps[g.index({k[0] + s0, k[1] + s1, 0})] == lap[i]);
    }
    auto gr = gradient(f);
    auto grs = gradient(fs);
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto k = g.coords(i);
        std::size_t j = g.index({k[0] + s0, k[1] + s1, 0});
        CHECK(grs.comp[0][j] == gr.comp[0][i]);
        CHECK(grs.comp[1][j] == gr.comp[1][i]);
    }
}

TEST_CASE("centered gradient has the discrete symbol sin(2 pi k h)/h") {
    auto g = TorusGrid::make(2, 32);
    const int k0 = 3;
    auto f = sample(g, [&](const std::array<double, 3>& x) {
        return std::cos(2.0 * M_PI * k0 * x[0]);
    });
    auto gr = gradient(f);
    const double sym = std::sin(2.0 * M_PI * k0 * g.h) / g.h;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto x = g.center(g.coords(i));
        double expect = -sym * std::sin(2.0 * M_PI * k0 * x[0]);
        CHECK(std::fabs(gr.comp[0][i] - expect) <= 1e-12 * sym);
        CHECK(std::fabs(gr.comp[1][i]) <= 1e-12 * sym);
    }
}

TEST_CASE("helmholtz_solve inverts the discrete operator") {
    SUBCASE("b = 0 reduces to division by a") {
        auto g = TorusGrid::make(2, 32);
        auto f = testutil::random_smooth_field(g, 3);
        auto u = helmholtz_solve(f, 2.5, 0.0);
        const double scale = std::max(1.0, max_abs(f));
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(std::fabs(u[i] - f[i] / 2.5) <= 1e-13 * scale);
    }
    SUBCASE("plane wave divides by a + b mu_k") {
        auto g = TorusGrid::make(2, 16);
        std::array<int, 3> k{1, 2, 0};
        auto f = sample(g, [&](const std::array<double, 3>& x) {
            return std::sin(2.0 * M_PI * (k[0] * x[0] + k[1] * x[1]));
        });
        double a = 0.8, b = 0.03;
        double denom = a + b * stencil_mu(k, g);
        auto u = helmholtz_solve(f, a, b);
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(std::fabs(u[i] - f[i] / denom) <= 1e-12);
    }
    SUBCASE("apply residual vanishes on random data") {
        for (int dim : {2, 3}) {
            auto g = TorusGrid::make(dim, dim == 2 ? 32 : 8);
            auto f = testutil::random_smooth_field(g, 9);
            double a = 137.0, b = 1.0;  // shapes typical of an implicit step
            auto u = helmholtz_solve(f, a, b);
            auto lu = laplacian(u);
            double scale = std::max(1.0, max_abs(f));
            for (std::size_t i = 0; i < f.size(); ++i)
                CHECK(std::fabs(a * u[i] - b * lu[i] - f[i]) <= 1e-10 * scale);
        }
    }
    SUBCASE("rejects a <= 0 and b < 0") {
        auto g = TorusGrid::make(2, 8);
        ScalarField f(g, 1.0);
        CHECK_THROWS_AS(helmholtz_solve(f, 0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(helmholtz_solve(f, -1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(helmholtz_solve(f, 1.0, -0.5), std::invalid_argument);
    }
}

TEST_CASE("ball_integral matches a brute-force scan and wraps across the seam") {
    auto g = TorusGrid::make(2, 64);
    auto f = testutil::random_smooth_field(g, 21);
    for (auto [cx, cy, r] : {std::array<double, 3>{0.5, 0.5, 0.2},
                             std::array<double, 3>{0.02, 0.97, 0.15},
                             std::array<double, 3>{0.9, 0.1, 0.45}}) {
        double got = ball_integral(f, {cx, cy, 0.0}, r);
        // brute force over every cell with independent wrapping
        double s = 0.0;
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                double dx = std::fabs((i + 0.5) * g.h - cx);
                double dy = std::fabs((j + 0.5) * g.h - cy);
                dx = std::min(dx, 1.0 - dx);
                dy = std::min(dy, 1.0 - dy);
                if (dx * dx + dy * dy <= r * r) s += f.v[flat2(i, j, g.n)];
            }
        CHECK(got == doctest::Approx(s * g.h * g.h).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ball_integral(f, {0.5, 0.5, 0.0}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ball_integral(f, {0.5, 0.5, 0.0}, -0.1), std::invalid_argument);
}

TEST_CASE("integrate uses midpoint quadrature with exact h^d weight") {
    auto g = TorusGrid::make(2, 16);
    ScalarField ones(g, 1.0);
    CHECK(integrate(ones) == doctest::Approx(1.0).epsilon(1e-15));
    // midpoint rule is exact for cos(2 pi x): discrete sum telescopes to 0
    auto c = sample(g, [](const std::array<double, 3>& x) { return std::cos(2.0 * M_PI * x[0]); });
    CHECK(std::fabs(integrate(c)) <= 1e-14);
}

TEST_CASE("snapshot roundtrip is bitwise and rejects damage") {
    auto g = TorusGrid::make(2, 8);
    auto f = testutil::random_smooth_field(g, 5);
    Snapshot s{0.125, f};
    const std::string path = "snap_test.bin";
    write_snapshot(path, s);
    Snapshot r = read_snapshot(path);
    CHECK(r.time == 0.125);
    CHECK(r.field.grid.dim == 2);
    CHECK(r.field.grid.n == 8);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(r.field[i] == f[i]);

    // truncated payload
    {
        std::ifstream in(path, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out("snap_trunc.bin", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 16));
    }
    CHECK_THROWS_AS(read_snapshot("snap_trunc.bin"), std::runtime_error);

    // bad magic
    {
        std::ofstream out("snap_bad.bin", std::ios::binary);
        out.write("XXXX", 4);
        std::string pad(64, '\0');
        out.write(pad.data(), 64);
    }
    CHECK_THROWS_AS(read_snapshot("snap_bad.bin"), std::runtime_error);

    std::remove(path.c_str());
    std::remove("snap_trunc.bin");
    std::remove("snap_bad.bin");
}

TEST_CASE("atomic_write_file leaves no temp file behind") {
    atomic_write_file("aw_test.txt", "hello");
    std::ifstream in("aw_test.txt");
    std::string got((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(got == "hello");
    std::ifstream tmp("aw_test.txt.tmp");
    CHECK_FALSE(tmp.good());
    std::remove("aw_test.txt");
}

TEST_CASE("parallel map kernels agree with a serial reference at large n") {
    // n = 512 crosses the threading grain; per-cell arithmetic is identical, so
    // equality is bitwise.
    auto g = TorusGrid::make(2, 512);
    auto f = testutil::random_smooth_field(g, 31);
    auto lap = laplacian(f);
    const int n = g.n;
    const double ih2 = 1.0 / (g.h * g.h);
    const double* p = f.v.data();
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        const std::size_t up = (i + 1 == static_cast<std::size_t>(n) ? 0 : i + 1) * n;
        const std::size_t dn = (i == 0 ? n - 1 : i - 1) * static_cast<std::size_t>(n);
        const std::size_t row = i * n;
        for (int j = 0; j < n; ++j) {
            const int jr = j + 1 == n ? 0 : j + 1;
            const int jl = j == 0 ? n - 1 : j - 1;
            double ref = ih2 * (p[up + j] + p[dn + j] + p[row + jr] + p[row + jl] - 4.0 * p[row + j]);
            CHECK(lap[row + j] == ref);
        }
    }
}
