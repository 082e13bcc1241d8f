#include "vpmf/grid.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace vpmf {

ScalarField sample(const TorusGrid& g, const std::function<double(const std::array<double, 3>&)>& f) {
    ScalarField out(g);
    const std::size_t nc = g.cells();
    for (std::size_t i = 0; i < nc; ++i) out[i] = f(g.center(g.coords(i)));
    return out;
}

double torus_distance(const std::array<double, 3>& a, const std::array<double, 3>& b, int dim) {
    double s = 0.0;
    for (int ax = 0; ax < dim; ++ax) {
        double d = wrap_delta(a[ax] - b[ax]);
        s += d * d;
    }
    return std::sqrt(s);
}

bool all_finite(const ScalarField& f) {
    for (double x : f.v)
        if (!std::isfinite(x)) return false;
    return true;
}

namespace {

int worker_count() {
    static const int count = [] {
        unsigned hw = std::thread::hardware_concurrency();
        int c = hw == 0 ? 1 : static_cast<int>(hw);
        if (const char* env = std::getenv("VPMF_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1 && v < 1024) c = static_cast<int>(v);
        }
        return c;
    }();
    return count;
}

constexpr std::size_t kGrain = 1u << 15;  // below this, threading overhead dominates

}  // namespace

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t total = end > begin ? end - begin : 0;
    const int nw = worker_count();
    if (total == 0) return;
    if (nw <= 1 || total < 2 * kGrain) {
        body(begin, end);
        return;
    }
    const std::size_t chunks = std::min<std::size_t>(nw, (total + kGrain - 1) / kGrain);
    const std::size_t per = (total + chunks - 1) / chunks;
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t lo = begin + c * per;
        std::size_t hi = std::min(end, lo + per);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace vpmf
