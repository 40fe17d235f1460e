#include "isofield/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace isofield {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate) {
    std::uint64_t s = master ^ (0xA0761D6478BD642FULL * (replicate + 1));
    std::uint64_t h = splitmix64(s);
    h ^= splitmix64(s);
    return h;
}

double Rng::uniform() {
    // 53 random bits -> [0,1)
    return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
}

double Rng::uniform_symmetric() { return 2.0 * uniform() - 1.0; }

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

double pairwise_sum(const double* xs, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += xs[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs, half) + pairwise_sum(xs + half, n - half);
}

double pairwise_sum(const std::vector<double>& xs) { return pairwise_sum(xs.data(), xs.size()); }

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty sample");
    return pairwise_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_variance: need n >= 2");
    const double m = mean(xs);
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m) * (xs[i] - m);
    return pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
}

double standard_error(const std::vector<double>& xs) {
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

ZCheck mean_against(const std::string& name, const std::vector<double>& xs, double target,
                    double z_threshold) {
    ZCheck c;
    c.name = name;
    c.statistic = mean(xs);
    c.se = standard_error(xs);
    const double diff = c.statistic - target;
    if (c.se == 0.0) {
        c.z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        c.z = diff / c.se;
    }
    c.pass = std::fabs(c.z) < z_threshold;
    return c;
}

ZCheck paired_zero(const std::string& name, const std::vector<double>& xs,
                   const std::vector<double>& ys, double z_threshold) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("paired_zero: size mismatch");
    std::vector<double> d(xs.size());
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d[i] = xs[i] - ys[i];
        scale = std::max({scale, std::fabs(xs[i]), std::fabs(ys[i])});
        worst = std::max(worst, std::fabs(d[i]));
    }
    // Pairs that agree to double precision are equal; a z-score of their
    // rounding residue would be meaningless.
    if (worst <= 1e-12 * scale) {
        ZCheck c;
        c.name = name;
        c.statistic = mean(d);
        c.se = xs.size() >= 2 ? standard_error(d) : 0.0;
        c.z = 0.0;
        c.pass = true;
        return c;
    }
    return mean_against(name, d, 0.0, z_threshold);
}

void run_replicates(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers < 1) throw std::invalid_argument("run_replicates: workers >= 1 required");
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t w = std::min<std::size_t>(workers, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(w);
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < n; i += w) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace isofield
