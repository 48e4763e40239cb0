#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace testing {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Small deterministic generator for property tests (splitmix64).
class Gen {
public:
    explicit Gen(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform(double a, double b) { return a + (b - a) * double(next() >> 11) * 0x1.0p-53; }
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

private:
    std::uint64_t s_;
};

// Richardson-extrapolated central difference of order k (1 or 2).
inline double derivative(const std::function<double(double)>& f, double x, double h, int order = 1) {
    auto d = [&](double hh) {
        if (order == 1) return (f(x + hh) - f(x - hh)) / (2 * hh);
        return (f(x + hh) - 2 * f(x) + f(x - hh)) / (hh * hh);
    };
    double d1 = d(h), d2 = d(h / 2);
    return (4 * d2 - d1) / 3;
}

}  // namespace testing
