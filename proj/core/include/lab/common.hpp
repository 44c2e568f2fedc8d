#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// FT convention used everywhere in this project: mu_hat(xi) = sum_j w_j exp(-2*pi*i xi.x_j).
using Complex = std::complex<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    Vec2 normalized() const {
        double n = norm();
        return {x / n, y / n};
    }
    // 90-degree counterclockwise rotation.
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Bad arguments / violated operation preconditions.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Atom budget or panel budget exhausted; not a math error.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested tolerance not reached within the iteration budget.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed experiment configuration or input file.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class KahanSum {
  public:
    void add(double v) {
        double y = v - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Thread cap from LAB_THREADS (default: hardware concurrency). Always >= 1.
std::size_t thread_count();

// Runs body(begin, end) over a fixed partition of [0, n). The partition depends
// only on n and the thread cap, never on scheduling, so any order-insensitive
// use is reproducible and order-sensitive callers can combine per-range results
// by range index.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

// SplitMix64 step; used to derive per-chunk RNG seeds from a master seed.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace lab
