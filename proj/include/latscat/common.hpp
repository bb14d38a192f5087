#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

// Shared conventions:
//   lengths     in units of the lattice period d (site i sits at x = i)
//   wavenumbers in rad/d, so the value pi corresponds to the physical pi/d
//   lattice-band energies in recoil units E_R = hbar^2 (pi/d)^2 / (2m)

namespace latscat {

inline constexpr double pi = 3.14159265358979323846;

using cd = std::complex<double>;

/// Common base for library failures.
struct latscat_error : std::runtime_error {
    explicit latscat_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent input (CLI exit code 2).
struct config_error : latscat_error {
    explicit config_error(const std::string& msg) : latscat_error(msg) {}
};

/// A solver or quadrature failed to reach its tolerance (CLI exit code 3).
struct numerical_error : latscat_error {
    explicit numerical_error(const std::string& msg) : latscat_error(msg) {}
};

/// Trapezoid rule on uniformly spaced samples.
inline double trapezoid(const std::vector<double>& f, double dx) {
    if (f.size() < 2) return 0.0;
    double s = 0.0;
    for (double v : f) s += v;
    s -= 0.5 * (f.front() + f.back());
    return s * dx;
}

/// Uniform grid [a, b] with n samples (endpoints included).
inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> x(static_cast<size_t>(n));
    const double h = (n > 1) ? (b - a) / (n - 1) : 0.0;
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = a + h * i;
    return x;
}

/// Cubic (4-point Lagrange) interpolation on a uniform grid. Exact on cubics;
/// the stencil is shifted one-sided at the edges.
inline double cubic_interp(double x0, double dx, const std::vector<double>& f, double x) {
    const int n = static_cast<int>(f.size());
    if (n < 4) throw std::invalid_argument("cubic_interp: need at least 4 samples");
    double t = (x - x0) / dx;
    int i = static_cast<int>(std::floor(t));
    int j0 = i - 1;
    if (j0 < 0) j0 = 0;
    if (j0 > n - 4) j0 = n - 4;
    const double u = t - j0;  // in [~0, 3] relative to the stencil
    double result = 0.0;
    for (int m = 0; m < 4; ++m) {
        double lm = 1.0;
        for (int l = 0; l < 4; ++l) {
            if (l == m) continue;
            lm *= (u - l) / (m - l);
        }
        result += lm * f[static_cast<size_t>(j0 + m)];
    }
    return result;
}

/// Floats in output files carry 12 significant digits ('.' decimal, no locale).
inline std::string format_g12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// FNV-1a, used for config and output-content hashes in run manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

/// Derive a per-task seed from a global seed and a task index.
inline std::uint64_t subseed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace latscat
