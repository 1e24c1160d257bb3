#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ctetris/field.hpp"
#include "ctetris/metrics.hpp"

namespace ctetris {

struct NoiseSpec {
    enum class Kind { gaussian, poisson, salt_pepper };
    Kind kind = Kind::gaussian;
    double target_snr_db = 20.0;  // gaussian / poisson
    double fraction = 0.05;       // salt & pepper
    uint64_t seed = 0;
};

namespace rng {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so outputs never depend on platform, call
// interleaving, or thread count.
inline uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline uint64_t at(uint64_t seed, uint64_t stream, uint64_t ctr) {
    uint64_t z = mix(seed + 0x9E3779B97F4A7C15ull * (stream + 1));
    return mix(z + 0x9E3779B97F4A7C15ull * (ctr + 1));
}

struct Stream {
    uint64_t seed = 0;
    uint64_t id = 0;
    uint64_t ctr = 0;

    uint64_t next_u64() { return at(seed, id, ctr++); }
    // [0,1)
    double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    // (0,1]
    double next_u01_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }
};

inline double next_normal(Stream& s) {
    double u1 = s.next_u01_pos();
    double u2 = s.next_u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Poisson variate with mean lam. Sequential inversion for small means,
// transformed rejection (PTRS) for large ones; either way the result is a
// deterministic function of the stream.
inline long next_poisson(Stream& s, double lam) {
    if (lam <= 0.0) return 0;
    if (lam < 10.0) {
        double limit = std::exp(-lam);
        double prod = 1.0;
        long k = -1;
        do {
            prod *= s.next_u01_pos();
            ++k;
        } while (prod > limit);
        return k;
    }
    const double b = 0.931 + 2.53 * std::sqrt(lam);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    const double log_lam = std::log(lam);
    while (true) {
        double u = s.next_u01() - 0.5;
        double v = s.next_u01_pos();
        double us = 0.5 - std::fabs(u);
        long k = static_cast<long>(std::floor((2.0 * a / us + b) * u + lam + 0.43));
        if (us >= 0.07 && v <= vr) return k;
        if (k < 0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_lam - lam - std::lgamma(k + 1.0))
            return k;
    }
}

}  // namespace rng

// Standard-normal field with one stream per pixel.
inline Field gaussian_field(int width, int height, uint64_t seed) {
    Field g(width, height);
    for (size_t k = 0; k < g.size(); ++k) {
        rng::Stream s{seed, k, 0};
        g.data[k] = rng::next_normal(s);
    }
    return g;
}

// Noise std that hits the target power-ratio SNR in expectation.
inline double gaussian_sigma_for(const Image& f, double target_snr_db) {
    double p = 0.0;
    for (double v : f.data) p += v * v;
    p /= static_cast<double>(f.size());
    return std::sqrt(p / std::pow(10.0, target_snr_db / 10.0));
}

// Adds zero-mean i.i.d. Gaussian noise calibrated to the target SNR, then
// clamps to [0,1]. An infinite target is the identity.
inline Image add_gaussian(const Image& f, double target_snr_db, uint64_t seed) {
    if (std::isinf(target_snr_db)) return f;
    double sigma = gaussian_sigma_for(f, target_snr_db);
    Field g = gaussian_field(f.width, f.height, seed);
    Image out = f;
    for (size_t k = 0; k < out.size(); ++k)
        out.data[k] = std::clamp(f.data[k] + sigma * g.data[k], 0.0, 1.0);
    return out;
}

// Peak value such that Poisson(P*f)/P has the target SNR in expectation:
// expected noise power is sum(f)/P, so SNR(P) = 10 log10(P sum(f^2)/sum(f)),
// bisected over [1, 1e7].
inline double poisson_peak_for(const Image& f, double target_snr_db) {
    double sum_f = 0.0, sum_f2 = 0.0;
    for (double v : f.data) {
        sum_f += v;
        sum_f2 += v * v;
    }
    if (sum_f <= 0.0)
        throw std::invalid_argument("add_poisson: image must not be identically zero");
    auto snr_of = [&](double peak) { return 10.0 * std::log10(peak * sum_f2 / sum_f); };
    double lo = 1.0, hi = 1e7;
    if (target_snr_db < snr_of(lo) || target_snr_db > snr_of(hi))
        throw std::domain_error("add_poisson: target SNR unreachable within peak bounds");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (snr_of(mid) < target_snr_db) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline Image add_poisson(const Image& f, double target_snr_db, uint64_t seed) {
    double peak = poisson_peak_for(f, target_snr_db);
    Image out = f;
    for (size_t k = 0; k < out.size(); ++k) {
        rng::Stream s{seed, k, 0};
        long c = rng::next_poisson(s, peak * f.data[k]);
        out.data[k] = std::clamp(static_cast<double>(c) / peak, 0.0, 1.0);
    }
    return out;
}

// Sets round(fraction*N) distinct uniformly-chosen pixels to 0 or 1 with
// equal probability; everything else is left bit-identical.
inline Image add_salt_pepper(const Image& f, double fraction, uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("add_salt_pepper: fraction must be in (0,1)");
    const size_t n = f.size();
    const size_t count = static_cast<size_t>(std::llround(fraction * static_cast<double>(n)));
    Image out = f;
    if (count == 0) return out;

    std::vector<size_t> idx(n);
    for (size_t k = 0; k < n; ++k) idx[k] = k;
    rng::Stream s{seed, 0, 0};
    for (size_t k = 0; k < count; ++k) {
        size_t r = k + static_cast<size_t>(s.next_u64() % (n - k));
        std::swap(idx[k], idx[r]);
        out.data[idx[k]] = (s.next_u64() & 1) ? 1.0 : 0.0;
    }
    return out;
}

inline Image apply_noise(const Image& f, const NoiseSpec& spec) {
    switch (spec.kind) {
        case NoiseSpec::Kind::gaussian: return add_gaussian(f, spec.target_snr_db, spec.seed);
        case NoiseSpec::Kind::poisson: return add_poisson(f, spec.target_snr_db, spec.seed);
        case NoiseSpec::Kind::salt_pepper: return add_salt_pepper(f, spec.fraction, spec.seed);
    }
    throw std::logic_error("apply_noise: unknown kind");
}

}  // namespace ctetris
