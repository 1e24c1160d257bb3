#pragma once

#include <cmath>
#include <limits>

#include "ctetris/field.hpp"

namespace ctetris {

// Guards for the KL proximal operator and its Lambert W evaluation.
struct ProxConfig {
    double eps_kl = 1e-6;        // floor applied to vbar entries
    double lambert_tol = 1e-12;  // residual tolerance |W e^W - y| <= tol*max(1,|y|)
    int lambert_max_iter = 50;
};

inline double soft_threshold(double x, double gamma) {
    double m = std::fabs(x) - gamma;
    if (m <= 0.0) return 0.0;
    return x < 0.0 ? -m : m;
}

inline Field soft_threshold(const Field& x, double gamma) {
    Field out(x.width, x.height);
    for (size_t k = 0; k < x.size(); ++k)
        out.data[k] = soft_threshold(x.data[k], gamma);
    return out;
}

// Principal branch W0 of the Lambert W function, W(y) e^{W(y)} = y, for
// y >= -1/e. Branch-point series starts the iterate near -1/e, log(1+y)
// elsewhere; Halley steps refine until the residual bound holds.
inline double lambert_w0(double y, double tol = 1e-12, int max_iter = 50) {
    constexpr double inv_e = 0.3678794411714423216;
    if (y < -inv_e) {
        if (y < -inv_e - 1e-12)
            throw std::domain_error("lambert_w0: argument below -1/e");
        return -1.0;
    }
    if (y == 0.0) return 0.0;

    double w;
    if (y < -0.3) {
        double p = std::sqrt(std::max(0.0, 2.0 * (1.0 + std::exp(1.0) * y)));
        w = -1.0 + p - p * p / 3.0 + (11.0 / 72.0) * p * p * p;
    } else if (y < 3.0) {
        w = std::log1p(y);
    } else {
        w = std::log(y) - std::log(std::log(y));
    }

    const double bound = tol * std::max(1.0, std::fabs(y));
    for (int it = 0; it < max_iter; ++it) {
        double ew = std::exp(w);
        double f = w * ew - y;
        if (std::fabs(f) <= bound) break;
        double wp1 = w + 1.0;
        double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (w < -1.0) w = std::nextafter(-1.0, 0.0);
        if (std::fabs(step) <= std::numeric_limits<double>::epsilon() * std::fabs(w)) break;
    }
    return w;
}

namespace detail {

// Solves w + log(w) = s for w > 0 (i.e. W(e^s) when e^s would overflow).
inline double lambert_w0_of_exp(double s) {
    double w = s > 1.0 ? s - std::log(s) : 1.0;
    for (int it = 0; it < 50; ++it) {
        double g = w + std::log(w) - s;
        double step = g / (1.0 + 1.0 / w);
        w -= step;
        if (w <= 0.0) w = std::numeric_limits<double>::min();
        if (std::fabs(step) <= 1e-15 * std::fabs(w)) break;
    }
    return w;
}

// Scalar KL prox: argmin over v > 0 of gamma*v*log(v/vbar) + (v-x)^2/2.
// First-order optimality gives v = gamma * W((vbar/gamma) e^{x/gamma - 1});
// the evaluation switches to log form when the exponent would overflow.
inline double kl_prox_scalar(double x, double vbar, double gamma, const ProxConfig& cfg) {
    double s = x / gamma - 1.0 + std::log(vbar / gamma);
    double v;
    if (s > 690.0) {
        v = gamma * lambert_w0_of_exp(s);
    } else {
        v = gamma * lambert_w0(std::exp(s), cfg.lambert_tol, cfg.lambert_max_iter);
    }
    // keep strictly positive under extreme underflow
    return std::max(v, std::numeric_limits<double>::min());
}

}  // namespace detail

// Pixelwise KL proximal operator. vbar entries are floored at cfg.eps_kl so
// the divergence stays finite; the output is strictly positive.
inline Field kl_prox(const Field& x, const Field& vbar, double gamma, const ProxConfig& cfg) {
    if (!(gamma > 0.0)) throw std::invalid_argument("kl_prox: gamma must be > 0");
    require_same_shape(x, vbar, "kl_prox");
    Field out(x.width, x.height);
    for (size_t k = 0; k < x.size(); ++k) {
        double vb = std::max(vbar.data[k], cfg.eps_kl);
        out.data[k] = detail::kl_prox_scalar(x.data[k], vb, gamma, cfg);
    }
    return out;
}

inline double project_box(double x) { return std::clamp(x, 0.0, 1.0); }

inline Field project_box(const Field& x) {
    Field out(x.width, x.height);
    for (size_t k = 0; k < x.size(); ++k)
        out.data[k] = std::clamp(x.data[k], 0.0, 1.0);
    return out;
}

// Lexicographic Gauss-Seidel sweeps for (-Laplacian + shift*I) u = rhs with
// the replicate-boundary 5-point stencil. The diagonal at each pixel is the
// number of in-grid 4-neighbors plus shift, matching gradT*grad exactly.
// shift = 1 for the texture-evolution u-subproblem, 0 for the plain model.
inline void gauss_seidel_sweep(Field& u, const Field& rhs, int sweeps, double diag_shift = 1.0) {
    require_same_shape(u, rhs, "gauss_seidel_sweep");
    if (sweeps < 1) throw std::invalid_argument("gauss_seidel_sweep: sweeps must be >= 1");
    const int w = u.width, h = u.height;
    for (int s = 0; s < sweeps; ++s) {
        for (int i = 0; i < h; ++i) {
            for (int j = 0; j < w; ++j) {
                double acc = rhs.at(i, j);
                int deg = 0;
                if (i > 0) { acc += u.at(i - 1, j); ++deg; }
                if (i < h - 1) { acc += u.at(i + 1, j); ++deg; }
                if (j > 0) { acc += u.at(i, j - 1); ++deg; }
                if (j < w - 1) { acc += u.at(i, j + 1); ++deg; }
                double denom = deg + diag_shift;
                if (denom > 0.0) u.at(i, j) = acc / denom;
            }
        }
    }
}

}  // namespace ctetris
