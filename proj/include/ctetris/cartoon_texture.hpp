#pragma once

#include <cmath>

#include "ctetris/field.hpp"
#include "ctetris/operators.hpp"

namespace ctetris {

// Cartoon/texture split of an image: cartoon + texture == source pixelwise.
// rho is the per-pixel relative reduction rate of local TV from the first
// pass (near 1 on texture, near 0 on cartoon).
struct Decomposition {
    Image cartoon;
    Field texture;
    double sigma = 0.0;
    Field rho;
};

// Local total variation: Gaussian-smoothed pointwise gradient magnitude.
inline Field local_tv(const Field& f, double sigma) {
    Field mag(f.width, f.height);
    Field gx = grad_x(f);
    Field gy = grad_y(f);
    for (size_t k = 0; k < mag.size(); ++k)
        mag.data[k] = std::sqrt(gx.data[k] * gx.data[k] + gy.data[k] * gy.data[k]);
    return gaussian_convolve(mag, sigma);
}

// Piecewise-linear ramp: 0 below l1, 1 above l2, linear in between.
inline double omega(double x, double l1, double l2) {
    if (!(l1 < l2))
        throw std::invalid_argument("omega: requires l1 < l2");
    if (x <= l1) return 0.0;
    if (x >= l2) return 1.0;
    return (x - l1) / (l2 - l1);
}

inline constexpr double kLtvGuard = 1e-8;

// Relative reduction rate of local TV under Gaussian smoothing. The
// numerator is clamped to [0, LTV(f)] so rho stays in [0,1], and pixels
// with LTV below the guard (flat regions, a 0/0 case) get rho = 0.
inline Field rho_map(const Field& f, double sigma) {
    Field ltv = local_tv(f, sigma);
    Field ltv_blur = local_tv(gaussian_convolve(f, sigma), sigma);
    Field rho(f.width, f.height);
    for (size_t k = 0; k < rho.size(); ++k) {
        double denom = ltv.data[k];
        if (denom < kLtvGuard) {
            rho.data[k] = 0.0;
        } else {
            double num = denom - ltv_blur.data[k];
            num = std::clamp(num, 0.0, denom);
            rho.data[k] = num / denom;
        }
    }
    return rho;
}

namespace detail {

// One blending pass: cartoon = omega(rho)*blur(f) + (1-omega(rho))*f.
inline Field cartoon_pass(const Field& f, double sigma, double l1, double l2, Field& rho_out) {
    Field blur = gaussian_convolve(f, sigma);
    rho_out = rho_map(f, sigma);
    Field cartoon(f.width, f.height);
    for (size_t k = 0; k < cartoon.size(); ++k) {
        double w = omega(rho_out.data[k], l1, l2);
        cartoon.data[k] = w * blur.data[k] + (1.0 - w) * f.data[k];
    }
    return cartoon;
}

}  // namespace detail

// Cartoon-texture decomposition by the local-TV reduction rate. Defaults
// follow the usual single-pass setup; extra iterations re-decompose the
// cartoon, extracting progressively less texture each time. The stored rho
// is the first-pass map. Reconstruction cartoon + texture == source holds
// exactly by construction.
inline Decomposition decompose(const Image& img, double sigma, double l1 = 0.25,
                               double l2 = 0.5, int iterations = 1) {
    if (!(sigma > 0.0)) throw std::invalid_argument("decompose: sigma must be > 0");
    if (iterations < 1) throw std::invalid_argument("decompose: iterations must be >= 1");

    Field rho_first;
    Field cartoon = detail::cartoon_pass(img, sigma, l1, l2, rho_first);
    for (int it = 1; it < iterations; ++it) {
        Field rho_pass;
        cartoon = detail::cartoon_pass(cartoon, sigma, l1, l2, rho_pass);
    }

    Decomposition d;
    d.cartoon = Image(cartoon, img.normalized);
    d.texture = Field(img.width, img.height);
    for (size_t k = 0; k < d.texture.size(); ++k)
        d.texture.data[k] = img.data[k] - cartoon.data[k];
    d.sigma = sigma;
    d.rho = std::move(rho_first);
    return d;
}

}  // namespace ctetris
