#pragma once

#include <algorithm>
#include <cmath>

#include "ctetris/field.hpp"

namespace ctetris {

struct GradientPair {
    Field gx;
    Field gy;
};

// Forward differences with replicate padding: values outside the grid equal
// the nearest in-grid value, so the last column/row difference is zero.
inline Field grad_x(const Field& f) {
    Field g(f.width, f.height);
    for (int i = 0; i < f.height; ++i) {
        for (int j = 0; j + 1 < f.width; ++j)
            g.at(i, j) = f.at(i, j + 1) - f.at(i, j);
        g.at(i, f.width - 1) = 0.0;
    }
    return g;
}

inline Field grad_y(const Field& f) {
    Field g(f.width, f.height);
    for (int i = 0; i + 1 < f.height; ++i)
        for (int j = 0; j < f.width; ++j)
            g.at(i, j) = f.at(i + 1, j) - f.at(i, j);
    for (int j = 0; j < f.width; ++j)
        g.at(f.height - 1, j) = 0.0;
    return g;
}

inline GradientPair gradient(const Field& f) { return {grad_x(f), grad_y(f)}; }

// Exact adjoints of the forward differences above under the standard inner
// product: <grad_x(u), p> == <u, grad_x_adjoint(p)> for all u, p. The last
// column of p never enters (its forward difference is pinned to zero).
inline Field grad_x_adjoint(const Field& p) {
    Field g(p.width, p.height);
    for (int i = 0; i < p.height; ++i) {
        for (int j = 0; j < p.width; ++j) {
            double v = 0.0;
            if (j >= 1) v += p.at(i, j - 1);
            if (j <= p.width - 2) v -= p.at(i, j);
            g.at(i, j) = v;
        }
    }
    return g;
}

inline Field grad_y_adjoint(const Field& p) {
    Field g(p.width, p.height);
    for (int i = 0; i < p.height; ++i) {
        for (int j = 0; j < p.width; ++j) {
            double v = 0.0;
            if (i >= 1) v += p.at(i - 1, j);
            if (i <= p.height - 2) v -= p.at(i, j);
            g.at(i, j) = v;
        }
    }
    return g;
}

// Normalized 1D Gaussian taps for radius ceil(3*sigma).
inline std::vector<double> gaussian_kernel(double sigma) {
    int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int t = -radius; t <= radius; ++t) {
        double w = std::exp(-0.5 * (t * t) / (sigma * sigma));
        k[t + radius] = w;
        sum += w;
    }
    for (double& w : k) w /= sum;
    return k;
}

// Separable Gaussian blur, replicate boundary. Kernel is renormalized so a
// constant image passes through unchanged.
inline Field gaussian_convolve(const Field& f, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian_convolve: sigma must be > 0");
    std::vector<double> k = gaussian_kernel(sigma);
    int radius = static_cast<int>(k.size() / 2);

    Field tmp(f.width, f.height);
    for (int i = 0; i < f.height; ++i) {
        for (int j = 0; j < f.width; ++j) {
            double s = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                int jj = std::clamp(j + t, 0, f.width - 1);
                s += k[t + radius] * f.at(i, jj);
            }
            tmp.at(i, j) = s;
        }
    }
    Field out(f.width, f.height);
    for (int i = 0; i < f.height; ++i) {
        for (int j = 0; j < f.width; ++j) {
            double s = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                int ii = std::clamp(i + t, 0, f.height - 1);
                s += k[t + radius] * tmp.at(ii, j);
            }
            out.at(i, j) = s;
        }
    }
    return out;
}

inline Image gaussian_convolve(const Image& img, double sigma) {
    return Image(gaussian_convolve(static_cast<const Field&>(img), sigma), img.normalized);
}

}  // namespace ctetris
