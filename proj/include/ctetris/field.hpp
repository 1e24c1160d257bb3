#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctetris {

// Row-major 2D scalar field. Index (i,j) = row i (y), column j (x),
// stored at data[i*width + j]. Used for images, textures, multipliers
// and every other per-pixel quantity in the solver.
struct Field {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    Field() = default;
    Field(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
        if (w < 1 || h < 1)
            throw std::invalid_argument("Field: width and height must be >= 1");
    }

    double& at(int i, int j) { return data[static_cast<size_t>(i) * width + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * width + j]; }

    size_t size() const { return data.size(); }
    bool same_shape(const Field& o) const { return width == o.width && height == o.height; }
};

// A grayscale image: a field whose values live in [0,1] once normalized.
// Raw (unnormalized) images may exceed [0,1]; the flag records which.
struct Image : Field {
    bool normalized = false;

    Image() = default;
    Image(int w, int h, double fill = 0.0, bool norm = false)
        : Field(w, h, fill), normalized(norm) {}
    explicit Image(Field f, bool norm = false)
        : Field(std::move(f)), normalized(norm) {}
};

// Integer label map for segmentation comparison (two-region use: {0,1}).
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<int> labels;

    LabelMap() = default;
    LabelMap(int w, int h, int fill = 0)
        : width(w), height(h), labels(static_cast<size_t>(w) * h, fill) {
        if (w < 1 || h < 1)
            throw std::invalid_argument("LabelMap: width and height must be >= 1");
    }

    int& at(int i, int j) { return labels[static_cast<size_t>(i) * width + j]; }
    int at(int i, int j) const { return labels[static_cast<size_t>(i) * width + j]; }

    size_t size() const { return labels.size(); }
    bool same_shape(const LabelMap& o) const { return width == o.width && height == o.height; }
};

inline void require_same_shape(const Field& a, const Field& b, const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

inline bool all_finite(const Field& f) {
    for (double v : f.data)
        if (!std::isfinite(v)) return false;
    return true;
}

inline double dot(const Field& a, const Field& b) {
    double s = 0.0;
    for (size_t k = 0; k < a.data.size(); ++k) s += a.data[k] * b.data[k];
    return s;
}

inline double norm2(const Field& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Field& a) {
    double m = 0.0;
    for (double v : a.data) m = std::max(m, std::fabs(v));
    return m;
}

inline double field_min(const Field& a) {
    double m = a.data[0];
    for (double v : a.data) m = std::min(m, v);
    return m;
}

inline double field_max(const Field& a) {
    double m = a.data[0];
    for (double v : a.data) m = std::max(m, v);
    return m;
}

inline double field_mean(const Field& a) {
    double s = 0.0;
    for (double v : a.data) s += v;
    return s / static_cast<double>(a.data.size());
}

inline Field transpose(const Field& a) {
    Field t(a.height, a.width);
    for (int i = 0; i < a.height; ++i)
        for (int j = 0; j < a.width; ++j)
            t.at(j, i) = a.at(i, j);
    return t;
}

}  // namespace ctetris
