#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

#include "ctetris/field.hpp"

namespace ctetris {

// Deterministic synthetic test images with exact ground-truth masks.
struct PhantomSpec {
    enum class Kind { disk, disk_textured, checkerboard, ramp };
    Kind kind = Kind::disk;
    int size = 64;
    double fg_level = 0.9;
    double bg_level = 0.1;
    double texture_amp = 0.3;
    int texture_period = 8;
    uint64_t seed = 0;  // reserved; current kinds are all deterministic

    void validate() const {
        if (size < 16) throw std::invalid_argument("PhantomSpec: size must be >= 16");
        if ((kind == Kind::disk || kind == Kind::disk_textured) && fg_level == bg_level)
            throw std::invalid_argument("PhantomSpec: disk kinds need fg_level != bg_level");
        if (kind == Kind::disk_textured || kind == Kind::checkerboard) {
            if (texture_period < 1)
                throw std::invalid_argument("PhantomSpec: texture_period must be >= 1");
        }
    }
};

// disk: centered disk of radius size/4 at fg_level on bg_level.
// disk_textured: same, with the background modulated by
//   amp * sin(2 pi x / period) * sin(2 pi y / period), clamped to [0,1].
// checkerboard: alternating fg/bg blocks of size period/2.
// ramp: linear gradient bg_level -> fg_level along x.
// The label map marks the disk, or the right half for checkerboard/ramp.
inline std::pair<Image, LabelMap> make_phantom(const PhantomSpec& spec) {
    spec.validate();
    const int n = spec.size;
    Image img(n, n);
    img.normalized = true;
    LabelMap gt(n, n);

    const double c = (n - 1) / 2.0;
    const double r2 = (n / 4.0) * (n / 4.0);
    const int block = std::max(1, spec.texture_period / 2);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double v = 0.0;
            int label = 0;
            switch (spec.kind) {
                case PhantomSpec::Kind::disk:
                case PhantomSpec::Kind::disk_textured: {
                    double dx = j - c, dy = i - c;
                    bool inside = dx * dx + dy * dy <= r2;
                    label = inside ? 1 : 0;
                    if (inside) {
                        v = spec.fg_level;
                    } else {
                        double amp = spec.kind == PhantomSpec::Kind::disk ? 0.0
                                                                          : spec.texture_amp;
                        double s = std::sin(2.0 * std::numbers::pi * j / spec.texture_period) *
                                   std::sin(2.0 * std::numbers::pi * i / spec.texture_period);
                        v = std::clamp(spec.bg_level + amp * s, 0.0, 1.0);
                    }
                    break;
                }
                case PhantomSpec::Kind::checkerboard: {
                    bool odd = ((i / block) + (j / block)) % 2 != 0;
                    v = odd ? spec.bg_level : spec.fg_level;
                    label = j >= n / 2 ? 1 : 0;
                    break;
                }
                case PhantomSpec::Kind::ramp: {
                    v = spec.bg_level +
                        (spec.fg_level - spec.bg_level) * static_cast<double>(j) / (n - 1);
                    label = j >= n / 2 ? 1 : 0;
                    break;
                }
            }
            img.at(i, j) = v;
            gt.at(i, j) = label;
        }
    }
    return {std::move(img), std::move(gt)};
}

}  // namespace ctetris
