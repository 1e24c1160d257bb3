// Independent reference implementations used as test oracles: dense linear
// algebra, brute-force metrics, and scalar minimization. Deliberately naive
// and separate from the library code paths they validate.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "ctetris/field.hpp"

namespace oracle {

struct Dense {
    int n = 0;
    std::vector<double> a;  // row-major n x n

    explicit Dense(int n_) : n(n_), a(static_cast<size_t>(n_) * n_, 0.0) {}
    double& at(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
    double at(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }
};

// (-Laplacian + shift*I) for the replicate-boundary 5-point stencil,
// assembled directly from neighbor bookkeeping.
inline Dense dense_neg_laplacian(int width, int height, double shift) {
    const int n = width * height;
    Dense m(n);
    auto id = [width](int i, int j) { return i * width + j; };
    for (int i = 0; i < height; ++i) {
        for (int j = 0; j < width; ++j) {
            int p = id(i, j);
            int deg = 0;
            if (i > 0) { m.at(p, id(i - 1, j)) -= 1.0; ++deg; }
            if (i < height - 1) { m.at(p, id(i + 1, j)) -= 1.0; ++deg; }
            if (j > 0) { m.at(p, id(i, j - 1)) -= 1.0; ++deg; }
            if (j < width - 1) { m.at(p, id(i, j + 1)) -= 1.0; ++deg; }
            m.at(p, p) += deg + shift;
        }
    }
    return m;
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense m, std::vector<double> b) {
    const int n = m.n;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(m.at(r, col)) > std::fabs(m.at(piv, col))) piv = r;
        if (std::fabs(m.at(piv, col)) < 1e-14)
            throw std::runtime_error("dense_solve: singular matrix");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(m.at(piv, c), m.at(col, c));
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = m.at(r, col) / m.at(col, col);
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) m.at(r, c) -= f * m.at(col, c);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= m.at(r, c) * x[c];
        x[r] = s / m.at(r, r);
    }
    return x;
}

inline std::vector<double> dense_apply(const Dense& m, const std::vector<double>& x) {
    std::vector<double> y(m.n, 0.0);
    for (int r = 0; r < m.n; ++r)
        for (int c = 0; c < m.n; ++c) y[r] += m.at(r, c) * x[c];
    return y;
}

// Golden-section minimization of a unimodal scalar function on [lo, hi].
// Evaluate f in long double to keep the flat-bottom localization noise
// below the tolerances asserted against it.
template <class F>
double golden_section_min(F f, double lo, double hi, double tol = 1e-11) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    auto fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// O(N^2) pair-counting Rand index.
inline double rand_index_pairs(const ctetris::LabelMap& x, const ctetris::LabelMap& y) {
    const size_t n = x.size();
    size_t agree = 0, pairs = 0;
    for (size_t p = 0; p < n; ++p) {
        for (size_t q = p + 1; q < n; ++q) {
            bool same_x = x.labels[p] == x.labels[q];
            bool same_y = y.labels[p] == y.labels[q];
            if (same_x == same_y) ++agree;
            ++pairs;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(pairs);
}

// GCE straight from the set-arithmetic definition.
inline double gce_sets(const ctetris::LabelMap& x, const ctetris::LabelMap& y) {
    const size_t n = x.size();
    auto local_err = [&](const ctetris::LabelMap& a, const ctetris::LabelMap& b) {
        double total = 0.0;
        for (size_t p = 0; p < n; ++p) {
            size_t in_a = 0, in_a_not_b = 0;
            for (size_t q = 0; q < n; ++q) {
                if (a.labels[q] == a.labels[p]) {
                    ++in_a;
                    if (b.labels[q] != b.labels[p]) ++in_a_not_b;
                }
            }
            total += static_cast<double>(in_a_not_b) / static_cast<double>(in_a);
        }
        return total;
    };
    return std::min(local_err(x, y), local_err(y, x)) / static_cast<double>(n);
}

// VI from explicit histograms, natural log.
inline double voi_hist(const ctetris::LabelMap& x, const ctetris::LabelMap& y) {
    const double n = static_cast<double>(x.size());
    std::map<int, double> px, py;
    std::map<std::pair<int, int>, double> pxy;
    for (size_t k = 0; k < x.size(); ++k) {
        px[x.labels[k]] += 1.0;
        py[y.labels[k]] += 1.0;
        pxy[{x.labels[k], y.labels[k]}] += 1.0;
    }
    double h = 0.0;
    for (auto& [l, m] : px) h -= m / n * std::log(m / n);
    for (auto& [l, m] : py) h -= m / n * std::log(m / n);
    double mi = 0.0;
    for (auto& [l, m] : pxy)
        mi += m / n * std::log((m / n) / ((px[l.first] / n) * (py[l.second] / n)));
    double v = h - 2.0 * mi;
    return v < 0.0 ? 0.0 : v;
}

// Single-sided boundary map (right/down transitions), as in bde.
inline std::vector<char> boundary_pixels(const ctetris::LabelMap& m) {
    std::vector<char> b(m.size(), 0);
    for (int i = 0; i < m.height; ++i)
        for (int j = 0; j < m.width; ++j) {
            bool edge = (j + 1 < m.width && m.at(i, j) != m.at(i, j + 1)) ||
                        (i + 1 < m.height && m.at(i, j) != m.at(i + 1, j));
            if (edge) b[static_cast<size_t>(i) * m.width + j] = 1;
        }
    return b;
}

// BDE by brute-force nearest-boundary-pixel search.
inline double bde_brute(const ctetris::LabelMap& x, const ctetris::LabelMap& y) {
    auto bx = boundary_pixels(x);
    auto by = boundary_pixels(y);
    auto directed = [&](const std::vector<char>& from, const std::vector<char>& to) {
        double sum = 0.0;
        size_t cnt = 0;
        for (int i = 0; i < x.height; ++i)
            for (int j = 0; j < x.width; ++j) {
                if (!from[static_cast<size_t>(i) * x.width + j]) continue;
                double best = 1e30;
                for (int p = 0; p < x.height; ++p)
                    for (int q = 0; q < x.width; ++q) {
                        if (!to[static_cast<size_t>(p) * x.width + q]) continue;
                        double d = std::hypot(i - p, j - q);
                        best = std::min(best, d);
                    }
                sum += best;
                ++cnt;
            }
        return sum / static_cast<double>(cnt);
    };
    return 0.5 * (directed(bx, by) + directed(by, bx));
}

// Small deterministic generator for test data, unrelated to the library's
// counter-based streams.
struct TestRng {
    uint64_t state;
    explicit TestRng(uint64_t s) : state(s) {}
    uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }
    int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

inline ctetris::Field random_field(int w, int h, TestRng& rng, double lo = 0.0, double hi = 1.0) {
    ctetris::Field f(w, h);
    for (double& v : f.data) v = rng.uniform(lo, hi);
    return f;
}

inline ctetris::Image random_image(int w, int h, TestRng& rng) {
    ctetris::Image img(w, h);
    img.normalized = true;
    for (double& v : img.data) v = rng.uniform(0.0, 1.0);
    return img;
}

inline ctetris::LabelMap random_labels(int w, int h, int num_labels, TestRng& rng) {
    ctetris::LabelMap m(w, h);
    for (int& l : m.labels) l = rng.below(num_labels);
    return m;
}

}  // namespace oracle
