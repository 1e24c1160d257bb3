#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "ctetris/field.hpp"

namespace ctetris {

namespace detail {

inline void require_same_shape(const LabelMap& a, const LabelMap& b, const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

// Joint label histogram with row/column marginals.
struct Contingency {
    std::map<std::pair<int, int>, size_t> joint;
    std::map<int, size_t> row;  // labels of a
    std::map<int, size_t> col;  // labels of b
    size_t n = 0;

    Contingency(const LabelMap& a, const LabelMap& b) {
        n = a.size();
        for (size_t k = 0; k < n; ++k) {
            ++joint[{a.labels[k], b.labels[k]}];
            ++row[a.labels[k]];
            ++col[b.labels[k]];
        }
    }
};

inline double choose2(size_t m) { return 0.5 * static_cast<double>(m) * (m - 1); }

// 1D squared Euclidean distance transform (lower envelope of parabolas).
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d) {
    const int n = static_cast<int>(f.size());
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
            if (s <= z[k]) { --k; } else { break; }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

// Exact squared EDT of a binary mask (distance to the nearest set pixel).
inline Field squared_edt(const std::vector<char>& on, int width, int height) {
    constexpr double inf = 1e18;
    Field d(width, height);
    for (size_t k = 0; k < d.size(); ++k)
        d.data[k] = on[k] ? 0.0 : inf;

    std::vector<double> buf, out;
    for (int i = 0; i < height; ++i) {
        buf.assign(static_cast<size_t>(width), 0.0);
        out.assign(static_cast<size_t>(width), 0.0);
        for (int j = 0; j < width; ++j) buf[j] = d.at(i, j);
        edt_1d(buf, out);
        for (int j = 0; j < width; ++j) d.at(i, j) = out[j];
    }
    for (int j = 0; j < width; ++j) {
        buf.assign(static_cast<size_t>(height), 0.0);
        out.assign(static_cast<size_t>(height), 0.0);
        for (int i = 0; i < height; ++i) buf[i] = d.at(i, j);
        edt_1d(buf, out);
        for (int i = 0; i < height; ++i) d.at(i, j) = out[i];
    }
    return d;
}

// Boundary map: one pixel per label interface, marked on the left/top side
// (pixel differs from its right or down neighbor).
inline std::vector<char> boundary_map(const LabelMap& m) {
    std::vector<char> b(m.size(), 0);
    for (int i = 0; i < m.height; ++i)
        for (int j = 0; j < m.width; ++j) {
            bool edge = (j + 1 < m.width && m.at(i, j) != m.at(i, j + 1)) ||
                        (i + 1 < m.height && m.at(i, j) != m.at(i + 1, j));
            if (edge) b[static_cast<size_t>(i) * m.width + j] = 1;
        }
    return b;
}

inline double directed_boundary_error(const std::vector<char>& from, const Field& sq_dist_to) {
    double sum = 0.0;
    size_t cnt = 0;
    for (size_t k = 0; k < from.size(); ++k) {
        if (from[k]) {
            sum += std::sqrt(sq_dist_to.data[k]);
            ++cnt;
        }
    }
    return sum / static_cast<double>(cnt);
}

}  // namespace detail

// Rand index: fraction of pixel pairs whose labellings agree between the
// two maps. Contingency-table form, O(K^2 + N) instead of the O(N^2) pair
// loop.
inline double rand_index(const LabelMap& a, const LabelMap& b) {
    detail::require_same_shape(a, b, "rand_index");
    detail::Contingency c(a, b);
    if (c.n < 2) return 1.0;
    double same_same = 0.0;
    for (const auto& [lab, m] : c.joint) same_same += detail::choose2(m);
    double same_a = 0.0, same_b = 0.0;
    for (const auto& [lab, m] : c.row) same_a += detail::choose2(m);
    for (const auto& [lab, m] : c.col) same_b += detail::choose2(m);
    double pairs = detail::choose2(c.n);
    double diff_diff = pairs - same_a - same_b + same_same;
    return (same_same + diff_diff) / pairs;
}

// Global consistency error: min over directions of the mean local
// refinement error |R(a,p) \ R(b,p)| / |R(a,p)|.
inline double gce(const LabelMap& a, const LabelMap& b) {
    detail::require_same_shape(a, b, "gce");
    detail::Contingency c(a, b);
    double e_ab = 0.0, e_ba = 0.0;
    for (const auto& [lab, m] : c.joint) {
        double nij = static_cast<double>(m);
        double ai = static_cast<double>(c.row.at(lab.first));
        double bj = static_cast<double>(c.col.at(lab.second));
        e_ab += nij * (ai - nij) / ai;
        e_ba += nij * (bj - nij) / bj;
    }
    return std::min(e_ab, e_ba) / static_cast<double>(c.n);
}

// Variation of information in nats: H(a) + H(b) - 2 I(a,b).
inline double voi(const LabelMap& a, const LabelMap& b) {
    detail::require_same_shape(a, b, "voi");
    detail::Contingency c(a, b);
    const double n = static_cast<double>(c.n);
    double ha = 0.0, hb = 0.0, mi = 0.0;
    for (const auto& [lab, m] : c.row) {
        double p = m / n;
        ha -= p * std::log(p);
    }
    for (const auto& [lab, m] : c.col) {
        double p = m / n;
        hb -= p * std::log(p);
    }
    for (const auto& [lab, m] : c.joint) {
        double pij = m / n;
        double pi = c.row.at(lab.first) / n;
        double pj = c.col.at(lab.second) / n;
        mi += pij * std::log(pij / (pi * pj));
    }
    double v = ha + hb - 2.0 * mi;
    return v < 0.0 ? 0.0 : v;  // clip rounding noise on identical partitions
}

// Boundary displacement error: mean Euclidean distance from each boundary
// pixel of one map to the nearest boundary pixel of the other, symmetrized
// over the two directions. Distances come from an exact two-pass EDT.
inline double bde(const LabelMap& a, const LabelMap& b) {
    detail::require_same_shape(a, b, "bde");
    std::vector<char> ba = detail::boundary_map(a);
    std::vector<char> bb = detail::boundary_map(b);
    size_t na = 0, nb = 0;
    for (char x : ba) na += x;
    for (char x : bb) nb += x;
    if (na == 0 || nb == 0)
        throw std::domain_error("bde: empty boundary (single-label map)");
    Field dist_a = detail::squared_edt(ba, a.width, a.height);
    Field dist_b = detail::squared_edt(bb, a.width, a.height);
    double dab = detail::directed_boundary_error(ba, dist_b);
    double dba = detail::directed_boundary_error(bb, dist_a);
    return 0.5 * (dab + dba);
}

// m1 = max - min; m2 = (max - mean) / (max + mean) as used for cartoon
// contrast bookkeeping. set classic=true for the textbook Michelson ratio
// (max - min) / (max + min).
inline std::pair<double, double> contrast_metrics(const Image& f, bool classic = false) {
    double mx = field_max(f), mn = field_min(f), mean = field_mean(f);
    double m1 = mx - mn;
    double denom = classic ? mx + mn : mx + mean;
    if (denom == 0.0)
        throw std::domain_error("contrast_metrics: zero denominator (all-black image)");
    double m2 = classic ? (mx - mn) / denom : (mx - mean) / denom;
    return {m1, m2};
}

// 10*log10(sum clean^2 / sum (clean-noisy)^2)
inline double snr_db(const Image& clean, const Image& noisy) {
    require_same_shape(clean, noisy, "snr_db");
    double sig = 0.0, err = 0.0;
    for (size_t k = 0; k < clean.size(); ++k) {
        double d = clean.data[k] - noisy.data[k];
        sig += clean.data[k] * clean.data[k];
        err += d * d;
    }
    if (err == 0.0)
        throw std::domain_error("snr_db: images are identical (infinite SNR)");
    return 10.0 * std::log10(sig / err);
}

}  // namespace ctetris
