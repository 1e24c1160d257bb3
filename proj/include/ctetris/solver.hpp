#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "ctetris/field.hpp"
#include "ctetris/operators.hpp"
#include "ctetris/prox.hpp"

namespace ctetris {

struct SolverParams {
    double lambda = 1.0;  // data-fidelity weight
    double mu = 0.1;      // KL weight (texture-evolution model only)
    double rho = 1.0;     // Bregman / augmented-Lagrangian parameter
    double tol = 1e-6;    // stagnation tolerance on the diff sequence
    int maxit = 50;
    double alpha = 0.5;   // mask threshold in (0,1)
    int gs_sweeps = 1;    // Gauss-Seidel passes per u-update
    ProxConfig prox;

    void validate() const {
        if (!(lambda > 0.0) || !(mu > 0.0) || !(rho > 0.0) || !(tol > 0.0))
            throw std::invalid_argument("SolverParams: lambda, mu, rho, tol must be > 0");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("SolverParams: alpha must be in (0,1)");
        if (maxit < 1 || gs_sweeps < 1)
            throw std::invalid_argument("SolverParams: maxit and gs_sweeps must be >= 1");
    }
};

// Iterates of the four-block ADMM. b* are the scaled Bregman variables,
// all initialized to zero; each accumulates its constraint violation.
struct AdmmState {
    Field u;             // relaxed segmentation, kept in [0,1]
    Field dx, dy;        // gradient splits
    Field v;             // evolving texture, strictly positive
    Field bx, by, bv;    // Bregman variables
    double c_in = 0.0;
    double c_out = 0.0;
    int iter = 0;
};

struct TraceRecord {
    int iter = 0;
    double objective = 0.0;
    double res_x = 0.0;   // ||grad_x u - dx||_2
    double res_y = 0.0;   // ||grad_y u - dy||_2
    double res_v = 0.0;   // ||u + v - ubar||_2
    double diff = 0.0;    // mean squared change of u per pixel
    double c_in = 0.0;
    double c_out = 0.0;
};

struct SegmentationResult {
    Field u;
    LabelMap mask;        // 1 where u > alpha
    double c_in = 0.0;
    double c_out = 0.0;
    int iterations = 0;
    std::vector<TraceRecord> trace;
};

// r_ij = (c_in - ubar_ij)^2 - (c_out - ubar_ij)^2
inline Field residual_field(double c_in, double c_out, const Image& ubar) {
    Field r(ubar.width, ubar.height);
    for (size_t k = 0; k < r.size(); ++k) {
        double a = c_in - ubar.data[k];
        double b = c_out - ubar.data[k];
        r.data[k] = a * a - b * b;
    }
    return r;
}

// Region centroids as u-weighted means of ubar. A centroid whose weight
// mass falls below 1e-12 keeps its previous value (empty-region case).
inline std::pair<double, double> update_centroids(const Field& u, const Image& ubar,
                                                  double prev_c_in, double prev_c_out) {
    require_same_shape(u, ubar, "update_centroids");
    double num_in = 0.0, den_in = 0.0, num_out = 0.0, den_out = 0.0;
    for (size_t k = 0; k < u.size(); ++k) {
        num_in += u.data[k] * ubar.data[k];
        den_in += u.data[k];
        num_out += (1.0 - u.data[k]) * ubar.data[k];
        den_out += 1.0 - u.data[k];
    }
    constexpr double eps_c = 1e-12;
    double c_in = den_in < eps_c ? prev_c_in : num_in / den_in;
    double c_out = den_out < eps_c ? prev_c_out : num_out / den_out;
    return {c_in, c_out};
}

namespace detail {

// Model wiring shared by the full texture-evolution solver and the plain
// (no-KL) baselines: per-pixel fidelity weights, and whether the v-block
// (KL term plus u + v = ubar constraint) is active.
struct EngineSetup {
    Field lambda;
    bool kl_block = true;
};

// Normal-equation right-hand side of the u-subproblem, derived from the
// first-order optimality of its quadratic: for the KL variant
//   (-Lap + I) u = -(lambda.*r)/rho + gxT(dx-bx) + gyT(dy-by) + (ubar-v-bv)
// and without the v-block the last term and the +I shift drop.
inline Field assemble_u_rhs(const AdmmState& st, const Field& r, const EngineSetup& es,
                            const SolverParams& p, const Image& ubar) {
    Field tx(st.u.width, st.u.height), ty(st.u.width, st.u.height);
    for (size_t k = 0; k < tx.size(); ++k) {
        tx.data[k] = st.dx.data[k] - st.bx.data[k];
        ty.data[k] = st.dy.data[k] - st.by.data[k];
    }
    Field rhs = grad_x_adjoint(tx);
    Field aty = grad_y_adjoint(ty);
    for (size_t k = 0; k < rhs.size(); ++k) {
        rhs.data[k] += aty.data[k] - es.lambda.data[k] * r.data[k] / p.rho;
        if (es.kl_block)
            rhs.data[k] += ubar.data[k] - st.v.data[k] - st.bv.data[k];
    }
    return rhs;
}

inline void engine_u_update(AdmmState& st, const Field& r, const EngineSetup& es,
                            const SolverParams& p, const Image& ubar) {
    Field rhs = assemble_u_rhs(st, r, es, p, ubar);
    gauss_seidel_sweep(st.u, rhs, p.gs_sweeps, es.kl_block ? 1.0 : 0.0);
    st.u = project_box(st.u);
}

// One full ADMM step: r refresh, u-update, shrinkage of the gradient
// splits, KL prox on the texture, Bregman updates, centroid refresh.
inline void engine_step(AdmmState& st, const EngineSetup& es, const SolverParams& p,
                        const Image& ubar, const Field& vbar_floored) {
    Field r = residual_field(st.c_in, st.c_out, ubar);
    engine_u_update(st, r, es, p, ubar);

    Field gx = grad_x(st.u);
    Field gy = grad_y(st.u);
    const double shrink = 1.0 / p.rho;
    for (size_t k = 0; k < gx.size(); ++k) {
        st.dx.data[k] = soft_threshold(gx.data[k] + st.bx.data[k], shrink);
        st.dy.data[k] = soft_threshold(gy.data[k] + st.by.data[k], shrink);
    }

    if (es.kl_block) {
        Field x(st.u.width, st.u.height);
        for (size_t k = 0; k < x.size(); ++k)
            x.data[k] = ubar.data[k] - st.u.data[k] - st.bv.data[k];
        st.v = kl_prox(x, vbar_floored, p.mu / p.rho, p.prox);
    }

    for (size_t k = 0; k < gx.size(); ++k) {
        st.bx.data[k] += gx.data[k] - st.dx.data[k];
        st.by.data[k] += gy.data[k] - st.dy.data[k];
        if (es.kl_block)
            st.bv.data[k] += st.u.data[k] + st.v.data[k] - ubar.data[k];
    }

    auto [ci, co] = update_centroids(st.u, ubar, st.c_in, st.c_out);
    st.c_in = ci;
    st.c_out = co;
    ++st.iter;
}

inline double engine_objective(const AdmmState& st, const EngineSetup& es,
                               const SolverParams& p, const Image& ubar,
                               const Field& vbar_floored) {
    Field gx = grad_x(st.u);
    Field gy = grad_y(st.u);
    double tv = 0.0, fid = 0.0, kl = 0.0;
    for (size_t k = 0; k < gx.size(); ++k) {
        tv += std::fabs(gx.data[k]) + std::fabs(gy.data[k]);
        double a = st.c_in - ubar.data[k];
        double b = st.c_out - ubar.data[k];
        fid += es.lambda.data[k] * (st.u.data[k] * a * a + (1.0 - st.u.data[k]) * b * b);
        if (es.kl_block) {
            double v = st.v.data[k];
            if (v > 0.0) kl += v * std::log(v / vbar_floored.data[k]);
        }
    }
    return tv + fid + p.mu * kl;
}

inline AdmmState engine_init(const Image& ubar, const Field* vbar, const EngineSetup& es,
                             const SolverParams& p) {
    AdmmState st;
    st.u = ubar;
    st.dx = Field(ubar.width, ubar.height);
    st.dy = Field(ubar.width, ubar.height);
    st.bx = Field(ubar.width, ubar.height);
    st.by = Field(ubar.width, ubar.height);
    if (es.kl_block) {
        st.bv = Field(ubar.width, ubar.height);
        st.v = Field(ubar.width, ubar.height);
        for (size_t k = 0; k < st.v.size(); ++k)
            st.v.data[k] = std::max(vbar->data[k], p.prox.eps_kl);
    }

    // centroids from the thresholded start; empty side falls back to extremes
    double sum_in = 0.0, sum_out = 0.0;
    size_t n_in = 0, n_out = 0;
    for (double v : ubar.data) {
        if (v > p.alpha) { sum_in += v; ++n_in; }
        else { sum_out += v; ++n_out; }
    }
    if (n_in == 0 || n_out == 0) {
        st.c_in = field_max(ubar);
        st.c_out = field_min(ubar);
    } else {
        st.c_in = sum_in / static_cast<double>(n_in);
        st.c_out = sum_out / static_cast<double>(n_out);
    }
    return st;
}

inline SegmentationResult run_engine(const Image& ubar, const Field* vbar,
                                     const EngineSetup& es, const SolverParams& p) {
    p.validate();
    if (!all_finite(ubar)) throw std::invalid_argument("segment: non-finite input");
    if (es.kl_block) {
        require_same_shape(ubar, *vbar, "segment");
        if (!all_finite(*vbar)) throw std::invalid_argument("segment: non-finite texture");
    }

    Field vbar_floored;
    if (es.kl_block) {
        vbar_floored = Field(ubar.width, ubar.height);
        for (size_t k = 0; k < vbar_floored.size(); ++k)
            vbar_floored.data[k] = std::max(vbar->data[k], p.prox.eps_kl);
    }

    AdmmState st = engine_init(ubar, vbar, es, p);
    const double npix = static_cast<double>(st.u.size());

    SegmentationResult res;
    Field u_prev = st.u;
    double diff_prev = 0.0;
    while (st.iter < p.maxit) {
        engine_step(st, es, p, ubar, vbar_floored);

        TraceRecord rec;
        rec.iter = st.iter;
        Field gx = grad_x(st.u);
        Field gy = grad_y(st.u);
        double rx = 0.0, ry = 0.0, rv = 0.0, sd = 0.0;
        for (size_t k = 0; k < gx.size(); ++k) {
            double ex = gx.data[k] - st.dx.data[k];
            double ey = gy.data[k] - st.dy.data[k];
            rx += ex * ex;
            ry += ey * ey;
            if (es.kl_block) {
                double ev = st.u.data[k] + st.v.data[k] - ubar.data[k];
                rv += ev * ev;
            }
            double du = st.u.data[k] - u_prev.data[k];
            sd += du * du;
        }
        rec.res_x = std::sqrt(rx);
        rec.res_y = std::sqrt(ry);
        rec.res_v = std::sqrt(rv);
        rec.diff = sd / npix;
        rec.objective = engine_objective(st, es, p, ubar, vbar_floored);
        rec.c_in = st.c_in;
        rec.c_out = st.c_out;
        res.trace.push_back(rec);

        u_prev = st.u;
        if (st.iter >= 2 && std::fabs(rec.diff - diff_prev) <= p.tol) break;
        diff_prev = rec.diff;
    }

    res.u = st.u;
    res.c_in = st.c_in;
    res.c_out = st.c_out;
    res.iterations = st.iter;
    res.mask = LabelMap(st.u.width, st.u.height);
    for (size_t k = 0; k < st.u.size(); ++k)
        res.mask.labels[k] = st.u.data[k] > p.alpha ? 1 : 0;
    return res;
}

inline EngineSetup const_lambda_setup(const Image& ubar, double lambda, bool kl_block) {
    EngineSetup es;
    es.lambda = Field(ubar.width, ubar.height, lambda);
    es.kl_block = kl_block;
    return es;
}

}  // namespace detail

// u-subproblem solve: Gauss-Seidel sweeps on the assembled normal equation,
// warm-started from the current iterate, then projected onto [0,1].
inline Field update_u(const AdmmState& state, const Field& r, const SolverParams& params,
                      const Image& ubar) {
    AdmmState st = state;
    detail::engine_u_update(st, r, detail::const_lambda_setup(ubar, params.lambda, true),
                            params, ubar);
    return st.u;
}

// One ADMM step of the texture-evolution model (all four blocks).
inline AdmmState admm_step(const AdmmState& state, const SolverParams& params,
                           const Image& ubar, const Field& vbar_floored) {
    AdmmState st = state;
    detail::engine_step(st, detail::const_lambda_setup(ubar, params.lambda, true), params,
                        ubar, vbar_floored);
    return st;
}

// Full model objective: anisotropic TV + weighted two-region fidelity +
// mu * KL(v ; vbar), with the 0*log(0/.) = 0 convention.
inline double objective(const AdmmState& state, const SolverParams& params, const Image& ubar,
                        const Field& vbar) {
    Field vbar_floored(ubar.width, ubar.height);
    for (size_t k = 0; k < vbar_floored.size(); ++k)
        vbar_floored.data[k] = std::max(vbar.data[k], params.prox.eps_kl);
    return detail::engine_objective(state, detail::const_lambda_setup(ubar, params.lambda, true),
                                    params, ubar, vbar_floored);
}

// Joint cartoon-texture evolution and segmentation of the cartoon ubar with
// initial texture vbar, run to stagnation of the iterate-change sequence or
// maxit. The returned mask is u > alpha.
inline SegmentationResult segment(const Image& ubar, const Field& vbar,
                                  const SolverParams& params) {
    return detail::run_engine(ubar, &vbar,
                              detail::const_lambda_setup(ubar, params.lambda, true), params);
}

}  // namespace ctetris
