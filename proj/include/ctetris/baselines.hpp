#pragma once

#include "ctetris/cartoon_texture.hpp"
#include "ctetris/solver.hpp"

namespace ctetris {

// Per-pixel fidelity weights for spatially adaptive regularization.
struct LambdaMap {
    Field values;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

// Plain two-region split-Bregman segmentation (no texture evolution): the
// same ADMM engine with the v-block toggled off, identical stopping rule
// and thresholding.
inline SegmentationResult segment_cen(const Image& f, const SolverParams& params) {
    return detail::run_engine(f, nullptr, detail::const_lambda_setup(f, params.lambda, false),
                              params);
}

// lambda_ij = max(lambda_min/lambda_max, 1 - rho_ij) * lambda_max, with rho
// the local-TV reduction rate of f itself. Entries always land in
// [lambda_min, lambda_max]: heavy regularization on texture, light on cartoon.
inline LambdaMap build_lambda_map(const Image& f, double sigma, double lambda_min,
                                  double lambda_max) {
    if (!(lambda_min > 0.0 && lambda_min < lambda_max))
        throw std::invalid_argument("build_lambda_map: requires 0 < lambda_min < lambda_max");
    Field rho = rho_map(f, sigma);
    LambdaMap lm;
    lm.lambda_min = lambda_min;
    lm.lambda_max = lambda_max;
    lm.values = Field(f.width, f.height);
    const double floor_ratio = lambda_min / lambda_max;
    for (size_t k = 0; k < rho.size(); ++k)
        lm.values.data[k] = std::max(floor_ratio, 1.0 - rho.data[k]) * lambda_max;
    return lm;
}

// CEN solver with the scalar fidelity weight replaced pixelwise by lmap.
// A constant map reproduces segment_cen bit for bit.
inline SegmentationResult segment_spareg(const Image& f, const LambdaMap& lmap,
                                         const SolverParams& params) {
    require_same_shape(f, lmap.values, "segment_spareg");
    detail::EngineSetup es;
    es.lambda = lmap.values;
    es.kl_block = false;
    return detail::run_engine(f, nullptr, es, params);
}

}  // namespace ctetris
