#pragma once

#include <cmath>
#include <span>

#include "postsel/errors.hpp"

namespace postsel {

struct LineFit {
    double intercept;
    double slope;
    double rms;  // root-mean-square residual of the fit
};

/// Ordinary least-squares line y = intercept + slope * x.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        fail(Errc::InsufficientData, "need at least two (x, y) samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det <= 0.0 || !std::isfinite(det))
        fail(Errc::InsufficientData, "abscissae are degenerate");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

}  // namespace postsel
