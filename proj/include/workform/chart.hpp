#pragma once

#include <string>
#include <utility>
#include <vector>

#include "workform/errors.hpp"
#include "workform/rational.hpp"

namespace workform {

/// A star-shaped chart: ambient dimension, exact homotopy center, and the
/// axis-aligned box used for numerical verification. The box is assumed
/// star-shaped with respect to the center.
struct Chart {
    int n = 0;
    std::vector<Rational> center;
    std::vector<std::pair<double, double>> box;

    Chart(int dimension, std::vector<Rational> center_pt,
          std::vector<std::pair<double, double>> sample_box)
        : n(dimension), center(std::move(center_pt)), box(std::move(sample_box)) {
        if (n < 1) throw DimensionMismatch("chart dimension must be at least 1");
        if (static_cast<int>(center.size()) != n)
            throw DimensionMismatch("center has " + std::to_string(center.size()) +
                                    " coordinates for dimension " + std::to_string(n));
        if (static_cast<int>(box.size()) != n)
            throw DimensionMismatch("box has " + std::to_string(box.size()) +
                                    " axes for dimension " + std::to_string(n));
        for (int i = 0; i < n; ++i) {
            if (!(box[i].first < box[i].second))
                throw Error("box axis " + std::to_string(i) + " is empty");
            double c = to_double(center[i]);
            if (c < box[i].first || c > box[i].second)
                throw Error("homotopy center lies outside the sampling box on axis " +
                            std::to_string(i));
        }
    }

    /// Chart centered at the origin with the same [lo, hi] range per axis.
    static Chart origin(int dimension, double lo = -1.0, double hi = 1.0) {
        return Chart(dimension, std::vector<Rational>(dimension, Rational(0)),
                     std::vector<std::pair<double, double>>(dimension, {lo, hi}));
    }

    std::vector<double> center_double() const {
        std::vector<double> c(center.size());
        for (std::size_t i = 0; i < center.size(); ++i) c[i] = to_double(center[i]);
        return c;
    }
};

}  // namespace workform
