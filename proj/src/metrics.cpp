#include "fnt/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace fnt {

PairedSeries::PairedSeries(std::vector<double> y, std::vector<double> d)
    : predicted(std::move(y)), desired(std::move(d)) {
    if (predicted.size() != desired.size())
        throw std::invalid_argument("PairedSeries: length mismatch");
    if (predicted.empty()) throw std::invalid_argument("PairedSeries: empty series");
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (!std::isfinite(predicted[i]) || !std::isfinite(desired[i]))
            throw std::invalid_argument("PairedSeries: non-finite value");
    }
}

double rmse(std::span<const double> predicted, std::span<const double> desired) {
    if (predicted.size() != desired.size())
        throw std::invalid_argument("rmse: length mismatch");
    if (predicted.empty()) throw std::invalid_argument("rmse: empty series");
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - desired[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(predicted.size()));
}

double rmse(const PairedSeries& s) { return rmse(s.predicted, s.desired); }

std::optional<double> correlation(std::span<const double> predicted,
                                  std::span<const double> desired) {
    if (predicted.size() != desired.size())
        throw std::invalid_argument("correlation: length mismatch");
    if (predicted.size() < 2) throw std::invalid_argument("correlation: need at least 2 points");
    const double n = static_cast<double>(predicted.size());
    double my = 0.0;
    double md = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        my += predicted[i];
        md += desired[i];
    }
    my /= n;
    md /= n;
    double cov = 0.0;
    double vy = 0.0;
    double vd = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double dy = predicted[i] - my;
        const double dd = desired[i] - md;
        cov += dy * dd;
        vy += dy * dy;
        vd += dd * dd;
    }
    if (vy <= 0.0 || vd <= 0.0) return std::nullopt;
    double r = cov / std::sqrt(vy * vd);
    // guard rounding just past the bounds
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;
    return r;
}

std::optional<double> correlation(const PairedSeries& s) {
    return correlation(s.predicted, s.desired);
}

std::optional<double> r_squared(std::span<const double> predicted,
                                std::span<const double> desired) {
    const auto r = correlation(predicted, desired);
    if (!r) return std::nullopt;
    return (*r) * (*r);
}

std::optional<double> r_squared(const PairedSeries& s) {
    return r_squared(s.predicted, s.desired);
}

MeanStd aggregate(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("aggregate: empty input");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) {
        const double d = v - mean;
        var += d * d;
    }
    var /= n;
    return MeanStd{mean, std::sqrt(var)};
}

}  // namespace fnt
