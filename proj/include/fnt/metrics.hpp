#pragma once

#include <optional>
#include <span>
#include <vector>

namespace fnt {

// A prediction/target pair. Construction validates equal length >= 1 and
// finite values.
struct PairedSeries {
    std::vector<double> predicted;
    std::vector<double> desired;

    PairedSeries(std::vector<double> y, std::vector<double> d);
};

// Root mean square error: sqrt(mean((y_i - d_i)^2)).
double rmse(std::span<const double> predicted, std::span<const double> desired);
double rmse(const PairedSeries& s);

// Pearson correlation coefficient in [-1, 1]. Returns nullopt when either
// series has zero variance — undefined correlation is reported explicitly,
// never silently as 0. Requires length >= 2.
std::optional<double> correlation(std::span<const double> predicted,
                                  std::span<const double> desired);
std::optional<double> correlation(const PairedSeries& s);

// Squared correlation coefficient, in [0, 1].
std::optional<double> r_squared(std::span<const double> predicted,
                                std::span<const double> desired);
std::optional<double> r_squared(const PairedSeries& s);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation (divisor N)
};

MeanStd aggregate(std::span<const double> values);

}  // namespace fnt
