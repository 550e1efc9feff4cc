#pragma once

#include <span>
#include <vector>

namespace quadsketch {

/// Pairwise (cascade) summation; error grows with log n instead of n.
double pairwise_sum(std::span<const double> values);

/// Median of the values (mean of the two middle ones for even counts).
double median(std::vector<double> values);

}  // namespace quadsketch
