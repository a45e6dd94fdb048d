#pragma once

#include <string>
#include <vector>

#include "lgbt/experiments.hpp"

namespace lgbt::svg {

/// One panel per series, A on the vertical axis and D on the horizontal,
/// grayscale-to-blue cells labelled with the estimate.
std::string heatmap(const std::vector<ExperimentResult>& rows, const std::string& title);

enum class XAxis { dims, comparisons };

/// Mean ± stderr line chart, one polyline per series.
std::string line_chart(const std::vector<ExperimentResult>& rows, XAxis axis, const std::string& title,
                       const std::string& y_label = "nMSE");

}  // namespace lgbt::svg
