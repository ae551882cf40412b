#pragma once

#include <string>

#include "emff/sim_engine.hpp"

namespace emff {

/// Self-contained SVG for one ordered pair: five stacked panels with the
/// time series |q|, |r_hat|, v_hat, I and F_hat. Output is deterministic:
/// identical telemetry gives byte-identical text.
std::string pair_plot_svg(const Telemetry& tel, int i, int j);

} // namespace emff
