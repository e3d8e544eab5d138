#pragma once

#include "neurogate/signal/types.hpp"

namespace neurogate::signal {

// Per-channel RMS of the window after band-pass filtering to [lo, hi] Hz.
std::vector<double> band_rms(const EegWindow& w, double lo_hz, double hi_hz);

// Mean over channels of the baseline z-score of muscle-band RMS.
// Throws std::invalid_argument when channel counts disagree.
double artifact_score(const EegWindow& w, const BaselineStats& baseline,
                      double lo_hz = 20.0, double hi_hz = 45.0);

// Baseline statistics from a designated calibration segment, typically the
// first seconds of a session. Needs at least two windows; the standard
// deviation is floored at stddev_floor.
BaselineStats compute_baseline(const std::vector<EegWindow>& windows,
                               double lo_hz = 20.0, double hi_hz = 45.0,
                               double stddev_floor = 1e-8);

}  // namespace neurogate::signal
