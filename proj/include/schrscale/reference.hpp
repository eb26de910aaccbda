#pragma once

#include "schrscale/kernels.hpp"

namespace schrscale::reference {

// Serial mirrors of the evaluation kernels, written as direct sums over
// model.eigenfunction calls with no recurrence sharing and no worker
// parallelism.  They exist to pin down what the fast kernels must compute;
// tests compare the two and the benchmark times them against each other.

std::complex<double> synth_point_value(const SpectrumModel& model,
                                       const ModeTerms& terms, double x);

kernels::WavePoint synth_point(const SpectrumModel& model, const ModeTerms& terms,
                               double x);

std::vector<std::complex<double>> synth_values(const SpectrumModel& model,
                                               const ModeTerms& terms,
                                               const std::vector<double>& xs);

std::vector<kernels::WavePoint> synth_with_derivative(const SpectrumModel& model,
                                                      const ModeTerms& terms,
                                                      const std::vector<double>& xs);

} // namespace schrscale::reference
