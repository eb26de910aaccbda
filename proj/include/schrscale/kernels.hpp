#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "schrscale/spectrum.hpp"

namespace schrscale {

// Explicit mode expansion: ascending (index, coefficient) pairs.
using ModeTerms = std::vector<std::pair<long, std::complex<double>>>;

namespace kernels {

struct WavePoint {
    std::complex<double> value;
    std::complex<double> derivative;
};

// psi(x) = sum c_n phi_n(x) at one position.  Box modes ride a rotation
// recurrence for sin(n theta), cos(n theta) (one sincos per point instead of
// one per mode, falling back to direct calls for sparse expansions);
// oscillator modes walk the Hermite-function recurrence once.
std::complex<double> synth_point_value(const SpectrumModel& model,
                                       const ModeTerms& terms, double x);

// psi(x) and psi'(x) together, sharing the per-point recurrence work.
WavePoint synth_point(const SpectrumModel& model, const ModeTerms& terms, double x);

// Batched evaluation over positions, parallel across points.  Each point is
// computed independently by the serial per-point core, so results are
// bit-identical for any worker count.
std::vector<std::complex<double>> synth_values(const SpectrumModel& model,
                                               const ModeTerms& terms,
                                               const std::vector<double>& xs);

std::vector<WavePoint> synth_with_derivative(const SpectrumModel& model,
                                             const ModeTerms& terms,
                                             const std::vector<double>& xs);

} // namespace kernels
} // namespace schrscale
