#include "schrscale/reference.hpp"

namespace schrscale::reference {

std::complex<double> synth_point_value(const SpectrumModel& model,
                                       const ModeTerms& terms, double x) {
    std::complex<double> sum;
    for (const auto& [n, c] : terms) sum += c * model.eigenfunction(n, x);
    return sum;
}

kernels::WavePoint synth_point(const SpectrumModel& model, const ModeTerms& terms,
                               double x) {
    kernels::WavePoint out;
    for (const auto& [n, c] : terms) {
        out.value += c * model.eigenfunction(n, x);
        out.derivative += c * model.eigenfunction_derivative(n, x);
    }
    return out;
}

std::vector<std::complex<double>> synth_values(const SpectrumModel& model,
                                               const ModeTerms& terms,
                                               const std::vector<double>& xs) {
    std::vector<std::complex<double>> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(synth_point_value(model, terms, x));
    return out;
}

std::vector<kernels::WavePoint> synth_with_derivative(const SpectrumModel& model,
                                                      const ModeTerms& terms,
                                                      const std::vector<double>& xs) {
    std::vector<kernels::WavePoint> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(synth_point(model, terms, x));
    return out;
}

} // namespace schrscale::reference
