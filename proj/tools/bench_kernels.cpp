// Times the parallel synthesis kernels against the serial reference on the
// same workloads and reports throughput plus the largest pointwise gap.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "schrscale/kernels.hpp"
#include "schrscale/parallel.hpp"
#include "schrscale/reference.hpp"
#include "schrscale/spectrum.hpp"

namespace {

using schrscale::ModeTerms;
using schrscale::SpectrumModel;

std::vector<double> make_grid(double lo, double hi, long points) {
    std::vector<double> xs(std::size_t(points), 0.0);
    const double spacing = (hi - lo) / double(points - 1);
    for (long i = 0; i < points; ++i) xs[std::size_t(i)] = lo + spacing * double(i);
    return xs;
}

ModeTerms make_terms(long count, long first) {
    ModeTerms terms;
    terms.reserve(std::size_t(count));
    for (long k = 0; k < count; ++k) {
        const double mag = 1.0 / double(k + 1);
        terms.emplace_back(first + k, std::polar(mag, 0.37 * double(k)));
    }
    return terms;
}

template <typename F>
double time_ms(F&& body, int repeats) {
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < repeats; ++r) body();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() /
           double(repeats);
}

double max_gap(const std::vector<std::complex<double>>& a,
               const std::vector<std::complex<double>>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

void run_case(const char* label, const SpectrumModel& model, const ModeTerms& terms,
              const std::vector<double>& xs, int repeats) {
    std::vector<std::complex<double>> parallel_out;
    std::vector<std::complex<double>> serial_out;
    const double par_ms = time_ms(
        [&] { parallel_out = schrscale::kernels::synth_values(model, terms, xs); },
        repeats);
    const double ser_ms = time_ms(
        [&] { serial_out = schrscale::reference::synth_values(model, terms, xs); },
        repeats);
    std::printf("%-28s %6zu modes x %6zu pts  parallel %8.3f ms  serial %8.3f ms  "
                "speedup %5.2fx  max gap %.3e\n",
                label, terms.size(), xs.size(), par_ms, ser_ms, ser_ms / par_ms,
                max_gap(parallel_out, serial_out));
}

} // namespace

int main(int argc, char** argv) {
    int repeats = 5;
    if (argc > 1) repeats = std::max(1, std::atoi(argv[1]));
    std::printf("workers: %d, repeats: %d\n", schrscale::max_workers(), repeats);

    const SpectrumModel box = SpectrumModel::box();
    const SpectrumModel osc = SpectrumModel::oscillator();

    run_case("box dense head", box, make_terms(256, 1), make_grid(0.0, box.length(), 8192),
             repeats);
    run_case("box sparse high modes", box, make_terms(24, 4001),
             make_grid(0.0, box.length(), 8192), repeats);
    run_case("oscillator head", osc, make_terms(128, 0), make_grid(-12.0, 12.0, 8192),
             repeats);
    run_case("oscillator wide", osc, make_terms(512, 0), make_grid(-40.0, 40.0, 4096),
             repeats);
    return 0;
}
