// Serial reference against the OpenMP kernels: wall time and bit-identity.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>

#include "pwmix/correlation.hpp"
#include "pwmix/matrix_builder.hpp"
#include "pwmix/search_kernels.hpp"

using namespace pwmix;

namespace {

double seconds(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void bench_scan(const char* label, const SlopeSignature& f, int n, bool mixing, int workers) {
    const IntegerMatrix a = reduced_markov(ComposedMap(f, IntervalPermutation::identity(n)));
    std::optional<SlopeSignature> sig;
    if (mixing) sig = f;
    PermutationScores serial, parallel;
    const double ts = seconds([&] { serial = scan_all_permutations(a, sig, Execution::serial); });
    const double tp = seconds([&] { parallel = scan_all_permutations(a, sig, Execution::parallel, workers); });
    const bool same = same_bits(serial.tau, parallel.tau) && serial.mixing == parallel.mixing;
    std::printf("%-28s N=%d  serial %8.3fs  parallel(%d) %8.3fs  speedup %5.2f  identical %s\n", label, n, ts,
                resolve_workers(workers), tp, ts / tp, same ? "yes" : "NO");
}

void bench_mc(int workers) {
    const ComposedMap g(SlopeSignature::parse("+-+"), IntervalPermutation::parse("2,5,3,1,4"));
    const auto phi = StepObservable::indicator(5, 2);
    MonteCarloEstimate serial, parallel;
    const double ts = seconds([&] { serial = monte_carlo_correlation(g, phi, phi, 6, 1'000'000, 3, Execution::serial); });
    const double tp =
        seconds([&] { parallel = monte_carlo_correlation(g, phi, phi, 6, 1'000'000, 3, Execution::parallel, workers); });
    const bool same = std::memcmp(&serial.estimate, &parallel.estimate, sizeof(double)) == 0 &&
                      std::memcmp(&serial.standard_error, &parallel.standard_error, sizeof(double)) == 0;
    std::printf("%-28s 1e6 samples  serial %8.3fs  parallel(%d) %8.3fs  speedup %5.2f  identical %s\n",
                "monte carlo n=6", ts, resolve_workers(workers), tp, ts / tp, same ? "yes" : "NO");
}

} // namespace

int main(int argc, char** argv) {
    const int workers = argc > 1 ? std::atoi(argv[1]) : 0;
    bench_scan("tau scan, zigzag m=3", SlopeSignature::parse("+-+"), 7, false, workers);
    bench_scan("tau scan, zigzag m=3", SlopeSignature::parse("+-+"), 8, false, workers);
    bench_scan("tau + mixing scan, tent", SlopeSignature::parse("+-"), 8, true, workers);
    bench_mc(workers);
    return 0;
}
