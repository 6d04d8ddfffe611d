#pragma once

#include "relaylab/fading.hpp"
#include "relaylab/rate_engine.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace relaylab {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct SampleConfig {
    std::uint64_t n_samples = 200000;
    std::uint64_t master_seed = kDefaultSeed;
    unsigned threads = 0;  ///< 0 picks the hardware concurrency
};

/// Philox4x32-10 block function (counter-based, so any sample index is reachable directly).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// The i-th pair of the stream keyed by `seed`: s = -ln U with U uniform on (0, 1).
FadingPair sample_pair(std::uint64_t seed, std::uint64_t index);
std::vector<FadingPair> sample_pairs(const SampleConfig& sc);

/// Runs body(begin, end) over [0, n) in fixed-size chunks on a small thread pool.
/// Chunk boundaries do not depend on the thread count.
void parallel_chunks(std::uint64_t n, unsigned threads,
                     const std::function<void(std::uint64_t chunk, std::uint64_t begin, std::uint64_t end)>& body);
inline constexpr std::uint64_t kChunkSize = 4096;

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;  ///< jackknife standard error of the mean
    std::uint64_t n = 0;
};

using GainMap = std::function<double(const FadingPair&)>;

/// Sample mean of g over the pair stream. Partial sums are merged in chunk order,
/// so the result is bit-identical for any thread count.
MeanEstimate mc_expectation(const SampleConfig& sc, const std::function<double(const FadingPair&)>& g);

/// Sorted-sample step CDF.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> samples);

    double cdf(double x) const;
    const std::vector<double>& samples() const noexcept { return sorted_; }
    /// Kolmogorov-Smirnov sup distance to a model law (model cdf evaluated at every sample).
    double ks_distance(const DistributionModel& model, unsigned threads = 0) const;

private:
    std::vector<double> sorted_;
};

EmpiricalDistribution empirical_distribution(const GainMap& gain, const SampleConfig& sc);

/// Mean layered rate at the mapped gain, E[R(gain(s1, s2))], with standard error.
MeanEstimate empirical_avg_rate(const GainMap& gain, const PowerAllocation& alloc, const SampleConfig& sc);

}  // namespace relaylab
