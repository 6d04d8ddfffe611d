#include "relaylab/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace relaylab {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    constexpr std::uint64_t kM0 = 0xD2511F53u;
    constexpr std::uint64_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = kM0 * c[0];
        const std::uint64_t p1 = kM1 * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

namespace {

// 53 random bits mapped to the open interval (0, 1).
double open_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

FadingPair sample_pair(std::uint64_t seed, std::uint64_t index) {
    const auto r = philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0u, 0u},
                              {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    return {-std::log(open_unit(r[0], r[1])), -std::log(open_unit(r[2], r[3]))};
}

std::vector<FadingPair> sample_pairs(const SampleConfig& sc) {
    std::vector<FadingPair> out(sc.n_samples);
    for (std::uint64_t i = 0; i < sc.n_samples; ++i) out[i] = sample_pair(sc.master_seed, i);
    return out;
}

void parallel_chunks(std::uint64_t n, unsigned threads,
                     const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& body) {
    const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
    auto run_chunk = [&](std::uint64_t c) { body(c, c * kChunkSize, std::min(n, (c + 1) * kChunkSize)); };
    if (threads <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::uint64_t c = next++; c < chunks; c = next++) {
                try {
                    run_chunk(c);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = chunks;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

MeanEstimate mc_expectation(const SampleConfig& sc, const std::function<double(const FadingPair&)>& g) {
    struct Partial {
        double n = 0.0, mean = 0.0, m2 = 0.0;
    };
    const std::uint64_t chunks = (sc.n_samples + kChunkSize - 1) / kChunkSize;
    std::vector<Partial> parts(chunks);
    parallel_chunks(sc.n_samples, sc.threads, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
        Partial p;
        for (std::uint64_t i = begin; i < end; ++i) {
            const double v = g(sample_pair(sc.master_seed, i));
            p.n += 1.0;
            const double delta = v - p.mean;
            p.mean += delta / p.n;
            p.m2 += delta * (v - p.mean);
        }
        parts[c] = p;
    });
    Partial total;
    for (const Partial& p : parts) {
        if (p.n == 0.0) continue;
        const double n = total.n + p.n;
        const double delta = p.mean - total.mean;
        total.mean += delta * p.n / n;
        total.m2 += p.m2 + delta * delta * total.n * p.n / n;
        total.n = n;
    }
    MeanEstimate out;
    out.n = sc.n_samples;
    out.mean = total.mean;
    // Leave-one-out jackknife of the sample mean reduces to sqrt(var/n).
    out.std_error = total.n > 1.0 ? std::sqrt(total.m2 / (total.n - 1.0) / total.n) : 0.0;
    return out;
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : sorted_(std::move(samples)) {
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double x) const {
    if (sorted_.empty()) return 0.0;
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::ks_distance(const DistributionModel& model, unsigned threads) const {
    const std::uint64_t n = sorted_.size();
    if (n == 0) return 0.0;
    const double inv = 1.0 / static_cast<double>(n);
    const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<double> worst(chunks, 0.0);
    parallel_chunks(n, threads, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
        double d = 0.0;
        for (std::uint64_t i = begin; i < end; ++i) {
            const double f = model.cdf(sorted_[i]);
            d = std::max({d, static_cast<double>(i + 1) * inv - f, f - static_cast<double>(i) * inv});
        }
        worst[c] = d;
    });
    return *std::max_element(worst.begin(), worst.end());
}

EmpiricalDistribution empirical_distribution(const GainMap& gain, const SampleConfig& sc) {
    std::vector<double> values(sc.n_samples);
    parallel_chunks(sc.n_samples, sc.threads, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) values[i] = gain(sample_pair(sc.master_seed, i));
    });
    return EmpiricalDistribution(std::move(values));
}

MeanEstimate empirical_avg_rate(const GainMap& gain, const PowerAllocation& alloc, const SampleConfig& sc) {
    const LayeredRateTable rate(alloc);
    return mc_expectation(sc, [&](const FadingPair& p) { return rate(gain(p)); });
}

}  // namespace relaylab
