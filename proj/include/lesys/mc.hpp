#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace lesys {

constexpr int kStreams = 64;

inline std::uint64_t splitmix64(std::uint64_t& s)
{
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Sub-seed of stream k under a master seed; also used to derive independent seed families
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k)
{
    std::uint64_t s = master ^ (0x6a09e667f3bcc909ULL * (k + 1));
    splitmix64(s);
    return splitmix64(s);
}

// Conversions are written out so results do not depend on the standard library's distributions
class Stream {
public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
    double uniform_open() { return (double(eng_() >> 11) + 0.5) * 0x1.0p-53; }
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform_open(), u2 = uniform();
        double rad = std::sqrt(-2 * std::log(u1));
        spare_ = rad * std::sin(2 * M_PI * u2);
        has_spare_ = true;
        return rad * std::cos(2 * M_PI * u2);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0;
    bool has_spare_ = false;
};

struct MCEstimate {
    double value = 0;
    double std_error = 0;
    long long n_samples = 0;
    std::uint64_t seed = 0;
};

struct MCVector {
    std::vector<double> value, std_error;
    long long n_samples = 0;
    std::uint64_t seed = 0;
    MCEstimate component(size_t i) const { return {value[i], std_error[i], n_samples, seed}; }
};

int default_threads();

// Runs work(stream_index, Stream&, count, acc) for every stream; acc has dim entries that the
// callback fills with per-stream sums. Streams are distributed over threads but reduced in
// stream order, so the result is independent of the thread count.
template <class Work>
std::vector<std::vector<double>> run_streams(long long n_samples, std::uint64_t seed, int threads, int dim, Work work)
{
    std::vector<std::vector<double>> acc(kStreams, std::vector<double>(dim, 0.0));
    auto job = [&](int k) {
        long long count = n_samples / kStreams + (k < n_samples % kStreams ? 1 : 0);
        Stream st(derive_seed(seed, k));
        work(k, st, count, acc[k]);
    };
    if (threads <= 1) {
        for (int k = 0; k < kStreams; ++k) job(k);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (int k = t; k < kStreams; k += threads) job(k);
            });
        for (auto& th : pool) th.join();
    }
    return acc;
}

// Batch means over streams: value = total/n, error from the spread of per-stream means
MCVector batch_means(const std::vector<std::vector<double>>& sums, long long n_samples, std::uint64_t seed);

// Plain per-sample estimator: f(Stream&, double* out) writes dim values for one sample
template <class F>
MCVector mc_mean(long long n_samples, std::uint64_t seed, int threads, int dim, F f)
{
    auto sums = run_streams(n_samples, seed, threads, dim, [&](int, Stream& st, long long count, std::vector<double>& acc) {
        std::vector<double> out(dim);
        for (long long i = 0; i < count; ++i) {
            f(st, out.data());
            for (int j = 0; j < dim; ++j) acc[j] += out[j];
        }
    });
    return batch_means(sums, n_samples, seed);
}

}  // namespace lesys
