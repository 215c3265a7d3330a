#include "lesys/mc.hpp"

#include <cstdlib>
#include <string>

namespace lesys {

int default_threads()
{
    if (const char* s = std::getenv("LESYS_THREADS")) {
        int n = std::atoi(s);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

MCVector batch_means(const std::vector<std::vector<double>>& sums, long long n_samples, std::uint64_t seed)
{
    const size_t dim = sums.empty() ? 0 : sums[0].size();
    MCVector out;
    out.value.assign(dim, 0);
    out.std_error.assign(dim, 0);
    out.n_samples = n_samples;
    out.seed = seed;
    if (n_samples <= 0) return out;
    std::vector<long long> count(kStreams);
    for (int k = 0; k < kStreams; ++k) count[k] = n_samples / kStreams + (k < n_samples % kStreams ? 1 : 0);
    for (size_t j = 0; j < dim; ++j) {
        double tot = 0;
        for (int k = 0; k < kStreams; ++k) tot += sums[k][j];
        double mean = tot / double(n_samples);
        double ss = 0;
        int used = 0;
        for (int k = 0; k < kStreams; ++k) {
            if (count[k] == 0) continue;
            double d = sums[k][j] / double(count[k]) - mean;
            ss += d * d * double(count[k]);
            ++used;
        }
        out.value[j] = mean;
        // weighted batch variance of the per-stream means; std error of the grand mean
        out.std_error[j] = used > 1 ? std::sqrt(ss / double(used - 1) / double(n_samples)) : 0.0;
    }
    return out;
}

}  // namespace lesys
