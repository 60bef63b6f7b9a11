#include "distgeo/sampling.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "distgeo/errors.hpp"

namespace distgeo {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double halton(std::uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

}  // namespace

std::vector<Vec<double>> sample_box(const SampleSpec& spec) {
    if (spec.box.empty()) throw InputError("sampling requires a box");
    for (const auto& [lo, hi] : spec.box)
        if (!(lo < hi)) throw InputError("sampling box is empty in some coordinate");
    if (static_cast<std::size_t>(sizeof kPrimes / sizeof *kPrimes) < spec.box.size())
        throw InputError("sampling box has too many dimensions");

    const std::uint64_t offset = 1 + (spec.seed * 7919) % 104729;
    std::vector<Vec<double>> points;
    points.reserve(spec.count);
    for (int i = 0; i < spec.count; ++i) {
        Vec<double> p(spec.box.size());
        for (std::size_t d = 0; d < spec.box.size(); ++d) {
            double u = halton(offset + i, kPrimes[d]);
            p[d] = spec.box[d][0] + u * (spec.box[d][1] - spec.box[d][0]);
        }
        points.push_back(std::move(p));
    }
    return points;
}

void parallel_for(int n, const std::function<void(int)>& body) {
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("DISTGEO_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) threads = t;
    }
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace distgeo
