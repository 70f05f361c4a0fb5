#pragma once

#include <barrier>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace bridgerank::util {

// Fixed set of worker threads that repeatedly run one task in lockstep.
// run() returns after every worker (and the caller, as worker 0) finished.
class LockstepPool {
public:
    explicit LockstepPool(unsigned workers);
    ~LockstepPool();

    LockstepPool(const LockstepPool&) = delete;
    LockstepPool& operator=(const LockstepPool&) = delete;

    unsigned size() const noexcept { return workers_; }
    void run(const std::function<void(unsigned worker)>& task);

private:
    unsigned workers_;
    std::barrier<> start_;
    std::barrier<> done_;
    const std::function<void(unsigned)>* task_ = nullptr;
    bool stop_ = false;
    std::vector<std::jthread> threads_;
};

// [begin, end) of the worker-th of `workers` contiguous stripes over n items.
inline std::pair<std::size_t, std::size_t> stripe(std::size_t n, unsigned worker, unsigned workers) {
    const std::size_t per = n / workers, extra = n % workers;
    const std::size_t begin = worker * per + std::min<std::size_t>(worker, extra);
    return {begin, begin + per + (worker < extra ? 1 : 0)};
}

}  // namespace bridgerank::util
