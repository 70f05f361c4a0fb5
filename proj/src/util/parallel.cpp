#include "bridgerank/util/parallel.hpp"

namespace bridgerank::util {

LockstepPool::LockstepPool(unsigned workers)
    : workers_(workers == 0 ? 1 : workers), start_(workers_), done_(workers_) {
    for (unsigned w = 1; w < workers_; ++w) {
        threads_.emplace_back([this, w] {
            while (true) {
                start_.arrive_and_wait();
                if (stop_) return;
                (*task_)(w);
                done_.arrive_and_wait();
            }
        });
    }
}

LockstepPool::~LockstepPool() {
    stop_ = true;
    if (workers_ > 1) start_.arrive_and_wait();
}

void LockstepPool::run(const std::function<void(unsigned)>& task) {
    task_ = &task;
    if (workers_ > 1) start_.arrive_and_wait();
    task(0);
    if (workers_ > 1) done_.arrive_and_wait();
}

}  // namespace bridgerank::util
