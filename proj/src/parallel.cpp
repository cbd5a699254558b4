#include "mxcomm/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <string>

namespace mxcomm {

std::size_t default_worker_count() {
    if (const char* env = std::getenv("MXCOMM_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n > 0) return static_cast<std::size_t>(n);
        } catch (const std::exception&) {
        }
    }
    const auto hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

WorkerPool::WorkerPool(std::size_t workers) : workers_(workers > 0 ? workers : 1) {
    if (workers_ == 1) return;
    threads_.reserve(workers_);
    for (std::size_t w = 0; w < workers_; ++w) threads_.emplace_back([this, w] { loop(w); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
}

void WorkerPool::run(std::size_t count, const std::function<void(std::size_t, std::size_t)>& task) {
    if (count == 0) return;
    if (threads_.empty()) {
        for (std::size_t i = 0; i < count; ++i) task(i, 0);
        return;
    }
    std::unique_lock lock(mutex_);
    task_ = &task;
    count_ = count;
    next_ = 0;
    active_ = 0;
    error_ = nullptr;
    ++generation_;
    wake_.notify_all();
    done_.wait(lock, [this] { return next_ >= count_ && active_ == 0; });
    task_ = nullptr;
    if (error_) std::rethrow_exception(error_);
}

void WorkerPool::loop(std::size_t worker) {
    std::size_t seen = 0;
    std::unique_lock lock(mutex_);
    for (;;) {
        wake_.wait(lock, [&] { return stop_ || (generation_ != seen && task_ && next_ < count_); });
        if (stop_) return;
        while (task_ && next_ < count_) {
            const std::size_t index = next_++;
            ++active_;
            lock.unlock();
            try {
                (*task_)(index, worker);
            } catch (...) {
                lock.lock();
                if (!error_) error_ = std::current_exception();
                next_ = count_;
                --active_;
                continue;
            }
            lock.lock();
            --active_;
        }
        seen = generation_;
        if (active_ == 0) done_.notify_all();
    }
}

} // namespace mxcomm
