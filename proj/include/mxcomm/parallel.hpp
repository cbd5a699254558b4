#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mxcomm {

/// Worker count from MXCOMM_THREADS, else hardware concurrency (min 1).
std::size_t default_worker_count();

/// Fixed pool of workers executing index ranges. With one worker the tasks
/// run inline on the calling thread.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t workers);
    ~WorkerPool();
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    std::size_t size() const noexcept { return workers_; }

    /// Calls task(index, worker) for every index in [0, count); blocks until
    /// all calls return. The first exception thrown by a task is rethrown.
    void run(std::size_t count, const std::function<void(std::size_t, std::size_t)>& task);

private:
    void loop(std::size_t worker);

    std::size_t workers_;
    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const std::function<void(std::size_t, std::size_t)>* task_ = nullptr;
    std::size_t count_ = 0;
    std::size_t next_ = 0;
    std::size_t active_ = 0;
    std::size_t generation_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
};

} // namespace mxcomm
