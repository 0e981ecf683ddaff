#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace divmsa {

/// Fixed-size worker pool. Tasks may submit further tasks; wait_all() drains
/// everything that is pending at the time of the call, including such
/// follow-ups. A pool asked for 0 threads runs with a single worker.
class ThreadPool {
public:
    explicit ThreadPool(std::size_t threads);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    std::size_t worker_count() const { return workers_.size(); }

    void submit(std::function<void()> task);

    /// Blocks until every submitted task has finished. The first exception
    /// thrown by a task is rethrown here; later ones are dropped.
    void wait_all();

private:
    void worker_loop();

    std::vector<std::thread> workers_;
    std::deque<std::function<void()>> queue_;
    std::mutex mutex_;
    std::condition_variable work_ready_;
    std::condition_variable idle_;
    std::size_t pending_ = 0;
    std::exception_ptr first_error_;
    bool stop_ = false;
};

/// Runs body(begin, end) over chunks of [begin, end). The calling thread
/// claims chunks too, so this is safe to use from inside a pool task without
/// deadlocking, and degenerates to a plain loop on a single-worker pool.
/// Chunk claiming is dynamic; the body must not care about chunk order.
void parallel_for(ThreadPool& pool, std::size_t begin, std::size_t end,
                  std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

} // namespace divmsa
