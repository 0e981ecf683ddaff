#include "divmsa/parallel.hpp"

#include <algorithm>

namespace divmsa {

ThreadPool::ThreadPool(std::size_t threads) {
    const std::size_t count = std::max<std::size_t>(1, threads);
    workers_.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        workers_.emplace_back([this] { worker_loop(); });
    }
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    work_ready_.notify_all();
    for (auto& w : workers_) {
        w.join();
    }
}

void ThreadPool::submit(std::function<void()> task) {
    {
        std::lock_guard lock(mutex_);
        ++pending_;
        queue_.push_back(std::move(task));
    }
    work_ready_.notify_one();
}

void ThreadPool::wait_all() {
    std::unique_lock lock(mutex_);
    idle_.wait(lock, [this] { return pending_ == 0; });
    if (first_error_) {
        std::exception_ptr err = std::exchange(first_error_, nullptr);
        lock.unlock();
        std::rethrow_exception(err);
    }
}

void ThreadPool::worker_loop() {
    std::unique_lock lock(mutex_);
    for (;;) {
        work_ready_.wait(lock, [this] { return stop_ || !queue_.empty(); });
        if (queue_.empty()) {
            return; // stop_ set and nothing left to run
        }
        auto task = std::move(queue_.front());
        queue_.pop_front();
        lock.unlock();
        try {
            task();
        } catch (...) {
            std::lock_guard guard(mutex_);
            if (!first_error_) {
                first_error_ = std::current_exception();
            }
        }
        lock.lock();
        if (--pending_ == 0) {
            idle_.notify_all();
        }
    }
}

void parallel_for(ThreadPool& pool, std::size_t begin, std::size_t end,
                  std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    if (begin >= end) {
        return;
    }
    const std::size_t step = std::max<std::size_t>(1, grain);
    const std::size_t total = end - begin;
    const std::size_t chunks = (total + step - 1) / step;

    // The caller participates in chunk claiming, so nested use from inside a
    // pool task cannot deadlock even when every worker is busy.
    if (chunks == 1 || pool.worker_count() == 1) {
        body(begin, end);
        return;
    }

    struct Shared {
        std::atomic<std::size_t> next{0};
        std::atomic<std::size_t> done{0};
        std::size_t begin, end, step, chunks;
        const std::function<void(std::size_t, std::size_t)>* body;
        std::mutex mutex;
        std::condition_variable all_done;
        std::exception_ptr error;
    };
    auto shared = std::make_shared<Shared>();
    shared->begin = begin;
    shared->end = end;
    shared->step = step;
    shared->chunks = chunks;
    shared->body = &body;

    const auto drain = [](const std::shared_ptr<Shared>& s) {
        for (;;) {
            const std::size_t c = s->next.fetch_add(1, std::memory_order_relaxed);
            if (c >= s->chunks) {
                return;
            }
            const std::size_t lo = s->begin + c * s->step;
            const std::size_t hi = std::min(s->end, lo + s->step);
            try {
                (*s->body)(lo, hi);
            } catch (...) {
                std::lock_guard lock(s->mutex);
                if (!s->error) {
                    s->error = std::current_exception();
                }
            }
            if (s->done.fetch_add(1, std::memory_order_acq_rel) + 1 == s->chunks) {
                std::lock_guard lock(s->mutex);
                s->all_done.notify_all();
            }
        }
    };

    const std::size_t helpers =
        std::min(pool.worker_count() - 1, chunks - 1);
    for (std::size_t h = 0; h < helpers; ++h) {
        pool.submit([shared, drain] { drain(shared); });
    }
    drain(shared);

    std::unique_lock lock(shared->mutex);
    shared->all_done.wait(lock, [&] {
        return shared->done.load(std::memory_order_acquire) == shared->chunks;
    });
    if (shared->error) {
        std::rethrow_exception(shared->error);
    }
}

} // namespace divmsa
