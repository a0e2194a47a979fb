#pragma once
// Small concurrency utilities shared by the HTTP clients and the run
// orchestrator: a run-time-sized in-flight gate and a fixed-pool task runner.

#include "ksarag/errors.hpp"

#include <condition_variable>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ksarag::concurrency {

// Counting gate with a limit chosen at run time (std::counting_semaphore
// fixes its ceiling at compile time, which does not fit configured caps).
class InflightGate {
public:
    explicit InflightGate(int limit) : limit_(limit) {
        if (limit <= 0) throw ParameterError("in-flight limit must be positive");
    }

    InflightGate(const InflightGate&) = delete;
    InflightGate& operator=(const InflightGate&) = delete;

    void acquire() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return active_ < limit_; });
        ++active_;
    }

    void release() {
        {
            std::lock_guard lock(mu_);
            --active_;
        }
        cv_.notify_one();
    }

    class Ticket {
    public:
        explicit Ticket(InflightGate& gate) : gate_(&gate) { gate_->acquire(); }
        ~Ticket() {
            if (gate_ != nullptr) gate_->release();
        }
        Ticket(const Ticket&) = delete;
        Ticket& operator=(const Ticket&) = delete;

    private:
        InflightGate* gate_;
    };

private:
    std::mutex mu_;
    std::condition_variable cv_;
    int limit_;
    int active_ = 0;
};

// Runs every task on a pool of `workers` threads. Any escaped exception is
// captured and the first one is rethrown after all tasks finish, so a failed
// task never silently vanishes and never tears down its siblings mid-flight.
inline void run_parallel(int workers, const std::vector<std::function<void()>>& tasks) {
    if (workers <= 0) throw ParameterError("worker count must be positive");
    if (tasks.empty()) return;
    if (workers == 1 || tasks.size() == 1) {
        std::exception_ptr first;
        for (const auto& task : tasks) {
            try {
                task();
            } catch (...) {
                if (!first) first = std::current_exception();
            }
        }
        if (first) std::rethrow_exception(first);
        return;
    }

    std::mutex mu;
    std::size_t next = 0;
    std::exception_ptr first;
    auto worker = [&] {
        while (true) {
            std::size_t idx;
            {
                std::lock_guard lock(mu);
                if (next >= tasks.size()) return;
                idx = next++;
            }
            try {
                tasks[idx]();
            } catch (...) {
                std::lock_guard lock(mu);
                if (!first) first = std::current_exception();
            }
        }
    };

    std::vector<std::thread> threads;
    int n = std::min<int>(workers, static_cast<int>(tasks.size()));
    threads.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first) std::rethrow_exception(first);
}

}  // namespace ksarag::concurrency
