#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace futra {

// Worker pool with per-worker run queues and work stealing. A worker pushes
// and pops its own queue LIFO and steals FIFO from the others. Shutdown
// drains: queued tasks (and tasks they spawn) all run before workers exit,
// so error-discarded subtrees still complete.
class Scheduler {
 public:
  using Task = std::function<void()>;

  explicit Scheduler(unsigned workers)
      : queues_(workers ? workers : 1) {
    for (auto& q : queues_) q = std::make_unique<WorkerQueue>();
    threads_.reserve(queues_.size());
    for (unsigned w = 0; w < queues_.size(); ++w)
      threads_.emplace_back([this, w] { worker_loop(w); });
  }

  ~Scheduler() {
    {
      std::lock_guard<std::mutex> lock(idle_mx_);
      stop_ = true;
    }
    idle_cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  unsigned worker_count() const { return static_cast<unsigned>(queues_.size()); }

  // Index of the calling worker, or -1 off the pool.
  static int current_worker() { return tl_worker_; }

  void submit(Task task) {
    int me = tl_worker_;
    std::size_t target = me >= 0 && owner_ == this
                             ? static_cast<std::size_t>(me)
                             : rr_.fetch_add(1, std::memory_order_relaxed) % queues_.size();
    {
      std::lock_guard<std::mutex> lock(queues_[target]->mx);
      queues_[target]->q.push_back(std::move(task));
    }
    pending_.fetch_add(1, std::memory_order_release);
    idle_cv_.notify_one();
  }

 private:
  struct WorkerQueue {
    std::mutex mx;
    std::deque<Task> q;
  };

  bool try_pop(std::size_t idx, Task& out, bool steal) {
    WorkerQueue& wq = *queues_[idx];
    std::lock_guard<std::mutex> lock(wq.mx);
    if (wq.q.empty()) return false;
    if (steal) {
      out = std::move(wq.q.front());
      wq.q.pop_front();
    } else {
      out = std::move(wq.q.back());
      wq.q.pop_back();
    }
    return true;
  }

  bool find_task(unsigned me, Task& out) {
    if (try_pop(me, out, /*steal=*/false)) return true;
    for (std::size_t k = 1; k < queues_.size(); ++k)
      if (try_pop((me + k) % queues_.size(), out, /*steal=*/true)) return true;
    return false;
  }

  void worker_loop(unsigned me) {
    tl_worker_ = static_cast<int>(me);
    owner_ = this;
    Task task;
    while (true) {
      if (find_task(me, task)) {
        pending_.fetch_sub(1, std::memory_order_acq_rel);
        task();
        task = nullptr;
        continue;
      }
      std::unique_lock<std::mutex> lock(idle_mx_);
      idle_cv_.wait(lock, [&] {
        return stop_ || pending_.load(std::memory_order_acquire) > 0;
      });
      if (stop_ && pending_.load(std::memory_order_acquire) == 0) return;
    }
  }

  static thread_local int tl_worker_;
  static thread_local const Scheduler* owner_;

  std::vector<std::unique_ptr<WorkerQueue>> queues_;
  std::vector<std::thread> threads_;
  std::atomic<std::size_t> pending_{0};
  std::atomic<std::size_t> rr_{0};
  std::mutex idle_mx_;
  std::condition_variable idle_cv_;
  bool stop_ = false;
};

inline thread_local int Scheduler::tl_worker_ = -1;
inline thread_local const Scheduler* Scheduler::owner_ = nullptr;

}  // namespace futra
