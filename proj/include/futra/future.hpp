#pragma once

#include <atomic>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "futra/datum.hpp"
#include "futra/error.hpp"

namespace futra {

// Failure value carried through futures (and thrown in sequential mode).
struct EvalError {
  ErrorCode code;
  SourceSpan span;   // span of the originating node
  std::string message;

  Error to_error() const { return Error(code, span, message); }
  static EvalError from(const Error& e) { return EvalError{e.code(), e.span(), e.message()}; }
};

using Result = std::variant<Datum, EvalError>;

inline bool is_error(const Result& r) { return r.index() == 1; }
inline const Datum& result_value(const Result& r) { return std::get<Datum>(r); }
inline const EvalError& result_error(const Result& r) { return std::get<EvalError>(r); }

// Handle to a not-yet-computed Datum; resolved exactly once. Consumers never
// block on a pending handle — they attach continuations, which run
// immediately on the resolving thread (or right away if already resolved).
class FutureState {
 public:
  static std::shared_ptr<FutureState> make() { return std::make_shared<FutureState>(); }

  static std::shared_ptr<FutureState> ready(Result r) {
    auto f = make();
    f->result_.emplace(std::move(r));
    return f;
  }

  void resolve(Result r) {
    std::vector<std::function<void(const Result&)>> pending;
    {
      std::lock_guard<std::mutex> lock(mx_);
      if (result_.has_value()) return;  // resolved exactly once
      result_.emplace(std::move(r));
      pending.swap(continuations_);
    }
    for (auto& fn : pending) fn(*result_);
    cv_.notify_all();
  }

  void then(std::function<void(const Result&)> fn) {
    {
      std::lock_guard<std::mutex> lock(mx_);
      if (!result_.has_value()) {
        continuations_.push_back(std::move(fn));
        return;
      }
    }
    fn(*result_);  // late registration runs immediately
  }

  bool resolved() const {
    std::lock_guard<std::mutex> lock(mx_);
    return result_.has_value();
  }

  // Blocking wait for clients outside the worker pool (workers never call it).
  const Result& wait() {
    std::unique_lock<std::mutex> lock(mx_);
    cv_.wait(lock, [&] { return result_.has_value(); });
    return *result_;
  }

 private:
  mutable std::mutex mx_;
  std::condition_variable cv_;
  std::optional<Result> result_;
  std::vector<std::function<void(const Result&)>> continuations_;
};

using FutureHandle = std::shared_ptr<FutureState>;

// Runs `done` once every handle is resolved. Values arrive in input order,
// independent of resolution timing.
inline void when_all(std::vector<FutureHandle> futures,
                     std::function<void(std::vector<Result>)> done) {
  struct Join {
    std::vector<FutureHandle> futures;
    std::vector<Result> results;
    std::atomic<std::size_t> remaining;
    std::function<void(std::vector<Result>)> done;
  };
  if (futures.empty()) {
    done({});
    return;
  }
  auto join = std::make_shared<Join>();
  join->futures = std::move(futures);
  join->results.resize(join->futures.size(), Result{Datum::nil()});
  join->remaining.store(join->futures.size(), std::memory_order_relaxed);
  join->done = std::move(done);
  for (std::size_t i = 0; i < join->futures.size(); ++i) {
    join->futures[i]->then([join, i](const Result& r) {
      join->results[i] = r;
      if (join->remaining.fetch_sub(1, std::memory_order_acq_rel) == 1)
        join->done(std::move(join->results));
    });
  }
}

}  // namespace futra
