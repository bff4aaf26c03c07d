#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

namespace futra {

// Per-node performance counters. Cells accumulate atomically from any worker;
// a node's inclusive time runs from its evaluation request to the resolution
// of its future, exclusive time covers only the node's own apply step.
struct CounterSet {
  std::atomic<std::uint64_t> eval_count{0};
  std::atomic<std::uint64_t> inclusive_ns{0};
  std::atomic<std::uint64_t> exclusive_ns{0};

  void reset() {
    eval_count.store(0, std::memory_order_relaxed);
    inclusive_ns.store(0, std::memory_order_relaxed);
    exclusive_ns.store(0, std::memory_order_relaxed);
  }
};

struct TraceEvent {
  char phase;        // 'B' or 'E'
  int node_id;       // counter-cell id the event accounts to
  std::string kind;
  int worker;        // resolving worker (0 in sequential mode)
  double ts_us;      // run-relative, monotonic clock
};

// Collects begin/end events for the apply step of every node evaluation.
class TraceSink {
 public:
  void begin_run(std::chrono::steady_clock::time_point start) {
    std::lock_guard<std::mutex> lock(mx_);
    start_ = start;
  }

  void emit(char phase, int node_id, const std::string& kind, int worker,
            std::chrono::steady_clock::time_point when) {
    std::lock_guard<std::mutex> lock(mx_);
    double ts = std::chrono::duration<double, std::micro>(when - start_).count();
    events_.push_back(TraceEvent{phase, node_id, kind, worker, ts});
  }

  std::vector<TraceEvent> snapshot() const {
    std::lock_guard<std::mutex> lock(mx_);
    return events_;
  }

  void clear() {
    std::lock_guard<std::mutex> lock(mx_);
    events_.clear();
  }

 private:
  mutable std::mutex mx_;
  std::chrono::steady_clock::time_point start_{};
  std::vector<TraceEvent> events_;
};

// Trace-event JSON stream, loadable by standard trace viewers.
inline std::string export_trace(const std::vector<TraceEvent>& events) {
  std::string out = "[";
  bool first = true;
  char ts_buf[64];
  for (const auto& e : events) {
    if (!first) out += ",";
    first = false;
    std::snprintf(ts_buf, sizeof(ts_buf), "%.3f", e.ts_us);
    out += "\n  {\"name\": \"" + e.kind + "\", \"ph\": \"";
    out += e.phase;
    out += "\", \"ts\": ";
    out += ts_buf;
    out += ", \"pid\": 1, \"tid\": " + std::to_string(e.worker) +
           ", \"args\": {\"node\": " + std::to_string(e.node_id) + "}}";
  }
  out += first ? "]" : "\n]";
  out += "\n";
  return out;
}

inline std::string export_trace(const TraceSink& sink) { return export_trace(sink.snapshot()); }

}  // namespace futra
