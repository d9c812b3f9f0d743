#pragma once

// Instrumentation for the linear-space contracts: algorithms wrap their DP
// row buffers in TrackedBuffer, and a test can attach a SpaceProbe to the
// current thread to observe the peak number of simultaneously live cells.

#include <algorithm>
#include <cstddef>
#include <vector>

namespace s2s {

struct SpaceProbe {
  std::size_t live_cells = 0;
  std::size_t peak_cells = 0;

  void acquire(std::size_t n) {
    live_cells += n;
    peak_cells = std::max(peak_cells, live_cells);
  }
  void release(std::size_t n) { live_cells -= n; }
};

namespace detail {

inline thread_local SpaceProbe* active_probe = nullptr;

}  // namespace detail

/// Attaches a probe to this thread for the current scope.
class ProbeScope {
 public:
  explicit ProbeScope(SpaceProbe& probe) : previous_(detail::active_probe) {
    detail::active_probe = &probe;
  }
  ~ProbeScope() { detail::active_probe = previous_; }
  ProbeScope(const ProbeScope&) = delete;
  ProbeScope& operator=(const ProbeScope&) = delete;

 private:
  SpaceProbe* previous_;
};

namespace detail {

/// DP cell buffer whose lifetime is reported to the active probe.
template <class T>
class TrackedBuffer {
 public:
  explicit TrackedBuffer(std::size_t n, T fill = T{}) : data_(n, fill) {
    if (active_probe) active_probe->acquire(n);
  }
  ~TrackedBuffer() {
    if (active_probe) active_probe->release(data_.size());
  }
  TrackedBuffer(const TrackedBuffer&) = delete;
  TrackedBuffer& operator=(const TrackedBuffer&) = delete;

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  std::size_t size() const { return data_.size(); }
  std::vector<T>& vec() { return data_; }
  void swap(TrackedBuffer& other) { data_.swap(other.data_); }

 private:
  std::vector<T> data_;
};

}  // namespace detail
}  // namespace s2s
