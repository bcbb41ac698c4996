#pragma once

#include <exception>
#include <mutex>

namespace affdim {

/// Carries the first exception out of an OpenMP region, where throwing
/// across the region boundary would terminate the program.
class ErrorSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace affdim
