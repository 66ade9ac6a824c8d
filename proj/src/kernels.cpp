#include "strongbath/kernels.hpp"

#include <atomic>

namespace strongbath::kernels {

namespace {

std::atomic<const Backend*> g_active{nullptr};

const Backend* detect() {
  if (const Backend* avx2 = avx2_backend()) return avx2;
  return &scalar_backend();
}

}  // namespace

const Backend& active() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (!b) {
    b = detect();
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

bool select(const std::string& name) {
  if (name == "auto") {
    g_active.store(detect(), std::memory_order_release);
    return true;
  }
  if (name == "scalar") {
    g_active.store(&scalar_backend(), std::memory_order_release);
    return true;
  }
  if (name == "avx2") {
    if (const Backend* avx2 = avx2_backend()) {
      g_active.store(avx2, std::memory_order_release);
      return true;
    }
    return false;
  }
  return false;
}

}  // namespace strongbath::kernels
