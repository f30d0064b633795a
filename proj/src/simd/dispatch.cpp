#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "bfe/error.hpp"
#include "bfe/simd/kernels.hpp"

namespace bfe::simd {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Level detect() {
  if (const char* env = std::getenv("BFE_SIMD")) {
    const std::string_view want{env};
    if (want == "scalar") return Level::Scalar;
    if (want == "avx2" && supported(Level::Avx2)) return Level::Avx2;
    if (want == "neon" && supported(Level::Neon)) return Level::Neon;
  }
  if (supported(Level::Avx2)) return Level::Avx2;
  if (supported(Level::Neon)) return Level::Neon;
  return Level::Scalar;
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{detect()};
  return level;
}

}  // namespace

const char* name(Level level) {
  switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
    case Level::Neon: return "neon";
  }
  return "unknown";
}

bool supported(Level level) {
  switch (level) {
    case Level::Scalar: return true;
    case Level::Avx2: return detail::avx2_table() != nullptr && cpu_has_avx2();
    case Level::Neon: return detail::neon_table() != nullptr;
  }
  return false;
}

Level active_level() { return current().load(std::memory_order_relaxed); }

void set_level(Level level) {
  if (!supported(level)) {
    fail(ErrorKind::InvalidArgument, std::string("SIMD level not supported: ") + name(level));
  }
  current().store(level, std::memory_order_relaxed);
}

const KernelTable& kernels(Level level) {
  switch (level) {
    case Level::Avx2:
      if (supported(level)) return *detail::avx2_table();
      break;
    case Level::Neon:
      if (supported(level)) return *detail::neon_table();
      break;
    case Level::Scalar:
      break;
  }
  return detail::scalar_table;
}

const KernelTable& kernels() { return kernels(active_level()); }

}  // namespace bfe::simd
