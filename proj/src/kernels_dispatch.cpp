#include "spinsim/kernels.hpp"

#include <cstring>

namespace spinsim::kernels {
namespace {

const Ops* detect_best() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  if (avx2_ops() && __builtin_cpu_supports("avx2") &&
      __builtin_cpu_supports("fma"))
    return avx2_ops();
#endif
#if defined(__aarch64__)
  if (neon_ops()) return neon_ops();  // NEON is baseline on aarch64
#endif
  return &scalar_ops();
}

const Ops*& current() {
  static const Ops* sel = detect_best();
  return sel;
}

}  // namespace

const Ops& active() { return *current(); }

bool force_backend(const char* name) {
  if (!name) return false;
  if (std::strcmp(name, "auto") == 0) {
    current() = detect_best();
    return true;
  }
  if (std::strcmp(name, "scalar") == 0) {
    current() = &scalar_ops();
    return true;
  }
  if (std::strcmp(name, "avx2") == 0) {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    if (avx2_ops() && __builtin_cpu_supports("avx2") &&
        __builtin_cpu_supports("fma")) {
      current() = avx2_ops();
      return true;
    }
#endif
    return false;
  }
  if (std::strcmp(name, "neon") == 0) {
    if (neon_ops()) {
      current() = neon_ops();
      return true;
    }
    return false;
  }
  return false;
}

}  // namespace spinsim::kernels
