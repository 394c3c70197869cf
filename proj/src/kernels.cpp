#include "mb/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace mb::kernels {

namespace {

const Ops& pick() {
  const char* force = std::getenv("MB_KERNELS");
  if (force != nullptr) {
    if (std::strcmp(force, "scalar") == 0) return scalar();
    if (std::strcmp(force, "avx2") == 0 && avx2() != nullptr) return *avx2();
    if (std::strcmp(force, "neon") == 0 && neon() != nullptr) return *neon();
    return scalar();
  }
  if (const Ops* ops = avx2()) return *ops;
  if (const Ops* ops = neon()) return *ops;
  return scalar();
}

}  // namespace

const Ops& active() {
  static const Ops& ops = pick();
  return ops;
}

}  // namespace mb::kernels
