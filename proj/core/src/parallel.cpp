#include "vortnet/parallel.hpp"

#include <cstdlib>
#include <string>

namespace vortnet {

std::size_t default_workers() {
  if (const char* env = std::getenv("VORTNET_THREADS"); env && *env) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
      // fall through to hardware concurrency
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace vortnet
