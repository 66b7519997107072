#include "sigflip/parallel.hpp"

#include <cstdlib>
#include <string>

namespace sigflip {

int resolve_threads(int requested) {
  int n;
  if (requested > 0) {
    n = requested;
  } else {
    unsigned hw = std::thread::hardware_concurrency();
    n = static_cast<int>(hw == 0 ? 1 : hw);
    if (n > 8) n = 8;
  }
  if (const char* env = std::getenv("SIGFLIP_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap >= 1 && cap < n) n = cap;
    } catch (...) {
      // unparseable value behaves as absent
    }
  }
  return n < 1 ? 1 : n;
}

}  // namespace sigflip
