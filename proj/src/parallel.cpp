#include "dhym/parallel.hpp"

#include <cstdlib>
#include <string>

namespace dhym {

std::size_t worker_count() {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("DHYM_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
        } catch (...) {
        }
    }
    return hw;
}

}  // namespace dhym
