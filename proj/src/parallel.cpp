#include "sphuni/parallel.hpp"

#include <cstdlib>
#include <string>

namespace sphuni {

unsigned resolve_thread_count(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    if (const char* env = std::getenv("SPHUNI_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return static_cast<unsigned>(parsed);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace sphuni
