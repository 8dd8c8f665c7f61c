#include "totient/parallel.hpp"

#include <cstdlib>
#include <string>

#include "totient/errors.hpp"

namespace totient {

unsigned resolve_threads(std::optional<unsigned> requested) {
    if (requested) {
        if (*requested == 0) throw ConfigError("thread count must be >= 1");
        return *requested;
    }
    if (const char* env = std::getenv("TOTIENT_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (*end != '\0' || v == 0 || v > 4096) throw ConfigError(std::string("invalid TOTIENT_THREADS=") + env);
        return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace totient
