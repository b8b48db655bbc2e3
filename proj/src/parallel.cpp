#include "asrs/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace asrs {

unsigned worker_count_from_env() {
    const char* raw = std::getenv("ASRS_THREADS");
    if (raw == nullptr) return 0;
    std::string_view text(raw);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return 0;
    return value;
}

unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace asrs
