#include <netinfer/parallel.hpp>

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace netinfer {

std::size_t resolve_thread_count(std::size_t requested) {
    if (requested > 0) return requested;
    const char* env = std::getenv("NETINFER_THREADS");
    if (!env) return 1;
    std::size_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) return 1;
    return v;
}

} // namespace netinfer
