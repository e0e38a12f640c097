#pragma once

#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace pdsim {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedFeature : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TemplateMismatch : std::logic_error {
    using std::logic_error::logic_error;
};
struct InvalidRecord : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InconsistentPlans : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientRecords : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string strfmt(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    char buf[512];
    int n = std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    if (n < 0) return {};
    if (static_cast<size_t>(n) < sizeof(buf)) return std::string(buf, n);
    std::string big(static_cast<size_t>(n) + 1, '\0');
    va_start(args, fmt);
    std::vsnprintf(big.data(), big.size(), fmt, args);
    va_end(args);
    big.resize(static_cast<size_t>(n));
    return big;
}

// fixed 4-decimal formatting used for every number that reaches a dataset
// or golden document, so emitted text is stable across platforms
inline std::string fixed4(double x) {
    if (x == 0.0) x = 0.0;  // normalize -0
    return strfmt("%.4f", x);
}

inline uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(uint64_t v) { return strfmt("%016llx", static_cast<unsigned long long>(v)); }

// index-chunked parallel loop; results must be written to per-index slots
template <typename Fn>
void parallel_for(size_t n, unsigned workers, Fn&& fn) {
    if (workers <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace pdsim
