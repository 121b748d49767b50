#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace selgrade {

// splitmix64; stable across platforms, used wherever seeded determinism is required
struct RandomStream {
    uint64_t state;

    explicit RandomStream(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [a,b)
    double next_in(double a, double b) { return a + (b - a) * next_double(); }

    int next_index(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    RandomStream s(a ^ (0x9e3779b97f4a7c15ull + (b << 6) + (b >> 2)));
    return s.next_u64();
}

// radical inverse in the given base; low-discrepancy point sets per cell
inline double radical_inverse(uint32_t i, uint32_t base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * (i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

// FNV-1a over raw bytes; content hashes for graph caching
struct Fnv1a {
    uint64_t h = 0xcbf29ce484222325ull;

    void bytes(const void* p, size_t n) {
        const unsigned char* c = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < n; ++i) {
            h ^= c[i];
            h *= 0x100000001b3ull;
        }
    }

    void u64(uint64_t v) {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        bytes(b, 8);
    }

    void i64(int64_t v) { u64(static_cast<uint64_t>(v)); }

    void f64(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        u64(bits);
    }

    void str(const std::string& s) {
        u64(s.size());
        bytes(s.data(), s.size());
    }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(16, '0');
        for (int i = 0; i < 16; ++i) out[15 - i] = digits[(h >> (4 * i)) & 0xf];
        return out;
    }
};

}  // namespace selgrade
