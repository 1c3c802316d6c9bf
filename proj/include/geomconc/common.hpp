#ifndef GEOMCONC_COMMON_HPP
#define GEOMCONC_COMMON_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace geomconc {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kMaxDim = 3;

// Points live in R^d with d in {1,2,3}; unused coordinates stay zero.
using Point = std::array<double, kMaxDim>;

inline Point make_point(double x, double y = 0.0, double z = 0.0) {
    return Point{x, y, z};
}

// Violated precondition or malformed input.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw validation_error(msg);
}

inline double sq(double x) { return x * x; }

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace geomconc

#endif
