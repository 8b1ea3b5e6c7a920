#include "gridsim/rng.hpp"

#include <sstream>
#include <stdexcept>

namespace gridsim {

namespace {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64(sm);
}

uint64_t Rng::next() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

int Rng::uniform_int(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    uint64_t n = uint64_t(int64_t(hi) - int64_t(lo) + 1);
    uint64_t v = uint64_t((unsigned __int128)(next()) * n >> 64);
    return int(int64_t(lo) + int64_t(v));
}

double Rng::uniform01() { return double(next() >> 11) * 0x1.0p-53; }

std::string Rng::to_string() const {
    std::ostringstream os;
    os << s_[0] << ' ' << s_[1] << ' ' << s_[2] << ' ' << s_[3];
    return os.str();
}

Rng Rng::from_string(const std::string& s) {
    std::istringstream is(s);
    Rng r;
    if (!(is >> r.s_[0] >> r.s_[1] >> r.s_[2] >> r.s_[3]))
        throw std::invalid_argument("bad rng state: " + s);
    return r;
}

}  // namespace gridsim
