#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gridsim {

// xoshiro256** with splitmix64 seeding. The simulation must produce identical
// streams on every platform and the state has to serialize compactly into
// replay frames, which rules out the standard distributions (their mapping
// from generator output is implementation-defined).
class Rng {
  public:
    Rng() : Rng(0) {}
    explicit Rng(uint64_t seed);

    uint64_t next();

    // inclusive bounds
    int uniform_int(int lo, int hi);
    double uniform01();
    bool chance(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = size_t(uniform_int(0, int(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[size_t(uniform_int(0, int(v.size()) - 1))];
    }

    std::string to_string() const;
    static Rng from_string(const std::string& s);

    friend bool operator==(const Rng& a, const Rng& b) {
        return a.s_[0] == b.s_[0] && a.s_[1] == b.s_[1] && a.s_[2] == b.s_[2] && a.s_[3] == b.s_[3];
    }

  private:
    uint64_t s_[4];
};

}  // namespace gridsim
