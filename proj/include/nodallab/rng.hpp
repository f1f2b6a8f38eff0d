#pragma once
#include <cmath>
#include <cstdint>

namespace nodallab {

// Counter-based generator: the i-th output is a stateless mix of (key, i),
// so streams can be split by hashing (master_seed, stream_index) into a new
// key. Same seed -> bit-identical draws on every platform, regardless of
// how many workers consume sibling streams.
class CounterRng {
   public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Key for a child stream, e.g. per-trial: derive(master, trial).
    static std::uint64_t derive(std::uint64_t key, std::uint64_t index) {
        return mix(mix(key) ^ (0xd1342543de82ef95ULL * (index + 1)));
    }

    CounterRng substream(std::uint64_t index) const {
        return CounterRng(derive(key_, index));
    }

    std::uint64_t next_u64() { return mix(key_ ^ (0xd1342543de82ef95ULL * ++counter_)); }

    // Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller; second value cached so consecutive calls stay cheap.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    std::uint64_t key() const { return key_; }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace nodallab
