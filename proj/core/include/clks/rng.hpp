#pragma once

// Counter-based random streams (Philox4x32-10, Salmon et al. SC'11).
// A stream is addressed by (seed, worker, stream); draws depend only on the
// address and the position in the stream, so parallel runs are reproducible
// for a fixed worker count.

#include <cmath>
#include <cstdint>

#include "clks/linalg.hpp"

namespace clks {

class RandomStream {
  public:
    RandomStream() : RandomStream(0, 0, 0) {}
    RandomStream(std::uint64_t seed, std::uint64_t worker = 0, std::uint64_t stream = 0) {
        key_[0] = static_cast<std::uint32_t>(seed);
        key_[1] = static_cast<std::uint32_t>(seed >> 32);
        block_[0] = block_[1] = block_[2] = block_[3] = 0;
        ctr_lo_ = 0;
        // The high counter words carry the (worker, stream) address; the low
        // 64 bits advance with the draw position.
        worker_ = static_cast<std::uint32_t>(worker ^ (worker >> 32) * 0x9E3779B9u);
        stream_ = static_cast<std::uint32_t>(stream ^ (stream >> 32) * 0xBB67AE85u);
        pos_ = 4;
        have_normal_ = false;
    }

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return block_[pos_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t lo = next_u32(), hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform in (0,1), never exactly 0 or 1.
    double uniform() {
        std::uint64_t r = next_u64() >> 11;  // 53 bits
        return (static_cast<double>(r) + 0.5) * 0x1p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_normal_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double c = std::cos(2.0 * M_PI * u2), s = std::sin(2.0 * M_PI * u2);
        cached_normal_ = r * s;
        have_normal_ = true;
        return r * c;
    }

    Vec3 normal3() { return {normal(), normal(), normal()}; }

    Vec3 unit_sphere() {
        double z = uniform(-1.0, 1.0);
        double phi = uniform(0.0, 2.0 * M_PI);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }

  private:
    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
        std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        lo = static_cast<std::uint32_t>(p);
        hi = static_cast<std::uint32_t>(p >> 32);
    }

    void refill() {
        std::uint32_t c[4] = {static_cast<std::uint32_t>(ctr_lo_),
                              static_cast<std::uint32_t>(ctr_lo_ >> 32), worker_, stream_};
        std::uint32_t k[2] = {key_[0], key_[1]};
        for (int round = 0; round < 10; ++round) {
            std::uint32_t lo0, hi0, lo1, hi1;
            mulhilo(0xD2511F53u, c[0], lo0, hi0);
            mulhilo(0xCD9E8D57u, c[2], lo1, hi1);
            std::uint32_t n0 = hi1 ^ c[1] ^ k[0];
            std::uint32_t n1 = lo1;
            std::uint32_t n2 = hi0 ^ c[3] ^ k[1];
            std::uint32_t n3 = lo0;
            c[0] = n0; c[1] = n1; c[2] = n2; c[3] = n3;
            k[0] += 0x9E3779B9u;
            k[1] += 0xBB67AE85u;
        }
        block_[0] = c[0]; block_[1] = c[1]; block_[2] = c[2]; block_[3] = c[3];
        ++ctr_lo_;
        pos_ = 0;
    }

    std::uint32_t key_[2];
    std::uint32_t block_[4];
    std::uint64_t ctr_lo_;
    std::uint32_t worker_, stream_;
    int pos_;
    bool have_normal_;
    double cached_normal_ = 0;
};

}  // namespace clks
