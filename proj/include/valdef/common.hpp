#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace valdef {

// Arbitrary-precision integers and rationals. Rat is always canonical
// (reduced, positive denominator); construct through rat() when the inputs
// may share a factor.
using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Int rat_num(const Rat& r) { return Int(r.get_num()); }
inline Int rat_den(const Rat& r) { return Int(r.get_den()); }

// a mod m in [0, m)
inline Int mod_norm(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

// Thrown for malformed external text (formulas, descriptors, elements,
// places). CLI exit code 2.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an operation's stated precondition is violated. CLI exit code 3.
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by deciders outside their documented decidable range. CLI exit code 4.
struct undecidable_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic RNG used by samplers (tests, CLI --seed). splitmix64: fixed
// sequence on every platform, unlike std distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n > 0
    std::uint64_t below(std::uint64_t n) {
        // rejection sampling keeps the distribution exact
        std::uint64_t limit = ~0ULL - (~0ULL % n);
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }

    // uniform in [lo, hi] inclusive
    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (next() & 1) != 0; }

private:
    std::uint64_t state_;
};

}  // namespace valdef
