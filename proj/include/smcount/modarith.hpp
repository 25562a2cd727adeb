#pragma once

namespace smcount {

inline int mod_norm(long long v, int p) {
    long long r = v % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

// Multiplicative inverse mod a prime.
inline int mod_inverse(int a, int p) {
    long long r = 1, base = mod_norm(a, p);
    for (int e = p - 2; e > 0; e >>= 1) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
    }
    return static_cast<int>(r);
}

}  // namespace smcount
