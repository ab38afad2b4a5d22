#pragma once

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

namespace ensp {

// Row-major index of the unordered pair (i,j), i < j, among the
// n*(n-1)/2 vertex pairs.  Row i occupies the contiguous index range
// [row_offset(i), row_offset(i) + n - i - 1).
inline std::int64_t pair_count(int n) {
    return static_cast<std::int64_t>(n) * (n - 1) / 2;
}

inline std::int64_t pair_index(int i, int j, int n) {
    // requires i < j
    const std::int64_t row = i;
    return row * n - row * (row + 1) / 2 + (j - i - 1);
}

// Bit-packed set of unordered vertex pairs; the backing store for adjacency.
class PairBits {
public:
    PairBits() : n_(0) {}
    explicit PairBits(int n)
        : n_(n), words_((pair_count(n) + 63) / 64, 0ull) {}

    int n() const { return n_; }
    std::int64_t capacity() const { return pair_count(n_); }

    bool test(int i, int j) const {
        if (i > j) std::swap(i, j);
        const std::int64_t b = pair_index(i, j, n_);
        return (words_[b >> 6] >> (b & 63)) & 1ull;
    }
    void set(int i, int j) {
        if (i > j) std::swap(i, j);
        const std::int64_t b = pair_index(i, j, n_);
        words_[b >> 6] |= 1ull << (b & 63);
    }
    void clear(int i, int j) {
        if (i > j) std::swap(i, j);
        const std::int64_t b = pair_index(i, j, n_);
        words_[b >> 6] &= ~(1ull << (b & 63));
    }

    std::int64_t count() const {
        std::int64_t c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    // Flip every pair bit (padding bits in the last word stay zero).
    void flip_all() {
        for (auto& w : words_) w = ~w;
        const std::int64_t m = capacity();
        if (m & 63) words_.back() &= (1ull << (m & 63)) - 1;
    }

    // Visit all set pairs (i,j), i < j, in row-major order.
    template <class F>
    void for_each_set(F&& f) const {
        const std::int64_t m = capacity();
        int i = 0;
        std::int64_t base = 0;
        for (std::size_t wi = 0; wi < words_.size(); ++wi, base += 64) {
            std::uint64_t w = words_[wi];
            while (w) {
                const int bit = std::countr_zero(w);
                w &= w - 1;
                const std::int64_t idx = base + bit;
                if (idx >= m) return;
                while (idx >= row_end(i)) ++i;  // indices arrive in increasing order
                const int j = i + 1 + static_cast<int>(idx - row_begin(i));
                f(i, j);
            }
        }
    }

    // Raw mask of the first 64 pair bits; only meaningful when capacity() <= 64.
    std::uint64_t low_mask() const { return words_.empty() ? 0ull : words_[0]; }
    void assign_low_mask(std::uint64_t mask) { words_.assign(1, mask); }

    bool operator==(const PairBits&) const = default;

private:
    std::int64_t row_begin(int i) const { return pair_index(i, i + 1, n_); }
    std::int64_t row_end(int i) const { return row_begin(i) + (n_ - i - 1); }

    int n_;
    std::vector<std::uint64_t> words_;
};

}  // namespace ensp
