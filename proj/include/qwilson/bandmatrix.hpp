#pragma once

#include <qwilson/errors.hpp>
#include <qwilson/field.hpp>

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qwilson {

// Square band matrix over an exact field.  Only the diagonals in the range
// [-lower, upper] are stored; everything outside the band is structurally
// zero.  The three-term operators of the library are tridiagonal, their
// q-commutator words have bandwidth at most three, so band storage keeps the
// exact-arithmetic cost proportional to the populated diagonals instead of
// the full square.
template <ExactField F>
class BandMatrix {
public:
    BandMatrix(long size, long lower, long upper)
        : size_(size),
          lower_(std::min(lower, size > 0 ? size - 1 : 0)),
          upper_(std::min(upper, size > 0 ? size - 1 : 0)) {
        if (size <= 0) throw InvalidInput("band matrix size must be positive");
        if (lower < 0 || upper < 0) throw InvalidInput("bandwidths must be nonnegative");
        data_.assign(static_cast<std::size_t>(size_ * width()), F(0));
    }

    static BandMatrix identity(long size) {
        BandMatrix m(size, 0, 0);
        for (long i = 0; i < size; ++i) m.set(i, i, F(1));
        return m;
    }

    long size() const { return size_; }
    long lower() const { return lower_; }
    long upper() const { return upper_; }

    bool in_band(long i, long j) const { return j - i <= upper_ && i - j <= lower_; }

    const F& at(long i, long j) const {
        check_indices(i, j);
        if (!in_band(i, j)) {
            static const F zero(0);
            return zero;
        }
        return data_[slot(i, j)];
    }

    void set(long i, long j, F v) {
        check_indices(i, j);
        if (!in_band(i, j))
            throw IndexOutOfRange("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") lies outside the declared band");
        data_[slot(i, j)] = std::move(v);
    }

    BandMatrix transpose() const {
        BandMatrix r(size_, upper_, lower_);
        for (long i = 0; i < size_; ++i)
            for (long j = col_begin(i); j < col_end(i); ++j) r.set(j, i, at(i, j));
        return r;
    }

    BandMatrix scaled(const F& s) const {
        BandMatrix r(size_, lower_, upper_);
        for (long i = 0; i < size_; ++i)
            for (long j = col_begin(i); j < col_end(i); ++j) r.set(i, j, s * at(i, j));
        return r;
    }

    friend BandMatrix operator+(const BandMatrix& a, const BandMatrix& b) {
        return combine(a, b, false);
    }
    friend BandMatrix operator-(const BandMatrix& a, const BandMatrix& b) {
        return combine(a, b, true);
    }
    BandMatrix operator-() const { return scaled(F(-1)); }
    friend BandMatrix operator*(const F& s, const BandMatrix& m) { return m.scaled(s); }
    friend BandMatrix operator*(const BandMatrix& m, const F& s) { return m.scaled(s); }

    friend bool operator==(const BandMatrix& a, const BandMatrix& b) {
        if (a.size_ != b.size_) return false;
        for (long i = 0; i < a.size_; ++i) {
            const long lo = std::min(a.col_begin(i), b.col_begin(i));
            const long hi = std::max(a.col_end(i), b.col_end(i));
            for (long j = lo; j < hi; ++j)
                if (!(a.at(i, j) == b.at(i, j))) return false;
        }
        return true;
    }

    bool is_zero() const { return !first_nonzero().has_value(); }

    struct Witness {
        long row;
        long col;
        F value;
    };

    // First nonzero entry (row-major scan) among the positions with
    // max(row, col) < size - margin; the outermost `margin` rows and columns
    // are excluded.  Truncating an infinite band operator to a finite corner
    // loses couplings at the cut, so identities between such operators are
    // only claimed on this interior region.
    std::optional<Witness> first_nonzero_interior(long margin) const {
        if (margin < 0) throw InvalidInput("interior margin must be nonnegative");
        const long limit = size_ - margin;
        for (long i = 0; i < std::min(size_, limit); ++i)
            for (long j = col_begin(i); j < std::min(col_end(i), limit); ++j)
                if (!at(i, j).is_zero()) return Witness{i, j, at(i, j)};
        return std::nullopt;
    }

    std::optional<Witness> first_nonzero() const { return first_nonzero_interior(0); }

    bool is_zero_on_interior(long margin) const {
        return !first_nonzero_interior(margin).has_value();
    }

    // Column range of stored entries in row i.
    long col_begin(long i) const { return std::max(0l, i - lower_); }
    long col_end(long i) const { return std::min(size_, i + upper_ + 1); }

private:
    long width() const { return lower_ + upper_ + 1; }
    std::size_t slot(long i, long j) const {
        return static_cast<std::size_t>(i * width() + (j - i + lower_));
    }
    void check_indices(long i, long j) const {
        if (i < 0 || j < 0 || i >= size_ || j >= size_)
            throw IndexOutOfRange("matrix index (" + std::to_string(i) + ", " +
                                  std::to_string(j) + ") out of range for size " +
                                  std::to_string(size_));
    }

    static BandMatrix combine(const BandMatrix& a, const BandMatrix& b, bool subtract) {
        if (a.size_ != b.size_)
            throw SizeMismatch("cannot combine band matrices of sizes " +
                               std::to_string(a.size_) + " and " + std::to_string(b.size_));
        BandMatrix r(a.size_, std::max(a.lower_, b.lower_), std::max(a.upper_, b.upper_));
        for (long i = 0; i < r.size_; ++i)
            for (long j = r.col_begin(i); j < r.col_end(i); ++j)
                r.set(i, j, subtract ? a.at(i, j) - b.at(i, j) : a.at(i, j) + b.at(i, j));
        return r;
    }

    long size_;
    long lower_;
    long upper_;
    std::vector<F> data_;
};

namespace detail {

template <ExactField F>
void band_mul_row(const BandMatrix<F>& a, const BandMatrix<F>& b, BandMatrix<F>& c, long i) {
    const long n = a.size();
    for (long j = c.col_begin(i); j < c.col_end(i); ++j) {
        F acc(0);
        const long k_lo = std::max({0l, i - a.lower(), j - b.upper()});
        const long k_hi = std::min({n - 1, i + a.upper(), j + b.lower()});
        for (long k = k_lo; k <= k_hi; ++k) acc = acc + a.at(i, k) * b.at(k, j);
        c.set(i, j, std::move(acc));
    }
}

}  // namespace detail

// Serial reference product.
template <ExactField F>
BandMatrix<F> band_mul_serial(const BandMatrix<F>& a, const BandMatrix<F>& b) {
    if (a.size() != b.size())
        throw SizeMismatch("cannot multiply band matrices of sizes " + std::to_string(a.size()) +
                           " and " + std::to_string(b.size()));
    BandMatrix<F> c(a.size(), a.lower() + b.lower(), a.upper() + b.upper());
    for (long i = 0; i < a.size(); ++i) detail::band_mul_row(a, b, c, i);
    return c;
}

// Parallel product.  Rows of the result are independent, so the row loop is
// shared across threads; every thread writes disjoint slots of c.
template <ExactField F>
BandMatrix<F> band_mul(const BandMatrix<F>& a, const BandMatrix<F>& b) {
    if (a.size() != b.size())
        throw SizeMismatch("cannot multiply band matrices of sizes " + std::to_string(a.size()) +
                           " and " + std::to_string(b.size()));
    BandMatrix<F> c(a.size(), a.lower() + b.lower(), a.upper() + b.upper());
    const long n = a.size();
#pragma omp parallel for
    for (long i = 0; i < n; ++i) detail::band_mul_row(a, b, c, i);
    return c;
}

template <ExactField F>
std::vector<F> band_apply_serial(const BandMatrix<F>& a, const std::vector<F>& v) {
    if (a.size() != static_cast<long>(v.size()))
        throw SizeMismatch("matrix size " + std::to_string(a.size()) +
                           " does not match vector length " + std::to_string(v.size()));
    std::vector<F> r(v.size(), F(0));
    for (long i = 0; i < a.size(); ++i) {
        F acc(0);
        for (long j = a.col_begin(i); j < a.col_end(i); ++j)
            acc = acc + a.at(i, j) * v[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return r;
}

template <ExactField F>
std::vector<F> band_apply(const BandMatrix<F>& a, const std::vector<F>& v) {
    if (a.size() != static_cast<long>(v.size()))
        throw SizeMismatch("matrix size " + std::to_string(a.size()) +
                           " does not match vector length " + std::to_string(v.size()));
    std::vector<F> r(v.size(), F(0));
    const long n = a.size();
#pragma omp parallel for
    for (long i = 0; i < n; ++i) {
        F acc(0);
        for (long j = a.col_begin(i); j < a.col_end(i); ++j)
            acc = acc + a.at(i, j) * v[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return r;
}

}  // namespace qwilson
