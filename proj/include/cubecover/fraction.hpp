#pragma once

// Exact rational with an int64 fast path.
//
// Values whose reduced numerator and denominator fit in int64 are stored inline and
// combined with 128-bit intermediates; anything larger is promoted to a GMP rational and
// demoted again as soon as it fits. Results are bit-for-bit the same as with mpq_class;
// only the representation differs.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <utility>

namespace cubecover {

class Fraction {
 public:
  Fraction() = default;
  Fraction(int v) : n_(v) {}
  Fraction(long v) : n_(v) {}
  Fraction(long long v) : n_(v) {}
  Fraction(const mpq_class& q) { assign_big(q); }

  Fraction(const Fraction& o) : n_(o.n_), d_(o.d_), big_(o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr) {}
  Fraction(Fraction&&) noexcept = default;
  Fraction& operator=(const Fraction& o) {
    if (this != &o) {
      n_ = o.n_;
      d_ = o.d_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Fraction& operator=(Fraction&&) noexcept = default;

  bool is_small() const noexcept { return !big_; }
  bool is_zero() const noexcept { return big_ ? sgn(*big_) == 0 : n_ == 0; }
  int sign() const noexcept { return big_ ? sgn(*big_) : (n_ > 0) - (n_ < 0); }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    mpq_class q(mpz_from(n_), mpz_from(d_));
    return q;
  }

  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    if (a.is_small() && b.is_small()) {
      if (a.d_ == b.d_) return make(static_cast<i128>(a.n_) + b.n_, a.d_);
      return make(static_cast<i128>(a.n_) * b.d_ + static_cast<i128>(b.n_) * a.d_, static_cast<i128>(a.d_) * b.d_);
    }
    return Fraction(mpq_class(a.to_mpq() + b.to_mpq()));
  }

  friend Fraction operator-(const Fraction& a) {
    if (a.is_small() && a.n_ != std::numeric_limits<std::int64_t>::min()) {
      Fraction r;
      r.n_ = -a.n_;
      r.d_ = a.d_;
      return r;
    }
    return Fraction(mpq_class(-a.to_mpq()));
  }

  friend Fraction operator-(const Fraction& a, const Fraction& b) {
    if (b.is_zero()) return a;
    if (a.is_small() && b.is_small()) {
      if (a.d_ == b.d_) return make(static_cast<i128>(a.n_) - b.n_, a.d_);
      return make(static_cast<i128>(a.n_) * b.d_ - static_cast<i128>(b.n_) * a.d_, static_cast<i128>(a.d_) * b.d_);
    }
    return Fraction(mpq_class(a.to_mpq() - b.to_mpq()));
  }

  friend Fraction operator*(const Fraction& a, const Fraction& b) {
    if (a.is_zero() || b.is_zero()) return Fraction();
    if (a.is_small() && b.is_small()) {
      if (a.d_ == 1 && b.d_ == 1) return make_reduced(static_cast<i128>(a.n_) * b.n_, 1);
      // Cross-cancel so the product is already in lowest terms.
      std::int64_t g1 = gcd64(abs64(a.n_), static_cast<std::uint64_t>(b.d_));
      std::int64_t g2 = gcd64(abs64(b.n_), static_cast<std::uint64_t>(a.d_));
      return make_reduced(static_cast<i128>(a.n_ / g1) * (b.n_ / g2), static_cast<i128>(a.d_ / g2) * (b.d_ / g1));
    }
    return Fraction(mpq_class(a.to_mpq() * b.to_mpq()));
  }

  friend Fraction operator/(const Fraction& a, const Fraction& b) {
    if (b.is_zero()) throw std::domain_error("Fraction division by zero");
    return a * b.reciprocal();
  }

  Fraction reciprocal() const {
    if (is_small() && n_ != std::numeric_limits<std::int64_t>::min()) {
      Fraction r;
      r.n_ = n_ < 0 ? -d_ : d_;
      r.d_ = n_ < 0 ? -n_ : n_;
      return r;
    }
    mpq_class q = to_mpq();
    mpq_inv(q.get_mpq_t(), q.get_mpq_t());
    return Fraction(q);
  }

  Fraction& operator+=(const Fraction& o) { return *this = *this + o; }
  Fraction& operator-=(const Fraction& o) { return *this = *this - o; }
  Fraction& operator*=(const Fraction& o) { return *this = *this * o; }
  Fraction& operator/=(const Fraction& o) { return *this = *this / o; }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    if (a.is_small() && b.is_small()) return a.n_ == b.n_ && a.d_ == b.d_;
    if (a.is_small() != b.is_small()) return false;  // canonical: small whenever it fits
    return *a.big_ == *b.big_;
  }

  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    if (a.is_small() && b.is_small()) {
      if (a.d_ == b.d_) return a.n_ <=> b.n_;
      i128 l = static_cast<i128>(a.n_) * b.d_, r = static_cast<i128>(b.n_) * a.d_;
      return l < r ? std::strong_ordering::less : l > r ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend bool operator==(const Fraction& a, int v) { return a.is_small() && a.d_ == 1 && a.n_ == v; }
  friend std::strong_ordering operator<=>(const Fraction& a, int v) {
    if (a.is_small()) {
      i128 r = static_cast<i128>(v) * a.d_;
      return a.n_ < r ? std::strong_ordering::less : a.n_ > r ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    int c = cmp(*a.big_, v);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Fraction& f) { return os << f.to_mpq(); }

 private:
  using i128 = __int128;

  static std::uint64_t abs64(std::int64_t v) { return v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v); }

  static std::int64_t gcd64(std::uint64_t a, std::uint64_t b) {
    if (a == 1 || b == 1) return 1;
    if (a == 0) return static_cast<std::int64_t>(b);
    if (b == 0) return static_cast<std::int64_t>(a);
    int shift = __builtin_ctzll(a | b);
    a >>= __builtin_ctzll(a);
    do {
      b >>= __builtin_ctzll(b);
      if (a > b) std::swap(a, b);
      b -= a;
    } while (b != 0);
    return static_cast<std::int64_t>(a << shift);
  }

  static unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
    while (b != 0) {
      unsigned __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static mpz_class mpz_from(i128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
  }

  static bool fits(i128 v) {
    return v > std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
  }

  /// n / d with d > 0, arbitrary common factors.
  static Fraction make(i128 n, i128 d) {
    if (n == 0) return Fraction();
    if (d == 1) return make_reduced(n, 1);
    unsigned __int128 un = n < 0 ? -static_cast<unsigned __int128>(n) : static_cast<unsigned __int128>(n);
    unsigned __int128 g;
    if ((un >> 64) == 0 && (static_cast<unsigned __int128>(d) >> 64) == 0)
      g = gcd64(static_cast<std::uint64_t>(un), static_cast<std::uint64_t>(d));
    else
      g = gcd128(un, static_cast<unsigned __int128>(d));
    if (g > 1) {
      n /= static_cast<i128>(g);
      d /= static_cast<i128>(g);
    }
    return make_reduced(n, d);
  }

  static Fraction make_reduced(i128 n, i128 d) {
    Fraction r;
    if (fits(n) && fits(d)) {
      r.n_ = static_cast<std::int64_t>(n);
      r.d_ = static_cast<std::int64_t>(d);
      return r;
    }
    mpq_class q(mpz_from(n), mpz_from(d));
    q.canonicalize();
    r.assign_big(q);
    return r;
  }

  void assign_big(const mpq_class& q) {
    if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t()) &&
        q.get_num().get_si() != std::numeric_limits<long>::min()) {
      n_ = q.get_num().get_si();
      d_ = q.get_den().get_si();
      big_.reset();
    } else {
      n_ = 0;
      d_ = 1;
      big_ = std::make_unique<mpq_class>(q);
    }
  }

  std::int64_t n_ = 0;
  std::int64_t d_ = 1;
  std::unique_ptr<mpq_class> big_;
};

}  // namespace cubecover
