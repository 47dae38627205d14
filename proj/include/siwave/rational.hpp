#pragma once

// Exact rational arithmetic for the iteration-sequence cross checks, backed
// by GMP. Numerator/denominator sizes are capped by a bit budget; exceeding
// it is reported so callers can fall back to floating point.

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace siwave::iterkit {

class BigRational {
public:
    BigRational() : v_(0) {}
    BigRational(long num, long den = 1) : v_(num, den) {
        if (den == 0) throw std::invalid_argument("BigRational: zero denominator");
        v_.canonicalize();
    }
    explicit BigRational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    static BigRational from_string(const std::string& s) {
        mpq_class v(s);
        v.canonicalize();
        return BigRational(v);
    }

    friend BigRational operator+(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.v_ + b.v_)); }
    friend BigRational operator-(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.v_ - b.v_)); }
    friend BigRational operator*(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.v_ * b.v_)); }
    friend BigRational operator/(const BigRational& a, const BigRational& b) {
        if (b.v_ == 0) throw std::domain_error("BigRational: division by zero");
        return BigRational(mpq_class(a.v_ / b.v_));
    }
    BigRational operator-() const { return BigRational(mpq_class(-v_)); }
    friend bool operator==(const BigRational& a, const BigRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const BigRational& a, const BigRational& b) { return a.v_ < b.v_; }
    friend bool operator>(const BigRational& a, const BigRational& b) { return a.v_ > b.v_; }

    BigRational pow(unsigned k) const {
        mpq_class r(1);
        mpq_class base = v_;
        for (unsigned i = 0; i < k; ++i) r *= base;
        r.canonicalize();
        return BigRational(r);
    }

    /// Largest of the numerator/denominator bit lengths.
    std::size_t bit_size() const {
        mpz_class num = v_.get_num();
        mpz_class den = v_.get_den();
        return std::max(mpz_sizeinbase(num.get_mpz_t(), 2), mpz_sizeinbase(den.get_mpz_t(), 2));
    }
    bool within_budget(std::size_t bits = 4096) const { return bit_size() <= bits; }

    double to_double() const { return v_.get_d(); }
    std::string str() const { return v_.get_str(); }

private:
    mpq_class v_;
};

}  // namespace siwave::iterkit
