#ifndef ROTSUM_RATIONAL_HPP
#define ROTSUM_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace rotsum {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// A rational number strictly inside (0,1), stored in lowest terms.
class Rational01 {
public:
    Rational01(BigInt num, BigInt den) : v_(std::move(num), std::move(den)) {
        check();
    }
    explicit Rational01(BigRat v) : v_(std::move(v)) { check(); }

    // Parses "num/den" decimal strings.
    static Rational01 parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos)
            throw std::invalid_argument("rational must be given as num/den: " + s);
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        return Rational01(num, den);
    }

    const BigRat& value() const { return v_; }
    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    std::string str() const {
        return numerator().str() + "/" + denominator().str();
    }
    double to_double() const { return static_cast<double>(v_); }

    bool operator==(const Rational01& o) const { return v_ == o.v_; }

private:
    void check() const {
        if (v_ <= 0 || v_ >= 1)
            throw std::invalid_argument("value not strictly inside (0,1)");
    }
    BigRat v_;
};

inline double rat_to_double(const BigRat& r) { return static_cast<double>(r); }

} // namespace rotsum

#endif
