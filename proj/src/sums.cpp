#include "rotsum/sums.hpp"

#include <cmath>

#include "rotsum/detail/int128.hpp"
#include "rotsum/detail/kahan.hpp"
#include "rotsum/errors.hpp"

namespace rotsum {

using detail::u128;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool dyadic128(const BigRat& v, u128& out) {
    BigInt den = boost::multiprecision::denominator(v);
    if (den <= 0 || (den & (den - 1)) != 0)
        return false;
    unsigned bit = static_cast<unsigned>(boost::multiprecision::msb(den));
    if (bit > 128)
        return false;
    BigInt num = boost::multiprecision::numerator(v) << (128 - bit);
    if (!detail::fits_u128(num))
        return false;
    out = detail::to_u128(num);
    return true;
}

// Visits the orbit points {x + n alpha}, n = 0..N-1, as doubles in [0,1).
// Exact arithmetic throughout; fn may throw.
template <typename Fn>
void for_orbit(const CFExpansion& cf, const Rational01& x, std::uint64_t N, Fn&& fn) {
    u128 anum = 0, xnum = 0;
    if (dyadic128(cf.alpha.value(), anum) && dyadic128(x.value(), xnum)) {
        const double scale = std::ldexp(1.0, -128);
        u128 cur = xnum;
        for (std::uint64_t i = 0; i < N; ++i) {
            fn(cur == 0 ? 0.0 : detail::u128_to_double(cur) * scale, cur == 0);
            cur += anum; // wraps mod 2^128 == mod 1 on the dyadic grid
        }
        return;
    }
    const BigRat alpha = cf.alpha.value();
    BigRat cur = x.value();
    for (std::uint64_t i = 0; i < N; ++i) {
        fn(rat_to_double(cur), cur == 0);
        cur += alpha;
        if (cur >= 1)
            cur -= 1;
    }
}

// sin(pi t) for t in [0,1), folded onto [0,1/2] for accuracy near t = 1.
double sin_pi01(double t) { return std::sin(kPi * (t <= 0.5 ? t : 1.0 - t)); }

// cos(pi t) for t in [0,1), folded the same way (antisymmetric about 1/2).
double cos_pi01(double t) {
    return t <= 0.5 ? std::cos(kPi * t) : -std::cos(kPi * (1.0 - t));
}

// sin(2 pi t) for t in [0,1), folded onto [0,1/4] so points near 0, 1/2 and 1
// keep full relative accuracy (the 1.0 - t and 0.5 - a subtractions are exact).
double sin_2pi01(double t) {
    const double v = t <= 0.5 ? t : t - 1.0; // [-1/2, 1/2)
    double a = std::fabs(v);
    if (a > 0.25)
        a = 0.5 - a;
    return (v < 0 ? -1.0 : 1.0) * std::sin(2.0 * kPi * a);
}

} // namespace

double f1_eval(const Rational01& x, double c) {
    const double v = x.to_double();
    return c / v - c / (1.0 - v);
}

double birkhoff_direct(const CFExpansion& cf, const Rational01& x,
                       std::uint64_t N, const FunctionConfig& config) {
    detail::Kahan acc;
    const bool singular_part = config.c != 0.0;
    for_orbit(cf, x, N, [&](double t, bool at_zero) {
        if (at_zero && singular_part)
            throw SingularHit("orbit hit 0 exactly");
        double term = 0.0;
        if (singular_part)
            term += config.c / t - config.c / (1.0 - t);
        if (config.smooth_part)
            term += config.smooth_part(t);
        acc.add(term);
    });
    return acc.value();
}

std::complex<double> trig_average(const CFExpansion& cf, const Rational01& x,
                                  std::uint64_t N) {
    if (N == 0)
        throw std::invalid_argument("N must be positive");
    // (a) per-term identity 1/(1 - e^{2 pi i t}) = 1/2 + (i/2) cot(pi t);
    // (b) 1/2 + i S_N(f)/(2N) with f(t) = sin(2 pi t)/(1 - cos(2 pi t)),
    //     evaluated through its own floating route (1 - cos = 2 sin^2).
    detail::Kahan cot_sum, f_sum;
    for_orbit(cf, x, N, [&](double t, bool at_zero) {
        if (at_zero)
            throw SingularHit("orbit hit 0 exactly");
        const double s = sin_pi01(t);
        cot_sum.add(cos_pi01(t) / s);
        f_sum.add(sin_2pi01(t) / (2.0 * s * s));
    });
    const double n = static_cast<double>(N);
    const std::complex<double> a(0.5, cot_sum.value() / (2.0 * n));
    const std::complex<double> b(0.5, f_sum.value() / (2.0 * n));
    if (std::abs(a - b) > 1e-6)
        throw std::logic_error("trigonometric average cross-check failed");
    return a;
}

CosecantReport cosecant_partial_sums(const CFExpansion& cf, std::uint64_t N,
                                     const std::vector<std::uint64_t>& breakpoints) {
    if (N == 0)
        throw std::invalid_argument("N must be positive");
    CosecantReport rep;
    rep.N = N;

    std::vector<std::uint64_t> bounds = breakpoints;
    bounds.push_back(N);
    std::size_t seg = 0;
    std::uint64_t seg_lo = 1;
    CosecantSegment cur_seg{seg_lo, bounds[0], 0.0, 0};

    detail::Kahan acc;
    const BigInt num_b = cf.alpha.numerator();
    const BigInt den_b = cf.alpha.denominator();
    const bool small = den_b < (BigInt(1) << 62);
    const std::uint64_t num64 = small ? static_cast<std::uint64_t>(num_b) : 0;
    const std::uint64_t den64 = small ? static_cast<std::uint64_t>(den_b) : 0;
    std::uint64_t m64 = 0;
    BigInt m_b = 0;
    const BigInt two_den = 2 * den_b;
    const double den_d = rat_to_double(BigRat(den_b));

    for (std::uint64_t k = 1; k <= N; ++k) {
        // m = (k * num) mod 2*den tracks k*alpha mod 2, giving both the
        // fractional part and the sign of sin(k pi alpha).
        double frac;
        bool negative, zero;
        if (small) {
            m64 += num64;
            if (m64 >= 2 * den64)
                m64 -= 2 * den64;
            negative = m64 >= den64;
            const std::uint64_t r = negative ? m64 - den64 : m64;
            zero = r == 0;
            frac = static_cast<double>(r) / static_cast<double>(den64);
        } else {
            m_b += num_b;
            if (m_b >= two_den)
                m_b -= two_den;
            negative = m_b >= den_b;
            BigInt r = negative ? BigInt(m_b - den_b) : m_b;
            zero = r == 0;
            frac = rat_to_double(BigRat(r)) / den_d;
        }
        if (zero)
            throw SingularHit("sin(k pi alpha) = 0 at k = " + std::to_string(k));
        double term = 1.0 / sin_pi01(frac);
        if (negative)
            term = -term;
        acc.add(term);

        const double a = std::abs(acc.value());
        const double an = a / static_cast<double>(k);
        if (a > cur_seg.max_abs) {
            cur_seg.max_abs = a;
            cur_seg.argmax = k;
        }
        if (an > cur_seg.max_norm) {
            cur_seg.max_norm = an;
            cur_seg.argmax_norm = k;
        }
        if (a > rep.max_abs) {
            rep.max_abs = a;
            rep.argmax = k;
        }
        if (an > rep.max_norm) {
            rep.max_norm = an;
            rep.argmax_norm = k;
        }
        if (k == bounds[seg]) {
            rep.segments.push_back(cur_seg);
            ++seg;
            if (seg < bounds.size())
                cur_seg = CosecantSegment{k, bounds[seg], 0.0, 0};
        }
    }
    rep.final_sum = acc.value();
    return rep;
}

} // namespace rotsum
