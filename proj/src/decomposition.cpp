#include "rotsum/decomposition.hpp"

#include <algorithm>
#include <cassert>

#include "rotsum/detail/kahan.hpp"

namespace rotsum {

namespace {

BigInt rat_floor(const BigRat& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    BigInt q = num / den; // truncates toward zero
    if (num < 0 && q * den != num)
        --q;
    return q;
}

BigInt rat_ceil(const BigRat& r) { return -rat_floor(-r); }

BigRat mod1(BigRat v) {
    BigInt f = rat_floor(v);
    if (f != 0)
        v -= BigRat(f);
    return v;
}

void require_level(const CFExpansion& cf, int n) {
    if (n < 0 || n % 2 != 0)
        throw std::invalid_argument("induced-map level must be even and >= 0");
    if (cf.lambda.size() <= static_cast<std::size_t>(n) + 1 ||
        cf.q.size() <= static_cast<std::size_t>(n) + 1)
        throw InsufficientDepth("expansion too shallow for level " + std::to_string(n));
}

} // namespace

BigRat induced_map_step(const CFExpansion& cf, int n, const BigRat& point) {
    require_level(cf, n);
    const BigRat& ln = cf.lambda[static_cast<std::size_t>(n)];
    const BigRat& ln1 = cf.lambda[static_cast<std::size_t>(n) + 1];
    if (point >= 0 && point < ln)
        return mod1(point - ln1 + 1);
    if (point >= 1 - ln1 && point < 1)
        return mod1(point + ln);
    throw PointOutsideDomain("point not in Delta(" + std::to_string(n) + ")");
}

BigRat induced_map_step_inverse(const CFExpansion& cf, int n, const BigRat& point) {
    require_level(cf, n);
    const BigRat& ln = cf.lambda[static_cast<std::size_t>(n)];
    const BigRat& ln1 = cf.lambda[static_cast<std::size_t>(n) + 1];
    if (!((point >= 0 && point < ln) || (point >= 1 - ln1 && point < 1)))
        throw PointOutsideDomain("point not in Delta(" + std::to_string(n) + ")");
    // Image of Delta^(n+1) is [lambda^(n)-lambda^(n+1), lambda^(n)); the rest
    // of Delta(n) is the image of Delta^(n).
    if (point >= ln - ln1 && point < ln)
        return mod1(point - ln + 1);
    return mod1(point + ln1);
}

BigInt return_time(const CFExpansion& cf, int n, const BigRat& point) {
    require_level(cf, n);
    const BigRat& ln = cf.lambda[static_cast<std::size_t>(n)];
    const BigRat& ln1 = cf.lambda[static_cast<std::size_t>(n) + 1];
    if (point >= 0 && point < ln)
        return cf.q[static_cast<std::size_t>(n) + 1];
    if (point >= 1 - ln1 && point < 1)
        return cf.q[static_cast<std::size_t>(n)];
    throw PointOutsideDomain("point not in Delta(" + std::to_string(n) + ")");
}

namespace {

// First forward hitting time of Delta(L) (0 if x is already inside) and the
// hit point, via the nested windows U_k = [-lambda^(odd), lambda^(even))
// around 0 and closed-form batch counts per renormalization level.
struct HitResult {
    BigInt steps;
    BigRat v; // circle coordinate of the hit point, in [-lambda^(L+1), lambda^(L))
};

HitResult first_hit(const CFExpansion& cf, int L, const BigRat& x) {
    const BigRat alpha = cf.alpha.value();
    BigInt cost = 0;
    BigRat v;
    const BigRat& l0 = cf.lambda[0];
    const BigRat& l1 = cf.lambda[1];
    if (x < l0) {
        v = x;
    } else if (x >= 1 - l1) {
        v = x - 1;
    } else {
        // First entry into U_0 = [-lambda^(1), lambda^(0)).
        BigInt t0 = rat_ceil((1 - l1 - x) / alpha);
        v = x + BigRat(t0) * alpha - 1;
        cost = t0;
    }
    for (int k = 0; k < L; ++k) {
        const BigRat& lk1 = cf.lambda[static_cast<std::size_t>(k) + 1];
        const BigRat& lk2 = cf.lambda[static_cast<std::size_t>(k) + 2];
        const BigInt& qk1 = cf.q[static_cast<std::size_t>(k) + 1];
        if (k % 2 == 0) {
            if (v >= lk2) {
                BigInt t = rat_floor((v - lk2) / lk1) + 1;
                v -= BigRat(t) * lk1;
                cost += t * qk1;
            }
        } else {
            if (v < -lk2) {
                BigInt t = rat_ceil((-lk2 - v) / lk1);
                v += BigRat(t) * lk1;
                cost += t * qk1;
            }
        }
    }
    return {cost, v};
}

} // namespace

TowerPosition locate(const CFExpansion& cf, std::uint64_t N, const Rational01& x) {
    const int n = n_of(N, cf);
    const int L = n - 2;
    const BigRat xv = x.value();
    const HitResult hit = first_hit(cf, L, xv);
    const BigRat& lL = cf.lambda[static_cast<std::size_t>(L)];
    const BigRat& lL1 = cf.lambda[static_cast<std::size_t>(L) + 1];
    const BigInt& qL = cf.q[static_cast<std::size_t>(L)];
    const BigInt& qL1 = cf.q[static_cast<std::size_t>(L) + 1];
    const BigRat alpha = cf.alpha.value();

    TowerPosition tp;
    if (hit.steps == 0) {
        tp.j = 0;
        if (hit.v >= 0) {
            tp.tag = 'l';
            tp.d = xv;
            tp.h = qL1;
        } else {
            tp.tag = 's';
            tp.d = 1 - xv;
            tp.h = qL;
        }
        return tp;
    }
    // j = q_{L+1} - h in Z_l or q_L - h in Z_s; membership of the candidate
    // base point decides the tower.
    const BigInt jl = qL1 - hit.steps;
    if (jl >= 1) {
        BigRat base = mod1(xv - BigRat(jl) * alpha);
        if (base < lL) {
            tp.tag = 'l';
            tp.j = jl;
            tp.h = hit.steps;
            tp.d = base;
            return tp;
        }
    }
    const BigInt js = qL - hit.steps;
    if (js >= 1) {
        BigRat base = mod1(xv - BigRat(js) * alpha);
        if (base >= 1 - lL1) {
            tp.tag = 's';
            tp.j = js;
            tp.h = hit.steps;
            tp.d = 1 - base;
            return tp;
        }
    }
    throw std::logic_error("tower location failed; inconsistent hitting time");
}

OrbitDecomposition decompose(const CFExpansion& cf, const Rational01& x, std::uint64_t N) {
    const int n = n_of(N, cf);
    const int L = n - 2;
    const BigRat alpha = cf.alpha.value();
    const BigInt bigN = N;

    const TowerPosition tp = locate(cf, N, x);
    const BigInt h_hit = tp.j == 0 ? BigInt(0) : tp.h;
    BigRat anchor_pt = mod1(x.value() + BigRat(h_hit) * alpha);

    OrbitDecomposition out;
    out.N = N;
    out.n = n;
    out.first_hit = h_hit;

    BigRat left_pt = anchor_pt, right_pt = anchor_pt;
    BigInt left_idx = h_hit, right_idx = h_hit;
    bool empty = true;

    for (int m = L; m >= 0; m -= 2) {
        OrderInventory inv;
        inv.m = m;
        // Backward: extend the covered block to smaller orbit indices.
        for (;;) {
            BigRat p = induced_map_step_inverse(cf, m, left_pt);
            BigInt r = return_time(cf, m, p);
            BigInt pidx = left_idx - r;
            if (pidx < 0)
                break;
            if (pidx + r <= bigN) {
                inv.cycles.push_back({m, pidx, r, p, false});
                ++inv.cunder;
                left_pt = p;
                left_idx = pidx;
                empty = false;
            } else {
                // Anchor still beyond N; slide it backward (no emission).
                assert(empty);
                left_pt = right_pt = p;
                left_idx = right_idx = pidx;
            }
        }
        // Forward: extend to larger orbit indices while a cycle fits.
        for (;;) {
            BigInt r = return_time(cf, m, right_pt);
            if (right_idx + r > bigN)
                break;
            inv.cycles.push_back({m, right_idx, r, right_pt, true});
            ++inv.cbar;
            right_pt = induced_map_step(cf, m, right_pt);
            right_idx += r;
            empty = false;
        }
        if (inv.cbar + inv.cunder > 0)
            out.orders.push_back(std::move(inv));
    }

    if (empty) {
        for (std::uint64_t i = 0; i < N; ++i)
            out.boundary.push_back(i);
    } else {
        for (BigInt i = 0; i < left_idx; ++i)
            out.boundary.push_back(static_cast<std::uint64_t>(i));
        for (BigInt i = right_idx; i < bigN; ++i)
            out.boundary.push_back(static_cast<std::uint64_t>(i));
    }
    return out;
}

double birkhoff_via_cycles(const CFExpansion& cf, const Rational01& x,
                           std::uint64_t N, double c) {
    const OrbitDecomposition dec = decompose(cf, x, N);
    detail::Kahan acc;
    for (const auto& inv : dec.orders) {
        for (const auto& cyc : inv.cycles) {
            if (cyc.start == 0)
                throw SingularHit("cycle start hit 0 exactly");
            acc.add(cycle_sum_exact(cf, cyc.m, Rational01(cyc.start), c));
        }
    }
    const BigRat alpha = cf.alpha.value();
    for (std::uint64_t idx : dec.boundary) {
        BigRat p = mod1(x.value() + BigRat(idx) * alpha);
        if (p == 0)
            throw SingularHit("orbit hit 0 exactly");
        const double v = rat_to_double(p);
        acc.add(c * (1.0 / v - 1.0 / (1.0 - v)));
    }
    return acc.value();
}

GInputs G_inputs(const CFExpansion& cf, const Rational01& x, std::uint64_t N,
                 double c, double eps, int M_orders) {
    if (M_orders < 2 || M_orders % 2 != 0)
        throw std::invalid_argument("M_orders must be even and >= 2");
    const int n = n_of(N, cf);
    const TowerPosition tp = locate(cf, N, x);
    const int K1 = M_orders + K_of_eps(eps);

    GInputs in;
    in.tag = tp.tag;
    in.n = n;
    in.c = c;
    in.eps = eps;
    in.M_orders = M_orders;
    in.qn_over_N = BigRat(cf.q[static_cast<std::size_t>(n)], BigInt(N));
    in.lam_ratio_top = cf.lam(n - 1) / cf.lam(n - 2);
    in.q_ratio = BigRat(cf.q[static_cast<std::size_t>(n) - 2],
                        cf.q[static_cast<std::size_t>(n) - 1]);
    if (tp.tag == 'l') {
        in.d_rel = tp.d / cf.lam(n - 2);
        in.h_rel = BigRat(tp.h, cf.q[static_cast<std::size_t>(n) - 1]);
        in.inv_t = 1 / (BigRat(cf.q[static_cast<std::size_t>(n) - 1]) * cf.lam(n - 2));
    } else {
        in.d_rel = tp.d / cf.lam(n - 1);
        in.h_rel = BigRat(tp.h, cf.q[static_cast<std::size_t>(n) - 2]);
        in.inv_t = 1 / (BigRat(cf.q[static_cast<std::size_t>(n) - 2]) * cf.lam(n - 1));
    }
    in.lo_index = std::max(1, n - K1);
    in.hi_index = std::min<int>(static_cast<int>(cf.depth()), n + K1);
    for (int i = in.hi_index; i >= in.lo_index; --i)
        in.digits.push_back(cf.digit(static_cast<std::size_t>(i)));
    return in;
}

double G_from_inputs(const GInputs& in) {
    const int n = in.n;
    const int mlow = std::max(0, n - in.M_orders);
    const std::uint64_t K = static_cast<std::uint64_t>(K_of_eps(in.eps));

    auto digit = [&](int i) -> const BigInt& {
        return in.digits[static_cast<std::size_t>(in.hi_index - i)];
    };

    // Relative continuants q~_m for m in [lo-1, n]; exact q_m when the digit
    // window reaches a_1.
    const int lo = in.lo_index;
    std::vector<BigInt> qt(static_cast<std::size_t>(n) + 1, BigInt(0));
    if (lo == 1) {
        qt[0] = 1;
        if (n >= 1)
            qt[1] = digit(1);
        for (int m = 2; m <= n; ++m)
            qt[static_cast<std::size_t>(m)] =
                digit(m) * qt[static_cast<std::size_t>(m) - 1] + qt[static_cast<std::size_t>(m) - 2];
    } else {
        qt[static_cast<std::size_t>(lo) - 1] = 1;
        qt[static_cast<std::size_t>(lo)] = digit(lo);
        for (int m = lo + 1; m <= n; ++m)
            qt[static_cast<std::size_t>(m)] =
                digit(m) * qt[static_cast<std::size_t>(m) - 1] + qt[static_cast<std::size_t>(m) - 2];
    }

    // Relative lengths lam~_m = lambda^(m)/lambda^(n-2) for m in [mlow, n-1].
    std::vector<BigRat> lt(static_cast<std::size_t>(n), BigRat(0));
    lt[static_cast<std::size_t>(n) - 2] = 1;
    lt[static_cast<std::size_t>(n) - 1] = in.lam_ratio_top;
    for (int m = n - 3; m >= mlow; --m)
        lt[static_cast<std::size_t>(m)] =
            digit(m + 2) * lt[static_cast<std::size_t>(m) + 1] + lt[static_cast<std::size_t>(m) + 2];

    const BigRat N_rel = BigRat(qt[static_cast<std::size_t>(n)]) / in.qn_over_N;

    // Anchor: the first Delta(n-2)-visit of the orbit, in circle coordinates
    // v (units of lambda^(n-2)) and relative orbit index.
    BigRat v, idx;
    const bool base_floor = in.h_rel == 1;
    if (in.tag == 'l') {
        if (base_floor) {
            v = in.d_rel;
            idx = 0;
        } else {
            v = in.d_rel - lt[static_cast<std::size_t>(n) - 1];
            idx = in.h_rel * BigRat(qt[static_cast<std::size_t>(n) - 1]);
        }
    } else {
        if (base_floor) {
            v = -in.d_rel * lt[static_cast<std::size_t>(n) - 1];
            idx = 0;
        } else {
            v = 1 - in.d_rel * lt[static_cast<std::size_t>(n) - 1];
            idx = in.h_rel * BigRat(qt[static_cast<std::size_t>(n) - 2]);
        }
    }

    auto rtime = [&](int m, const BigRat& p) -> BigInt {
        return p >= 0 ? qt[static_cast<std::size_t>(m) + 1] : qt[static_cast<std::size_t>(m)];
    };
    auto step = [&](int m, const BigRat& p) -> BigRat {
        return p >= 0 ? BigRat(p - lt[static_cast<std::size_t>(m) + 1])
                      : BigRat(p + lt[static_cast<std::size_t>(m)]);
    };
    auto step_inv = [&](int m, const BigRat& p) -> BigRat {
        const BigRat& lm = lt[static_cast<std::size_t>(m)];
        const BigRat& lm1 = lt[static_cast<std::size_t>(m) + 1];
        return p >= lm - lm1 ? BigRat(p - lm) : BigRat(p + lm1);
    };

    // g^eps of the cycle through point p at order m, from relative data only.
    auto g_term = [&](int m, const BigRat& p) -> double {
        GEpsInputs gi;
        gi.n = m;
        gi.c = in.c;
        gi.eps = in.eps;
        const BigRat& lm = lt[static_cast<std::size_t>(m)];
        const BigRat& lm1 = lt[static_cast<std::size_t>(m) + 1];
        gi.lam_ratio = lm1 / lm;
        BigRat top_q, top_l;
        if (in.tag == 'l') {
            top_q = BigRat(qt[static_cast<std::size_t>(n) - 1]);
            top_l = 1;
        } else {
            top_q = BigRat(qt[static_cast<std::size_t>(n) - 2]);
            top_l = lt[static_cast<std::size_t>(n) - 1];
        }
        if (p >= 0) {
            gi.tag = 'l';
            gi.x_rel = p / lm;
            gi.inv_t = in.inv_t * top_q * top_l /
                       (BigRat(qt[static_cast<std::size_t>(m) + 1]) * lm);
        } else {
            gi.tag = 's';
            gi.x_rel = -p / lm1;
            gi.inv_t = in.inv_t * top_q * top_l /
                       (BigRat(qt[static_cast<std::size_t>(m)]) * lm1);
        }
        gi.hi_index = std::min(in.hi_index, m + 2);
        gi.lo_index = std::max(in.lo_index, m - static_cast<int>(K));
        for (int i = gi.hi_index; i >= gi.lo_index; --i)
            gi.digits.push_back(digit(i));
        return g_eps_from_ratios(gi);
    };

    double G = 0.0;
    BigRat left_pt = v, right_pt = v;
    BigRat left_idx = idx, right_idx = idx;
    bool empty = true;

    for (int m = n - 2; m >= mlow; m -= 2) {
        for (;;) {
            BigRat p = step_inv(m, left_pt);
            BigInt r = rtime(m, p);
            BigRat pidx = left_idx - BigRat(r);
            if (pidx < 0)
                break;
            if (pidx + BigRat(r) <= N_rel) {
                G += rat_to_double(BigRat(r) / N_rel) * g_term(m, p);
                left_pt = p;
                left_idx = pidx;
                empty = false;
            } else {
                left_pt = right_pt = p;
                left_idx = right_idx = pidx;
            }
        }
        for (;;) {
            BigInt r = rtime(m, right_pt);
            if (right_idx + BigRat(r) > N_rel)
                break;
            G += rat_to_double(BigRat(r) / N_rel) * g_term(m, right_pt);
            right_pt = step(m, right_pt);
            right_idx += BigRat(r);
            empty = false;
        }
    }
    (void)empty;
    return G;
}

double G_eps_delta(const CFExpansion& cf, const Rational01& x, std::uint64_t N,
                   double c, double eps, double delta, int M_orders) {
    (void)delta; // contract parameter of the approximation guarantee
    return G_from_inputs(G_inputs(cf, x, N, c, eps, M_orders));
}

TowerVariables dn_hn_tn(const CFExpansion& cf, const Rational01& x, std::uint64_t N) {
    const int n = n_of(N, cf);
    const TowerPosition tp = locate(cf, N, x);
    TowerVariables tv;
    tv.tag = tp.tag;
    if (tp.tag == 'l') {
        tv.D = rat_to_double(tp.d / cf.lam(n - 2));
        tv.H = rat_to_double(BigRat(tp.h, cf.q[static_cast<std::size_t>(n) - 1]));
        tv.T = rat_to_double(1 / (BigRat(cf.q[static_cast<std::size_t>(n) - 1]) * cf.lam(n - 2)));
    } else {
        tv.D = rat_to_double(tp.d / cf.lam(n - 1));
        tv.H = rat_to_double(BigRat(tp.h, cf.q[static_cast<std::size_t>(n) - 2]));
        tv.T = rat_to_double(1 / (BigRat(cf.q[static_cast<std::size_t>(n) - 2]) * cf.lam(n - 1)));
    }
    if (tv.H >= 1.0)
        tv.H = 0.0; // base floor wraps to the top of the tower
    return tv;
}

} // namespace rotsum
