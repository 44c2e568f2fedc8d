#include "ft_kernel.hpp"

#include <cmath>

#ifdef __AVX2__
#include <immintrin.h>
#endif

namespace lab::detail {
namespace {

// Taylor coefficients on [-pi/4, pi/4]; tail terms are below 1e-17 there.
constexpr double kS3 = -1.0 / 6.0;
constexpr double kS5 = 1.0 / 120.0;
constexpr double kS7 = -1.0 / 5040.0;
constexpr double kS9 = 1.0 / 362880.0;
constexpr double kS11 = -1.0 / 39916800.0;
constexpr double kS13 = 1.0 / 6227020800.0;
constexpr double kS15 = -1.0 / 1307674368000.0;
constexpr double kS17 = 1.0 / 355687428096000.0;

constexpr double kC2 = -1.0 / 2.0;
constexpr double kC4 = 1.0 / 24.0;
constexpr double kC6 = -1.0 / 720.0;
constexpr double kC8 = 1.0 / 40320.0;
constexpr double kC10 = -1.0 / 3628800.0;
constexpr double kC12 = 1.0 / 479001600.0;
constexpr double kC14 = -1.0 / 87178291200.0;
constexpr double kC16 = 1.0 / 20922789888000.0;

constexpr double kHalfPi = 1.5707963267948966192313216916398;

}  // namespace

void sincos_turns(double u, double& s, double& c) {
    double v = u * 4.0;
    double k = std::nearbyint(v);
    double x = (v - k) * kHalfPi;   // residual angle in [-pi/4, pi/4]
    double x2 = x * x;
    double ps = kS17;
    ps = ps * x2 + kS15;
    ps = ps * x2 + kS13;
    ps = ps * x2 + kS11;
    ps = ps * x2 + kS9;
    ps = ps * x2 + kS7;
    ps = ps * x2 + kS5;
    ps = ps * x2 + kS3;
    double sx = x + x * (x2 * ps);
    double pc = kC16;
    pc = pc * x2 + kC14;
    pc = pc * x2 + kC12;
    pc = pc * x2 + kC10;
    pc = pc * x2 + kC8;
    pc = pc * x2 + kC6;
    pc = pc * x2 + kC4;
    pc = pc * x2 + kC2;
    double cx = 1.0 + x2 * pc;

    double fr = k * 0.25 - std::floor(k * 0.25);   // quadrant / 4, exact
    bool swap = (fr == 0.25) || (fr == 0.75);
    bool sin_neg = fr > 0.4;
    bool cos_neg = fr > 0.2 && fr < 0.6;
    s = swap ? cx : sx;
    c = swap ? sx : cx;
    if (sin_neg) s = -s;
    if (cos_neg) c = -c;
}

FtTable::FtTable(const std::vector<Atom>& atoms) : n(atoms.size()) {
    n_padded = (n + 3) & ~std::size_t{3};
    xs.assign(n_padded, 0.0);
    ys.assign(n_padded, 0.0);
    wre.assign(n_padded, 0.0);
    wim.assign(n_padded, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        xs[j] = atoms[j].position.x;
        ys[j] = atoms[j].position.y;
        wre[j] = atoms[j].weight.real();
        wim[j] = atoms[j].weight.imag();
    }
}

namespace {

// e^{-2 pi i theta}: accumulate w * (cos - i sin).
void chunk_sum_scalar(const FtTable& t, double xi1, double xi2, std::size_t begin,
                      std::size_t end, double& out_re, double& out_im) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = begin; j < end; ++j) {
        double u = xi1 * t.xs[j] + xi2 * t.ys[j];
        double s, c;
        sincos_turns(u, s, c);
        re += t.wre[j] * c + t.wim[j] * s;
        im += t.wim[j] * c - t.wre[j] * s;
    }
    out_re = re;
    out_im = im;
}

#ifdef __AVX2__

inline void sincos_turns4(__m256d u, __m256d& s_out, __m256d& c_out) {
    const __m256d four = _mm256_set1_pd(4.0);
    __m256d v = _mm256_mul_pd(u, four);
    __m256d k = _mm256_round_pd(v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d x = _mm256_mul_pd(_mm256_sub_pd(v, k), _mm256_set1_pd(kHalfPi));
    __m256d x2 = _mm256_mul_pd(x, x);

    __m256d ps = _mm256_set1_pd(kS17);
    ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(kS15));
    ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(kS13));
    ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(kS11));
    ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(kS9));
    ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(kS7));
    ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(kS5));
    ps = _mm256_fmadd_pd(ps, x2, _mm256_set1_pd(kS3));
    __m256d sx = _mm256_fmadd_pd(_mm256_mul_pd(x, x2), ps, x);

    __m256d pc = _mm256_set1_pd(kC16);
    pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(kC14));
    pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(kC12));
    pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(kC10));
    pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(kC8));
    pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(kC6));
    pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(kC4));
    pc = _mm256_fmadd_pd(pc, x2, _mm256_set1_pd(kC2));
    __m256d cx = _mm256_fmadd_pd(x2, pc, _mm256_set1_pd(1.0));

    __m256d quarter = _mm256_set1_pd(0.25);
    __m256d kq = _mm256_mul_pd(k, quarter);
    __m256d fr = _mm256_sub_pd(kq, _mm256_floor_pd(kq));
    __m256d swap = _mm256_or_pd(_mm256_cmp_pd(fr, _mm256_set1_pd(0.25), _CMP_EQ_OQ),
                                _mm256_cmp_pd(fr, _mm256_set1_pd(0.75), _CMP_EQ_OQ));
    __m256d sin_neg = _mm256_cmp_pd(fr, _mm256_set1_pd(0.4), _CMP_GT_OQ);
    __m256d cos_neg = _mm256_and_pd(_mm256_cmp_pd(fr, _mm256_set1_pd(0.2), _CMP_GT_OQ),
                                    _mm256_cmp_pd(fr, _mm256_set1_pd(0.6), _CMP_LT_OQ));
    const __m256d signbit = _mm256_set1_pd(-0.0);
    __m256d s = _mm256_blendv_pd(sx, cx, swap);
    __m256d c = _mm256_blendv_pd(cx, sx, swap);
    s_out = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, signbit));
    c_out = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, signbit));
}

void chunk_sum_avx2(const FtTable& t, double xi1, double xi2, std::size_t begin,
                    std::size_t end, double& out_re, double& out_im) {
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    __m256d vx1 = _mm256_set1_pd(xi1);
    __m256d vx2 = _mm256_set1_pd(xi2);
    for (std::size_t j = begin; j < end; j += 4) {
        __m256d px = _mm256_loadu_pd(&t.xs[j]);
        __m256d py = _mm256_loadu_pd(&t.ys[j]);
        __m256d u = _mm256_fmadd_pd(vx2, py, _mm256_mul_pd(vx1, px));
        __m256d s, c;
        sincos_turns4(u, s, c);
        __m256d wr = _mm256_loadu_pd(&t.wre[j]);
        __m256d wi = _mm256_loadu_pd(&t.wim[j]);
        acc_re = _mm256_fmadd_pd(wr, c, acc_re);
        acc_re = _mm256_fmadd_pd(wi, s, acc_re);
        acc_im = _mm256_fmadd_pd(wi, c, acc_im);
        acc_im = _mm256_fnmadd_pd(wr, s, acc_im);
    }
    alignas(32) double lanes[4];
    _mm256_storeu_pd(lanes, acc_re);
    out_re = ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
    _mm256_storeu_pd(lanes, acc_im);
    out_im = ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
}

#endif  // __AVX2__

}  // namespace

Complex ft_eval(const FtTable& table, Vec2 xi, std::size_t chunk_size) {
    if (chunk_size == 0) chunk_size = 1;
    KahanSum re, im;
#ifdef __AVX2__
    const bool vectorize = (chunk_size % 4 == 0);
#else
    const bool vectorize = false;
#endif
    std::size_t limit = vectorize ? table.n_padded : table.n;
    for (std::size_t begin = 0; begin < limit; begin += chunk_size) {
        std::size_t end = std::min(begin + chunk_size, limit);
        double pr = 0.0, pi = 0.0;
#ifdef __AVX2__
        if (vectorize) {
            // end - begin is a multiple of 4: padded length is, and so is every
            // full chunk.
            chunk_sum_avx2(table, xi.x, xi.y, begin, end, pr, pi);
        } else {
            chunk_sum_scalar(table, xi.x, xi.y, begin, end, pr, pi);
        }
#else
        chunk_sum_scalar(table, xi.x, xi.y, begin, end, pr, pi);
#endif
        re.add(pr);
        im.add(pi);
    }
    return {re.value(), im.value()};
}

}  // namespace lab::detail
