#include "pairs/kernels/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

// Built with -mavx2 -ffp-contract=off. Mirrors scalar.cpp operation for
// operation; the lane layout of a __m256d matches the scalar j % 4 lanes.

namespace pairs::kernels::avx2 {

namespace {

using Lanes = std::array<double, 4>;

double combine(const Lanes& l) { return (l[0] + l[1]) + (l[2] + l[3]); }

Lanes store(__m256d v) {
    Lanes out;
    _mm256_storeu_pd(out.data(), v);
    return out;
}

__m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

double hmax(__m256d v) {
    const Lanes l = store(v);
    return std::max(std::max(l[0], l[1]), std::max(l[2], l[3]));
}

void relative_sq(double c, double k, std::span<const double> x, std::vector<double>& out) {
    const std::size_t n = x.size();
    out.resize(n);
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vk = _mm256_set1_pd(k);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x.data() + i);
        const __m256d r = _mm256_div_pd(_mm256_sub_pd(xi, vc), xi);
        _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(vk, _mm256_mul_pd(r, r)));
    }
    for (; i < n; ++i) {
        const double r = (x[i] - c) / x[i];
        out[i] = k * (r * r);
    }
}

} // namespace

Moments centered_moments(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    const std::size_t body = n - n % 4;

    __m256d vsx = _mm256_setzero_pd();
    __m256d vsy = _mm256_setzero_pd();
    for (std::size_t j = 0; j < body; j += 4) {
        vsx = _mm256_add_pd(vsx, _mm256_loadu_pd(x.data() + j));
        vsy = _mm256_add_pd(vsy, _mm256_loadu_pd(y.data() + j));
    }
    Lanes sx = store(vsx), sy = store(vsy);
    for (std::size_t j = body; j < n; ++j) {
        sx[j % 4] += x[j];
        sy[j % 4] += y[j];
    }
    Moments m;
    m.mean_x = combine(sx) / static_cast<double>(n);
    m.mean_y = combine(sy) / static_cast<double>(n);

    const __m256d mx = _mm256_set1_pd(m.mean_x);
    const __m256d my = _mm256_set1_pd(m.mean_y);
    __m256d vxx = _mm256_setzero_pd();
    __m256d vxy = _mm256_setzero_pd();
    for (std::size_t j = 0; j < body; j += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x.data() + j), mx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y.data() + j), my);
        vxx = _mm256_add_pd(vxx, _mm256_mul_pd(dx, dx));
        vxy = _mm256_add_pd(vxy, _mm256_mul_pd(dx, dy));
    }
    Lanes xx = store(vxx), xy = store(vxy);
    for (std::size_t j = body; j < n; ++j) {
        const double dx = x[j] - m.mean_x;
        const double dy = y[j] - m.mean_y;
        xx[j % 4] += dx * dx;
        xy[j % 4] += dx * dy;
    }
    m.sxx = combine(xx);
    m.sxy = combine(xy);
    return m;
}

double max_abs_return(std::span<const double> prices) {
    if (prices.size() < 2) {
        return 0.0;
    }
    const std::size_t terms = prices.size() - 1;
    __m256d best = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= terms; j += 4) {
        const __m256d cur = _mm256_loadu_pd(prices.data() + j);
        const __m256d next = _mm256_loadu_pd(prices.data() + j + 1);
        best = _mm256_max_pd(best, abs_pd(_mm256_div_pd(_mm256_sub_pd(next, cur), cur)));
    }
    double out = hmax(best);
    for (; j < terms; ++j) {
        out = std::max(out, std::abs((prices[j + 1] - prices[j]) / prices[j]));
    }
    return out;
}

ReversionSums reversion_sums(std::span<const double> s) {
    if (s.size() < 2) {
        return {};
    }
    const std::size_t terms = s.size() - 1;
    const std::size_t body = terms - terms % 4;
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d num = _mm256_setzero_pd();
    __m256d den = _mm256_setzero_pd();
    for (std::size_t j = 0; j < body; j += 4) {
        const __m256d cur = _mm256_loadu_pd(s.data() + j);
        const __m256d next = _mm256_loadu_pd(s.data() + j + 1);
        const __m256d pos = _mm256_and_pd(_mm256_cmp_pd(cur, zero, _CMP_GT_OQ), one);
        const __m256d neg = _mm256_and_pd(_mm256_cmp_pd(cur, zero, _CMP_LT_OQ), one);
        // -sign(cur) == neg - pos
        num = _mm256_add_pd(num, _mm256_mul_pd(_mm256_sub_pd(neg, pos), _mm256_sub_pd(next, cur)));
        den = _mm256_add_pd(den, abs_pd(cur));
    }
    Lanes ln = store(num), ld = store(den);
    for (std::size_t j = body; j < terms; ++j) {
        const double sg = static_cast<double>(s[j] > 0.0) - static_cast<double>(s[j] < 0.0);
        ln[j % 4] += -sg * (s[j + 1] - s[j]);
        ld[j % 4] += std::abs(s[j]);
    }
    return {combine(ln), combine(ld)};
}

double diag_box_quadratic_max(double c1, double k1, std::span<const double> x1,
                              double c2, double k2, std::span<const double> x2) {
    std::vector<double> a, b;
    relative_sq(c1, k1, x1, a);
    relative_sq(c2, k2, x2, b);
    const std::size_t nb = b.size();
    __m256d best = _mm256_setzero_pd();
    double tail_best = 0.0;
    for (double ai : a) {
        const __m256d va = _mm256_set1_pd(ai);
        std::size_t j = 0;
        for (; j + 4 <= nb; j += 4) {
            best = _mm256_max_pd(best, abs_pd(_mm256_add_pd(va, _mm256_loadu_pd(b.data() + j))));
        }
        for (; j < nb; ++j) {
            tail_best = std::max(tail_best, std::abs(ai + b[j]));
        }
    }
    return std::max(hmax(best), tail_best);
}

} // namespace pairs::kernels::avx2
