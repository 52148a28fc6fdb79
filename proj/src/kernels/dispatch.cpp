#include "pairs/kernels/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace pairs::kernels {

namespace {

// -1: auto, otherwise static_cast<int>(Isa)
std::atomic<int> g_override{-1};

Isa detect() {
    if (const char* env = std::getenv("PAIRS_ISA")) {
        if (std::string(env) == "scalar") {
            return Isa::scalar;
        }
    }
    return avx2_available() ? Isa::avx2 : Isa::scalar;
}

} // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::avx2:
        return "avx2";
    case Isa::scalar:
        break;
    }
    return "scalar";
}

bool avx2_available() {
#if defined(PAIRS_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
#else
    return false;
#endif
}

Isa active_isa() {
    const int forced = g_override.load(std::memory_order_relaxed);
    if (forced >= 0) {
        const auto isa = static_cast<Isa>(forced);
        return (isa == Isa::avx2 && !avx2_available()) ? Isa::scalar : isa;
    }
    static const Isa detected = detect();
    return detected;
}

void set_isa_override(std::optional<Isa> isa) {
    g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

#if defined(PAIRS_HAVE_AVX2_TU)
#define PAIRS_DISPATCH(fn, ...)                                                                    \
    (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define PAIRS_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

Moments centered_moments(std::span<const double> x, std::span<const double> y) {
    return PAIRS_DISPATCH(centered_moments, x, y);
}

double max_abs_return(std::span<const double> prices) {
    return PAIRS_DISPATCH(max_abs_return, prices);
}

ReversionSums reversion_sums(std::span<const double> s) {
    return PAIRS_DISPATCH(reversion_sums, s);
}

double diag_box_quadratic_max(double c1, double k1, std::span<const double> x1,
                              double c2, double k2, std::span<const double> x2) {
    return PAIRS_DISPATCH(diag_box_quadratic_max, c1, k1, x1, c2, k2, x2);
}

#undef PAIRS_DISPATCH

} // namespace pairs::kernels
