#include "edbsw/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "edbsw/errors.hpp"
#include "kernels_tables.hpp"

namespace edbsw::kernels {

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(__x86_64__)
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
        case Isa::neon:
#if defined(__aarch64__)
            return true;  // NEON is mandatory on aarch64
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table_for(Isa isa) {
    switch (isa) {
#if defined(__x86_64__)
        case Isa::avx2:
            if (isa_available(Isa::avx2)) return kAvx2Table;
            break;
#endif
#if defined(__aarch64__)
        case Isa::neon:
            return kNeonTable;
#endif
        default:
            break;
    }
    if (isa == Isa::scalar) return kScalarTable;
    throw ParamError("requested SIMD implementation is not available on this machine");
}

namespace {

Isa best_available() {
    if (isa_available(Isa::avx2)) return Isa::avx2;
    if (isa_available(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}

Isa parse_env_choice(const char* value) {
    std::string v(value);
    if (v == "auto" || v.empty()) return best_available();
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2") return Isa::avx2;
    if (v == "neon") return Isa::neon;
    throw ParamError("EDBSW_SIMD must be one of scalar|avx2|neon|auto, got '" + v + "'");
}

Isa initial_choice() {
    if (const char* env = std::getenv("EDBSW_SIMD")) {
        Isa want = parse_env_choice(env);
        if (!isa_available(want))
            throw ParamError(std::string("EDBSW_SIMD requests '") + env +
                             "' but this machine does not support it");
        return want;
    }
    return best_available();
}

std::atomic<const KernelTable*> g_active{nullptr};
std::atomic<Isa> g_active_isa{Isa::scalar};

void ensure_initialized() {
    if (g_active.load(std::memory_order_acquire) == nullptr) {
        Isa isa = initial_choice();
        g_active_isa.store(isa, std::memory_order_relaxed);
        g_active.store(&table_for(isa), std::memory_order_release);
    }
}

}  // namespace

const KernelTable& active() {
    ensure_initialized();
    return *g_active.load(std::memory_order_acquire);
}

Isa active_isa() {
    ensure_initialized();
    return g_active_isa.load(std::memory_order_relaxed);
}

void force_isa(Isa isa) {
    const KernelTable& t = table_for(isa);  // throws if unavailable
    g_active_isa.store(isa, std::memory_order_relaxed);
    g_active.store(&t, std::memory_order_release);
}

}  // namespace edbsw::kernels
