#include <atomic>
#include <cstdlib>
#include <string>

#include "banditnav/grid.hpp"
#include "kernels_internal.hpp"

namespace banditnav::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(BANDITNAV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* initial_table() {
    const KernelTable* best = avx2_table();
    if (const char* env = std::getenv("BANDITNAV_ISA")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_table();
        if (want == "avx2" && best) return best;
    }
    return best ? best : &scalar_table();
}

std::atomic<const KernelTable*>& active_slot() {
    static std::atomic<const KernelTable*> slot{initial_table()};
    return slot;
}

}  // namespace

const KernelTable* avx2_table() {
#if defined(BANDITNAV_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &avx2_table_impl() : nullptr;
#else
    return nullptr;
#endif
}

bool isa_available(Isa isa) { return isa == Isa::scalar || avx2_table() != nullptr; }

const KernelTable& table(Isa isa) {
    if (isa == Isa::scalar) return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    throw Error("kernels: AVX2 variant not available on this build or CPU");
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void select_isa(Isa isa) { active_slot().store(&table(isa), std::memory_order_release); }

std::string_view isa_name(Isa isa) { return isa == Isa::scalar ? "scalar" : "avx2"; }

}  // namespace banditnav::kernels
