#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace superlase::kernels {

namespace {

bool cpu_has_avx2() noexcept
{
#if defined(SUPERLASE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& select() noexcept
{
    if (const char* forced = std::getenv("SUPERLASE_KERNELS")) {
        if (std::string_view(forced) == "scalar") {
            return detail::kScalarTable;
        }
    }
    if (const KernelTable* fast = avx2_table()) {
        return *fast;
    }
    return detail::kScalarTable;
}

} // namespace

const KernelTable& scalar_table() noexcept
{
    return detail::kScalarTable;
}

const KernelTable* avx2_table() noexcept
{
#if defined(SUPERLASE_HAVE_AVX2)
    static const bool supported = cpu_has_avx2();
    return supported ? &detail::kAvx2Table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept
{
    static const KernelTable& table = select();
    return table;
}

void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y)
{
    active().csr_matvec(a, x.data(), y.data());
}

double max_abs(std::span<const double> x)
{
    return active().max_abs(x.size(), x.data());
}

double dot_diff(std::span<const double> a, std::span<const double> x, std::span<const double> b,
                std::span<const double> y)
{
    return active().dot_diff(a.size(), a.data(), x.data(), b.data(), y.data());
}

} // namespace superlase::kernels
