#include <cstdint>

[[nodiscard]] static std::uint32_t rotl(std::uint32_t v, int s) noexcept
{
    return (v << s) | (v >> (32 - s));
}

auto hash_pair(std::uint32_t a, std::uint32_t b) -> std::uint32_t
{
    return rotl(a, 5) ^ b;
}
