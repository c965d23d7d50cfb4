#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace legwave {

inline constexpr std::string_view kVersion = "0.3.0";

std::uint64_t fnv1a(std::string_view text) noexcept;
std::string hex64(std::uint64_t v);

/// `# legwave <version> spec=<hash>` provenance line that opens every CSV.
void write_csv_preamble(std::ostream& os, std::uint64_t spec_hash);

/// Fixed-precision formatting so output does not depend on stream state.
std::string fmt(double v, int digits = 6);

}  // namespace legwave
