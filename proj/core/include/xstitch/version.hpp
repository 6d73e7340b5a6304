#ifndef XSTITCH_VERSION_HPP
#define XSTITCH_VERSION_HPP

#define XSTITCH_VERSION "0.1.0"

namespace xstitch {
inline constexpr const char* version() { return XSTITCH_VERSION; }
} // namespace xstitch

#endif
