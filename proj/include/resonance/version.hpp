#ifndef RESONANCE_VERSION_HPP
#define RESONANCE_VERSION_HPP

namespace resonance {
inline constexpr const char* version = "0.1.0";
}

#endif  // RESONANCE_VERSION_HPP
