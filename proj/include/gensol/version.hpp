#pragma once

#ifndef GENSOL_VERSION
#define GENSOL_VERSION "unknown"
#endif

namespace gensol {

inline constexpr const char* version() { return GENSOL_VERSION; }

}  // namespace gensol
