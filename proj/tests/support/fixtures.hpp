#pragma once

#include <string>

#include "kbdx/parser.hpp"

namespace kbdx::support {

inline constexpr const char* kRunningText =
    "[ONTOLOGY]\n"
    "a1: A SubClassOf B\n"
    "a2: B SubClassOf C\n"
    "a3: C SubClassOf D\n"
    "a4: D SubClassOf R\n"
    "[BACKGROUND]\n"
    "a5: A(v)\n"
    "a6: A(w)\n"
    "[POSITIVE]\n"
    "p1: B(v)\n"
    "[NEGATIVE]\n"
    "n1: R(w)\n";

inline Dpi runningDpi() { return parseDpiFile(kRunningText); }

inline std::string dataPath(const std::string& name) { return std::string(KBDX_TEST_DATA) + "/" + name; }

}  // namespace kbdx::support
