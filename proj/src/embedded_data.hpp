#pragma once

#include <string_view>

// Generated from data/ at configure time (see src/embedded_data.cpp.in).
namespace accentshift::embedded {

extern const std::string_view kInventoryTsv;
extern const std::string_view kDefaultRules;

}  // namespace accentshift::embedded
