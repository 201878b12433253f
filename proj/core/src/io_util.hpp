#pragma once

#include <string>
#include <string_view>

namespace hroi::ioutil {

// Replaces U+201C/U+201D with '"', but only when the text contains no
// straight quote of its own (i.e. it clearly went through typographic
// substitution); otherwise returns the input untouched.
std::string normalize_quotes(std::string_view text);

// Integer rendering for whole values, one decimal digit for the half-pixel
// corners produced by tracing.
std::string format_coord(double v);

}  // namespace hroi::ioutil
