#include "topoloc/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace topoloc {

unsigned threads_from_env(unsigned fallback) {
  const char* raw = std::getenv("TOPOLOC_THREADS");
  if (!raw) return fallback;
  const std::string_view text(raw);
  unsigned value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || value == 0) return fallback;
  return value;
}

}  // namespace topoloc
